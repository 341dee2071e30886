//! Numeric payloads for the coordinate representations.
//!
//! Rotation convention: the columns of `R(a→b)` are the axes of frame `a`
//! expressed in frame `b`, so [`Rot3::apply`] maps `a`-coordinates to
//! `b`-coordinates and `R(a→c) = R(b→c) · R(a→b)`.
//!
//! Everything is plain `f64`. Rotation chains are never renormalized.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

/// Tolerance for the orthonormality and determinant checks on [`Rot3`].
pub const ROTATION_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("matrix is not a rotation: |RᵀR - I|∞ = {orthonormality:e}, det = {determinant}")]
    OrthonormalityViolation { orthonormality: f64, determinant: f64 },
    #[error("non-finite component in numeric payload")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.x, self.y, self.z)
    }
}

/// 3×3 rotation matrix, row-major. Only constructible through checked paths
/// (or from products and inverses of checked matrices).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rot3 {
    rows: [[f64; 3]; 3],
}

impl Rot3 {
    pub const IDENTITY: Rot3 = Rot3 { rows: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] };

    /// Accepts `rows` only if `RᵀR = I` and `det R = +1` within
    /// [`ROTATION_TOLERANCE`].
    pub fn from_rows(rows: [[f64; 3]; 3]) -> Result<Self, KernelError> {
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(KernelError::NonFinite);
        }
        let r = Rot3 { rows };
        let orthonormality = r.orthonormality_error();
        let determinant = r.determinant();
        if orthonormality > ROTATION_TOLERANCE || (determinant - 1.0).abs() > ROTATION_TOLERANCE {
            return Err(KernelError::OrthonormalityViolation { orthonormality, determinant });
        }
        Ok(r)
    }

    /// Rotation of `angle` radians about the unit axis `axis` (Rodrigues).
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        let n = axis.norm();
        if n == 0.0 {
            return Self::IDENTITY;
        }
        let k = axis * (1.0 / n);
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Rot3 {
            rows: [
                [c + k.x * k.x * t, k.x * k.y * t - k.z * s, k.x * k.z * t + k.y * s],
                [k.y * k.x * t + k.z * s, c + k.y * k.y * t, k.y * k.z * t - k.x * s],
                [k.z * k.x * t - k.y * s, k.z * k.y * t + k.x * s, c + k.z * k.z * t],
            ],
        }
    }

    pub fn rot_x(angle: f64) -> Self {
        Self::from_axis_angle(Vec3::new(1.0, 0.0, 0.0), angle)
    }

    pub fn rot_y(angle: f64) -> Self {
        Self::from_axis_angle(Vec3::new(0.0, 1.0, 0.0), angle)
    }

    pub fn rot_z(angle: f64) -> Self {
        Self::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), angle)
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.rows
    }

    pub fn column(&self, j: usize) -> Vec3 {
        Vec3::new(self.rows[0][j], self.rows[1][j], self.rows[2][j])
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let r = &self.rows;
        Vec3::new(
            r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
            r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
            r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z,
        )
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Rot3) -> Rot3 {
        let mut rows = [[0.0; 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.rows[i][k] * other.rows[k][j]).sum();
            }
        }
        Rot3 { rows }
    }

    /// Inverse, i.e. the transpose.
    pub fn inverse(&self) -> Rot3 {
        let r = &self.rows;
        Rot3 { rows: [[r[0][0], r[1][0], r[2][0]], [r[0][1], r[1][1], r[2][1]], [r[0][2], r[1][2], r[2][2]]] }
    }

    pub fn determinant(&self) -> f64 {
        let r = &self.rows;
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    }

    /// `‖RᵀR − I‖∞` (maximum absolute row sum).
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            let mut row_sum = 0.0;
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| self.rows[k][i] * self.rows[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                row_sum += (dot - target).abs();
            }
            worst = worst.max(row_sum);
        }
        worst
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &Rot3) -> f64 {
        self.rows.iter().flatten().zip(other.rows.iter().flatten()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Homogeneous transform `(R, t)`; the bottom row `[0, 0, 0, 1]` is implied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hom4 {
    pub rotation: Rot3,
    pub translation: Vec3,
}

impl Hom4 {
    pub const IDENTITY: Hom4 = Hom4 { rotation: Rot3::IDENTITY, translation: Vec3::ZERO };

    pub fn new(rotation: Rot3, translation: Vec3) -> Self {
        Self { rotation, translation }
    }

    /// `(R1, t1) · (R2, t2) = (R1 R2, R1 t2 + t1)`.
    pub fn mul(&self, other: &Hom4) -> Hom4 {
        Hom4 {
            rotation: self.rotation.mul(&other.rotation),
            translation: self.rotation.apply(other.translation) + self.translation,
        }
    }

    /// `(Rᵀ, −Rᵀ t)`.
    pub fn inverse(&self) -> Hom4 {
        let rt = self.rotation.inverse();
        Hom4 { rotation: rt, translation: -rt.apply(self.translation) }
    }

    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let r = self.rotation.rows();
        let t = self.translation;
        [
            [r[0][0], r[0][1], r[0][2], t.x],
            [r[1][0], r[1][1], r[1][2], t.y],
            [r[2][0], r[2][1], r[2][2], t.z],
            [0.0, 0.0, 0.0, 1.0],
        ]
    }

    pub fn max_abs_diff(&self, other: &Hom4) -> f64 {
        self.rotation.max_abs_diff(&other.rotation).max((self.translation - other.translation).max_abs())
    }
}

/// Angular velocity (rad/s) and linear velocity of the reference point (m/s).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Twist6 {
    pub angular: Vec3,
    pub linear: Vec3,
}

impl Twist6 {
    pub const ZERO: Twist6 = Twist6 { angular: Vec3::ZERO, linear: Vec3::ZERO };

    pub fn new(angular: Vec3, linear: Vec3) -> Self {
        Self { angular, linear }
    }

    /// Moves the velocity reference point by `p` (new point relative to the
    /// old one): `(ω, v + ω × p)`.
    pub fn transport(&self, p: Vec3) -> Twist6 {
        Twist6 { angular: self.angular, linear: self.linear + self.angular.cross(p) }
    }

    /// Rotates both blocks.
    pub fn rotate(&self, r: &Rot3) -> Twist6 {
        Twist6 { angular: r.apply(self.angular), linear: r.apply(self.linear) }
    }

    pub fn to_array(self) -> [f64; 6] {
        let [a, b, c] = self.angular.to_array();
        let [d, e, f] = self.linear.to_array();
        [a, b, c, d, e, f]
    }

    pub fn max_abs_diff(&self, other: &Twist6) -> f64 {
        (self.angular - other.angular).max_abs().max((self.linear - other.linear).max_abs())
    }
}

impl Add for Twist6 {
    type Output = Twist6;
    fn add(self, o: Twist6) -> Twist6 {
        Twist6 { angular: self.angular + o.angular, linear: self.linear + o.linear }
    }
}

impl Neg for Twist6 {
    type Output = Twist6;
    fn neg(self) -> Twist6 {
        Twist6 { angular: -self.angular, linear: -self.linear }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn vector_algebra() {
        let v = Vec3::new(1.0, 2.0, 3.0) + Vec3::new(0.5, 0.0, 0.0);
        assert_eq!(v, Vec3::new(1.5, 2.0, 3.0));
        assert_eq!(Vec3::new(0.0, 0.0, 1.0).cross(Vec3::new(1.0, 0.0, 0.0)), Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(v + Vec3::ZERO, v);
        assert_eq!(-v, Vec3::new(-1.5, -2.0, -3.0));
    }

    #[test]
    fn rz90_maps_x_to_y() {
        let r = Rot3::rot_z(FRAC_PI_2);
        assert!(close(r.apply(Vec3::new(1.0, 0.0, 0.0)), Vec3::new(0.0, 1.0, 0.0), 1e-15));
        // columns are the rotated frame's axes
        assert!(close(r.column(0), Vec3::new(0.0, 1.0, 0.0), 1e-15));
    }

    #[test]
    fn rotation_identities() {
        let a = Rot3::from_axis_angle(Vec3::new(1.0, 2.0, -0.5), 0.7);
        let b = Rot3::from_axis_angle(Vec3::new(-0.3, 0.1, 1.0), -2.1);
        assert_eq!(a.mul(&Rot3::IDENTITY), a);
        let lhs = a.mul(&b).inverse();
        let rhs = b.inverse().mul(&a.inverse());
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
        assert!(a.mul(&a.inverse()).max_abs_diff(&Rot3::IDENTITY) < 1e-15);
    }

    #[test]
    fn from_rows_rejects_non_rotations() {
        let scaled = [[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(matches!(Rot3::from_rows(scaled), Err(KernelError::OrthonormalityViolation { .. })));
        let reflection = [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(Rot3::from_rows(reflection).is_err());
        let nan = [[f64::NAN, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(Rot3::from_rows(nan), Err(KernelError::NonFinite));
        assert!(Rot3::from_rows(Rot3::rot_x(0.3).rows()).is_ok());
    }

    #[test]
    fn homogeneous_product_and_inverse() {
        let t1 = Hom4::new(Rot3::IDENTITY, Vec3::new(1.0, 0.0, 0.0));
        let t2 = Hom4::new(Rot3::rot_z(FRAC_PI_2), Vec3::ZERO);
        let p = t1.mul(&t2);
        assert!(p.rotation.max_abs_diff(&Rot3::rot_z(FRAC_PI_2)) < 1e-15);
        assert_eq!(p.translation, Vec3::new(1.0, 0.0, 0.0));
        // the other order rotates the translation
        let q = t2.mul(&t1);
        assert!(close(q.translation, Vec3::new(0.0, 1.0, 0.0), 1e-15));

        let t = Hom4::new(Rot3::from_axis_angle(Vec3::new(1.0, 1.0, 0.0), 1.2), Vec3::new(0.3, -2.0, 5.0));
        assert_eq!(t.mul(&Hom4::IDENTITY), t);
        assert!(t.mul(&t.inverse()).max_abs_diff(&Hom4::IDENTITY) < 1e-12);
        assert_eq!(Hom4::IDENTITY.to_matrix()[3], [0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn twist_transport() {
        let t = Twist6::new(Vec3::new(0.0, 0.0, 1.0), Vec3::ZERO);
        let moved = t.transport(Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(moved, Twist6::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 1.0, 0.0)));
        assert_eq!(t.transport(Vec3::ZERO), t);
        let p = Vec3::new(0.3, -1.0, 2.0);
        let back = moved.transport(p).transport(-p);
        assert!(back.max_abs_diff(&moved) < 1e-15);
    }

    #[test]
    fn twist_blockwise_rotation() {
        let t = Twist6::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(1.0, 0.0, 0.0));
        let r = t.rotate(&Rot3::rot_z(FRAC_PI_2));
        assert!(r.max_abs_diff(&Twist6::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 1.0, 0.0))) < 1e-15);
        assert_eq!(t.rotate(&Rot3::IDENTITY), t);
    }
}
