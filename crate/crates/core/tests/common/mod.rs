//! Brute-force global-chart oracle built on nalgebra, independent of the
//! crate's kernels and operations.

#![allow(dead_code)]

use geomsem_core::gen::{Query, WorldChart, M3, V3};
use geomsem_core::Coords;
use nalgebra::{Matrix3, Matrix4, Vector3};

pub fn v(a: V3) -> Vector3<f64> {
    Vector3::from_column_slice(&a)
}

pub fn m(rows: &M3) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| rows[i][j])
}

/// Global placement of a (point, orientation frame) pair.
fn placement(w: &WorldChart, point: usize, orient: usize) -> Matrix4<f64> {
    let mut t = Matrix4::identity();
    t.fixed_view_mut::<3, 3>(0, 0).copy_from(&m(&w.orients[orient].axes));
    t.fixed_view_mut::<3, 1>(0, 3).copy_from(&v(w.points[point].position));
    t
}

fn omega(w: &WorldChart, b: usize) -> Vector3<f64> {
    v(w.bodies[b].omega)
}

fn velocity_at(w: &WorldChart, b: usize, x: Vector3<f64>) -> Vector3<f64> {
    v(w.bodies[b].velocity) + omega(w, b).cross(&x)
}

/// Expected coordinates, flattened as by [`flatten`].
pub fn oracle(w: &WorldChart, q: &Query) -> Vec<f64> {
    let rt = |o: usize| m(&w.orients[o].axes).transpose();
    match *q {
        Query::Position { point, ref_point, frame } => {
            let d = v(w.points[point].position) - v(w.points[ref_point].position);
            (rt(frame) * d).iter().copied().collect()
        }
        Query::Orientation { orient, ref_orient } => {
            let r = rt(ref_orient) * m(&w.orients[orient].axes);
            r.transpose().iter().copied().collect()
        }
        Query::Pose { point, orient, ref_point, ref_orient } => {
            let t = placement(w, ref_point, ref_orient).try_inverse().unwrap() * placement(w, point, orient);
            t.transpose().iter().take(12).copied().collect()
        }
        Query::PoseFrame { frame, ref_frame } => {
            let (f, g) = (&w.frames[frame], &w.frames[ref_frame]);
            oracle(w, &Query::Pose { point: f.point, orient: f.orient, ref_point: g.point, ref_orient: g.orient })
        }
        Query::AngularVelocity { body, ref_body, frame } => {
            (rt(frame) * (omega(w, body) - omega(w, ref_body))).iter().copied().collect()
        }
        Query::LinearVelocity { point, ref_body, frame } => {
            let p = &w.points[point];
            let x = v(p.position);
            (rt(frame) * (velocity_at(w, p.body, x) - velocity_at(w, ref_body, x))).iter().copied().collect()
        }
        Query::Twist { point, ref_body, frame } => {
            let body = w.points[point].body;
            let mut out = oracle(w, &Query::AngularVelocity { body, ref_body, frame });
            out.extend(oracle(w, &Query::LinearVelocity { point, ref_body, frame }));
            out
        }
    }
}

/// Row-major components; poses drop the constant bottom row.
pub fn flatten(c: &Coords) -> Vec<f64> {
    match c {
        Coords::Cartesian3(x) => x.to_array().to_vec(),
        Coords::RotationMatrix(r) => r.rows().concat(),
        Coords::HomogeneousTransform(t) => t.to_matrix()[..3].concat(),
        Coords::AngularLinear6(t) => t.to_array().to_vec(),
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
