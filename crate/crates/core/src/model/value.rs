use std::fmt;

use thiserror::Error;

use crate::kernels::{Hom4, Rot3, Twist6, Vec3};
use crate::model::registry::{PrimitiveId, WorldRegistry};
use crate::model::signature::{RelationKind, RelationSignature};

/// One representation per relation kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Representation {
    /// Position (m), linear velocity (m/s), angular velocity (rad/s).
    Cartesian3,
    RotationMatrix,
    HomogeneousTransform,
    /// Angular block (rad/s) followed by linear block (m/s).
    AngularLinear6,
}

impl RelationKind {
    pub fn representation(self) -> Representation {
        match self {
            RelationKind::Position | RelationKind::LinearVelocity | RelationKind::AngularVelocity => {
                Representation::Cartesian3
            }
            RelationKind::Orientation => Representation::RotationMatrix,
            RelationKind::PosePointOrient | RelationKind::PoseFrame => Representation::HomogeneousTransform,
            RelationKind::Twist => Representation::AngularLinear6,
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::Cartesian3 => "Cartesian 3-vector",
            Representation::RotationMatrix => "rotation matrix",
            Representation::HomogeneousTransform => "homogeneous transform",
            Representation::AngularLinear6 => "angular/linear 6-vector",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coords {
    Cartesian3(Vec3),
    RotationMatrix(Rot3),
    HomogeneousTransform(Hom4),
    AngularLinear6(Twist6),
}

impl Coords {
    pub fn representation(&self) -> Representation {
        match self {
            Coords::Cartesian3(_) => Representation::Cartesian3,
            Coords::RotationMatrix(_) => Representation::RotationMatrix,
            Coords::HomogeneousTransform(_) => Representation::HomogeneousTransform,
            Coords::AngularLinear6(_) => Representation::AngularLinear6,
        }
    }

    pub fn as_vec3(&self) -> Option<Vec3> {
        match self {
            Coords::Cartesian3(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_rot3(&self) -> Option<Rot3> {
        match self {
            Coords::RotationMatrix(r) => Some(*r),
            _ => None,
        }
    }

    pub fn as_hom4(&self) -> Option<Hom4> {
        match self {
            Coords::HomogeneousTransform(t) => Some(*t),
            _ => None,
        }
    }

    pub fn as_twist(&self) -> Option<Twist6> {
        match self {
            Coords::AngularLinear6(t) => Some(*t),
            _ => None,
        }
    }

    /// Largest absolute component difference; infinite across representations.
    pub fn max_abs_diff(&self, other: &Coords) -> f64 {
        match (self, other) {
            (Coords::Cartesian3(a), Coords::Cartesian3(b)) => (*a - *b).max_abs(),
            (Coords::RotationMatrix(a), Coords::RotationMatrix(b)) => a.max_abs_diff(b),
            (Coords::HomogeneousTransform(a), Coords::HomogeneousTransform(b)) => a.max_abs_diff(b),
            (Coords::AngularLinear6(a), Coords::AngularLinear6(b)) => a.max_abs_diff(b),
            _ => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("coordinates need a coordinate frame")]
    MissingCoordFrame,
    #[error("a {kind} is represented as a {expected}, got a {found}")]
    RepresentationMismatch { kind: RelationKind, expected: Representation, found: Representation },
}

/// A relation signature, optionally with coordinates in the kind's
/// representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationValue {
    pub sig: RelationSignature,
    pub coords: Option<Coords>,
}

impl RelationValue {
    pub fn new(sig: RelationSignature, coords: Option<Coords>) -> Result<Self, ValueError> {
        if let Some(c) = &coords {
            if sig.coord_frame.is_none() {
                return Err(ValueError::MissingCoordFrame);
            }
            let expected = sig.kind().representation();
            if c.representation() != expected {
                return Err(ValueError::RepresentationMismatch {
                    kind: sig.kind(),
                    expected,
                    found: c.representation(),
                });
            }
        }
        Ok(Self { sig, coords })
    }

    pub fn signature_only(sig: RelationSignature) -> Self {
        Self { sig, coords: None }
    }

    pub fn kind(&self) -> RelationKind {
        self.sig.kind()
    }
}

/// The coordinate frame required by the value's representation differs from
/// the one it is expressed in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationViolation {
    pub representation: Representation,
    /// `None` when the reference frame carries no orientation frame.
    pub required: Option<PrimitiveId>,
    pub found: Option<PrimitiveId>,
}

impl RepresentationViolation {
    pub const CODE: &'static str = "REP-1";

    pub fn message(&self, reg: &WorldRegistry) -> String {
        let found = self.found.map_or("nothing", |f| reg.primitive_name(f));
        match self.required {
            Some(req) => format!(
                "a {} must be expressed in the reference orientation frame `{}`, found `{}`",
                self.representation,
                reg.primitive_name(req),
                found
            ),
            None => format!(
                "a {} needs a reference frame with an orientation bundle to be expressed in, found `{}`",
                self.representation, found
            ),
        }
    }
}

/// Checks the coordinate-frame constraint of the value's representation.
/// Values without coordinates always pass.
pub fn check_representation(value: &RelationValue, reg: &WorldRegistry) -> Result<(), RepresentationViolation> {
    let Some(coords) = &value.coords else {
        return Ok(());
    };
    match value.sig.relation.locked_frame(reg) {
        None => Ok(()),
        Some(required) if required.is_some() && required == value.sig.coord_frame => Ok(()),
        Some(required) => Err(RepresentationViolation {
            representation: coords.representation(),
            required,
            found: value.sig.coord_frame,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::registry::{FrameBundle, PrimitiveKind};
    use crate::model::signature::Relation;

    #[test]
    fn rotation_matrix_must_be_expressed_in_reference_frame() {
        let mut reg = WorldRegistry::new();
        let c = reg.declare_body("C").unwrap();
        let d = reg.declare_body("D").unwrap();
        let a = reg.declare_primitive("a", PrimitiveKind::OrientationFrame, c, None).unwrap();
        let b = reg.declare_primitive("b", PrimitiveKind::OrientationFrame, d, None).unwrap();
        let r = reg.declare_primitive("r", PrimitiveKind::OrientationFrame, d, None).unwrap();
        let e = reg.declare_primitive("e", PrimitiveKind::Point, c, None).unwrap();
        let f = reg.declare_primitive("f", PrimitiveKind::Point, d, None).unwrap();
        let rel = Relation::Orientation { orient: a, body: c, ref_orient: b, ref_body: d };
        let coords = Some(Coords::RotationMatrix(Rot3::IDENTITY));

        let ok = RelationValue::new(RelationSignature::new(rel, Some(b)), coords).unwrap();
        assert_eq!(check_representation(&ok, &reg), Ok(()));

        let bad = RelationValue::new(RelationSignature::new(rel, Some(r)), coords).unwrap();
        let err = check_representation(&bad, &reg).unwrap_err();
        assert_eq!((err.required, err.found), (Some(b), Some(r)));

        let pos = Relation::Position { point: e, body: c, ref_point: f, ref_body: d };
        for frame in [a, b, r] {
            let v = RelationValue::new(
                RelationSignature::new(pos, Some(frame)),
                Some(Coords::Cartesian3(Vec3::new(1.0, 2.0, 3.0))),
            )
            .unwrap();
            assert_eq!(check_representation(&v, &reg), Ok(()));
        }
    }

    #[test]
    fn pose_of_atomic_frames_has_no_valid_coordinate_frame() {
        let mut reg = WorldRegistry::new();
        let c = reg.declare_body("C").unwrap();
        let d = reg.declare_body("D").unwrap();
        let g = reg.declare_primitive("g", PrimitiveKind::Frame, c, None).unwrap();
        let h = reg.declare_primitive("h", PrimitiveKind::Frame, d, None).unwrap();
        let f = reg.declare_primitive("f", PrimitiveKind::Point, d, None).unwrap();
        let b = reg.declare_primitive("b", PrimitiveKind::OrientationFrame, d, None).unwrap();
        let hb = reg
            .declare_primitive("hb", PrimitiveKind::Frame, d, Some(FrameBundle { point: f, orientation: b }))
            .unwrap();
        let coords = Some(Coords::HomogeneousTransform(Hom4::IDENTITY));

        let atomic = RelationValue::new(
            RelationSignature::new(Relation::PoseFrame { frame: g, body: c, ref_frame: h, ref_body: d }, Some(b)),
            coords,
        )
        .unwrap();
        assert_eq!(check_representation(&atomic, &reg).unwrap_err().required, None);

        let bundled = RelationValue::new(
            RelationSignature::new(Relation::PoseFrame { frame: g, body: c, ref_frame: hb, ref_body: d }, Some(b)),
            coords,
        )
        .unwrap();
        assert_eq!(check_representation(&bundled, &reg), Ok(()));
    }

    #[test]
    fn coords_require_frame_and_matching_representation() {
        let mut reg = WorldRegistry::new();
        let c = reg.declare_body("C").unwrap();
        let e = reg.declare_primitive("e", PrimitiveKind::Point, c, None).unwrap();
        let r = reg.declare_primitive("r", PrimitiveKind::OrientationFrame, c, None).unwrap();
        let rel = Relation::Position { point: e, body: c, ref_point: e, ref_body: c };
        assert_eq!(
            RelationValue::new(RelationSignature::new(rel, None), Some(Coords::Cartesian3(Vec3::ZERO))),
            Err(ValueError::MissingCoordFrame)
        );
        assert!(matches!(
            RelationValue::new(RelationSignature::new(rel, Some(r)), Some(Coords::RotationMatrix(Rot3::IDENTITY))),
            Err(ValueError::RepresentationMismatch { .. })
        ));
        assert!(RelationValue::new(RelationSignature::new(rel, None), None).is_ok());
    }
}
