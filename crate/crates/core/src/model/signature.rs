//! Coordinate-invariant identity of the six relation kinds.

use std::fmt;

use crate::catalog::Severity;
use crate::model::registry::{BodyId, PrimitiveId, PrimitiveKind, WorldRegistry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum RelationKind {
    Position,
    Orientation,
    /// Pose of a point and orientation frame w.r.t. another such pair.
    PosePointOrient,
    /// Pose of a frame w.r.t. another frame.
    PoseFrame,
    LinearVelocity,
    AngularVelocity,
    Twist,
}

impl RelationKind {
    pub const ALL: [RelationKind; 7] = [
        RelationKind::Position,
        RelationKind::Orientation,
        RelationKind::PosePointOrient,
        RelationKind::PoseFrame,
        RelationKind::LinearVelocity,
        RelationKind::AngularVelocity,
        RelationKind::Twist,
    ];

    /// Keyword used in the surface syntax (both pose forms share `Pose`).
    pub fn keyword(self) -> &'static str {
        match self {
            RelationKind::Position => "Position",
            RelationKind::Orientation => "Orientation",
            RelationKind::PosePointOrient | RelationKind::PoseFrame => "Pose",
            RelationKind::LinearVelocity => "LinearVelocity",
            RelationKind::AngularVelocity => "AngularVelocity",
            RelationKind::Twist => "Twist",
        }
    }

    pub fn is_pose(self) -> bool {
        matches!(self, RelationKind::PosePointOrient | RelationKind::PoseFrame)
    }

    /// Kinds whose only representation pins the coordinate frame to the
    /// reference orientation frame.
    pub fn has_locked_frame(self) -> bool {
        matches!(self, RelationKind::Orientation | RelationKind::PosePointOrient | RelationKind::PoseFrame)
    }

    pub fn is_velocity(self) -> bool {
        matches!(self, RelationKind::LinearVelocity | RelationKind::AngularVelocity | RelationKind::Twist)
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Position => "position",
            RelationKind::Orientation => "orientation",
            RelationKind::PosePointOrient | RelationKind::PoseFrame => "pose",
            RelationKind::LinearVelocity => "linear velocity",
            RelationKind::AngularVelocity => "angular velocity",
            RelationKind::Twist => "twist",
        })
    }
}

/// Primitive slots of a relation, with the bodies the relation states them
/// to be fixed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Position {
        point: PrimitiveId,
        body: BodyId,
        ref_point: PrimitiveId,
        ref_body: BodyId,
    },
    Orientation {
        orient: PrimitiveId,
        body: BodyId,
        ref_orient: PrimitiveId,
        ref_body: BodyId,
    },
    PosePointOrient {
        point: PrimitiveId,
        orient: PrimitiveId,
        body: BodyId,
        ref_point: PrimitiveId,
        ref_orient: PrimitiveId,
        ref_body: BodyId,
    },
    PoseFrame {
        frame: PrimitiveId,
        body: BodyId,
        ref_frame: PrimitiveId,
        ref_body: BodyId,
    },
    LinearVelocity {
        point: PrimitiveId,
        body: BodyId,
        ref_body: BodyId,
    },
    AngularVelocity {
        body: BodyId,
        ref_body: BodyId,
    },
    Twist {
        point: PrimitiveId,
        body: BodyId,
        ref_body: BodyId,
    },
}

impl Relation {
    pub fn kind(&self) -> RelationKind {
        match self {
            Relation::Position { .. } => RelationKind::Position,
            Relation::Orientation { .. } => RelationKind::Orientation,
            Relation::PosePointOrient { .. } => RelationKind::PosePointOrient,
            Relation::PoseFrame { .. } => RelationKind::PoseFrame,
            Relation::LinearVelocity { .. } => RelationKind::LinearVelocity,
            Relation::AngularVelocity { .. } => RelationKind::AngularVelocity,
            Relation::Twist { .. } => RelationKind::Twist,
        }
    }

    pub fn body(&self) -> BodyId {
        match *self {
            Relation::Position { body, .. }
            | Relation::Orientation { body, .. }
            | Relation::PosePointOrient { body, .. }
            | Relation::PoseFrame { body, .. }
            | Relation::LinearVelocity { body, .. }
            | Relation::AngularVelocity { body, .. }
            | Relation::Twist { body, .. } => body,
        }
    }

    pub fn ref_body(&self) -> BodyId {
        match *self {
            Relation::Position { ref_body, .. }
            | Relation::Orientation { ref_body, .. }
            | Relation::PosePointOrient { ref_body, .. }
            | Relation::PoseFrame { ref_body, .. }
            | Relation::LinearVelocity { ref_body, .. }
            | Relation::AngularVelocity { ref_body, .. }
            | Relation::Twist { ref_body, .. } => ref_body,
        }
    }

    /// Primitive slots with the kind and body each must have.
    pub fn primitive_slots(&self) -> Vec<(Slot, PrimitiveId, PrimitiveKind, BodyId)> {
        use PrimitiveKind::{Frame, OrientationFrame as Of, Point};
        match *self {
            Relation::Position { point, body, ref_point, ref_body } => {
                vec![(Slot::Point, point, Point, body), (Slot::RefPoint, ref_point, Point, ref_body)]
            }
            Relation::Orientation { orient, body, ref_orient, ref_body } => {
                vec![(Slot::Orientation, orient, Of, body), (Slot::RefOrientation, ref_orient, Of, ref_body)]
            }
            Relation::PosePointOrient { point, orient, body, ref_point, ref_orient, ref_body } => vec![
                (Slot::Point, point, Point, body),
                (Slot::Orientation, orient, Of, body),
                (Slot::RefPoint, ref_point, Point, ref_body),
                (Slot::RefOrientation, ref_orient, Of, ref_body),
            ],
            Relation::PoseFrame { frame, body, ref_frame, ref_body } => {
                vec![(Slot::Frame, frame, Frame, body), (Slot::RefFrame, ref_frame, Frame, ref_body)]
            }
            Relation::LinearVelocity { point, body, .. } | Relation::Twist { point, body, .. } => {
                vec![(Slot::Point, point, Point, body)]
            }
            Relation::AngularVelocity { .. } => Vec::new(),
        }
    }

    /// Orientation frame the rotation block is expressed in, for kinds whose
    /// representation pins it.
    pub fn locked_frame(&self, reg: &WorldRegistry) -> Option<Option<PrimitiveId>> {
        match *self {
            Relation::Orientation { ref_orient, .. } | Relation::PosePointOrient { ref_orient, .. } => {
                Some(Some(ref_orient))
            }
            Relation::PoseFrame { ref_frame, .. } => Some(reg.orientation_of(ref_frame)),
            _ => None,
        }
    }
}

/// Named slot of a relation, used to point diagnostics at source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Point,
    Orientation,
    Frame,
    Body,
    RefPoint,
    RefOrientation,
    RefFrame,
    RefBody,
    CoordFrame,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::Point => "point",
            Slot::Orientation => "orientation frame",
            Slot::Frame => "frame",
            Slot::Body => "body",
            Slot::RefPoint => "reference point",
            Slot::RefOrientation => "reference orientation frame",
            Slot::RefFrame => "reference frame",
            Slot::RefBody => "reference body",
            Slot::CoordFrame => "coordinate frame",
        })
    }
}

/// A relation plus its optional coordinate frame. A present frame means
/// coordinate semantics; an absent one means coordinate-free semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RelationSignature {
    pub relation: Relation,
    pub coord_frame: Option<PrimitiveId>,
}

impl RelationSignature {
    pub fn new(relation: Relation, coord_frame: Option<PrimitiveId>) -> Self {
        Self { relation, coord_frame }
    }

    pub fn kind(&self) -> RelationKind {
        self.relation.kind()
    }

    /// Surface-syntax rendering, e.g. `Position(e2|C, f|D) @ r`.
    pub fn display<'a>(&'a self, reg: &'a WorldRegistry) -> SignatureDisplay<'a> {
        SignatureDisplay { sig: self, reg }
    }

    /// Prose rendering in the order point, body, reference, coordinate frame.
    pub fn describe(&self, reg: &WorldRegistry) -> String {
        let p = |id| reg.primitive_name(id);
        let b = |id| reg.body_name(id);
        let head = match self.relation {
            Relation::Position { point, body, ref_point, ref_body } => {
                format!("Position: point {} on {}, w.r.t. point {} on {}", p(point), b(body), p(ref_point), b(ref_body))
            }
            Relation::Orientation { orient, body, ref_orient, ref_body } => format!(
                "Orientation: orientation frame {} on {}, w.r.t. orientation frame {} on {}",
                p(orient),
                b(body),
                p(ref_orient),
                b(ref_body)
            ),
            Relation::PosePointOrient { point, orient, body, ref_point, ref_orient, ref_body } => format!(
                "Pose: point {} and orientation frame {} on {}, w.r.t. point {} and orientation frame {} on {}",
                p(point),
                p(orient),
                b(body),
                p(ref_point),
                p(ref_orient),
                b(ref_body)
            ),
            Relation::PoseFrame { frame, body, ref_frame, ref_body } => {
                format!("Pose: frame {} on {}, w.r.t. frame {} on {}", p(frame), b(body), p(ref_frame), b(ref_body))
            }
            Relation::LinearVelocity { point, body, ref_body } => {
                format!("Linear velocity: point {} on {}, w.r.t. body {}", p(point), b(body), b(ref_body))
            }
            Relation::AngularVelocity { body, ref_body } => {
                format!("Angular velocity: body {}, w.r.t. body {}", b(body), b(ref_body))
            }
            Relation::Twist { point, body, ref_body } => format!(
                "Twist: body {} with velocity reference point {}, w.r.t. body {}",
                b(body),
                p(point),
                b(ref_body)
            ),
        };
        match self.coord_frame {
            Some(r) => format!("{head}, expressed in {}", p(r)),
            None => format!("{head}, coordinate-free"),
        }
    }
}

pub struct SignatureDisplay<'a> {
    sig: &'a RelationSignature,
    reg: &'a WorldRegistry,
}

impl fmt::Display for SignatureDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |id| self.reg.primitive_name(id);
        let b = |id| self.reg.body_name(id);
        match self.sig.relation {
            Relation::Position { point, body, ref_point, ref_body } => {
                write!(f, "Position({}|{}, {}|{})", p(point), b(body), p(ref_point), b(ref_body))?
            }
            Relation::Orientation { orient, body, ref_orient, ref_body } => {
                write!(f, "Orientation({}|{}, {}|{})", p(orient), b(body), p(ref_orient), b(ref_body))?
            }
            Relation::PosePointOrient { point, orient, body, ref_point, ref_orient, ref_body } => write!(
                f,
                "Pose(({}, {})|{}, ({}, {})|{})",
                p(point),
                p(orient),
                b(body),
                p(ref_point),
                p(ref_orient),
                b(ref_body)
            )?,
            Relation::PoseFrame { frame, body, ref_frame, ref_body } => {
                write!(f, "Pose({}|{}, {}|{})", p(frame), b(body), p(ref_frame), b(ref_body))?
            }
            Relation::LinearVelocity { point, body, ref_body } => {
                write!(f, "LinearVelocity({}|{}, {})", p(point), b(body), b(ref_body))?
            }
            Relation::AngularVelocity { body, ref_body } => write!(f, "AngularVelocity({}, {})", b(body), b(ref_body))?,
            Relation::Twist { point, body, ref_body } => write!(f, "Twist({}|{}, {})", p(point), b(body), b(ref_body))?,
        }
        if let Some(r) = self.sig.coord_frame {
            write!(f, " @ {}", p(r))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureProblem {
    UnknownPrimitive(PrimitiveId),
    UnknownBody(BodyId),
    KindMismatch {
        primitive: PrimitiveId,
        expected: PrimitiveKind,
        found: PrimitiveKind,
    },
    FixtureMismatch {
        primitive: PrimitiveId,
        stated: BodyId,
        actual: BodyId,
    },
    /// Velocity of a body with respect to itself (identically zero).
    SlotBodyConflict {
        body: BodyId,
    },
    CoordFrameNotOnReferenceBody {
        frame: PrimitiveId,
        ref_body: BodyId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureViolation {
    pub slot: Slot,
    pub problem: SignatureProblem,
}

impl SignatureViolation {
    pub fn code(&self) -> &'static str {
        match (&self.problem, self.slot) {
            (SignatureProblem::UnknownPrimitive(_), _) => "SIG-1",
            (SignatureProblem::KindMismatch { .. }, Slot::CoordFrame) => "SIG-5",
            (SignatureProblem::KindMismatch { .. }, _) => "SIG-2",
            (SignatureProblem::FixtureMismatch { .. }, _) => "SIG-3",
            (SignatureProblem::UnknownBody(_), _) => "SIG-4",
            (SignatureProblem::SlotBodyConflict { .. }, _) => "SIG-6",
            (SignatureProblem::CoordFrameNotOnReferenceBody { .. }, _) => "SIG-7",
        }
    }

    pub fn severity(&self) -> Severity {
        match self.problem {
            SignatureProblem::SlotBodyConflict { .. } => Severity::Warning,
            SignatureProblem::CoordFrameNotOnReferenceBody { .. } => Severity::Note,
            _ => Severity::Error,
        }
    }

    pub fn message(&self, reg: &WorldRegistry) -> String {
        let slot = self.slot;
        match self.problem {
            SignatureProblem::UnknownPrimitive(id) => format!("{slot}: unknown primitive {id:?}"),
            SignatureProblem::UnknownBody(id) => format!("{slot}: unknown body {id:?}"),
            SignatureProblem::KindMismatch { primitive, expected, found } => {
                format!("{slot} `{}` is a {found}, expected a {expected}", reg.primitive_name(primitive))
            }
            SignatureProblem::FixtureMismatch { primitive, stated, actual } => format!(
                "{slot} `{}` is fixed to body `{}`, not `{}`",
                reg.primitive_name(primitive),
                reg.body_name(actual),
                reg.body_name(stated)
            ),
            SignatureProblem::SlotBodyConflict { body } => {
                format!("velocity of body `{0}` with respect to `{0}` itself is identically zero", reg.body_name(body))
            }
            SignatureProblem::CoordFrameNotOnReferenceBody { frame, ref_body } => format!(
                "coordinate frame `{}` is not fixed to reference body `{}`; it is taken as instantaneously fixed to it",
                reg.primitive_name(frame),
                reg.body_name(ref_body)
            ),
        }
    }
}

/// Every schema problem of `sig` against `reg`. Total and deterministic;
/// the signature is usable iff no returned violation has error severity.
pub fn validate_signature(sig: &RelationSignature, reg: &WorldRegistry) -> Vec<SignatureViolation> {
    let mut out = Vec::new();
    let rel = &sig.relation;

    let mut bodies_ok = true;
    for (slot, body) in [(Slot::Body, rel.body()), (Slot::RefBody, rel.ref_body())] {
        if reg.body(body).is_none() {
            bodies_ok = false;
            out.push(SignatureViolation { slot, problem: SignatureProblem::UnknownBody(body) });
        }
    }

    for (slot, id, expected, stated) in rel.primitive_slots() {
        let Some(p) = reg.primitive(id) else {
            out.push(SignatureViolation { slot, problem: SignatureProblem::UnknownPrimitive(id) });
            continue;
        };
        if p.kind != expected {
            out.push(SignatureViolation {
                slot,
                problem: SignatureProblem::KindMismatch { primitive: id, expected, found: p.kind },
            });
        }
        if p.body != stated && reg.body(stated).is_some() {
            out.push(SignatureViolation {
                slot,
                problem: SignatureProblem::FixtureMismatch { primitive: id, stated, actual: p.body },
            });
        }
    }

    if let Some(r) = sig.coord_frame {
        match reg.primitive(r) {
            None => {
                out.push(SignatureViolation { slot: Slot::CoordFrame, problem: SignatureProblem::UnknownPrimitive(r) })
            }
            Some(p) if p.kind != PrimitiveKind::OrientationFrame => out.push(SignatureViolation {
                slot: Slot::CoordFrame,
                problem: SignatureProblem::KindMismatch {
                    primitive: r,
                    expected: PrimitiveKind::OrientationFrame,
                    found: p.kind,
                },
            }),
            Some(p) => {
                if rel.kind().is_velocity() && bodies_ok && p.body != rel.ref_body() {
                    out.push(SignatureViolation {
                        slot: Slot::CoordFrame,
                        problem: SignatureProblem::CoordFrameNotOnReferenceBody { frame: r, ref_body: rel.ref_body() },
                    });
                }
            }
        }
    }

    if rel.kind().is_velocity() && bodies_ok && rel.body() == rel.ref_body() {
        out.push(SignatureViolation {
            slot: Slot::RefBody,
            problem: SignatureProblem::SlotBodyConflict { body: rel.body() },
        });
    }
    out
}

/// True iff `violations` contains no error.
pub fn is_valid(violations: &[SignatureViolation]) -> bool {
    violations.iter().all(|v| v.severity() != Severity::Error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::registry::FrameBundle;

    struct World {
        reg: WorldRegistry,
        c: BodyId,
        d: BodyId,
        e: PrimitiveId,
        f: PrimitiveId,
        a: PrimitiveId,
        b: PrimitiveId,
        r: PrimitiveId,
        g: PrimitiveId,
        h: PrimitiveId,
    }

    /// The primitives of a body C relative to a body D, plus coordinate frame r on D.
    fn world() -> World {
        let mut reg = WorldRegistry::new();
        let c = reg.declare_body("C").unwrap();
        let d = reg.declare_body("D").unwrap();
        let e = reg.declare_primitive("e", PrimitiveKind::Point, c, None).unwrap();
        let a = reg.declare_primitive("a", PrimitiveKind::OrientationFrame, c, None).unwrap();
        let f = reg.declare_primitive("f", PrimitiveKind::Point, d, None).unwrap();
        let b = reg.declare_primitive("b", PrimitiveKind::OrientationFrame, d, None).unwrap();
        let r = reg.declare_primitive("r", PrimitiveKind::OrientationFrame, d, None).unwrap();
        let g = reg
            .declare_primitive("g", PrimitiveKind::Frame, c, Some(FrameBundle { point: e, orientation: a }))
            .unwrap();
        let h = reg
            .declare_primitive("h", PrimitiveKind::Frame, d, Some(FrameBundle { point: f, orientation: b }))
            .unwrap();
        World { reg, c, d, e, f, a, b, r, g, h }
    }

    fn codes(v: &[SignatureViolation]) -> Vec<&'static str> {
        v.iter().map(|v| v.code()).collect()
    }

    #[test]
    fn position_row_validates() {
        let w = world();
        let sig = RelationSignature::new(
            Relation::Position { point: w.e, body: w.c, ref_point: w.f, ref_body: w.d },
            Some(w.r),
        );
        assert!(validate_signature(&sig, &w.reg).is_empty());
        assert_eq!(sig.display(&w.reg).to_string(), "Position(e|C, f|D) @ r");
        assert_eq!(sig.describe(&w.reg), "Position: point e on C, w.r.t. point f on D, expressed in r");
    }

    #[test]
    fn orientation_frame_in_point_slot() {
        let w = world();
        let sig =
            RelationSignature::new(Relation::Position { point: w.a, body: w.c, ref_point: w.f, ref_body: w.d }, None);
        let v = validate_signature(&sig, &w.reg);
        assert_eq!(codes(&v), ["SIG-2"]);
        assert_eq!(v[0].slot, Slot::Point);
    }

    #[test]
    fn fixture_and_frame_kind_errors() {
        let w = world();
        let sig = RelationSignature::new(
            Relation::Orientation { orient: w.b, body: w.c, ref_orient: w.a, ref_body: w.d },
            Some(w.e),
        );
        let v = validate_signature(&sig, &w.reg);
        assert_eq!(codes(&v), ["SIG-3", "SIG-3", "SIG-5"]);
    }

    #[test]
    fn self_relations_are_legal_for_positions() {
        let w = world();
        let sig = RelationSignature::new(
            Relation::Position { point: w.e, body: w.c, ref_point: w.e, ref_body: w.c },
            Some(w.r),
        );
        assert!(validate_signature(&sig, &w.reg).is_empty());
    }

    #[test]
    fn twist_of_a_body_relative_to_itself_warns() {
        let w = world();
        let sig = RelationSignature::new(Relation::Twist { point: w.f, body: w.d, ref_body: w.d }, Some(w.r));
        let v = validate_signature(&sig, &w.reg);
        assert_eq!(codes(&v), ["SIG-6"]);
        assert!(is_valid(&v));

        // point on the reference body while claiming the moving body C
        let sig = RelationSignature::new(Relation::Twist { point: w.f, body: w.c, ref_body: w.d }, Some(w.r));
        assert_eq!(codes(&validate_signature(&sig, &w.reg)), ["SIG-3"]);
    }

    #[test]
    fn velocity_frame_off_reference_body_is_a_note() {
        let w = world();
        let sig = RelationSignature::new(Relation::AngularVelocity { body: w.c, ref_body: w.d }, Some(w.a));
        let v = validate_signature(&sig, &w.reg);
        assert_eq!(codes(&v), ["SIG-7"]);
        assert_eq!(v[0].severity(), Severity::Note);
        assert!(is_valid(&v));
    }

    #[test]
    fn locked_frames() {
        let w = world();
        let o = Relation::Orientation { orient: w.a, body: w.c, ref_orient: w.b, ref_body: w.d };
        assert_eq!(o.locked_frame(&w.reg), Some(Some(w.b)));
        let pf = Relation::PoseFrame { frame: w.g, body: w.c, ref_frame: w.h, ref_body: w.d };
        assert_eq!(pf.locked_frame(&w.reg), Some(Some(w.b)));
        let p = Relation::Position { point: w.e, body: w.c, ref_point: w.f, ref_body: w.d };
        assert_eq!(p.locked_frame(&w.reg), None);
    }

    /// Brute-force enumeration: every assignment of primitives to the two
    /// point slots of a position and of bodies to its body slots validates
    /// exactly when kinds and fixtures match.
    #[test]
    fn enumerated_slot_assignments_match_schema() {
        let w = world();
        let prims: Vec<_> = w.reg.primitives().iter().map(|p| p.id).collect();
        let bodies = [w.c, w.d];
        for &p in &prims {
            for &q in &prims {
                for &bp in &bodies {
                    for &bq in &bodies {
                        let sig = RelationSignature::new(
                            Relation::Position { point: p, body: bp, ref_point: q, ref_body: bq },
                            None,
                        );
                        let pp = w.reg.primitive(p).unwrap();
                        let pq = w.reg.primitive(q).unwrap();
                        let expect_ok = pp.kind == PrimitiveKind::Point
                            && pq.kind == PrimitiveKind::Point
                            && pp.body == bp
                            && pq.body == bq;
                        assert_eq!(validate_signature(&sig, &w.reg).is_empty(), expect_ok);
                    }
                }
            }
        }
        for &p in &prims {
            for &bp in &bodies {
                for &bq in &bodies {
                    let sig = RelationSignature::new(Relation::Twist { point: p, body: bp, ref_body: bq }, None);
                    let pp = w.reg.primitive(p).unwrap();
                    let v = validate_signature(&sig, &w.reg);
                    let schema_ok = pp.kind == PrimitiveKind::Point && pp.body == bp;
                    assert_eq!(is_valid(&v), schema_ok);
                    assert_eq!(v.iter().any(|v| v.code() == "SIG-6"), bp == bq);
                }
            }
        }
    }
}
