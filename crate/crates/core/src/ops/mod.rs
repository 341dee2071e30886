//! Semantic operations on relations.
//!
//! Every operation checks its constraint set against the subject and
//! argument signatures, reports *all* failed constraints together, and only
//! then computes the result signature (and coordinates when every operand
//! carries them).

mod constraints;
mod frame;
mod orientation;
mod pose;
mod position;
mod velocity;

use std::fmt;

use serde::Serialize;

use crate::model::{BodyId, PrimitiveId, RelationKind, RelationValue, WorldRegistry};
use crate::syntax::SourceSpan;

pub use frame::change_coordinate_frame;
pub use orientation::{
    change_orientation_frame, change_reference_orientation_frame, compose_orientation, inverse_orientation,
};
pub use pose::{bundle_pose, compose_pose, decompose_pose, inverse_pose};
pub use position::{change_point, change_reference_point, compose_position, inverse_position};
pub use velocity::{
    assemble_twist, change_velocity_reference_point, compose_angular_velocity, compose_linear_velocity, compose_twist,
    inverse_angular_velocity, split_twist,
};

use constraints::Constraints;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum OperationId {
    ChangePoint,
    ChangeReferencePoint,
    ChangeOrientationFrame,
    ChangeReferenceOrientationFrame,
    ChangeCoordinateFrame,
    Compose,
    Inverse,
    ChangeVelocityReferencePoint,
    DecomposePose,
    BundlePose,
    AssembleTwist,
    SplitTwist,
}

impl OperationId {
    pub const ALL: [OperationId; 12] = [
        OperationId::ChangePoint,
        OperationId::ChangeReferencePoint,
        OperationId::ChangeOrientationFrame,
        OperationId::ChangeReferenceOrientationFrame,
        OperationId::ChangeCoordinateFrame,
        OperationId::Compose,
        OperationId::Inverse,
        OperationId::ChangeVelocityReferencePoint,
        OperationId::DecomposePose,
        OperationId::BundlePose,
        OperationId::AssembleTwist,
        OperationId::SplitTwist,
    ];

    /// Method name in the surface syntax.
    pub fn name(self) -> &'static str {
        match self {
            OperationId::ChangePoint => "changePoint",
            OperationId::ChangeReferencePoint => "changeReferencePoint",
            OperationId::ChangeOrientationFrame => "changeOrientationFrame",
            OperationId::ChangeReferenceOrientationFrame => "changeReferenceOrientationFrame",
            OperationId::ChangeCoordinateFrame => "changeCoordinateFrame",
            OperationId::Compose => "compose",
            OperationId::Inverse => "inverse",
            OperationId::ChangeVelocityReferencePoint => "changeVelocityReferencePoint",
            OperationId::DecomposePose => "decomposePose",
            OperationId::BundlePose => "bundlePose",
            OperationId::AssembleTwist => "assembleTwist",
            OperationId::SplitTwist => "splitTwist",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.name() == name)
    }

    /// Applicability table: relation kinds the operation accepts as subject.
    pub fn applies_to(self, kind: RelationKind) -> bool {
        use RelationKind as K;
        match self {
            OperationId::ChangePoint | OperationId::ChangeReferencePoint | OperationId::BundlePose => {
                kind == K::Position
            }
            OperationId::ChangeOrientationFrame | OperationId::ChangeReferenceOrientationFrame => {
                kind == K::Orientation
            }
            OperationId::ChangeCoordinateFrame | OperationId::Compose => true,
            OperationId::Inverse => {
                matches!(kind, K::Position | K::Orientation | K::PosePointOrient | K::PoseFrame | K::AngularVelocity)
            }
            OperationId::ChangeVelocityReferencePoint | OperationId::SplitTwist => kind == K::Twist,
            OperationId::DecomposePose => kind.is_pose(),
            OperationId::AssembleTwist => kind == K::AngularVelocity,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            OperationId::Inverse | OperationId::DecomposePose | OperationId::SplitTwist => 0,
            _ => 1,
        }
    }

    /// Operations that produce two relations.
    pub fn yields_pair(self) -> bool {
        matches!(self, OperationId::DecomposePose | OperationId::SplitTwist)
    }
}

impl fmt::Display for OperationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Subject,
    Argument(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Subject => f.write_str("subject"),
            Role::Argument(i) => write!(f, "argument {}", i + 1),
        }
    }
}

/// What a constraint expected or found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entity {
    Primitive(PrimitiveId),
    Body(BodyId),
    Kind(RelationKind),
    Count(usize),
}

impl Entity {
    pub fn render(&self, reg: &WorldRegistry) -> String {
        match self {
            Entity::Primitive(p) => reg.primitive_name(*p).to_owned(),
            Entity::Body(b) => reg.body_name(*b).to_owned(),
            Entity::Kind(k) => k.to_string(),
            Entity::Count(n) => n.to_string(),
        }
    }
}

/// One failed constraint of one operation application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintViolation {
    pub operation: OperationId,
    pub constraint_id: &'static str,
    pub description: String,
    /// `None` stands for "no coordinate frame" in frame constraints.
    pub expected: Option<Entity>,
    pub found: Option<Entity>,
    pub role: Role,
    pub span: Option<SourceSpan>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpOutput {
    Single(RelationValue),
    Pair(RelationValue, RelationValue),
}

impl OpOutput {
    pub fn values(&self) -> Vec<&RelationValue> {
        match self {
            OpOutput::Single(v) => vec![v],
            OpOutput::Pair(a, b) => vec![a, b],
        }
    }
}

pub type OpResult<T> = Result<T, Vec<ConstraintViolation>>;

/// Uniform dispatch by operation id and subject kind. Never returns both a
/// value and violations.
pub fn apply_operation(
    reg: &WorldRegistry,
    op: OperationId,
    subject: &RelationValue,
    args: &[RelationValue],
) -> OpResult<OpOutput> {
    use RelationKind as K;
    let kind = subject.kind();
    let mut k = Constraints::new(reg, op);
    if !op.applies_to(kind) {
        k.push("OP-1", Role::Subject, None, Some(Entity::Kind(kind)));
        return Err(k.into_violations());
    }
    if args.len() != op.arity() {
        let role = if args.len() > op.arity() { Role::Argument(op.arity()) } else { Role::Subject };
        k.push("OP-2", role, Some(Entity::Count(op.arity())), Some(Entity::Count(args.len())));
        return Err(k.into_violations());
    }
    let arg = args.first();
    let single = |r: OpResult<RelationValue>| r.map(OpOutput::Single);
    match (op, kind) {
        (OperationId::ChangePoint, _) => single(change_point(reg, subject, arg.unwrap())),
        (OperationId::ChangeReferencePoint, _) => single(change_reference_point(reg, subject, arg.unwrap())),
        (OperationId::ChangeOrientationFrame, _) => single(change_orientation_frame(reg, subject, arg.unwrap())),
        (OperationId::ChangeReferenceOrientationFrame, _) => {
            single(change_reference_orientation_frame(reg, subject, arg.unwrap()))
        }
        (OperationId::ChangeCoordinateFrame, _) => single(change_coordinate_frame(reg, subject, arg.unwrap())),
        (OperationId::Compose, K::Position) => single(compose_position(reg, subject, arg.unwrap())),
        (OperationId::Compose, K::Orientation) => single(compose_orientation(reg, subject, arg.unwrap())),
        (OperationId::Compose, K::PosePointOrient | K::PoseFrame) => single(compose_pose(reg, subject, arg.unwrap())),
        (OperationId::Compose, K::LinearVelocity) => single(compose_linear_velocity(reg, subject, arg.unwrap())),
        (OperationId::Compose, K::AngularVelocity) => single(compose_angular_velocity(reg, subject, arg.unwrap())),
        (OperationId::Compose, K::Twist) => single(compose_twist(reg, subject, arg.unwrap())),
        (OperationId::Inverse, K::Position) => single(inverse_position(reg, subject)),
        (OperationId::Inverse, K::Orientation) => single(inverse_orientation(reg, subject)),
        (OperationId::Inverse, K::AngularVelocity) => single(inverse_angular_velocity(reg, subject)),
        (OperationId::Inverse, _) => single(inverse_pose(reg, subject)),
        (OperationId::ChangeVelocityReferencePoint, _) => {
            single(change_velocity_reference_point(reg, subject, arg.unwrap()))
        }
        (OperationId::DecomposePose, _) => decompose_pose(reg, subject).map(|(p, o)| OpOutput::Pair(p, o)),
        (OperationId::BundlePose, _) => single(bundle_pose(reg, subject, arg.unwrap())),
        (OperationId::AssembleTwist, _) => single(assemble_twist(reg, subject, arg.unwrap())),
        (OperationId::SplitTwist, _) => split_twist(reg, subject).map(|(w, v)| OpOutput::Pair(w, v)),
    }
}
