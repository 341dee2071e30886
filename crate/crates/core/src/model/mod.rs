//! World registry, relation signatures and coordinate values.

mod registry;
mod signature;
mod value;

pub use registry::{
    Body, BodyId, Coincidence, FrameBundle, ModelError, Namespace, Primitive, PrimitiveId, PrimitiveKind, WorldRegistry,
};
pub use signature::{
    is_valid, validate_signature, Relation, RelationKind, RelationSignature, SignatureDisplay, SignatureProblem,
    SignatureViolation, Slot,
};
pub use value::{check_representation, Coords, RelationValue, Representation, RepresentationViolation, ValueError};
