//! Semantic checking of geometric relations between rigid bodies.
//!
//! A relation such as "the position of point `e1` on body `C` with respect to
//! point `f` on body `D`, expressed in frame `r`" carries a *semantic
//! signature*. Operations on relations (changing the point, composing,
//! inverting, …) are only meaningful when their operands' signatures fit
//! together; this crate checks those constraints, computes result
//! signatures, and evaluates coordinates when they are given.
//!
//! The pipeline is: [`syntax::parse`] → [`syntax::resolve`] →
//! [`check::check_program`], or all at once with [`check::analyze`].

pub mod catalog;
pub mod check;
pub mod diagnostic;
#[cfg(feature = "testgen")]
pub mod gen;
pub mod kernels;
pub mod model;
pub mod ops;
pub mod syntax;

pub use catalog::Severity;
pub use check::{analyze, evaluate_binding, Analysis, CheckReport};
pub use diagnostic::Diagnostic;
pub use kernels::{Hom4, Rot3, Twist6, Vec3};
pub use model::{Coords, Relation, RelationKind, RelationSignature, RelationValue, Slot, WorldRegistry};
pub use ops::{apply_operation, ConstraintViolation, OpOutput, OperationId, Role};
pub use syntax::SourceSpan;
