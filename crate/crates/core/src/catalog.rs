//! Stable diagnostic codes.
//!
//! Codes are the public contract of the checker; messages may change.
//! Operation constraints have one row per (code, operation) pair because
//! some code families are shared between operations of the same shape.

use std::fmt;

use serde::Serialize;

use crate::ops::OperationId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Note,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Note => "note",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CatalogEntry {
    pub code: &'static str,
    pub operation: Option<OperationId>,
    pub severity: Severity,
    pub description: &'static str,
}

const fn row(code: &'static str, severity: Severity, description: &'static str) -> CatalogEntry {
    CatalogEntry { code, operation: None, severity, description }
}

const fn op(code: &'static str, operation: OperationId, description: &'static str) -> CatalogEntry {
    CatalogEntry { code, operation: Some(operation), severity: Severity::Error, description }
}

use OperationId as O;
use Severity::{Error as E, Note as N, Warning as W};

pub static CATALOG: &[CatalogEntry] = &[
    row("LEX-1", E, "illegal character"),
    row("LEX-2", E, "malformed number literal"),
    row("PARSE-1", E, "unexpected token"),
    row("NR-1", E, "unknown name"),
    row("NR-2", E, "duplicate declaration"),
    row("NR-3", E, "name used as the wrong kind of entity"),
    row("NR-4", E, "name used before its declaration"),
    row("REG-1", E, "frame bundle member is fixed to a different body than the frame"),
    row("REG-2", E, "coincident points must be fixed to different bodies"),
    row("SIG-1", E, "unknown primitive in relation slot"),
    row("SIG-2", E, "primitive kind does not match the relation slot"),
    row("SIG-3", E, "primitive is not fixed to the body stated in the relation"),
    row("SIG-4", E, "unknown body in relation slot"),
    row("SIG-5", E, "coordinate frame must be an orientation frame"),
    row("SIG-6", W, "velocity of a body with respect to itself"),
    row("SIG-7", N, "velocity coordinate frame is not fixed to the reference body"),
    row("REP-1", E, "coordinate frame violates the representation constraint"),
    row("REP-2", E, "coordinate frame is fixed by the representation and cannot be changed"),
    row("REP-3", E, "coordinate payload has the wrong shape for the relation kind"),
    row("REP-4", E, "rotation block is not orthonormal with determinant +1"),
    row("REP-5", E, "coordinates given without a coordinate frame"),
    row("OP-1", E, "operation is not applicable to the relation kind"),
    row("OP-2", E, "wrong number of operation arguments"),
    row("OP-3", E, "single relation and relation pair mixed up"),
    op("CP-1", O::ChangePoint, "argument must be a position"),
    op("CP-2", O::ChangePoint, "argument's reference point must equal the subject's point"),
    op("CP-3", O::ChangePoint, "argument's body must equal the subject's body"),
    op("CP-4", O::ChangePoint, "argument's reference body must equal the subject's body"),
    op("CP-5", O::ChangePoint, "argument's coordinate frame must equal the subject's coordinate frame"),
    op("CP-1", O::ChangeVelocityReferencePoint, "argument must be a position"),
    op(
        "CP-2",
        O::ChangeVelocityReferencePoint,
        "argument's reference point must equal the subject's velocity reference point",
    ),
    op("CP-3", O::ChangeVelocityReferencePoint, "argument's body must equal the subject's body"),
    op("CP-4", O::ChangeVelocityReferencePoint, "argument's reference body must equal the subject's body"),
    op(
        "CP-5",
        O::ChangeVelocityReferencePoint,
        "argument's coordinate frame must equal the subject's coordinate frame",
    ),
    op("CRP-1", O::ChangeReferencePoint, "argument must be a position"),
    op("CRP-2", O::ChangeReferencePoint, "argument's point must equal the subject's reference point"),
    op("CRP-3", O::ChangeReferencePoint, "argument's body must equal the subject's reference body"),
    op("CRP-4", O::ChangeReferencePoint, "argument's reference body must equal the subject's reference body"),
    op("CRP-5", O::ChangeReferencePoint, "argument's coordinate frame must equal the subject's coordinate frame"),
    op("CMP-1", O::Compose, "argument must have the subject's relation kind"),
    op("CMP-2", O::Compose, "argument's point, orientation frame or frame must equal the subject's reference one"),
    op("CMP-3", O::Compose, "argument's body must equal the subject's reference body"),
    op("CMP-4", O::Compose, "coordinate frames must agree"),
    op("TW-1", O::Compose, "velocity reference points must be identical or declared coincident"),
    op("CO-1", O::ChangeOrientationFrame, "argument must be an orientation"),
    op(
        "CO-2",
        O::ChangeOrientationFrame,
        "argument's reference orientation frame must equal the subject's orientation frame",
    ),
    op("CO-3", O::ChangeOrientationFrame, "argument's body must equal the subject's body"),
    op("CO-4", O::ChangeOrientationFrame, "argument's reference body must equal the subject's body"),
    op("CO-5", O::ChangeOrientationFrame, "coordinate frames must follow the rotation matrix representation"),
    op("CRO-1", O::ChangeReferenceOrientationFrame, "argument must be an orientation"),
    op(
        "CRO-2",
        O::ChangeReferenceOrientationFrame,
        "argument's orientation frame must equal the subject's reference orientation frame",
    ),
    op("CRO-3", O::ChangeReferenceOrientationFrame, "argument's body must equal the subject's reference body"),
    op(
        "CRO-4",
        O::ChangeReferenceOrientationFrame,
        "argument's reference body must equal the subject's reference body",
    ),
    op("CRO-5", O::ChangeReferenceOrientationFrame, "coordinate frames must follow the rotation matrix representation"),
    op("CCF-1", O::ChangeCoordinateFrame, "argument must be an orientation"),
    op("CCF-2", O::ChangeCoordinateFrame, "argument's orientation frame must equal the subject's coordinate frame"),
    op("CCF-3", O::ChangeCoordinateFrame, "argument's rotation must be expressed in its reference orientation frame"),
    op("REP-2", O::ChangeCoordinateFrame, "coordinate frame is fixed by the representation and cannot be changed"),
    op("INV-1", O::Inverse, "inverse pose needs a frame with an orientation bundle to be expressed in"),
    op("DEC-1", O::DecomposePose, "pose of atomic frames cannot be decomposed"),
    op("CMP-1", O::BundlePose, "argument must be an orientation"),
    op("CMP-3", O::BundlePose, "argument's body and reference body must equal the subject's"),
    op("CMP-4", O::BundlePose, "coordinate frames must agree and equal the reference orientation frame"),
    op("CMP-1", O::AssembleTwist, "argument must be a linear velocity"),
    op("CMP-3", O::AssembleTwist, "argument's body and reference body must equal the subject's"),
    op("CMP-4", O::AssembleTwist, "coordinate frames must agree"),
    row("SKIP-1", N, "binding not checked because an upstream binding has errors"),
    row("EV-1", E, "relation has no coordinates to evaluate"),
    row("EV-2", E, "binding did not check cleanly"),
];

/// First catalog row for `code`.
pub fn lookup(code: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.code == code)
}

/// Row for a specific operation constraint.
pub fn lookup_constraint(code: &str, operation: OperationId) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.code == code && e.operation == Some(operation))
}

pub fn contains(code: &str) -> bool {
    lookup(code).is_some()
}
