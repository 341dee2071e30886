use crate::model::{Coords, Relation, RelationKind, RelationSignature, RelationValue, WorldRegistry};
use crate::ops::constraints::Constraints;
use crate::ops::{Entity, OpResult, OperationId, Role};

/// Re-expresses a relation with a free coordinate frame in a new one.
///
/// The argument `Orientation(r1|·, r2|·) @ r2` maps `r1`-coordinates to
/// `r2`-coordinates; every 3-vector block of the subject is rotated by it.
/// Orientation and pose coordinates are pinned to their reference frame and
/// are rejected (compose instead).
pub fn change_coordinate_frame(
    reg: &WorldRegistry,
    subject: &RelationValue,
    arg: &RelationValue,
) -> OpResult<RelationValue> {
    let mut k = Constraints::new(reg, OperationId::ChangeCoordinateFrame);
    if subject.kind().has_locked_frame() {
        k.push("REP-2", Role::Subject, None, Some(Entity::Kind(subject.kind())));
    }
    let Relation::Orientation { orient: from, ref_orient: to, .. } = arg.sig.relation else {
        k.kind("CCF-1", RelationKind::Orientation, arg.kind());
        return Err(k.into_violations());
    };
    k.frame("CCF-2", subject.sig.coord_frame, Some(from));
    k.locked_frame("CCF-3", Role::Argument(0), &arg.sig);
    k.finish()?;
    let rotation = arg.coords.and_then(|c| c.as_rot3());
    let coords = match (subject.coords, rotation) {
        (Some(Coords::Cartesian3(v)), Some(r)) => Some(Coords::Cartesian3(r.apply(v))),
        (Some(Coords::AngularLinear6(t)), Some(r)) => Some(Coords::AngularLinear6(t.rotate(&r))),
        _ => None,
    };
    Ok(RelationValue { sig: RelationSignature::new(subject.sig.relation, Some(to)), coords })
}
