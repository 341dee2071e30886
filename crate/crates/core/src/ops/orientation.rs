use crate::kernels::Rot3;
use crate::model::{Coords, Relation, RelationKind, RelationSignature, RelationValue, WorldRegistry};
use crate::ops::constraints::{both, Constraints};
use crate::ops::position::inapplicable;
use crate::ops::{OpResult, OperationId, Role};

fn rot(v: &RelationValue) -> Option<Rot3> {
    v.coords.and_then(|c| c.as_rot3())
}

/// `Orientation(a|C, b|D) ∘ Orientation(b|D, c|E) = Orientation(a|C, c|E)`,
/// with `R(a→c) = R(b→c) · R(a→b)`.
pub fn compose_orientation(
    reg: &WorldRegistry,
    subject: &RelationValue,
    arg: &RelationValue,
) -> OpResult<RelationValue> {
    let op = OperationId::Compose;
    let Relation::Orientation { orient, body, ref_orient, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    let Relation::Orientation { orient: arg_orient, body: arg_body, ref_orient: far, ref_body: far_body } =
        arg.sig.relation
    else {
        k.kind("CMP-1", RelationKind::Orientation, arg.kind());
        return Err(k.into_violations());
    };
    k.prim("CMP-2", ref_orient, arg_orient);
    k.body("CMP-3", ref_body, arg_body);
    k.locked_frames("CMP-4", &subject.sig, &arg.sig);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(
            Relation::Orientation { orient, body, ref_orient: far, ref_body: far_body },
            arg.sig.coord_frame,
        ),
        coords: both(rot(subject), rot(arg), |s, a| Coords::RotationMatrix(a.mul(&s))),
    })
}

/// `Orientation(a|C, b|D)⁻¹ = Orientation(b|D, a|C)`, expressed in `a`.
pub fn inverse_orientation(reg: &WorldRegistry, subject: &RelationValue) -> OpResult<RelationValue> {
    let op = OperationId::Inverse;
    let Relation::Orientation { orient, body, ref_orient, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    k.locked_frame("INV-1", Role::Subject, &subject.sig);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(
            Relation::Orientation { orient: ref_orient, body: ref_body, ref_orient: orient, ref_body: body },
            subject.sig.coord_frame.map(|_| orient),
        ),
        coords: rot(subject).map(|r| Coords::RotationMatrix(r.inverse())),
    })
}

/// `Orientation(a1|C, b|D).changeOrientationFrame(Orientation(a2|C, a1|C)) = Orientation(a2|C, b|D)`,
/// with `R(a2→b) = R(a1→b) · R(a2→a1)`.
pub fn change_orientation_frame(
    reg: &WorldRegistry,
    subject: &RelationValue,
    arg: &RelationValue,
) -> OpResult<RelationValue> {
    let op = OperationId::ChangeOrientationFrame;
    let Relation::Orientation { orient, body, ref_orient, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    let Relation::Orientation { orient: new_orient, body: arg_body, ref_orient: arg_ref, ref_body: arg_ref_body } =
        arg.sig.relation
    else {
        k.kind("CO-1", RelationKind::Orientation, arg.kind());
        return Err(k.into_violations());
    };
    k.prim("CO-2", orient, arg_ref);
    k.body("CO-3", body, arg_body);
    k.body("CO-4", body, arg_ref_body);
    k.locked_frames("CO-5", &subject.sig, &arg.sig);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(
            Relation::Orientation { orient: new_orient, body, ref_orient, ref_body },
            subject.sig.coord_frame,
        ),
        coords: both(rot(subject), rot(arg), |s, a| Coords::RotationMatrix(s.mul(&a))),
    })
}

/// `Orientation(a|C, b1|D).changeReferenceOrientationFrame(Orientation(b1|D, b2|D)) = Orientation(a|C, b2|D)`,
/// with `R(a→b2) = R(b1→b2) · R(a→b1)`.
pub fn change_reference_orientation_frame(
    reg: &WorldRegistry,
    subject: &RelationValue,
    arg: &RelationValue,
) -> OpResult<RelationValue> {
    let op = OperationId::ChangeReferenceOrientationFrame;
    let Relation::Orientation { orient, body, ref_orient, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    let Relation::Orientation { orient: arg_orient, body: arg_body, ref_orient: new_ref, ref_body: arg_ref_body } =
        arg.sig.relation
    else {
        k.kind("CRO-1", RelationKind::Orientation, arg.kind());
        return Err(k.into_violations());
    };
    k.prim("CRO-2", ref_orient, arg_orient);
    k.body("CRO-3", ref_body, arg_body);
    k.body("CRO-4", ref_body, arg_ref_body);
    k.locked_frames("CRO-5", &subject.sig, &arg.sig);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(
            Relation::Orientation { orient, body, ref_orient: new_ref, ref_body },
            arg.sig.coord_frame,
        ),
        coords: both(rot(subject), rot(arg), |s, a| Coords::RotationMatrix(a.mul(&s))),
    })
}
