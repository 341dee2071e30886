use crate::model::{Coords, Relation, RelationKind, RelationSignature, RelationValue, WorldRegistry};
use crate::ops::constraints::{both, Constraints};
use crate::ops::{Entity, OpResult, OperationId, Role};

pub(crate) fn inapplicable<T>(reg: &WorldRegistry, op: OperationId, subject: &RelationValue) -> OpResult<T> {
    let mut k = Constraints::new(reg, op);
    k.push("OP-1", Role::Subject, None, Some(Entity::Kind(subject.kind())));
    Err(k.into_violations())
}

fn vec3(v: &RelationValue) -> Option<crate::kernels::Vec3> {
    v.coords.and_then(|c| c.as_vec3())
}

/// `Position(e1|C, f|D).changePoint(Position(e2|C, e1|C)) = Position(e2|C, f|D)`.
pub fn change_point(reg: &WorldRegistry, subject: &RelationValue, arg: &RelationValue) -> OpResult<RelationValue> {
    let op = OperationId::ChangePoint;
    let Relation::Position { point, body, ref_point, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    let Relation::Position { point: new_point, body: arg_body, ref_point: arg_ref_point, ref_body: arg_ref_body } =
        arg.sig.relation
    else {
        k.kind("CP-1", RelationKind::Position, arg.kind());
        return Err(k.into_violations());
    };
    k.prim("CP-2", point, arg_ref_point);
    k.body("CP-3", body, arg_body);
    k.body("CP-4", body, arg_ref_body);
    k.frame("CP-5", subject.sig.coord_frame, arg.sig.coord_frame);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(
            Relation::Position { point: new_point, body, ref_point, ref_body },
            subject.sig.coord_frame,
        ),
        coords: both(vec3(subject), vec3(arg), |s, a| Coords::Cartesian3(s + a)),
    })
}

/// `Position(e|C, f1|D).changeReferencePoint(Position(f1|D, f2|D)) = Position(e|C, f2|D)`.
pub fn change_reference_point(
    reg: &WorldRegistry,
    subject: &RelationValue,
    arg: &RelationValue,
) -> OpResult<RelationValue> {
    let op = OperationId::ChangeReferencePoint;
    let Relation::Position { point, body, ref_point, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    let Relation::Position { point: arg_point, body: arg_body, ref_point: new_ref, ref_body: arg_ref_body } =
        arg.sig.relation
    else {
        k.kind("CRP-1", RelationKind::Position, arg.kind());
        return Err(k.into_violations());
    };
    k.prim("CRP-2", ref_point, arg_point);
    k.body("CRP-3", ref_body, arg_body);
    k.body("CRP-4", ref_body, arg_ref_body);
    k.frame("CRP-5", subject.sig.coord_frame, arg.sig.coord_frame);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(
            Relation::Position { point, body, ref_point: new_ref, ref_body },
            subject.sig.coord_frame,
        ),
        coords: both(vec3(subject), vec3(arg), |s, a| Coords::Cartesian3(s + a)),
    })
}

/// `Position(e|C, f|D) ∘ Position(f|D, k|E) = Position(e|C, k|E)`.
pub fn compose_position(reg: &WorldRegistry, subject: &RelationValue, arg: &RelationValue) -> OpResult<RelationValue> {
    let op = OperationId::Compose;
    let Relation::Position { point, body, ref_point, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    let Relation::Position { point: arg_point, body: arg_body, ref_point: far_point, ref_body: far_body } =
        arg.sig.relation
    else {
        k.kind("CMP-1", RelationKind::Position, arg.kind());
        return Err(k.into_violations());
    };
    k.prim("CMP-2", ref_point, arg_point);
    k.body("CMP-3", ref_body, arg_body);
    k.frame("CMP-4", subject.sig.coord_frame, arg.sig.coord_frame);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(
            Relation::Position { point, body, ref_point: far_point, ref_body: far_body },
            subject.sig.coord_frame,
        ),
        coords: both(vec3(subject), vec3(arg), |s, a| Coords::Cartesian3(s + a)),
    })
}

/// `Position(e|C, f|D)⁻¹ = Position(f|D, e|C)`, coordinates negated.
pub fn inverse_position(reg: &WorldRegistry, subject: &RelationValue) -> OpResult<RelationValue> {
    let Relation::Position { point, body, ref_point, ref_body } = subject.sig.relation else {
        return inapplicable(reg, OperationId::Inverse, subject);
    };
    Ok(RelationValue {
        sig: RelationSignature::new(
            Relation::Position { point: ref_point, body: ref_body, ref_point: point, ref_body: body },
            subject.sig.coord_frame,
        ),
        coords: vec3(subject).map(|v| Coords::Cartesian3(-v)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Vec3;
    use crate::model::{BodyId, PrimitiveId, PrimitiveKind};

    struct W {
        reg: WorldRegistry,
        c: BodyId,
        d: BodyId,
        e: BodyId,
        e1: PrimitiveId,
        e2: PrimitiveId,
        e3: PrimitiveId,
        f: PrimitiveId,
        k: PrimitiveId,
        r: PrimitiveId,
        r2: PrimitiveId,
    }

    fn w() -> W {
        let mut reg = WorldRegistry::new();
        let c = reg.declare_body("C").unwrap();
        let d = reg.declare_body("D").unwrap();
        let e = reg.declare_body("E").unwrap();
        let p = |reg: &mut WorldRegistry, n: &str, b| reg.declare_primitive(n, PrimitiveKind::Point, b, None).unwrap();
        let e1 = p(&mut reg, "e1", c);
        let e2 = p(&mut reg, "e2", c);
        let e3 = p(&mut reg, "e3", c);
        let f = p(&mut reg, "f", d);
        let kk = p(&mut reg, "k", e);
        let r = reg.declare_primitive("r", PrimitiveKind::OrientationFrame, d, None).unwrap();
        let r2 = reg.declare_primitive("r2", PrimitiveKind::OrientationFrame, d, None).unwrap();
        W { reg, c, d, e, e1, e2, e3, f, k: kk, r, r2 }
    }

    fn pos(
        point: PrimitiveId,
        body: BodyId,
        ref_point: PrimitiveId,
        ref_body: BodyId,
        r: Option<PrimitiveId>,
        c: Option<[f64; 3]>,
    ) -> RelationValue {
        RelationValue::new(
            RelationSignature::new(Relation::Position { point, body, ref_point, ref_body }, r),
            c.map(|c| Coords::Cartesian3(Vec3::from_array(c))),
        )
        .unwrap()
    }

    fn codes(v: &[crate::ops::ConstraintViolation]) -> Vec<&'static str> {
        v.iter().map(|v| v.constraint_id).collect()
    }

    #[test]
    fn change_point_signature_and_coords() {
        let w = w();
        let s = pos(w.e1, w.c, w.f, w.d, Some(w.r), Some([1.0, 2.0, 3.0]));
        let a = pos(w.e2, w.c, w.e1, w.c, Some(w.r), Some([0.5, 0.0, 0.0]));
        let out = change_point(&w.reg, &s, &a).unwrap();
        assert_eq!(out.sig.display(&w.reg).to_string(), "Position(e2|C, f|D) @ r");
        assert_eq!(out.coords, Some(Coords::Cartesian3(Vec3::new(1.5, 2.0, 3.0))));
    }

    #[test]
    fn change_point_reference_point_mismatch() {
        let w = w();
        let s = pos(w.e1, w.c, w.f, w.d, Some(w.r), None);
        // reference point f on D: the reference body check fails as well
        let a = pos(w.e2, w.c, w.f, w.d, Some(w.r), None);
        let err = change_point(&w.reg, &s, &a).unwrap_err();
        assert_eq!(codes(&err), ["CP-2", "CP-4"]);
        let cp2 = &err[0];
        assert_eq!(cp2.expected, Some(Entity::Primitive(w.e1)));
        assert_eq!(cp2.found, Some(Entity::Primitive(w.f)));
        assert!(cp2.description.contains("`e1`") && cp2.description.contains("`f`"));

        // another point on C: only the reference point check fails
        let a = pos(w.e2, w.c, w.e3, w.c, Some(w.r), None);
        assert_eq!(codes(&change_point(&w.reg, &s, &a).unwrap_err()), ["CP-2"]);
    }

    #[test]
    fn change_point_reports_every_failure() {
        let w = w();
        let s = pos(w.e1, w.c, w.f, w.d, Some(w.r), None);
        let a = pos(w.k, w.e, w.f, w.d, Some(w.r2), None);
        assert_eq!(codes(&change_point(&w.reg, &s, &a).unwrap_err()), ["CP-2", "CP-3", "CP-4", "CP-5"]);
        // coordinate-free on both sides: frame check is vacuous
        let s = pos(w.e1, w.c, w.f, w.d, None, None);
        let a = pos(w.e2, w.c, w.e1, w.c, None, None);
        let out = change_point(&w.reg, &s, &a).unwrap();
        assert_eq!(out.sig.coord_frame, None);
        // mixed semantics levels are not
        let a = pos(w.e2, w.c, w.e1, w.c, Some(w.r), None);
        assert_eq!(codes(&change_point(&w.reg, &s, &a).unwrap_err()), ["CP-5"]);
    }

    #[test]
    fn compose_chain() {
        let w = w();
        let s = pos(w.e1, w.c, w.f, w.d, Some(w.r), Some([1.0, 0.0, 0.0]));
        let a = pos(w.f, w.d, w.k, w.e, Some(w.r), Some([0.0, 1.0, 0.0]));
        let out = compose_position(&w.reg, &s, &a).unwrap();
        assert_eq!(out.sig.display(&w.reg).to_string(), "Position(e1|C, k|E) @ r");
        assert_eq!(out.coords, Some(Coords::Cartesian3(Vec3::new(1.0, 1.0, 0.0))));

        let reversed = pos(w.k, w.e, w.f, w.d, Some(w.r), None);
        assert_eq!(codes(&compose_position(&w.reg, &s, &reversed).unwrap_err()), ["CMP-2", "CMP-3"]);
    }

    #[test]
    fn change_reference_point() {
        let w = w();
        let s = pos(w.e1, w.c, w.e2, w.c, Some(w.r), Some([1.0, 2.0, 3.0]));
        let a = pos(w.e2, w.c, w.e3, w.c, Some(w.r), Some([0.0, 0.0, 1.0]));
        let out = super::change_reference_point(&w.reg, &s, &a).unwrap();
        assert_eq!(out.sig.display(&w.reg).to_string(), "Position(e1|C, e3|C) @ r");
        assert_eq!(out.coords, Some(Coords::Cartesian3(Vec3::new(1.0, 2.0, 4.0))));
        let bad = pos(w.e3, w.c, w.f, w.d, None, None);
        assert_eq!(codes(&super::change_reference_point(&w.reg, &s, &bad).unwrap_err()), ["CRP-2", "CRP-4", "CRP-5"]);
    }

    #[test]
    fn inverse_negates_and_is_an_involution() {
        let w = w();
        let s = pos(w.e1, w.c, w.f, w.d, Some(w.r), Some([1.0, 2.0, 3.0]));
        let inv = inverse_position(&w.reg, &s).unwrap();
        assert_eq!(inv.sig.display(&w.reg).to_string(), "Position(f|D, e1|C) @ r");
        assert_eq!(inv.coords, Some(Coords::Cartesian3(Vec3::new(-1.0, -2.0, -3.0))));
        assert_eq!(inverse_position(&w.reg, &inv).unwrap(), s);
        let zero = pos(w.e1, w.c, w.f, w.d, Some(w.r), Some([0.0; 3]));
        assert_eq!(inverse_position(&w.reg, &zero).unwrap().coords.unwrap().as_vec3().unwrap().max_abs(), 0.0);
    }

    #[test]
    fn wrong_argument_kind() {
        let w = w();
        let s = pos(w.e1, w.c, w.f, w.d, Some(w.r), None);
        let av = RelationValue::signature_only(RelationSignature::new(
            Relation::AngularVelocity { body: w.c, ref_body: w.d },
            Some(w.r),
        ));
        assert_eq!(codes(&change_point(&w.reg, &s, &av).unwrap_err()), ["CP-1"]);
        assert_eq!(codes(&compose_position(&w.reg, &s, &av).unwrap_err()), ["CMP-1"]);
        assert_eq!(codes(&inverse_position(&w.reg, &av).unwrap_err()), ["OP-1"]);
    }
}
