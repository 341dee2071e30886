use crate::kernels::{Twist6, Vec3};
use crate::model::{Coords, PrimitiveId, Relation, RelationKind, RelationSignature, RelationValue, WorldRegistry};
use crate::ops::constraints::{both, Constraints};
use crate::ops::position::inapplicable;
use crate::ops::{Entity, OpResult, OperationId, Role};

fn vec3(v: &RelationValue) -> Option<Vec3> {
    v.coords.and_then(|c| c.as_vec3())
}

fn twist(v: &RelationValue) -> Option<Twist6> {
    v.coords.and_then(|c| c.as_twist())
}

/// Velocity reference points of chained velocities live on different bodies,
/// so they have to be declared coincident (or be literally the same point).
fn same_location(k: &mut Constraints, reg: &WorldRegistry, expected: PrimitiveId, found: PrimitiveId) {
    if expected != found && !reg.are_coincident(expected, found) {
        k.push("TW-1", Role::Argument(0), Some(Entity::Primitive(expected)), Some(Entity::Primitive(found)));
    }
}

/// `AngularVelocity(C, D) ∘ AngularVelocity(D, E) = AngularVelocity(C, E)`, coordinates added.
pub fn compose_angular_velocity(
    reg: &WorldRegistry,
    subject: &RelationValue,
    arg: &RelationValue,
) -> OpResult<RelationValue> {
    let op = OperationId::Compose;
    let Relation::AngularVelocity { body, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    let Relation::AngularVelocity { body: arg_body, ref_body: far_body } = arg.sig.relation else {
        k.kind("CMP-1", RelationKind::AngularVelocity, arg.kind());
        return Err(k.into_violations());
    };
    k.body("CMP-3", ref_body, arg_body);
    k.frame("CMP-4", subject.sig.coord_frame, arg.sig.coord_frame);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(Relation::AngularVelocity { body, ref_body: far_body }, subject.sig.coord_frame),
        coords: both(vec3(subject), vec3(arg), |s, a| Coords::Cartesian3(s + a)),
    })
}

/// `AngularVelocity(C, D)⁻¹ = AngularVelocity(D, C)`, coordinates negated.
pub fn inverse_angular_velocity(reg: &WorldRegistry, subject: &RelationValue) -> OpResult<RelationValue> {
    let Relation::AngularVelocity { body, ref_body } = subject.sig.relation else {
        return inapplicable(reg, OperationId::Inverse, subject);
    };
    Ok(RelationValue {
        sig: RelationSignature::new(
            Relation::AngularVelocity { body: ref_body, ref_body: body },
            subject.sig.coord_frame,
        ),
        coords: vec3(subject).map(|v| Coords::Cartesian3(-v)),
    })
}

/// `LinearVelocity(e|C, D) ∘ LinearVelocity(e'|D, E) = LinearVelocity(e|C, E)`
/// where `e` and `e'` coincide at the instant of interest.
pub fn compose_linear_velocity(
    reg: &WorldRegistry,
    subject: &RelationValue,
    arg: &RelationValue,
) -> OpResult<RelationValue> {
    let op = OperationId::Compose;
    let Relation::LinearVelocity { point, body, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    let Relation::LinearVelocity { point: arg_point, body: arg_body, ref_body: far_body } = arg.sig.relation else {
        k.kind("CMP-1", RelationKind::LinearVelocity, arg.kind());
        return Err(k.into_violations());
    };
    k.body("CMP-3", ref_body, arg_body);
    k.frame("CMP-4", subject.sig.coord_frame, arg.sig.coord_frame);
    same_location(&mut k, reg, point, arg_point);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(
            Relation::LinearVelocity { point, body, ref_body: far_body },
            subject.sig.coord_frame,
        ),
        coords: both(vec3(subject), vec3(arg), |s, a| Coords::Cartesian3(s + a)),
    })
}

/// `Twist(e|C, D) ∘ Twist(e'|D, E) = Twist(e|C, E)` with `e`, `e'` coincident;
/// both blocks add.
pub fn compose_twist(reg: &WorldRegistry, subject: &RelationValue, arg: &RelationValue) -> OpResult<RelationValue> {
    let op = OperationId::Compose;
    let Relation::Twist { point, body, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    let Relation::Twist { point: arg_point, body: arg_body, ref_body: far_body } = arg.sig.relation else {
        k.kind("CMP-1", RelationKind::Twist, arg.kind());
        return Err(k.into_violations());
    };
    k.body("CMP-3", ref_body, arg_body);
    k.frame("CMP-4", subject.sig.coord_frame, arg.sig.coord_frame);
    same_location(&mut k, reg, point, arg_point);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(Relation::Twist { point, body, ref_body: far_body }, subject.sig.coord_frame),
        coords: both(twist(subject), twist(arg), |s, a| Coords::AngularLinear6(s + a)),
    })
}

/// `Twist(e1|C, D).changeVelocityReferencePoint(Position(e2|C, e1|C)) = Twist(e2|C, D)`,
/// with `v' = v + ω × p`.
pub fn change_velocity_reference_point(
    reg: &WorldRegistry,
    subject: &RelationValue,
    arg: &RelationValue,
) -> OpResult<RelationValue> {
    let op = OperationId::ChangeVelocityReferencePoint;
    let Relation::Twist { point, body, ref_body } = subject.sig.relation else {
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
        sig: RelationSignature::new(Relation::Twist { point: new_point, body, ref_body }, subject.sig.coord_frame),
        coords: both(twist(subject), vec3(arg), |t, p| Coords::AngularLinear6(t.transport(p))),
    })
}

/// `AngularVelocity(C, D)` and `LinearVelocity(e|C, D)` make `Twist(e|C, D)`.
pub fn assemble_twist(reg: &WorldRegistry, subject: &RelationValue, arg: &RelationValue) -> OpResult<RelationValue> {
    let op = OperationId::AssembleTwist;
    let Relation::AngularVelocity { body, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    let Relation::LinearVelocity { point, body: arg_body, ref_body: arg_ref_body } = arg.sig.relation else {
        k.kind("CMP-1", RelationKind::LinearVelocity, arg.kind());
        return Err(k.into_violations());
    };
    k.body("CMP-3", body, arg_body);
    k.body("CMP-3", ref_body, arg_ref_body);
    k.frame("CMP-4", subject.sig.coord_frame, arg.sig.coord_frame);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(Relation::Twist { point, body, ref_body }, subject.sig.coord_frame),
        coords: both(vec3(subject), vec3(arg), |w, v| Coords::AngularLinear6(Twist6::new(w, v))),
    })
}

/// Inverse of [`assemble_twist`].
pub fn split_twist(reg: &WorldRegistry, subject: &RelationValue) -> OpResult<(RelationValue, RelationValue)> {
    let Relation::Twist { point, body, ref_body } = subject.sig.relation else {
        return inapplicable(reg, OperationId::SplitTwist, subject);
    };
    let r = subject.sig.coord_frame;
    let t = twist(subject);
    Ok((
        RelationValue {
            sig: RelationSignature::new(Relation::AngularVelocity { body, ref_body }, r),
            coords: t.map(|t| Coords::Cartesian3(t.angular)),
        },
        RelationValue {
            sig: RelationSignature::new(Relation::LinearVelocity { point, body, ref_body }, r),
            coords: t.map(|t| Coords::Cartesian3(t.linear)),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BodyId, PrimitiveKind};

    struct W {
        reg: WorldRegistry,
        c: BodyId,
        d: BodyId,
        e: BodyId,
        e1: PrimitiveId,
        e2: PrimitiveId,
        q: PrimitiveId,
        q_far: PrimitiveId,
        r: PrimitiveId,
    }

    fn w() -> W {
        let mut reg = WorldRegistry::new();
        let c = reg.declare_body("C").unwrap();
        let d = reg.declare_body("D").unwrap();
        let e = reg.declare_body("E").unwrap();
        let e1 = reg.declare_primitive("e1", PrimitiveKind::Point, c, None).unwrap();
        let e2 = reg.declare_primitive("e2", PrimitiveKind::Point, c, None).unwrap();
        let q = reg.declare_primitive("q", PrimitiveKind::Point, d, None).unwrap();
        let q_far = reg.declare_primitive("q2", PrimitiveKind::Point, d, None).unwrap();
        let r = reg.declare_primitive("r", PrimitiveKind::OrientationFrame, d, None).unwrap();
        reg.declare_coincident(e1, q).unwrap();
        W { reg, c, d, e, e1, e2, q, q_far, r }
    }

    fn v3(a: [f64; 3]) -> Option<Coords> {
        Some(Coords::Cartesian3(Vec3::from_array(a)))
    }

    fn tw(w: [f64; 3], v: [f64; 3]) -> Option<Coords> {
        Some(Coords::AngularLinear6(Twist6::new(Vec3::from_array(w), Vec3::from_array(v))))
    }

    fn val(relation: Relation, r: Option<PrimitiveId>, coords: Option<Coords>) -> RelationValue {
        RelationValue::new(RelationSignature::new(relation, r), coords).unwrap()
    }

    fn codes(v: &[crate::ops::ConstraintViolation]) -> Vec<&'static str> {
        v.iter().map(|v| v.constraint_id).collect()
    }

    #[test]
    fn angular_velocities_add_along_the_chain() {
        let w = w();
        let s = val(Relation::AngularVelocity { body: w.c, ref_body: w.d }, Some(w.r), v3([0.0, 0.0, 1.0]));
        let a = val(Relation::AngularVelocity { body: w.d, ref_body: w.e }, Some(w.r), v3([0.0, 0.0, 2.0]));
        let out = compose_angular_velocity(&w.reg, &s, &a).unwrap();
        assert_eq!(out.sig.display(&w.reg).to_string(), "AngularVelocity(C, E) @ r");
        assert_eq!(out.coords, v3([0.0, 0.0, 3.0]));

        let inv = inverse_angular_velocity(&w.reg, &s).unwrap();
        assert_eq!(inv.sig.display(&w.reg).to_string(), "AngularVelocity(D, C) @ r");
        assert_eq!(inv.coords, v3([0.0, 0.0, -1.0]));

        let bad = val(Relation::AngularVelocity { body: w.e, ref_body: w.d }, Some(w.r), None);
        assert_eq!(codes(&compose_angular_velocity(&w.reg, &s, &bad).unwrap_err()), ["CMP-3"]);
    }

    #[test]
    fn transport_moves_the_reference_point() {
        let w = w();
        let s =
            val(Relation::Twist { point: w.e1, body: w.c, ref_body: w.d }, Some(w.r), tw([0.0, 0.0, 1.0], [0.0; 3]));
        let p = val(
            Relation::Position { point: w.e2, body: w.c, ref_point: w.e1, ref_body: w.c },
            Some(w.r),
            v3([1.0, 0.0, 0.0]),
        );
        let out = change_velocity_reference_point(&w.reg, &s, &p).unwrap();
        assert_eq!(out.sig.display(&w.reg).to_string(), "Twist(e2|C, D) @ r");
        assert_eq!(out.coords, tw([0.0, 0.0, 1.0], [0.0, 1.0, 0.0]));

        let zero = val(p.sig.relation, Some(w.r), v3([0.0; 3]));
        assert_eq!(change_velocity_reference_point(&w.reg, &s, &zero).unwrap().coords, s.coords);

        let bad = val(Relation::Position { point: w.e1, body: w.c, ref_point: w.e2, ref_body: w.c }, Some(w.r), None);
        assert_eq!(codes(&change_velocity_reference_point(&w.reg, &s, &bad).unwrap_err()), ["CP-2"]);
    }

    #[test]
    fn twist_compose_needs_coincidence() {
        let w = w();
        let s = val(
            Relation::Twist { point: w.e1, body: w.c, ref_body: w.d },
            Some(w.r),
            tw([1.0, 0.0, 0.0], [0.0, 2.0, 0.0]),
        );
        let a = val(
            Relation::Twist { point: w.q, body: w.d, ref_body: w.e },
            Some(w.r),
            tw([0.0, 1.0, 0.0], [0.0, 0.0, 3.0]),
        );
        let out = compose_twist(&w.reg, &s, &a).unwrap();
        assert_eq!(out.sig.display(&w.reg).to_string(), "Twist(e1|C, E) @ r");
        assert_eq!(out.coords, tw([1.0, 1.0, 0.0], [0.0, 2.0, 3.0]));

        let zero = val(a.sig.relation, Some(w.r), tw([0.0; 3], [0.0; 3]));
        assert_eq!(compose_twist(&w.reg, &s, &zero).unwrap().coords, s.coords);

        let far = val(Relation::Twist { point: w.q_far, body: w.d, ref_body: w.e }, Some(w.r), None);
        let err = compose_twist(&w.reg, &s, &far).unwrap_err();
        assert_eq!(codes(&err), ["TW-1"]);
        assert_eq!(err[0].found, Some(Entity::Primitive(w.q_far)));

        let lv = val(Relation::LinearVelocity { point: w.e1, body: w.c, ref_body: w.d }, None, None);
        let lv_far = val(Relation::LinearVelocity { point: w.q_far, body: w.d, ref_body: w.e }, None, None);
        assert_eq!(codes(&compose_linear_velocity(&w.reg, &lv, &lv_far).unwrap_err()), ["TW-1"]);
    }

    #[test]
    fn assemble_and_split_round_trip() {
        let w = w();
        let om = val(Relation::AngularVelocity { body: w.c, ref_body: w.d }, Some(w.r), v3([0.0, 0.0, 1.0]));
        let v = val(Relation::LinearVelocity { point: w.e1, body: w.c, ref_body: w.d }, Some(w.r), v3([1.0, 0.0, 0.0]));
        let t = assemble_twist(&w.reg, &om, &v).unwrap();
        assert_eq!(t.sig.display(&w.reg).to_string(), "Twist(e1|C, D) @ r");
        assert_eq!(t.coords, tw([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]));
        assert_eq!(split_twist(&w.reg, &t).unwrap(), (om, v));

        let other = val(Relation::LinearVelocity { point: w.e1, body: w.c, ref_body: w.e }, Some(w.r), None);
        assert_eq!(codes(&assemble_twist(&w.reg, &om, &other).unwrap_err()), ["CMP-3"]);
    }
}
