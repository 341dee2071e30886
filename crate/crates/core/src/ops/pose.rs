use crate::kernels::Hom4;
use crate::model::{Coords, PrimitiveId, Relation, RelationKind, RelationSignature, RelationValue, WorldRegistry};
use crate::ops::constraints::{both, Constraints};
use crate::ops::position::inapplicable;
use crate::ops::{Entity, OpResult, OperationId, Role};

fn hom(v: &RelationValue) -> Option<Hom4> {
    v.coords.and_then(|c| c.as_hom4())
}

/// Pose composition, `T(g→k) = T(h→k) · T(g→h)`, for both pose forms.
pub fn compose_pose(reg: &WorldRegistry, subject: &RelationValue, arg: &RelationValue) -> OpResult<RelationValue> {
    let op = OperationId::Compose;
    let mut k = Constraints::new(reg, op);
    let relation = match (subject.sig.relation, arg.sig.relation) {
        (
            Relation::PosePointOrient { point, orient, body, ref_point, ref_orient, ref_body },
            Relation::PosePointOrient {
                point: arg_point,
                orient: arg_orient,
                body: arg_body,
                ref_point: far_point,
                ref_orient: far_orient,
                ref_body: far_body,
            },
        ) => {
            k.prim("CMP-2", ref_point, arg_point);
            k.prim("CMP-2", ref_orient, arg_orient);
            k.body("CMP-3", ref_body, arg_body);
            Relation::PosePointOrient {
                point,
                orient,
                body,
                ref_point: far_point,
                ref_orient: far_orient,
                ref_body: far_body,
            }
        }
        (
            Relation::PoseFrame { frame, body, ref_frame, ref_body },
            Relation::PoseFrame { frame: arg_frame, body: arg_body, ref_frame: far_frame, ref_body: far_body },
        ) => {
            k.prim("CMP-2", ref_frame, arg_frame);
            k.body("CMP-3", ref_body, arg_body);
            Relation::PoseFrame { frame, body, ref_frame: far_frame, ref_body: far_body }
        }
        (Relation::PosePointOrient { .. } | Relation::PoseFrame { .. }, _) => {
            k.kind("CMP-1", subject.kind(), arg.kind());
            return Err(k.into_violations());
        }
        _ => return inapplicable(reg, op, subject),
    };
    k.locked_frames("CMP-4", &subject.sig, &arg.sig);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(relation, arg.sig.coord_frame),
        coords: both(hom(subject), hom(arg), |s, a| Coords::HomogeneousTransform(a.mul(&s))),
    })
}

/// Pose inversion, `(Rᵀ, −Rᵀt)`, expressed in the subject's own orientation
/// frame. For frame poses that frame must come from a bundle.
pub fn inverse_pose(reg: &WorldRegistry, subject: &RelationValue) -> OpResult<RelationValue> {
    let op = OperationId::Inverse;
    let mut k = Constraints::new(reg, op);
    let (relation, own_orient) = match subject.sig.relation {
        Relation::PosePointOrient { point, orient, body, ref_point, ref_orient, ref_body } => (
            Relation::PosePointOrient {
                point: ref_point,
                orient: ref_orient,
                body: ref_body,
                ref_point: point,
                ref_orient: orient,
                ref_body: body,
            },
            Some(orient),
        ),
        Relation::PoseFrame { frame, body, ref_frame, ref_body } => (
            Relation::PoseFrame { frame: ref_frame, body: ref_body, ref_frame: frame, ref_body: body },
            reg.orientation_of(frame),
        ),
        _ => return inapplicable(reg, op, subject),
    };
    k.locked_frame("INV-1", Role::Subject, &subject.sig);
    let coord_frame = match subject.sig.coord_frame {
        None => None,
        Some(_) if own_orient.is_none() => {
            if let Relation::PoseFrame { frame, .. } = subject.sig.relation {
                k.push("INV-1", Role::Subject, None, Some(Entity::Primitive(frame)));
            }
            None
        }
        Some(_) => own_orient,
    };
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(relation, coord_frame),
        coords: hom(subject).map(|t| Coords::HomogeneousTransform(t.inverse())),
    })
}

/// Splits a pose into its position and orientation parts, both expressed in
/// the pose's coordinate frame.
pub fn decompose_pose(reg: &WorldRegistry, subject: &RelationValue) -> OpResult<(RelationValue, RelationValue)> {
    let op = OperationId::DecomposePose;
    let mut k = Constraints::new(reg, op);
    let parts = |point, orient, body, ref_point, ref_orient, ref_body| {
        (
            Relation::Position { point, body, ref_point, ref_body },
            Relation::Orientation { orient, body, ref_orient, ref_body },
        )
    };
    let (position, orientation) = match subject.sig.relation {
        Relation::PosePointOrient { point, orient, body, ref_point, ref_orient, ref_body } => {
            parts(point, orient, body, ref_point, ref_orient, ref_body)
        }
        Relation::PoseFrame { frame, body, ref_frame, ref_body } => {
            let bundle = |k: &mut Constraints, f: PrimitiveId| {
                let b = reg.primitive(f).and_then(|p| p.bundle);
                if b.is_none() {
                    k.push("DEC-1", Role::Subject, None, Some(Entity::Primitive(f)));
                }
                b
            };
            let (g, h) = (bundle(&mut k, frame), bundle(&mut k, ref_frame));
            let (Some(g), Some(h)) = (g, h) else {
                return Err(k.into_violations());
            };
            parts(g.point, g.orientation, body, h.point, h.orientation, ref_body)
        }
        _ => return inapplicable(reg, op, subject),
    };
    k.finish()?;
    let r = subject.sig.coord_frame;
    let t = hom(subject);
    Ok((
        RelationValue {
            sig: RelationSignature::new(position, r),
            coords: t.map(|t| Coords::Cartesian3(t.translation)),
        },
        RelationValue {
            sig: RelationSignature::new(orientation, r),
            coords: t.map(|t| Coords::RotationMatrix(t.rotation)),
        },
    ))
}

/// `Position(e|C, f|D) @ b` bundled with `Orientation(a|C, b|D) @ b` gives
/// `Pose((e, a)|C, (f, b)|D) @ b`.
pub fn bundle_pose(reg: &WorldRegistry, subject: &RelationValue, arg: &RelationValue) -> OpResult<RelationValue> {
    let op = OperationId::BundlePose;
    let Relation::Position { point, body, ref_point, ref_body } = subject.sig.relation else {
        return inapplicable(reg, op, subject);
    };
    let mut k = Constraints::new(reg, op);
    let Relation::Orientation { orient, body: arg_body, ref_orient, ref_body: arg_ref_body } = arg.sig.relation else {
        k.kind("CMP-1", RelationKind::Orientation, arg.kind());
        return Err(k.into_violations());
    };
    k.body("CMP-3", body, arg_body);
    k.body("CMP-3", ref_body, arg_ref_body);
    k.frame("CMP-4", subject.sig.coord_frame, arg.sig.coord_frame);
    k.locked_frame("CMP-4", Role::Argument(0), &arg.sig);
    k.finish()?;
    Ok(RelationValue {
        sig: RelationSignature::new(
            Relation::PosePointOrient { point, orient, body, ref_point, ref_orient, ref_body },
            arg.sig.coord_frame,
        ),
        coords: both(subject.coords.and_then(|c| c.as_vec3()), arg.coords.and_then(|c| c.as_rot3()), |t, r| {
            Coords::HomogeneousTransform(Hom4::new(r, t))
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{Rot3, Vec3};
    use crate::model::{BodyId, FrameBundle, PrimitiveKind};
    use std::f64::consts::FRAC_PI_2;

    struct W {
        reg: WorldRegistry,
        c: BodyId,
        d: BodyId,
        e_body: BodyId,
        e: PrimitiveId,
        a: PrimitiveId,
        f: PrimitiveId,
        b: PrimitiveId,
        k: PrimitiveId,
        cc: PrimitiveId,
        g: PrimitiveId,
        h: PrimitiveId,
        atomic: PrimitiveId,
    }

    fn w() -> W {
        let mut reg = WorldRegistry::new();
        let c = reg.declare_body("C").unwrap();
        let d = reg.declare_body("D").unwrap();
        let e_body = reg.declare_body("E").unwrap();
        let mut decl = |n: &str, kind, b| reg.declare_primitive(n, kind, b, None).unwrap();
        let e = decl("e", PrimitiveKind::Point, c);
        let a = decl("a", PrimitiveKind::OrientationFrame, c);
        let f = decl("f", PrimitiveKind::Point, d);
        let b = decl("b", PrimitiveKind::OrientationFrame, d);
        let k = decl("k", PrimitiveKind::Point, e_body);
        let cc = decl("c", PrimitiveKind::OrientationFrame, e_body);
        let atomic = decl("x", PrimitiveKind::Frame, c);
        let g = reg
            .declare_primitive("g", PrimitiveKind::Frame, c, Some(FrameBundle { point: e, orientation: a }))
            .unwrap();
        let h = reg
            .declare_primitive("h", PrimitiveKind::Frame, d, Some(FrameBundle { point: f, orientation: b }))
            .unwrap();
        W { reg, c, d, e_body, e, a, f, b, k, cc, g, h, atomic }
    }

    type Side = (PrimitiveId, PrimitiveId, BodyId);

    fn ppo(near: Side, far: Side, t: Option<Hom4>) -> RelationValue {
        RelationValue::new(
            RelationSignature::new(
                Relation::PosePointOrient {
                    point: near.0,
                    orient: near.1,
                    body: near.2,
                    ref_point: far.0,
                    ref_orient: far.1,
                    ref_body: far.2,
                },
                t.map(|_| far.1),
            ),
            t.map(Coords::HomogeneousTransform),
        )
        .unwrap()
    }

    fn codes(v: &[crate::ops::ConstraintViolation]) -> Vec<&'static str> {
        v.iter().map(|v| v.constraint_id).collect()
    }

    #[test]
    fn compose_follows_the_homogeneous_product() {
        let w = w();
        let t1 = Hom4::new(Rot3::IDENTITY, Vec3::new(1.0, 0.0, 0.0));
        let t2 = Hom4::new(Rot3::rot_z(FRAC_PI_2), Vec3::ZERO);
        let s = ppo((w.e, w.a, w.c), (w.f, w.b, w.d), Some(t1));
        let a = ppo((w.f, w.b, w.d), (w.k, w.cc, w.e_body), Some(t2));
        let out = compose_pose(&w.reg, &s, &a).unwrap();
        assert_eq!(out.sig.display(&w.reg).to_string(), "Pose((e, a)|C, (k, c)|E) @ c");
        let t = out.coords.unwrap().as_hom4().unwrap();
        // translation of T2·T1 is R2·t1 + t2
        assert!((t.translation - Vec3::new(0.0, 1.0, 0.0)).max_abs() < 1e-15);
        assert!(t.rotation.max_abs_diff(&Rot3::rot_z(FRAC_PI_2)) < 1e-15);
    }

    #[test]
    fn compose_middle_slots_must_match_exactly() {
        let w = w();
        let s = ppo((w.e, w.a, w.c), (w.f, w.b, w.d), None);
        let a = ppo((w.f, w.a, w.d), (w.k, w.cc, w.e_body), None);
        assert_eq!(codes(&compose_pose(&w.reg, &s, &a).unwrap_err()), ["CMP-2"]);
        let pos = RelationValue::signature_only(RelationSignature::new(
            Relation::Position { point: w.f, body: w.d, ref_point: w.k, ref_body: w.e_body },
            None,
        ));
        assert_eq!(codes(&compose_pose(&w.reg, &s, &pos).unwrap_err()), ["CMP-1"]);
    }

    #[test]
    fn frame_pose_compose_and_inverse() {
        let w = w();
        let t = Hom4::new(Rot3::rot_x(0.3), Vec3::new(1.0, 2.0, 3.0));
        let s = RelationValue::new(
            RelationSignature::new(
                Relation::PoseFrame { frame: w.g, body: w.c, ref_frame: w.h, ref_body: w.d },
                Some(w.b),
            ),
            Some(Coords::HomogeneousTransform(t)),
        )
        .unwrap();
        let inv = inverse_pose(&w.reg, &s).unwrap();
        assert_eq!(inv.sig.display(&w.reg).to_string(), "Pose(h|D, g|C) @ a");
        let round = compose_pose(&w.reg, &s, &inv).unwrap();
        assert_eq!(round.sig.display(&w.reg).to_string(), "Pose(g|C, g|C) @ a");
        assert!(round.coords.unwrap().as_hom4().unwrap().max_abs_diff(&Hom4::IDENTITY) < 1e-15);
        let back = inverse_pose(&w.reg, &inv).unwrap();
        assert_eq!(back.sig, s.sig);
        assert!(back.coords.unwrap().max_abs_diff(&s.coords.unwrap()) < 1e-14);
    }

    #[test]
    fn inverse_of_atomic_frame_pose_needs_a_bundle() {
        let w = w();
        let s = RelationValue::new(
            RelationSignature::new(
                Relation::PoseFrame { frame: w.atomic, body: w.c, ref_frame: w.h, ref_body: w.d },
                Some(w.b),
            ),
            Some(Coords::HomogeneousTransform(Hom4::IDENTITY)),
        )
        .unwrap();
        assert_eq!(codes(&inverse_pose(&w.reg, &s).unwrap_err()), ["INV-1"]);
        // coordinate-free it is fine
        let free = RelationValue::signature_only(RelationSignature::new(s.sig.relation, None));
        assert!(inverse_pose(&w.reg, &free).is_ok());
    }

    #[test]
    fn decompose_and_bundle_round_trip() {
        let w = w();
        let p = RelationValue::new(
            RelationSignature::new(
                Relation::Position { point: w.e, body: w.c, ref_point: w.f, ref_body: w.d },
                Some(w.b),
            ),
            Some(Coords::Cartesian3(Vec3::new(0.5, -1.0, 2.0))),
        )
        .unwrap();
        let o = RelationValue::new(
            RelationSignature::new(
                Relation::Orientation { orient: w.a, body: w.c, ref_orient: w.b, ref_body: w.d },
                Some(w.b),
            ),
            Some(Coords::RotationMatrix(Rot3::rot_y(0.7))),
        )
        .unwrap();
        let pose = bundle_pose(&w.reg, &p, &o).unwrap();
        assert_eq!(pose.sig.display(&w.reg).to_string(), "Pose((e, a)|C, (f, b)|D) @ b");
        let (p2, o2) = decompose_pose(&w.reg, &pose).unwrap();
        assert_eq!(p2, p);
        assert_eq!(o2, o);

        // frame poses decompose through their bundles
        let fp = RelationValue::signature_only(RelationSignature::new(
            Relation::PoseFrame { frame: w.g, body: w.c, ref_frame: w.h, ref_body: w.d },
            Some(w.b),
        ));
        let (p3, o3) = decompose_pose(&w.reg, &fp).unwrap();
        assert_eq!(p3.sig, p.sig);
        assert_eq!(o3.sig, o.sig);
        let atomic = RelationValue::signature_only(RelationSignature::new(
            Relation::PoseFrame { frame: w.atomic, body: w.c, ref_frame: w.h, ref_body: w.d },
            None,
        ));
        assert_eq!(codes(&decompose_pose(&w.reg, &atomic).unwrap_err()), ["DEC-1"]);
    }

    #[test]
    fn bundle_requires_matching_bodies_and_frames() {
        let w = w();
        let p = RelationValue::signature_only(RelationSignature::new(
            Relation::Position { point: w.e, body: w.c, ref_point: w.k, ref_body: w.e_body },
            Some(w.b),
        ));
        let o = RelationValue::signature_only(RelationSignature::new(
            Relation::Orientation { orient: w.a, body: w.c, ref_orient: w.b, ref_body: w.d },
            None,
        ));
        assert_eq!(codes(&bundle_pose(&w.reg, &p, &o).unwrap_err()), ["CMP-3", "CMP-4"]);
    }
}
