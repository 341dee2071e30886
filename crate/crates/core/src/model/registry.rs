use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BodyId(u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimitiveId(u32);

impl BodyId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl PrimitiveId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PrimitiveKind {
    Point,
    Vector,
    OrientationFrame,
    Frame,
}

impl PrimitiveKind {
    pub const ALL: [PrimitiveKind; 4] =
        [PrimitiveKind::Point, PrimitiveKind::Vector, PrimitiveKind::OrientationFrame, PrimitiveKind::Frame];

    /// Declaration keyword in the surface syntax.
    pub fn keyword(self) -> &'static str {
        match self {
            PrimitiveKind::Point => "point",
            PrimitiveKind::Vector => "vector",
            PrimitiveKind::OrientationFrame => "orientationFrame",
            PrimitiveKind::Frame => "frame",
        }
    }
}

impl fmt::Display for PrimitiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimitiveKind::Point => "point",
            PrimitiveKind::Vector => "vector",
            PrimitiveKind::OrientationFrame => "orientation frame",
            PrimitiveKind::Frame => "frame",
        })
    }
}

/// The point and orientation frame a frame is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrameBundle {
    pub point: PrimitiveId,
    pub orientation: PrimitiveId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Body {
    pub id: BodyId,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primitive {
    pub id: PrimitiveId,
    pub name: String,
    pub kind: PrimitiveKind,
    pub body: BodyId,
    pub bundle: Option<FrameBundle>,
}

/// Two points on different bodies occupying the same location at the instant
/// of interest. Stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coincidence {
    pub a: PrimitiveId,
    pub b: PrimitiveId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Namespace {
    Body,
    Primitive,
}

impl fmt::Display for Namespace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Namespace::Body => "body",
            Namespace::Primitive => "primitive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{namespace} `{name}` is already declared")]
    DuplicateName { name: String, namespace: Namespace },
    #[error("unknown body {0:?}")]
    UnknownBody(BodyId),
    #[error("unknown primitive {0:?}")]
    UnknownPrimitive(PrimitiveId),
    #[error("frame member `{member}` is fixed to body `{found}`, not `{expected}`")]
    BundleBodyMismatch { member: String, expected: String, found: String },
    #[error("frame member `{member}` is a {found}, expected a {expected}")]
    BundleKindMismatch { member: String, expected: PrimitiveKind, found: PrimitiveKind },
    #[error("only frames can be built from a point and an orientation frame, `{0}` is not a frame")]
    BundleOnNonFrame(String),
    #[error("`{name}` is a {found}, expected a point")]
    KindMismatch { name: String, found: PrimitiveKind },
    #[error("`{a}` and `{b}` are fixed to the same body `{body}`")]
    SameBody { a: String, b: String, body: String },
}

/// Bodies, geometric primitives with their fixtures, and coincidences.
///
/// Built by a single writer; immutable and shareable once construction ends.
#[derive(Debug, Clone, Default)]
pub struct WorldRegistry {
    bodies: Vec<Body>,
    body_index: HashMap<String, BodyId>,
    primitives: Vec<Primitive>,
    primitive_index: HashMap<String, PrimitiveId>,
    coincidences: BTreeSet<Coincidence>,
}

impl WorldRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_body(&mut self, name: &str) -> Result<BodyId, ModelError> {
        if self.body_index.contains_key(name) {
            return Err(ModelError::DuplicateName { name: name.to_owned(), namespace: Namespace::Body });
        }
        let id = BodyId(self.bodies.len() as u32);
        self.bodies.push(Body { id, name: name.to_owned() });
        self.body_index.insert(name.to_owned(), id);
        Ok(id)
    }

    pub fn declare_primitive(
        &mut self,
        name: &str,
        kind: PrimitiveKind,
        body: BodyId,
        bundle: Option<FrameBundle>,
    ) -> Result<PrimitiveId, ModelError> {
        if self.primitive_index.contains_key(name) {
            return Err(ModelError::DuplicateName { name: name.to_owned(), namespace: Namespace::Primitive });
        }
        self.try_body(body)?;
        if let Some(bundle) = bundle {
            if kind != PrimitiveKind::Frame {
                return Err(ModelError::BundleOnNonFrame(name.to_owned()));
            }
            for (member, expected) in
                [(bundle.point, PrimitiveKind::Point), (bundle.orientation, PrimitiveKind::OrientationFrame)]
            {
                let p = self.try_primitive(member)?;
                if p.kind != expected {
                    return Err(ModelError::BundleKindMismatch { member: p.name.clone(), expected, found: p.kind });
                }
                if p.body != body {
                    return Err(ModelError::BundleBodyMismatch {
                        member: p.name.clone(),
                        expected: self.body_name(body).to_owned(),
                        found: self.body_name(p.body).to_owned(),
                    });
                }
            }
        }
        let id = PrimitiveId(self.primitives.len() as u32);
        self.primitives.push(Primitive { id, name: name.to_owned(), kind, body, bundle });
        self.primitive_index.insert(name.to_owned(), id);
        Ok(id)
    }

    pub fn declare_coincident(&mut self, a: PrimitiveId, b: PrimitiveId) -> Result<Coincidence, ModelError> {
        let pa = self.try_primitive(a)?;
        let pb = self.try_primitive(b)?;
        for p in [pa, pb] {
            if p.kind != PrimitiveKind::Point {
                return Err(ModelError::KindMismatch { name: p.name.clone(), found: p.kind });
            }
        }
        if pa.body == pb.body {
            return Err(ModelError::SameBody {
                a: pa.name.clone(),
                b: pb.name.clone(),
                body: self.body_name(pa.body).to_owned(),
            });
        }
        let c = Coincidence { a: a.min(b), b: a.max(b) };
        self.coincidences.insert(c);
        Ok(c)
    }

    /// Symmetric; a point is never reported coincident with itself.
    pub fn are_coincident(&self, a: PrimitiveId, b: PrimitiveId) -> bool {
        a != b && self.coincidences.contains(&Coincidence { a: a.min(b), b: a.max(b) })
    }

    pub fn body(&self, id: BodyId) -> Option<&Body> {
        self.bodies.get(id.index())
    }

    pub fn primitive(&self, id: PrimitiveId) -> Option<&Primitive> {
        self.primitives.get(id.index())
    }

    pub fn body_by_name(&self, name: &str) -> Option<BodyId> {
        self.body_index.get(name).copied()
    }

    pub fn primitive_by_name(&self, name: &str) -> Option<PrimitiveId> {
        self.primitive_index.get(name).copied()
    }

    /// Name of a body, or `"?"` for an id from another registry.
    pub fn body_name(&self, id: BodyId) -> &str {
        self.body(id).map_or("?", |b| b.name.as_str())
    }

    pub fn primitive_name(&self, id: PrimitiveId) -> &str {
        self.primitive(id).map_or("?", |p| p.name.as_str())
    }

    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    pub fn coincidences(&self) -> impl Iterator<Item = &Coincidence> {
        self.coincidences.iter()
    }

    /// The orientation frame carried by `id`: itself for an orientation frame,
    /// the bundle member for a bundled frame, `None` otherwise.
    pub fn orientation_of(&self, id: PrimitiveId) -> Option<PrimitiveId> {
        let p = self.primitive(id)?;
        match (p.kind, p.bundle) {
            (PrimitiveKind::OrientationFrame, _) => Some(id),
            (PrimitiveKind::Frame, Some(b)) => Some(b.orientation),
            _ => None,
        }
    }

    fn try_body(&self, id: BodyId) -> Result<&Body, ModelError> {
        self.body(id).ok_or(ModelError::UnknownBody(id))
    }

    fn try_primitive(&self, id: PrimitiveId) -> Result<&Primitive, ModelError> {
        self.primitive(id).ok_or(ModelError::UnknownPrimitive(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_bodies() -> (WorldRegistry, BodyId, BodyId) {
        let mut reg = WorldRegistry::new();
        let c = reg.declare_body("C").unwrap();
        let d = reg.declare_body("D").unwrap();
        (reg, c, d)
    }

    #[test]
    fn bodies_are_unique() {
        let (mut reg, c, d) = two_bodies();
        assert_ne!(c, d);
        assert_eq!(reg.body_by_name("C"), Some(c));
        assert!(matches!(reg.declare_body("C"), Err(ModelError::DuplicateName { namespace: Namespace::Body, .. })));
    }

    #[test]
    fn primitives_and_bundles() {
        let (mut reg, c, d) = two_bodies();
        let e1 = reg.declare_primitive("e1", PrimitiveKind::Point, c, None).unwrap();
        let a = reg.declare_primitive("a", PrimitiveKind::OrientationFrame, c, None).unwrap();
        let f = reg.declare_primitive("f", PrimitiveKind::Point, d, None).unwrap();
        let g = reg
            .declare_primitive("g", PrimitiveKind::Frame, c, Some(FrameBundle { point: e1, orientation: a }))
            .unwrap();
        assert_eq!(reg.orientation_of(g), Some(a));
        assert_eq!(reg.orientation_of(a), Some(a));
        assert_eq!(reg.orientation_of(e1), None);

        let err = reg
            .declare_primitive("g2", PrimitiveKind::Frame, c, Some(FrameBundle { point: f, orientation: a }))
            .unwrap_err();
        assert!(matches!(err, ModelError::BundleBodyMismatch { .. }), "{err:?}");

        let err = reg
            .declare_primitive("g3", PrimitiveKind::Frame, c, Some(FrameBundle { point: a, orientation: a }))
            .unwrap_err();
        assert!(matches!(err, ModelError::BundleKindMismatch { .. }), "{err:?}");

        let err = reg
            .declare_primitive("p", PrimitiveKind::Point, c, Some(FrameBundle { point: e1, orientation: a }))
            .unwrap_err();
        assert!(matches!(err, ModelError::BundleOnNonFrame(_)));

        assert!(matches!(
            reg.declare_primitive("e1", PrimitiveKind::Point, d, None),
            Err(ModelError::DuplicateName { .. })
        ));
        let ghost = BodyId(42);
        assert_eq!(reg.declare_primitive("zz", PrimitiveKind::Point, ghost, None), Err(ModelError::UnknownBody(ghost)));
    }

    #[test]
    fn coincidence_rules() {
        let (mut reg, c, d) = two_bodies();
        let e = reg.declare_primitive("e", PrimitiveKind::Point, c, None).unwrap();
        let e2 = reg.declare_primitive("e2", PrimitiveKind::Point, c, None).unwrap();
        let f = reg.declare_primitive("f", PrimitiveKind::Point, d, None).unwrap();
        let a = reg.declare_primitive("a", PrimitiveKind::OrientationFrame, c, None).unwrap();

        reg.declare_coincident(e, f).unwrap();
        assert!(reg.are_coincident(f, e));
        assert!(reg.are_coincident(e, f));
        assert!(!reg.are_coincident(e, e));
        assert!(!reg.are_coincident(e2, f));

        assert!(matches!(reg.declare_coincident(e, e2), Err(ModelError::SameBody { .. })));
        assert!(matches!(reg.declare_coincident(a, f), Err(ModelError::KindMismatch { .. })));
    }

    #[test]
    fn lookup_round_trip() {
        let (mut reg, c, d) = two_bodies();
        let mut ids = Vec::new();
        for (i, kind) in PrimitiveKind::ALL.iter().enumerate() {
            let body = if i % 2 == 0 { c } else { d };
            let id = reg.declare_primitive(&format!("p{i}"), *kind, body, None).unwrap();
            ids.push((id, *kind, body));
        }
        for (id, kind, body) in ids {
            let p = reg.primitive(id).unwrap();
            assert_eq!((p.id, p.kind, p.body), (id, kind, body));
            assert_eq!(reg.primitive_by_name(&p.name), Some(id));
        }
    }
}
