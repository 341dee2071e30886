use crate::catalog;
use crate::model::{BodyId, PrimitiveId, RelationKind, RelationSignature, WorldRegistry};
use crate::ops::{ConstraintViolation, Entity, OpResult, OperationId, Role};

/// Collects every failed constraint of one operation application.
pub(crate) struct Constraints<'a> {
    reg: &'a WorldRegistry,
    op: OperationId,
    out: Vec<ConstraintViolation>,
}

impl<'a> Constraints<'a> {
    pub fn new(reg: &'a WorldRegistry, op: OperationId) -> Self {
        Self { reg, op, out: Vec::new() }
    }

    pub fn push(&mut self, code: &'static str, role: Role, expected: Option<Entity>, found: Option<Entity>) {
        let base = catalog::lookup_constraint(code, self.op)
            .or_else(|| catalog::lookup(code))
            .map_or("constraint violated", |e| e.description);
        let show = |e: Option<Entity>| e.map_or_else(|| "none".to_owned(), |e| e.render(self.reg));
        let description = match (&expected, &found) {
            (None, None) => format!("{}: {base}", self.op),
            _ => format!("{}: {base} (expected `{}`, found `{}`)", self.op, show(expected), show(found)),
        };
        self.out.push(ConstraintViolation {
            operation: self.op,
            constraint_id: code,
            description,
            expected,
            found,
            role,
            span: None,
        });
    }

    /// Argument kind check; returns false (after recording) on mismatch.
    pub fn kind(&mut self, code: &'static str, expected: RelationKind, found: RelationKind) -> bool {
        if expected == found {
            return true;
        }
        self.push(code, Role::Argument(0), Some(Entity::Kind(expected)), Some(Entity::Kind(found)));
        false
    }

    pub fn prim(&mut self, code: &'static str, expected: PrimitiveId, found: PrimitiveId) {
        if expected != found {
            self.push(code, Role::Argument(0), Some(Entity::Primitive(expected)), Some(Entity::Primitive(found)));
        }
    }

    pub fn body(&mut self, code: &'static str, expected: BodyId, found: BodyId) {
        if expected != found {
            self.push(code, Role::Argument(0), Some(Entity::Body(expected)), Some(Entity::Body(found)));
        }
    }

    pub fn frame(&mut self, code: &'static str, expected: Option<PrimitiveId>, found: Option<PrimitiveId>) {
        self.frame_as(code, Role::Argument(0), expected, found);
    }

    pub fn frame_as(
        &mut self,
        code: &'static str,
        role: Role,
        expected: Option<PrimitiveId>,
        found: Option<PrimitiveId>,
    ) {
        if expected != found {
            self.push(code, role, expected.map(Entity::Primitive), found.map(Entity::Primitive));
        }
    }

    /// Coordinate-frame rule for kinds whose representation pins the frame:
    /// both operands at the same semantics level, each expressed in its own
    /// reference orientation frame.
    pub fn locked_frames(&mut self, code: &'static str, subject: &RelationSignature, arg: &RelationSignature) {
        if subject.coord_frame.is_some() != arg.coord_frame.is_some() {
            self.frame(code, subject.coord_frame, arg.coord_frame);
            return;
        }
        self.locked_frame(code, Role::Subject, subject);
        self.locked_frame(code, Role::Argument(0), arg);
    }

    /// A present coordinate frame must be the one the representation pins.
    pub fn locked_frame(&mut self, code: &'static str, role: Role, sig: &RelationSignature) {
        let Some(found) = sig.coord_frame else { return };
        let required = sig.relation.locked_frame(self.reg).flatten();
        if required != Some(found) {
            self.push(code, role, required.map(Entity::Primitive), Some(Entity::Primitive(found)));
        }
    }

    pub fn into_violations(self) -> Vec<ConstraintViolation> {
        self.out
    }

    pub fn finish(self) -> OpResult<()> {
        if self.out.is_empty() {
            Ok(())
        } else {
            Err(self.out)
        }
    }
}

/// Applies `f` only when both operands carry coordinates.
pub(crate) fn both<A: Copy, B: Copy, R>(a: Option<A>, b: Option<B>, f: impl FnOnce(A, B) -> R) -> Option<R> {
    Some(f(a?, b?))
}
