//! Name resolution: builds the world registry in declaration order and binds
//! every identifier use to exactly one earlier declaration.

use std::collections::HashMap;

use crate::diagnostic::Diagnostic;
use crate::model::{BodyId, FrameBundle, ModelError, PrimitiveId, Relation, Slot, WorldRegistry};
use crate::ops::OperationId;
use crate::syntax::ast::{CoordsLit, Expr, Ident, Item, LetTarget, Program, RelationLiteral, SlotRef};
use crate::syntax::{KindKeyword, SourceSpan};

/// A relation literal with every name bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedLiteral {
    pub relation: Relation,
    pub coord_frame: Option<PrimitiveId>,
    pub coords: Option<CoordsLit>,
    pub span: SourceSpan,
    /// Source of each slot, for pointing diagnostics at the offending name.
    pub slot_spans: Vec<(Slot, SourceSpan)>,
}

impl ResolvedLiteral {
    pub fn slot_span(&self, slot: Slot) -> SourceSpan {
        self.slot_spans.iter().find(|(s, _)| *s == slot).map_or(self.span, |(_, sp)| *sp)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ResolvedExpr {
    Literal(Box<ResolvedLiteral>),
    /// Use of an earlier binding; `part` selects an element of a pair target.
    Ref {
        name: String,
        statement: usize,
        part: Option<usize>,
        span: SourceSpan,
    },
    Call {
        receiver: Box<ResolvedExpr>,
        /// `None` for an unknown operation name (already reported).
        op: Option<OperationId>,
        method: Ident,
        args: Vec<ResolvedExpr>,
        span: SourceSpan,
    },
    /// A name or literal that failed to resolve; the error is already reported.
    Unresolved {
        span: SourceSpan,
    },
}

impl ResolvedExpr {
    pub fn span(&self) -> SourceSpan {
        match self {
            ResolvedExpr::Literal(lit) => lit.span,
            ResolvedExpr::Ref { span, .. } | ResolvedExpr::Call { span, .. } | ResolvedExpr::Unresolved { span } => {
                *span
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub target: LetTarget,
    pub expr: ResolvedExpr,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Default)]
pub struct ResolvedProgram {
    pub registry: WorldRegistry,
    /// The `let` statements in document order.
    pub statements: Vec<Statement>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Space {
    Body,
    Primitive,
    Binding,
}

impl Space {
    fn noun(self) -> &'static str {
        match self {
            Space::Body => "body",
            Space::Primitive => "primitive",
            Space::Binding => "relation binding",
        }
    }
}

struct Resolver {
    reg: WorldRegistry,
    /// Every declaration site in the document (first one per name).
    all_decls: HashMap<(Space, String), SourceSpan>,
    /// Declarations processed so far.
    seen: HashMap<(Space, String), SourceSpan>,
    bindings: HashMap<String, (usize, Option<usize>)>,
    statements: Vec<Statement>,
    diags: Vec<Diagnostic>,
}

pub fn resolve(program: &Program) -> ResolvedProgram {
    let mut r = Resolver {
        reg: WorldRegistry::new(),
        all_decls: HashMap::new(),
        seen: HashMap::new(),
        bindings: HashMap::new(),
        statements: Vec::new(),
        diags: Vec::new(),
    };
    for item in &program.items {
        for (space, id) in declared_names(item) {
            r.all_decls.entry((space, id.name.clone())).or_insert(id.span);
        }
    }
    for item in &program.items {
        r.item(item);
    }
    ResolvedProgram { registry: r.reg, statements: r.statements, diagnostics: r.diags }
}

fn declared_names(item: &Item) -> Vec<(Space, &Ident)> {
    match item {
        Item::BodyDecl { names, .. } => names.iter().map(|n| (Space::Body, n)).collect(),
        Item::PrimitiveDecl { name, .. } => vec![(Space::Primitive, name)],
        Item::CoincidentDecl { .. } => Vec::new(),
        Item::LetBinding { target, .. } => target.names().into_iter().map(|n| (Space::Binding, n)).collect(),
    }
}

impl Resolver {
    fn item(&mut self, item: &Item) {
        match item {
            Item::BodyDecl { names, .. } => {
                for name in names {
                    if self.declare(Space::Body, name) {
                        self.reg.declare_body(&name.name).expect("fresh body name");
                    }
                }
            }
            Item::PrimitiveDecl { kind, name, body, bundle, .. } => {
                let body_id = self.body(body);
                let members = bundle.as_ref().map(|(p, o)| (self.primitive(p), self.primitive(o), p, o));
                if !self.declare(Space::Primitive, name) {
                    return;
                }
                let Some(body_id) = body_id else {
                    self.seen.remove(&(Space::Primitive, name.name.clone()));
                    return;
                };
                let bundle_ids = match members {
                    None => None,
                    Some((Some(point), Some(orientation), _, _)) => Some(FrameBundle { point, orientation }),
                    Some(_) => {
                        self.seen.remove(&(Space::Primitive, name.name.clone()));
                        return;
                    }
                };
                if let Err(e) = self.reg.declare_primitive(&name.name, *kind, body_id, bundle_ids) {
                    self.seen.remove(&(Space::Primitive, name.name.clone()));
                    let (p, o) = bundle.as_ref().expect("only bundles can fail here");
                    let member_span = |m: &str| if p.name == m { p.span } else { o.span };
                    let diag = match &e {
                        ModelError::BundleBodyMismatch { member, .. } => {
                            Diagnostic::new("REG-1", member_span(member), e.to_string())
                        }
                        ModelError::BundleKindMismatch { member, .. } => {
                            Diagnostic::new("NR-3", member_span(member), e.to_string())
                        }
                        _ => Diagnostic::new("NR-3", name.span, e.to_string()),
                    };
                    self.diags.push(diag);
                }
            }
            Item::CoincidentDecl { a, b, .. } => {
                let (Some(ia), Some(ib)) = (self.primitive(a), self.primitive(b)) else { return };
                if let Err(e) = self.reg.declare_coincident(ia, ib) {
                    let diag = match &e {
                        ModelError::SameBody { .. } => Diagnostic::new("REG-2", b.span, e.to_string()),
                        ModelError::KindMismatch { name, .. } => {
                            Diagnostic::new("NR-3", if a.name == *name { a.span } else { b.span }, e.to_string())
                        }
                        _ => Diagnostic::new("NR-3", a.span, e.to_string()),
                    };
                    self.diags.push(diag);
                }
            }
            Item::LetBinding { target, expr, span } => {
                let expr = self.expr(expr);
                let index = self.statements.len();
                match target {
                    LetTarget::Single(name) => {
                        if self.declare(Space::Binding, name) {
                            self.bindings.insert(name.name.clone(), (index, None));
                        }
                    }
                    LetTarget::Pair(a, b) => {
                        for (part, name) in [a, b].into_iter().enumerate() {
                            if self.declare(Space::Binding, name) {
                                self.bindings.insert(name.name.clone(), (index, Some(part)));
                            }
                        }
                    }
                }
                self.statements.push(Statement { target: target.clone(), expr, span: *span });
            }
        }
    }

    /// Records a declaration; reports NR-2 and returns false for a duplicate.
    fn declare(&mut self, space: Space, name: &Ident) -> bool {
        let key = (space, name.name.clone());
        if let Some(first) = self.seen.get(&key) {
            self.diags.push(
                Diagnostic::new("NR-2", name.span, format!("{} `{}` is already declared", space.noun(), name.name))
                    .related(*first, "first declared here"),
            );
            return false;
        }
        self.seen.insert(key, name.span);
        true
    }

    /// Reports why `name` is not available in `space` at this point.
    fn unresolved(&mut self, space: Space, name: &Ident) {
        let key = (space, name.name.clone());
        if let Some(decl) = self.all_decls.get(&key).copied() {
            let diag = if decl.start() > name.span.start() {
                Diagnostic::new(
                    "NR-4",
                    name.span,
                    format!("{} `{}` is used before its declaration", space.noun(), name.name),
                )
                .related(decl, "declared here")
            } else {
                Diagnostic::new("NR-1", name.span, format!("{} `{}` has no valid declaration", space.noun(), name.name))
                    .related(decl, "invalid declaration here")
            };
            self.diags.push(diag);
            return;
        }
        let other = [Space::Body, Space::Primitive, Space::Binding].into_iter().filter(|s| *s != space).find(|s| {
            self.seen.contains_key(&(*s, name.name.clone())) || self.all_decls.contains_key(&(*s, name.name.clone()))
        });
        let diag = match other {
            Some(found) => Diagnostic::new(
                "NR-3",
                name.span,
                format!("`{}` is a {}, expected a {}", name.name, found.noun(), space.noun()),
            ),
            None => Diagnostic::new("NR-1", name.span, format!("unknown {} `{}`", space.noun(), name.name)),
        };
        self.diags.push(diag);
    }

    fn body(&mut self, name: &Ident) -> Option<BodyId> {
        let found = self.reg.body_by_name(&name.name);
        if found.is_none() {
            self.unresolved(Space::Body, name);
        }
        found
    }

    fn primitive(&mut self, name: &Ident) -> Option<PrimitiveId> {
        let found = self.reg.primitive_by_name(&name.name);
        if found.is_none() {
            self.unresolved(Space::Primitive, name);
        }
        found
    }

    fn expr(&mut self, expr: &Expr) -> ResolvedExpr {
        match expr {
            Expr::RelationLiteral(lit) => match self.literal(lit) {
                Some(l) => ResolvedExpr::Literal(Box::new(l)),
                None => ResolvedExpr::Unresolved { span: lit.span },
            },
            Expr::Name(id) => match self.bindings.get(&id.name) {
                Some(&(statement, part)) => ResolvedExpr::Ref { name: id.name.clone(), statement, part, span: id.span },
                None => {
                    self.unresolved(Space::Binding, id);
                    ResolvedExpr::Unresolved { span: id.span }
                }
            },
            Expr::MethodCall { receiver, method, args, span } => {
                let receiver = Box::new(self.expr(receiver));
                let op = OperationId::from_name(&method.name);
                if op.is_none() {
                    self.diags.push(Diagnostic::new(
                        "NR-1",
                        method.span,
                        format!("unknown operation `{}`", method.name),
                    ));
                }
                let args = args.iter().map(|a| self.expr(a)).collect();
                ResolvedExpr::Call { receiver, op, method: method.clone(), args, span: *span }
            }
        }
    }

    fn literal(&mut self, lit: &RelationLiteral) -> Option<ResolvedLiteral> {
        let mut ok = true;
        let mut slot_spans = Vec::new();
        let shape = |slot: &SlotRef| match slot {
            SlotRef::Fixed { .. } => "fixed",
            SlotRef::PointOrient { .. } => "pair",
            SlotRef::Bare { .. } => "bare",
        };
        let shapes = [shape(&lit.slots[0]), shape(&lit.slots[1])];
        let expected: [&str; 2] = match (lit.kind, shapes) {
            (KindKeyword::Position | KindKeyword::Orientation, _) => ["fixed", "fixed"],
            (KindKeyword::Pose, ["pair", _]) => ["pair", "pair"],
            (KindKeyword::Pose, _) => ["fixed", "fixed"],
            (KindKeyword::LinearVelocity | KindKeyword::Twist, _) => ["fixed", "bare"],
            (KindKeyword::AngularVelocity, _) => ["bare", "bare"],
        };
        for (i, slot) in lit.slots.iter().enumerate() {
            if shapes[i] != expected[i] {
                ok = false;
                let form = match (lit.kind, expected[i]) {
                    (_, "pair") => "(point, orientationFrame)|Body",
                    (KindKeyword::Position, _) => "point|Body",
                    (KindKeyword::Orientation, _) => "orientationFrame|Body",
                    (KindKeyword::Pose, _) => "frame|Body",
                    (_, "fixed") => "point|Body",
                    _ => "Body",
                };
                self.diags.push(Diagnostic::new(
                    "NR-3",
                    slot.span(),
                    format!("slot {} of a {} literal must be written `{form}`", i + 1, lit.kind.as_str()),
                ));
            }
        }

        let coord_frame = match &lit.frame {
            Some(f) => {
                slot_spans.push((Slot::CoordFrame, f.span));
                let id = self.primitive(f);
                ok &= id.is_some();
                id
            }
            None => None,
        };
        if !ok {
            // still resolve the names so that unknown ones are reported
            for slot in &lit.slots {
                self.resolve_slot_names(slot);
            }
            return None;
        }

        let relation = match (lit.kind, &lit.slots[0], &lit.slots[1]) {
            (KindKeyword::Position, a, b) => {
                let a = self.fixed(a, &mut slot_spans, Slot::Point, Slot::Body);
                let b = self.fixed(b, &mut slot_spans, Slot::RefPoint, Slot::RefBody);
                let ((point, body), (ref_point, ref_body)) = (a?, b?);
                Relation::Position { point, body, ref_point, ref_body }
            }
            (KindKeyword::Orientation, a, b) => {
                let a = self.fixed(a, &mut slot_spans, Slot::Orientation, Slot::Body);
                let b = self.fixed(b, &mut slot_spans, Slot::RefOrientation, Slot::RefBody);
                let ((orient, body), (ref_orient, ref_body)) = (a?, b?);
                Relation::Orientation { orient, body, ref_orient, ref_body }
            }
            (KindKeyword::Pose, SlotRef::PointOrient { .. }, _) => {
                let a = self.pair(&lit.slots[0], &mut slot_spans, [Slot::Point, Slot::Orientation, Slot::Body]);
                let b =
                    self.pair(&lit.slots[1], &mut slot_spans, [Slot::RefPoint, Slot::RefOrientation, Slot::RefBody]);
                let ((point, orient, body), (ref_point, ref_orient, ref_body)) = (a?, b?);
                Relation::PosePointOrient { point, orient, body, ref_point, ref_orient, ref_body }
            }
            (KindKeyword::Pose, a, b) => {
                let a = self.fixed(a, &mut slot_spans, Slot::Frame, Slot::Body);
                let b = self.fixed(b, &mut slot_spans, Slot::RefFrame, Slot::RefBody);
                let ((frame, body), (ref_frame, ref_body)) = (a?, b?);
                Relation::PoseFrame { frame, body, ref_frame, ref_body }
            }
            (KindKeyword::LinearVelocity | KindKeyword::Twist, a, SlotRef::Bare { body: rb, .. }) => {
                let a = self.fixed(a, &mut slot_spans, Slot::Point, Slot::Body);
                let ref_body = self.body(rb);
                slot_spans.push((Slot::RefBody, rb.span));
                let ((point, body), ref_body) = (a?, ref_body?);
                if lit.kind == KindKeyword::Twist {
                    Relation::Twist { point, body, ref_body }
                } else {
                    Relation::LinearVelocity { point, body, ref_body }
                }
            }
            (KindKeyword::AngularVelocity, SlotRef::Bare { body: b, .. }, SlotRef::Bare { body: rb, .. }) => {
                let body = self.body(b);
                let ref_body = self.body(rb);
                slot_spans.extend([(Slot::Body, b.span), (Slot::RefBody, rb.span)]);
                Relation::AngularVelocity { body: body?, ref_body: ref_body? }
            }
            _ => unreachable!("slot shapes checked above"),
        };
        Some(ResolvedLiteral { relation, coord_frame, coords: lit.coords.clone(), span: lit.span, slot_spans })
    }

    fn fixed(
        &mut self,
        slot: &SlotRef,
        spans: &mut Vec<(Slot, SourceSpan)>,
        prim_slot: Slot,
        body_slot: Slot,
    ) -> Option<(PrimitiveId, BodyId)> {
        let SlotRef::Fixed { primitive, body, .. } = slot else { return None };
        let p = self.primitive(primitive);
        let b = self.body(body);
        spans.extend([(prim_slot, primitive.span), (body_slot, body.span)]);
        p.zip(b)
    }

    fn pair(
        &mut self,
        slot: &SlotRef,
        spans: &mut Vec<(Slot, SourceSpan)>,
        slots: [Slot; 3],
    ) -> Option<(PrimitiveId, PrimitiveId, BodyId)> {
        let SlotRef::PointOrient { point, orientation, body, .. } = slot else { return None };
        let p = self.primitive(point);
        let o = self.primitive(orientation);
        let b = self.body(body);
        spans.extend([(slots[0], point.span), (slots[1], orientation.span), (slots[2], body.span)]);
        Some((p?, o?, b?))
    }

    fn resolve_slot_names(&mut self, slot: &SlotRef) {
        match slot {
            SlotRef::Fixed { primitive, body, .. } => {
                self.primitive(primitive);
                self.body(body);
            }
            SlotRef::PointOrient { point, orientation, body, .. } => {
                self.primitive(point);
                self.primitive(orientation);
                self.body(body);
            }
            SlotRef::Bare { body, .. } => {
                self.body(body);
            }
        }
    }
}
