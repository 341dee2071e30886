//! Syntax tree. Every node carries the span of its source text.

use serde::Serialize;

use crate::model::PrimitiveKind;
use crate::syntax::{KindKeyword, SourceSpan};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ident {
    pub name: String,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Program {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "node")]
pub enum Item {
    BodyDecl {
        names: Vec<Ident>,
        span: SourceSpan,
    },
    PrimitiveDecl {
        #[serde(rename = "primitiveKind")]
        kind: PrimitiveKind,
        name: Ident,
        body: Ident,
        /// `(point, orientation frame)` members of a bundled frame.
        bundle: Option<(Ident, Ident)>,
        span: SourceSpan,
    },
    CoincidentDecl {
        a: Ident,
        b: Ident,
        span: SourceSpan,
    },
    LetBinding {
        target: LetTarget,
        expr: Expr,
        span: SourceSpan,
    },
}

impl Item {
    pub fn span(&self) -> SourceSpan {
        match self {
            Item::BodyDecl { span, .. }
            | Item::PrimitiveDecl { span, .. }
            | Item::CoincidentDecl { span, .. }
            | Item::LetBinding { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "form", content = "names")]
pub enum LetTarget {
    Single(Ident),
    /// `let (x, y) = …` for operations that produce two relations.
    Pair(Ident, Ident),
}

impl LetTarget {
    pub fn names(&self) -> Vec<&Ident> {
        match self {
            LetTarget::Single(a) => vec![a],
            LetTarget::Pair(a, b) => vec![a, b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "node")]
pub enum Expr {
    RelationLiteral(RelationLiteral),
    Name(Ident),
    MethodCall { receiver: Box<Expr>, method: Ident, args: Vec<Expr>, span: SourceSpan },
}

impl Expr {
    pub fn span(&self) -> SourceSpan {
        match self {
            Expr::RelationLiteral(lit) => lit.span,
            Expr::Name(id) => id.span,
            Expr::MethodCall { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationLiteral {
    pub kind: KindKeyword,
    pub slots: Vec<SlotRef>,
    pub frame: Option<Ident>,
    pub coords: Option<CoordsLit>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "form")]
pub enum SlotRef {
    /// `prim|Body`
    Fixed { primitive: Ident, body: Ident, span: SourceSpan },
    /// `(point, orientationFrame)|Body`
    PointOrient { point: Ident, orientation: Ident, body: Ident, span: SourceSpan },
    /// `Body` (velocity reference bodies, angular velocity bodies)
    Bare { body: Ident, span: SourceSpan },
}

impl SlotRef {
    pub fn span(&self) -> SourceSpan {
        match self {
            SlotRef::Fixed { span, .. } | SlotRef::PointOrient { span, .. } | SlotRef::Bare { span, .. } => *span,
        }
    }

    pub fn body(&self) -> &Ident {
        match self {
            SlotRef::Fixed { body, .. } | SlotRef::PointOrient { body, .. } | SlotRef::Bare { body, .. } => body,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Number {
    pub value: f64,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "form")]
pub enum CoordsLit {
    Vector {
        values: Vec<Number>,
        span: SourceSpan,
    },
    /// Row-major.
    Matrix {
        rows: Vec<Vec<Number>>,
        span: SourceSpan,
    },
}

impl CoordsLit {
    pub fn span(&self) -> SourceSpan {
        match self {
            CoordsLit::Vector { span, .. } | CoordsLit::Matrix { span, .. } => *span,
        }
    }
}

/// JSON form of the tree with every `span` removed, for structural
/// comparison of programs that differ only in layout.
pub fn structure(program: &Program) -> serde_json::Value {
    fn strip(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(map) => {
                map.remove("span");
                map.values_mut().for_each(strip);
            }
            serde_json::Value::Array(items) => items.iter_mut().for_each(strip),
            _ => {}
        }
    }
    let mut v = serde_json::to_value(program).expect("syntax trees serialize");
    strip(&mut v);
    v
}
