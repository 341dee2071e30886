use std::fmt::Write;

use crate::syntax::ast::{CoordsLit, Expr, Item, LetTarget, Number, Program, RelationLiteral, SlotRef};

/// Shortest decimal text that parses back to exactly `v`; exponent notation
/// for very large or very small magnitudes.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Deterministic rendering: one statement per line, single spaces, numbers in
/// shortest round-trip form.
pub fn print_canonical(program: &Program) -> String {
    let mut out = String::new();
    for item in &program.items {
        print_item(&mut out, item);
        out.push('\n');
    }
    out
}

fn print_item(out: &mut String, item: &Item) {
    match item {
        Item::BodyDecl { names, .. } => {
            let names: Vec<_> = names.iter().map(|n| n.name.as_str()).collect();
            let _ = write!(out, "body {}", names.join(", "));
        }
        Item::PrimitiveDecl { kind, name, body, bundle, .. } => {
            let _ = write!(out, "{} {} on {}", kind.keyword(), name.name, body.name);
            if let Some((p, o)) = bundle {
                let _ = write!(out, " = ({}, {})", p.name, o.name);
            }
        }
        Item::CoincidentDecl { a, b, .. } => {
            let _ = write!(out, "coincident {}, {}", a.name, b.name);
        }
        Item::LetBinding { target, expr, .. } => {
            match target {
                LetTarget::Single(a) => {
                    let _ = write!(out, "let {} = ", a.name);
                }
                LetTarget::Pair(a, b) => {
                    let _ = write!(out, "let ({}, {}) = ", a.name, b.name);
                }
            }
            print_expr(out, expr);
        }
    }
}

pub fn print_expr(out: &mut String, expr: &Expr) {
    match expr {
        Expr::RelationLiteral(lit) => print_literal(out, lit),
        Expr::Name(id) => out.push_str(&id.name),
        Expr::MethodCall { receiver, method, args, .. } => {
            print_expr(out, receiver);
            let _ = write!(out, ".{}(", method.name);
            for (i, arg) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_expr(out, arg);
            }
            out.push(')');
        }
    }
}

fn print_literal(out: &mut String, lit: &RelationLiteral) {
    out.push_str(lit.kind.as_str());
    out.push('(');
    for (i, slot) in lit.slots.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        match slot {
            SlotRef::Fixed { primitive, body, .. } => {
                let _ = write!(out, "{}|{}", primitive.name, body.name);
            }
            SlotRef::PointOrient { point, orientation, body, .. } => {
                let _ = write!(out, "({}, {})|{}", point.name, orientation.name, body.name);
            }
            SlotRef::Bare { body, .. } => out.push_str(&body.name),
        }
    }
    out.push(')');
    if let Some(frame) = &lit.frame {
        let _ = write!(out, " @ {}", frame.name);
    }
    if let Some(coords) = &lit.coords {
        out.push_str(" = ");
        match coords {
            CoordsLit::Vector { values, .. } => print_row(out, values),
            CoordsLit::Matrix { rows, .. } => {
                out.push('[');
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    print_row(out, row);
                }
                out.push(']');
            }
        }
    }
}

fn print_row(out: &mut String, values: &[Number]) {
    out.push('[');
    for (i, n) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format_number(n.value));
    }
    out.push(']');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, structure};

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, -0.0, 1.0, 1.5, -0.03, 0.1 + 0.2, 1e-7, 6.02e23, f64::MAX, f64::MIN_POSITIVE, 123456.789] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{v} -> {s}");
        }
        assert_eq!(format_number(2.0), "2");
        assert_eq!(format_number(1e-7), "1e-7");
    }

    #[test]
    fn normalizes_layout() {
        let text =
            "body   C,D\npoint e1   on C // c\nlet p = Position( e1|C ,e1|C )@r=[ 1.50 ,2,3 ]\nlet q=p.inverse( )";
        let (p, diags) = parse(text);
        assert!(diags.is_empty());
        let printed = print_canonical(&p);
        assert_eq!(
            printed,
            "body C, D\npoint e1 on C\nlet p = Position(e1|C, e1|C) @ r = [1.5, 2, 3]\nlet q = p.inverse()\n"
        );
        let (again, _) = parse(&printed);
        assert_eq!(structure(&again), structure(&p));
        assert_eq!(print_canonical(&again), printed);
    }
}
