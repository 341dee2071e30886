use std::collections::BTreeMap;

use crate::catalog::Severity;
use crate::diagnostic::{self, Diagnostic};
use crate::kernels::{Hom4, Rot3, Twist6, Vec3};
use crate::model::{
    check_representation, validate_signature, Coords, RelationKind, RelationSignature, RelationValue, Representation,
    RepresentationViolation, Slot, WorldRegistry,
};
use crate::ops::{apply_operation, OpOutput, Role};
use crate::syntax::ast::{CoordsLit, LetTarget, Number, Program};
use crate::syntax::{parse, resolve, ResolvedExpr, ResolvedLiteral, ResolvedProgram, SourceSpan};

/// What is known about an expression, for hover.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotation {
    pub span: SourceSpan,
    /// Result signatures; for a failed operation, the subject's signature.
    pub signatures: Vec<RelationSignature>,
    /// Error codes reported at this expression.
    pub codes: Vec<&'static str>,
}

#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    /// Document order, then code.
    pub diagnostics: Vec<Diagnostic>,
    /// Bindings whose whole upstream chain checked clean.
    pub bindings: BTreeMap<String, RelationValue>,
    pub annotations: Vec<Annotation>,
}

impl CheckReport {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }

    pub fn error_count(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.is_error()).count()
    }

    /// Innermost annotation covering the position.
    pub fn annotation_at(&self, line: u32, col: u32) -> Option<&Annotation> {
        self.annotations
            .iter()
            .filter(|a| a.span.contains(line, col))
            .min_by_key(|a| (a.span.end_line - a.span.start_line, a.span.end_col.wrapping_sub(a.span.start_col)))
    }
}

/// Everything known about one document.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub program: Program,
    pub resolved: ResolvedProgram,
    pub report: CheckReport,
}

impl Analysis {
    pub fn registry(&self) -> &WorldRegistry {
        &self.resolved.registry
    }
}

/// Lex, parse, resolve and check `text`. Lexical or syntax errors stop the
/// pipeline after parsing.
pub fn analyze(text: &str) -> Analysis {
    let (program, syntax_diags) = parse(text);
    if !syntax_diags.is_empty() {
        let mut diagnostics = syntax_diags;
        diagnostic::sort(&mut diagnostics);
        let report = CheckReport { diagnostics, ..CheckReport::default() };
        return Analysis { program, resolved: ResolvedProgram::default(), report };
    }
    let resolved = resolve(&program);
    let report = check_program(&resolved);
    Analysis { program, resolved, report }
}

#[derive(Debug, Clone)]
enum Fail {
    /// An error was reported inside this statement.
    Local,
    /// Depends on a binding that did not check cleanly.
    Upstream { name: String, span: SourceSpan },
}

impl Fail {
    fn merge(self, other: Fail) -> Fail {
        match (self, other) {
            (Fail::Local, _) | (_, Fail::Local) => Fail::Local,
            (up, _) => up,
        }
    }
}

type Eval = Result<OpOutput, Fail>;

struct Checker<'a> {
    reg: &'a WorldRegistry,
    results: Vec<Option<OpOutput>>,
    diags: Vec<Diagnostic>,
    annotations: Vec<Annotation>,
}

/// Checks every binding in order. Total: problems become diagnostics.
pub fn check_program(program: &ResolvedProgram) -> CheckReport {
    let mut c = Checker {
        reg: &program.registry,
        results: Vec::with_capacity(program.statements.len()),
        diags: program.diagnostics.clone(),
        annotations: Vec::new(),
    };
    let mut bindings = BTreeMap::new();
    for stmt in &program.statements {
        let outcome = c.expr(&stmt.expr).and_then(|out| match (&stmt.target, out) {
            (LetTarget::Single(_), OpOutput::Single(v)) => Ok(OpOutput::Single(v)),
            (LetTarget::Pair(..), OpOutput::Pair(a, b)) => Ok(OpOutput::Pair(a, b)),
            (LetTarget::Single(_), OpOutput::Pair(..)) => {
                c.error("OP-3", stmt.expr.span(), "operation yields two relations; bind them with `let (a, b) = …`");
                Err(Fail::Local)
            }
            (LetTarget::Pair(..), OpOutput::Single(_)) => {
                c.error("OP-3", stmt.expr.span(), "expression yields a single relation, not a pair");
                Err(Fail::Local)
            }
        });
        let expr_note = c.annotations.iter().rev().find(|a| a.span == stmt.expr.span()).cloned();
        match &outcome {
            Ok(out) => {
                for (name, v) in stmt.target.names().into_iter().zip(out.values()) {
                    bindings.insert(name.name.clone(), *v);
                    c.annotations.push(Annotation { span: name.span, signatures: vec![v.sig], codes: Vec::new() });
                }
            }
            Err(fail) => {
                if let Fail::Upstream { name, span } = fail {
                    let names: Vec<_> = stmt.target.names().iter().map(|n| format!("`{}`", n.name)).collect();
                    c.diags.push(Diagnostic::new(
                        "SKIP-1",
                        *span,
                        format!("{} not checked because binding `{name}` has errors", names.join(" and ")),
                    ));
                }
                if let Some(note) = expr_note {
                    for name in stmt.target.names() {
                        c.annotations.push(Annotation { span: name.span, ..note.clone() });
                    }
                }
            }
        }
        c.results.push(outcome.ok());
    }
    let mut diagnostics = c.diags;
    diagnostic::sort(&mut diagnostics);
    CheckReport { diagnostics, bindings, annotations: c.annotations }
}

/// Coordinates of a clean binding.
pub fn evaluate_binding(analysis: &Analysis, name: &str) -> Result<RelationValue, Diagnostic> {
    let decl =
        analysis.resolved.statements.iter().flat_map(|s| s.target.names()).find(|n| n.name == name).map(|n| n.span);
    let Some(span) = decl else {
        return Err(Diagnostic::new("NR-1", SourceSpan::new(1, 1, 1, 1), format!("unknown relation binding `{name}`")));
    };
    match analysis.report.bindings.get(name) {
        Some(v) if v.coords.is_some() => Ok(*v),
        Some(_) => Err(Diagnostic::new(
            "EV-1",
            span,
            format!("`{name}` is coordinate-free; every relation it is computed from needs coordinates"),
        )),
        None => Err(Diagnostic::new("EV-2", span, format!("`{name}` did not check cleanly"))),
    }
}

impl Checker<'_> {
    fn error(&mut self, code: &'static str, span: SourceSpan, message: impl Into<String>) {
        self.diags.push(Diagnostic::new(code, span, message));
    }

    fn annotate(&mut self, span: SourceSpan, signatures: Vec<RelationSignature>, codes: Vec<&'static str>) {
        self.annotations.push(Annotation { span, signatures, codes });
    }

    fn expr(&mut self, expr: &ResolvedExpr) -> Eval {
        match expr {
            ResolvedExpr::Literal(lit) => self.literal(lit).map(OpOutput::Single),
            ResolvedExpr::Unresolved { .. } => Err(Fail::Local),
            ResolvedExpr::Ref { name, statement, part, span } => match (self.results[*statement], part) {
                (Some(OpOutput::Single(v)), None) => {
                    self.annotate(*span, vec![v.sig], Vec::new());
                    Ok(OpOutput::Single(v))
                }
                (Some(OpOutput::Pair(a, b)), Some(i)) => {
                    let v = if *i == 0 { a } else { b };
                    self.annotate(*span, vec![v.sig], Vec::new());
                    Ok(OpOutput::Single(v))
                }
                _ => Err(Fail::Upstream { name: name.clone(), span: *span }),
            },
            ResolvedExpr::Call { receiver, op, method, args, span } => {
                let subject = self.expr(receiver);
                let evaluated: Vec<Eval> = args.iter().map(|a| self.expr(a)).collect();
                let mut fail = op.is_none().then_some(Fail::Local);
                let mut single = |this: &mut Self, e: Eval, at: SourceSpan| match e {
                    Ok(OpOutput::Single(v)) => Some(v),
                    Ok(OpOutput::Pair(..)) => {
                        this.error("OP-3", at, "operand yields two relations; bind them with `let (a, b) = …` first");
                        fail = Some(fail.take().map_or(Fail::Local, |f| f.merge(Fail::Local)));
                        None
                    }
                    Err(f) => {
                        fail = Some(match fail.take() {
                            Some(prev) => prev.merge(f),
                            None => f,
                        });
                        None
                    }
                };
                let subject = single(self, subject, receiver.span());
                let arg_values: Vec<_> =
                    evaluated.into_iter().zip(args).map(|(e, a)| single(self, e, a.span())).collect();
                if let Some(f) = fail {
                    return Err(f);
                }
                let (Some(op), Some(subject)) = (*op, subject) else { return Err(Fail::Local) };
                let arg_values: Vec<RelationValue> = arg_values.into_iter().map(|v| v.expect("no failure")).collect();
                match apply_operation(self.reg, op, &subject, &arg_values) {
                    Ok(out) => {
                        self.annotate(*span, out.values().iter().map(|v| v.sig).collect(), Vec::new());
                        Ok(out)
                    }
                    Err(violations) => {
                        let codes = violations.iter().map(|v| v.constraint_id).collect();
                        for v in violations {
                            let at = match v.role {
                                Role::Subject => receiver.span(),
                                Role::Argument(i) => args.get(i).map_or(method.span, ResolvedExpr::span),
                            };
                            self.diags.push(Diagnostic::new(v.constraint_id, at, v.description));
                        }
                        self.annotate(*span, vec![subject.sig], codes);
                        Err(Fail::Local)
                    }
                }
            }
        }
    }

    fn literal(&mut self, lit: &ResolvedLiteral) -> Result<RelationValue, Fail> {
        let sig = RelationSignature::new(lit.relation, lit.coord_frame);
        let mut codes = Vec::new();
        for v in validate_signature(&sig, self.reg) {
            if v.severity() == Severity::Error {
                codes.push(v.code());
            }
            self.diags.push(
                Diagnostic::new(v.code(), lit.slot_span(v.slot), v.message(self.reg)).with_severity(v.severity()),
            );
        }
        let coords = match &lit.coords {
            None => None,
            Some(c) => {
                if lit.coord_frame.is_none() {
                    codes.push("REP-5");
                    self.error("REP-5", c.span(), "coordinates need a coordinate frame: add `@ frame` before `=`");
                }
                match convert(lit.relation.kind(), c) {
                    Ok(coords) => Some(coords),
                    Err((code, span, message)) => {
                        codes.push(code);
                        self.error(code, span, message);
                        None
                    }
                }
            }
        };
        if codes.is_empty() {
            let value = RelationValue::new(sig, coords).expect("frame and representation checked above");
            if let Err(v) = check_representation(&value, self.reg) {
                codes.push(RepresentationViolation::CODE);
                self.error(RepresentationViolation::CODE, lit.slot_span(Slot::CoordFrame), v.message(self.reg));
            } else {
                self.annotate(lit.span, vec![sig], Vec::new());
                return Ok(value);
            }
        }
        self.annotate(lit.span, vec![sig], codes);
        Err(Fail::Local)
    }
}

type ConvertError = (&'static str, SourceSpan, String);

fn values(ns: &[Number]) -> Vec<f64> {
    ns.iter().map(|n| n.value).collect()
}

fn shape_error(kind: RelationKind, c: &CoordsLit) -> ConvertError {
    let expected = match kind.representation() {
        Representation::Cartesian3 => "a 3-vector `[x, y, z]`",
        Representation::RotationMatrix => "a 3×3 rotation matrix `[[…], […], […]]`",
        Representation::HomogeneousTransform => "a 4×4 (or 3×4) homogeneous transform `[[…], …]`",
        Representation::AngularLinear6 => "six numbers `[ωx, ωy, ωz, vx, vy, vz]` or `[[ω], [v]]`",
    };
    let found = match c {
        CoordsLit::Vector { values, .. } => format!("a vector of {} numbers", values.len()),
        CoordsLit::Matrix { rows, .. } => {
            let widths: Vec<_> = rows.iter().map(|r| r.len().to_string()).collect();
            format!("a matrix with {} rows of widths {}", rows.len(), widths.join(", "))
        }
    };
    ("REP-3", c.span(), format!("a {kind} takes {expected}, found {found}"))
}

fn rotation(rows: &[Vec<Number>], span: SourceSpan) -> Result<Rot3, ConvertError> {
    let r = |i: usize| [rows[i][0].value, rows[i][1].value, rows[i][2].value];
    Rot3::from_rows([r(0), r(1), r(2)]).map_err(|e| ("REP-4", span, e.to_string()))
}

/// Converts a coordinate literal into the representation of `kind`.
fn convert(kind: RelationKind, c: &CoordsLit) -> Result<Coords, ConvertError> {
    let bad = || shape_error(kind, c);
    match (kind.representation(), c) {
        (Representation::Cartesian3, CoordsLit::Vector { values: v, .. }) if v.len() == 3 => {
            Ok(Coords::Cartesian3(Vec3::new(v[0].value, v[1].value, v[2].value)))
        }
        (Representation::RotationMatrix, CoordsLit::Matrix { rows, span })
            if rows.len() == 3 && rows.iter().all(|r| r.len() == 3) =>
        {
            rotation(rows, *span).map(Coords::RotationMatrix)
        }
        (Representation::HomogeneousTransform, CoordsLit::Matrix { rows, span })
            if (rows.len() == 3 || rows.len() == 4) && rows.iter().all(|r| r.len() == 4) =>
        {
            if rows.len() == 4 && values(&rows[3]) != [0.0, 0.0, 0.0, 1.0] {
                return Err((
                    "REP-3",
                    *span,
                    "the last row of a homogeneous transform must be `[0, 0, 0, 1]`".to_owned(),
                ));
            }
            let r = rotation(rows, *span)?;
            let t = Vec3::new(rows[0][3].value, rows[1][3].value, rows[2][3].value);
            Ok(Coords::HomogeneousTransform(Hom4::new(r, t)))
        }
        (Representation::AngularLinear6, CoordsLit::Vector { values: v, .. }) if v.len() == 6 => {
            let v = values(v);
            Ok(Coords::AngularLinear6(Twist6::new(Vec3::new(v[0], v[1], v[2]), Vec3::new(v[3], v[4], v[5]))))
        }
        (Representation::AngularLinear6, CoordsLit::Matrix { rows, .. })
            if rows.len() == 2 && rows.iter().all(|r| r.len() == 3) =>
        {
            let (w, v) = (values(&rows[0]), values(&rows[1]));
            Ok(Coords::AngularLinear6(Twist6::new(Vec3::new(w[0], w[1], w[2]), Vec3::new(v[0], v[1], v[2]))))
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORLD: &str =
        "body C, D\npoint e1 on C\npoint e2 on C\npoint e3 on C\npoint f on D\norientationFrame r on D\n";

    fn codes(a: &Analysis) -> Vec<&'static str> {
        a.report.diagnostics.iter().map(|d| d.code).collect()
    }

    #[test]
    fn worked_example_evaluates() {
        let a = analyze(&format!(
            "{WORLD}let p1 = Position(e1|C, f|D) @ r = [1, 2, 3]\nlet p12 = Position(e2|C, e1|C) @ r = [0.5, 0, 0]\nlet p2 = p1.changePoint(p12)\n"
        ));
        assert!(a.report.diagnostics.is_empty(), "{:?}", a.report.diagnostics);
        let p2 = evaluate_binding(&a, "p2").unwrap();
        assert_eq!(p2.sig.display(a.registry()).to_string(), "Position(e2|C, f|D) @ r");
        assert_eq!(p2.coords, Some(Coords::Cartesian3(Vec3::new(1.5, 2.0, 3.0))));
        assert_eq!(a.report.bindings.len(), 3);
    }

    #[test]
    fn faulty_argument_is_reported_once_at_the_argument() {
        let text = format!(
            "{WORLD}let p1 = Position(e1|C, f|D) @ r\nlet p12 = Position(e2|C, e3|C) @ r\nlet p2 = p1.changePoint(p12)\nlet p3 = p2.inverse()\n"
        );
        let a = analyze(&text);
        assert_eq!(codes(&a), ["CP-2", "SKIP-1"]);
        let d = &a.report.diagnostics[0];
        assert_eq!(d.span, SourceSpan::new(9, 25, 9, 28));
        assert!(d.message.contains("`e1`") && d.message.contains("`e3`"), "{}", d.message);
        assert_eq!(a.report.diagnostics[1].severity, Severity::Note);
        assert_eq!(a.report.error_count(), 1);
        assert!(!a.report.bindings.contains_key("p2") && !a.report.bindings.contains_key("p3"));
        assert_eq!(evaluate_binding(&a, "p2").unwrap_err().code, "EV-2");
        assert_eq!(evaluate_binding(&a, "p1").unwrap_err().code, "EV-1");
        assert_eq!(evaluate_binding(&a, "nope").unwrap_err().code, "NR-1");
    }

    #[test]
    fn simultaneous_violations_share_the_call() {
        let text = format!(
            "{WORLD}orientationFrame r2 on D\nlet p1 = Position(e1|C, f|D) @ r\nlet p12 = Position(e2|C, e3|C) @ r2\nlet p2 = p1.changePoint(p12)\n"
        );
        let a = analyze(&text);
        assert_eq!(codes(&a), ["CP-2", "CP-5"]);
        assert_eq!(a.report.diagnostics[0].span, a.report.diagnostics[1].span);
    }

    #[test]
    fn literal_problems() {
        let text = format!(
            "{WORLD}orientationFrame a on C\nlet x = Position(a|C, f|D) @ r\nlet y = Position(e1|C, f|D) = [1, 2, 3]\nlet z = Orientation(a|C, r|D) @ a = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]\nlet w = Orientation(a|C, r|D) @ r = [[1, 0, 0], [0, 2, 0], [0, 0, 1]]\nlet v = Position(e1|C, f|D) @ r = [1, 2]\n"
        );
        let a = analyze(&text);
        assert_eq!(codes(&a), ["SIG-2", "REP-5", "REP-1", "REP-4", "REP-3"]);
    }

    #[test]
    fn pairs_bind_with_pair_targets() {
        let text = format!(
            "{WORLD}orientationFrame a on C\norientationFrame b on D\nlet t = Pose((e1, a)|C, (f, b)|D) @ b = [[1, 0, 0, 1], [0, 1, 0, 2], [0, 0, 1, 3]]\nlet (p, o) = t.decomposePose()\nlet q = t.decomposePose()\nlet (m, n) = p.inverse()\nlet s = t.decomposePose().inverse()\n"
        );
        let a = analyze(&text);
        assert_eq!(codes(&a), ["OP-3", "OP-3", "OP-3"]);
        assert_eq!(evaluate_binding(&a, "p").unwrap().coords, Some(Coords::Cartesian3(Vec3::new(1.0, 2.0, 3.0))));
        assert!(a.report.bindings.contains_key("o"));
    }

    #[test]
    fn syntax_errors_stop_the_pipeline() {
        let a = analyze("body C\nlet x = Position(e1|C)\nlet y = zz");
        assert_eq!(codes(&a), ["PARSE-1"]);
    }

    #[test]
    fn hover_annotations() {
        let text = format!(
            "{WORLD}let p1 = Position(e1|C, f|D) @ r = [1, 2, 3]\nlet p12 = Position(e2|C, e1|C) @ r = [0.5, 0, 0]\nlet p2 = p1.changePoint(p12)\n"
        );
        let a = analyze(&text);
        let on_name = a.report.annotation_at(9, 5).unwrap();
        assert_eq!(
            on_name.signatures[0].describe(a.registry()),
            "Position: point e2 on C, w.r.t. point f on D, expressed in r"
        );
        let on_arg = a.report.annotation_at(9, 26).unwrap();
        assert_eq!(on_arg.signatures[0].display(a.registry()).to_string(), "Position(e2|C, e1|C) @ r");
        assert!(a.report.annotation_at(9, 4).is_none());
    }

    #[test]
    fn deterministic() {
        let text = format!("{WORLD}let p = Position(zz|C, f|Q)\nlet q = p.inverse()\nlet x = Position(e1|C, e2|C).compose(Position(f|D, e1|C))\n");
        let a = analyze(&text);
        let b = analyze(&text);
        assert_eq!(a.report.diagnostics, b.report.diagnostics);
        assert_eq!(codes(&a), ["NR-1", "NR-1", "SKIP-1", "CMP-2", "CMP-3"]);
    }
}
