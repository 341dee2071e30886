use std::fmt::Write;

use serde::Serialize;

use crate::catalog::Severity;
use crate::diagnostic::{Diagnostic, Related};
use crate::syntax::SourceSpan;

/// `file:line:col: severity[code]: message`, one line per diagnostic.
pub fn render_text(file: &str, diags: &[Diagnostic], color: bool) -> String {
    let mut out = String::new();
    for d in diags {
        let severity = if color {
            let c = match d.severity {
                Severity::Error => "31",
                Severity::Warning => "33",
                Severity::Note => "36",
            };
            format!("\x1b[1;{c}m{}\x1b[0m", d.severity)
        } else {
            d.severity.to_string()
        };
        let _ =
            writeln!(out, "{file}:{}:{}: {severity}[{}]: {}", d.span.start_line, d.span.start_col, d.code, d.message);
    }
    out
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    file: &'a str,
    span: SourceSpan,
    severity: Severity,
    code: &'a str,
    message: &'a str,
    related: &'a [Related],
}

/// Pretty-printed JSON array, `[]` when there is nothing to report.
pub fn render_json(file: &str, diags: &[Diagnostic]) -> String {
    let rows: Vec<_> = diags
        .iter()
        .map(|d| JsonDiagnostic {
            file,
            span: d.span,
            severity: d.severity,
            code: d.code,
            message: &d.message,
            related: &d.related,
        })
        .collect();
    if rows.is_empty() {
        return "[]".to_owned();
    }
    serde_json::to_string_pretty(&rows).expect("diagnostics serialize")
}
