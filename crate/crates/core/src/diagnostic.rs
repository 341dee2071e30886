//! Diagnostics shared by the frontend and the checker.

use serde::Serialize;

use crate::catalog::{self, Severity};
use crate::syntax::SourceSpan;

/// Secondary location attached to a diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Related {
    pub span: SourceSpan,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub span: SourceSpan,
    pub related: Vec<Related>,
}

impl Diagnostic {
    /// A diagnostic with the catalog severity of `code`.
    pub fn new(code: &'static str, span: SourceSpan, message: impl Into<String>) -> Self {
        let severity = catalog::lookup(code).map_or(Severity::Error, |e| e.severity);
        Self { severity, code, message: message.into(), span, related: Vec::new() }
    }

    pub fn with_severity(mut self, severity: Severity) -> Self {
        self.severity = severity;
        self
    }

    pub fn related(mut self, span: SourceSpan, message: impl Into<String>) -> Self {
        self.related.push(Related { span, message: message.into() });
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Document order, then code.
pub fn sort(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| (a.span, a.code).cmp(&(b.span, b.code)));
}
