use std::fmt;

use serde::Serialize;

/// A source range: 1-based lines and character columns, end column exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceSpan {
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub const fn new(start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Self {
        Self { start_line, start_col, end_line, end_col }
    }

    /// Smallest span covering both.
    pub fn join(self, other: SourceSpan) -> SourceSpan {
        let (start_line, start_col) = (self.start_line, self.start_col).min((other.start_line, other.start_col));
        let (end_line, end_col) = (self.end_line, self.end_col).max((other.end_line, other.end_col));
        SourceSpan { start_line, start_col, end_line, end_col }
    }

    /// Whether the position (1-based line and column) lies inside the span.
    /// Empty spans contain nothing.
    pub fn contains(&self, line: u32, col: u32) -> bool {
        (self.start_line, self.start_col) <= (line, col) && (line, col) < (self.end_line, self.end_col)
    }

    /// Whether `inner` lies entirely within `self`.
    pub fn encloses(&self, inner: &SourceSpan) -> bool {
        (self.start_line, self.start_col) <= (inner.start_line, inner.start_col)
            && (inner.end_line, inner.end_col) <= (self.end_line, self.end_col)
    }

    pub fn start(&self) -> (u32, u32) {
        (self.start_line, self.start_col)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}:{}", self.start_line, self.start_col, self.end_line, self.end_col)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_and_contains() {
        let a = SourceSpan::new(1, 5, 1, 9);
        let b = SourceSpan::new(2, 1, 2, 3);
        let j = a.join(b);
        assert_eq!(j, SourceSpan::new(1, 5, 2, 3));
        assert!(j.encloses(&a) && j.encloses(&b));
        assert!(a.contains(1, 5) && a.contains(1, 8) && !a.contains(1, 9));
        assert!(!SourceSpan::new(1, 1, 1, 1).contains(1, 1));
    }
}
