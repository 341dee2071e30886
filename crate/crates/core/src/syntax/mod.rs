//! Concrete syntax: lexer, parser, syntax tree, canonical printer and name
//! resolution.
//!
//! ```text
//! body C, D
//! point e1 on C
//! point e2 on C
//! point f on D
//! orientationFrame r on D
//! let p1 = Position(e1|C, f|D) @ r = [1, 2, 3]
//! let p12 = Position(e2|C, e1|C) @ r = [0.5, 0, 0]
//! let p2 = p1.changePoint(p12)
//! ```

pub mod ast;
mod lexer;
mod parser;
mod printer;
mod resolve;
mod span;

pub use ast::structure;
pub use lexer::{tokenize, Keyword, KindKeyword, Token, TokenKind};
pub use parser::{parse, parse_tokens};
pub use printer::{format_number, print_canonical};
pub use resolve::{resolve, ResolvedExpr, ResolvedLiteral, ResolvedProgram, Statement};
pub use span::SourceSpan;
