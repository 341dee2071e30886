use std::fmt;

use crate::diagnostic::Diagnostic;
use crate::syntax::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Body,
    Point,
    Vector,
    OrientationFrame,
    Frame,
    Coincident,
    Let,
    On,
}

impl Keyword {
    const ALL: [Keyword; 8] = [
        Keyword::Body,
        Keyword::Point,
        Keyword::Vector,
        Keyword::OrientationFrame,
        Keyword::Frame,
        Keyword::Coincident,
        Keyword::Let,
        Keyword::On,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Body => "body",
            Keyword::Point => "point",
            Keyword::Vector => "vector",
            Keyword::OrientationFrame => "orientationFrame",
            Keyword::Frame => "frame",
            Keyword::Coincident => "coincident",
            Keyword::Let => "let",
            Keyword::On => "on",
        }
    }

    /// Keywords that begin a statement; the parser resynchronizes on them.
    pub fn starts_statement(self) -> bool {
        self != Keyword::On
    }
}

/// Relation kind keywords of the surface syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum KindKeyword {
    Position,
    Orientation,
    Pose,
    LinearVelocity,
    AngularVelocity,
    Twist,
}

impl KindKeyword {
    pub const ALL: [KindKeyword; 6] = [
        KindKeyword::Position,
        KindKeyword::Orientation,
        KindKeyword::Pose,
        KindKeyword::LinearVelocity,
        KindKeyword::AngularVelocity,
        KindKeyword::Twist,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            KindKeyword::Position => "Position",
            KindKeyword::Orientation => "Orientation",
            KindKeyword::Pose => "Pose",
            KindKeyword::LinearVelocity => "LinearVelocity",
            KindKeyword::AngularVelocity => "AngularVelocity",
            KindKeyword::Twist => "Twist",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Keyword(Keyword),
    Kind(KindKeyword),
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Pipe,
    At,
    Eq,
    Dot,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(k) => write!(f, "'{}'", k.as_str()),
            TokenKind::Kind(k) => write!(f, "'{}'", k.as_str()),
            TokenKind::Ident(s) => write!(f, "identifier '{s}'"),
            TokenKind::Number(n) => write!(f, "number {n}"),
            TokenKind::LParen => f.write_str("'('"),
            TokenKind::RParen => f.write_str("')'"),
            TokenKind::LBracket => f.write_str("'['"),
            TokenKind::RBracket => f.write_str("']'"),
            TokenKind::Comma => f.write_str("','"),
            TokenKind::Pipe => f.write_str("'|'"),
            TokenKind::At => f.write_str("'@'"),
            TokenKind::Eq => f.write_str("'='"),
            TokenKind::Dot => f.write_str("'.'"),
            TokenKind::Eof => f.write_str("end of file"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> (u32, u32) {
        (self.line, self.col)
    }

    fn eat_while(&mut self, out: &mut String, pred: impl Fn(char) -> bool) {
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            out.push(c);
            self.bump();
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `text` into tokens (always ending with `Eof`). Illegal characters
/// and malformed numbers are reported and skipped.
pub fn tokenize(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor { chars: text.chars().peekable(), line: 1, col: 1 };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    loop {
        let (line, col) = cur.pos();
        let Some(c) = cur.bump() else {
            tokens.push(Token { kind: TokenKind::Eof, span: SourceSpan::new(line, col, line, col) });
            break;
        };
        let single = |kind| Some(kind);
        let kind = match c {
            c if c.is_whitespace() => None,
            '/' if cur.peek() == Some('/') => {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
                None
            }
            '(' => single(TokenKind::LParen),
            ')' => single(TokenKind::RParen),
            '[' => single(TokenKind::LBracket),
            ']' => single(TokenKind::RBracket),
            ',' => single(TokenKind::Comma),
            '|' => single(TokenKind::Pipe),
            '@' => single(TokenKind::At),
            '=' => single(TokenKind::Eq),
            '.' => single(TokenKind::Dot),
            c if c.is_ascii_digit() || (c == '-' && cur.peek().is_some_and(|d| d.is_ascii_digit())) => {
                let mut raw = String::from(c);
                let ok = lex_number(&mut cur, &mut raw);
                let (el, ec) = cur.pos();
                let span = SourceSpan::new(line, col, el, ec);
                match raw.parse::<f64>() {
                    Ok(v) if ok && v.is_finite() => Some(TokenKind::Number(v)),
                    _ => {
                        diags.push(Diagnostic::new("LEX-2", span, format!("malformed number literal '{raw}'")));
                        // keep the token stream well-formed for the parser
                        Some(TokenKind::Number(0.0))
                    }
                }
            }
            c if is_ident_start(c) => {
                let mut word = String::from(c);
                cur.eat_while(&mut word, is_ident_continue);
                let kind = if let Some(k) = Keyword::ALL.into_iter().find(|k| k.as_str() == word) {
                    TokenKind::Keyword(k)
                } else if let Some(k) = KindKeyword::ALL.into_iter().find(|k| k.as_str() == word) {
                    TokenKind::Kind(k)
                } else {
                    TokenKind::Ident(word)
                };
                Some(kind)
            }
            other => {
                let (el, ec) = cur.pos();
                diags.push(Diagnostic::new(
                    "LEX-1",
                    SourceSpan::new(line, col, el, ec),
                    format!("illegal character '{}'", other.escape_debug()),
                ));
                None
            }
        };
        if let Some(kind) = kind {
            let (el, ec) = cur.pos();
            tokens.push(Token { kind, span: SourceSpan::new(line, col, el, ec) });
        }
    }
    (tokens, diags)
}

/// `-? digits ('.' digits)? ([eE] [+-]? digits)?`, first character already
/// consumed. Returns false if a fraction or exponent has no digits; the
/// offending characters are consumed so that the error covers them.
fn lex_number(cur: &mut Cursor<'_>, raw: &mut String) -> bool {
    let digit = |c: char| c.is_ascii_digit();
    cur.eat_while(raw, digit);
    let mut ok = true;
    if cur.peek() == Some('.') {
        raw.push('.');
        cur.bump();
        let before = raw.len();
        cur.eat_while(raw, digit);
        ok &= raw.len() > before;
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        raw.push('e');
        cur.bump();
        if let Some(sign @ ('+' | '-')) = cur.peek() {
            raw.push(sign);
            cur.bump();
        }
        let before = raw.len();
        cur.eat_while(raw, digit);
        ok &= raw.len() > before;
    }
    // trailing identifier characters make the literal malformed (`1abc`)
    if cur.peek().is_some_and(is_ident_continue) {
        cur.eat_while(raw, is_ident_continue);
        ok = false;
    }
    ok
}
