use crate::diagnostic::Diagnostic;
use crate::model::PrimitiveKind;
use crate::syntax::ast::{CoordsLit, Expr, Ident, Item, LetTarget, Number, Program, RelationLiteral, SlotRef};
use crate::syntax::lexer::{tokenize, Keyword, Token, TokenKind};
use crate::syntax::SourceSpan;

/// Marker for a reported syntax error; the parser resynchronizes at the next
/// statement keyword.
struct Reported;

type PResult<T> = Result<T, Reported>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
}

/// Lexes and parses `text`. The program contains every statement that parsed
/// cleanly; the diagnostics hold lexical and syntax errors.
pub fn parse(text: &str) -> (Program, Vec<Diagnostic>) {
    let (tokens, mut diags) = tokenize(text);
    let (program, parse_diags) = parse_tokens(tokens);
    diags.extend(parse_diags);
    (program, diags)
}

pub fn parse_tokens(tokens: Vec<Token>) -> (Program, Vec<Diagnostic>) {
    let mut p = Parser { tokens, pos: 0, diags: Vec::new() };
    let mut items = Vec::new();
    while !p.at_eof() {
        match p.item() {
            Ok(item) => items.push(item),
            Err(Reported) => p.synchronize(),
        }
    }
    (Program { items }, p.diags)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_kind(&self) -> &TokenKind {
        &self.peek().kind
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek_kind(), TokenKind::Eof)
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if !matches!(tok.kind, TokenKind::Eof) {
            self.pos += 1;
        }
        tok
    }

    /// Span of the most recently consumed token.
    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn error<T>(&mut self, expected: &str) -> PResult<T> {
        let tok = self.peek().clone();
        self.diags.push(Diagnostic::new("PARSE-1", tok.span, format!("expected {expected}, found {}", tok.kind)));
        Err(Reported)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek_kind() == kind {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Token> {
        if *self.peek_kind() == kind {
            Ok(self.advance())
        } else {
            self.error(&kind.to_string())
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        if let TokenKind::Ident(name) = self.peek_kind() {
            let name = name.clone();
            let span = self.advance().span;
            Ok(Ident { name, span })
        } else {
            self.error(what)
        }
    }

    fn synchronize(&mut self) {
        // always make progress past the offending token
        if !self.at_statement_start() {
            self.advance();
        }
        while !self.at_eof() && !self.at_statement_start() {
            self.advance();
        }
    }

    fn at_statement_start(&self) -> bool {
        matches!(self.peek_kind(), TokenKind::Keyword(k) if k.starts_statement())
    }

    fn item(&mut self) -> PResult<Item> {
        let start = self.peek().span;
        let TokenKind::Keyword(kw) = *self.peek_kind() else {
            return self.error("a declaration or 'let'");
        };
        let kind = match kw {
            Keyword::Body => {
                self.advance();
                let mut names = vec![self.ident("a body name")?];
                while self.eat(&TokenKind::Comma) {
                    names.push(self.ident("a body name")?);
                }
                return Ok(Item::BodyDecl { names, span: start.join(self.prev_span()) });
            }
            Keyword::Coincident => {
                self.advance();
                let a = self.ident("a point name")?;
                self.expect(TokenKind::Comma)?;
                let b = self.ident("a point name")?;
                return Ok(Item::CoincidentDecl { a, b, span: start.join(self.prev_span()) });
            }
            Keyword::Let => return self.let_binding(),
            Keyword::Point => PrimitiveKind::Point,
            Keyword::Vector => PrimitiveKind::Vector,
            Keyword::OrientationFrame => PrimitiveKind::OrientationFrame,
            Keyword::Frame => PrimitiveKind::Frame,
            Keyword::On => return self.error("a declaration or 'let'"),
        };
        self.advance();
        let name = self.ident("a primitive name")?;
        self.expect(TokenKind::Keyword(Keyword::On))?;
        let body = self.ident("a body name")?;
        let mut bundle = None;
        if kind == PrimitiveKind::Frame && self.eat(&TokenKind::Eq) {
            self.expect(TokenKind::LParen)?;
            let point = self.ident("a point name")?;
            self.expect(TokenKind::Comma)?;
            let orientation = self.ident("an orientation frame name")?;
            self.expect(TokenKind::RParen)?;
            bundle = Some((point, orientation));
        }
        Ok(Item::PrimitiveDecl { kind, name, body, bundle, span: start.join(self.prev_span()) })
    }

    fn let_binding(&mut self) -> PResult<Item> {
        let start = self.advance().span;
        let target = if self.eat(&TokenKind::LParen) {
            let a = self.ident("a binding name")?;
            self.expect(TokenKind::Comma)?;
            let b = self.ident("a binding name")?;
            self.expect(TokenKind::RParen)?;
            LetTarget::Pair(a, b)
        } else {
            LetTarget::Single(self.ident("a binding name or '('")?)
        };
        self.expect(TokenKind::Eq)?;
        let expr = self.expr()?;
        Ok(Item::LetBinding { target, expr, span: start.join(self.prev_span()) })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut expr = match self.peek_kind() {
            TokenKind::Kind(_) => Expr::RelationLiteral(self.literal()?),
            TokenKind::Ident(_) => Expr::Name(self.ident("an expression")?),
            _ => return self.error("a relation literal or binding name"),
        };
        while self.eat(&TokenKind::Dot) {
            let method = self.ident("an operation name")?;
            self.expect(TokenKind::LParen)?;
            let mut args = Vec::new();
            if !self.eat(&TokenKind::RParen) {
                args.push(self.expr()?);
                while self.eat(&TokenKind::Comma) {
                    args.push(self.expr()?);
                }
                self.expect(TokenKind::RParen)?;
            }
            let span = expr.span().join(self.prev_span());
            expr = Expr::MethodCall { receiver: Box::new(expr), method, args, span };
        }
        Ok(expr)
    }

    fn literal(&mut self) -> PResult<RelationLiteral> {
        let head = self.advance();
        let TokenKind::Kind(kind) = head.kind else { unreachable!("caller checked the kind keyword") };
        self.expect(TokenKind::LParen)?;
        let first = self.slot()?;
        self.expect(TokenKind::Comma)?;
        let second = self.slot()?;
        self.expect(TokenKind::RParen)?;
        let frame = if self.eat(&TokenKind::At) { Some(self.ident("a coordinate frame name")?) } else { None };
        let coords = if self.eat(&TokenKind::Eq) { Some(self.coords()?) } else { None };
        Ok(RelationLiteral { kind, slots: vec![first, second], frame, coords, span: head.span.join(self.prev_span()) })
    }

    fn slot(&mut self) -> PResult<SlotRef> {
        let start = self.peek().span;
        if self.eat(&TokenKind::LParen) {
            let point = self.ident("a point name")?;
            self.expect(TokenKind::Comma)?;
            let orientation = self.ident("an orientation frame name")?;
            self.expect(TokenKind::RParen)?;
            self.expect(TokenKind::Pipe)?;
            let body = self.ident("a body name")?;
            return Ok(SlotRef::PointOrient { point, orientation, body, span: start.join(self.prev_span()) });
        }
        let first = self.ident("a primitive or body name")?;
        if self.eat(&TokenKind::Pipe) {
            let body = self.ident("a body name")?;
            Ok(SlotRef::Fixed { primitive: first, body, span: start.join(self.prev_span()) })
        } else {
            Ok(SlotRef::Bare { body: first, span: start })
        }
    }

    fn number(&mut self) -> PResult<Number> {
        if let TokenKind::Number(value) = *self.peek_kind() {
            let span = self.advance().span;
            Ok(Number { value, span })
        } else {
            self.error("a number")
        }
    }

    fn numbers(&mut self) -> PResult<Vec<Number>> {
        let mut out = vec![self.number()?];
        while self.eat(&TokenKind::Comma) {
            out.push(self.number()?);
        }
        self.expect(TokenKind::RBracket)?;
        Ok(out)
    }

    fn coords(&mut self) -> PResult<CoordsLit> {
        let start = self.expect(TokenKind::LBracket)?.span;
        if !self.eat(&TokenKind::LBracket) {
            let values = self.numbers()?;
            return Ok(CoordsLit::Vector { values, span: start.join(self.prev_span()) });
        }
        let mut rows = vec![self.numbers()?];
        while self.eat(&TokenKind::Comma) {
            self.expect(TokenKind::LBracket)?;
            rows.push(self.numbers()?);
        }
        self.expect(TokenKind::RBracket)?;
        Ok(CoordsLit::Matrix { rows, span: start.join(self.prev_span()) })
    }
}
