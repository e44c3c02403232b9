//! Parser for the emitted ASP subset plus `%` comments, interval
//! assignments (`X = 1..10`) and `<>` as a synonym for `!=`.
//!
//! Parenthesized term lists are always tuples: `(t)` is a one-element tuple,
//! never grouping, matching how the emitter prints scope tuples.

use crate::span::SourceSpan;

use super::{
    AspAtom, AspHead, AspLiteral, AspProgram, AspRule, AspTerm, ChoiceHead, CmpOp,
};

/// A parse failure with the byte span it was detected at.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} (at {span})")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError { span, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Num(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Dot,
    DotDot,
    Implies,
    Plus,
    Minus,
    Lt,
    Gt,
    Eq,
    Neq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Var(s) => format!("variable `{s}`"),
            Tok::Num(n) => format!("number `{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::Implies => "`:-`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
        }
    }
}

struct Lexed {
    tok: Tok,
    span: SourceSpan,
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let single = |tok: Tok| Lexed { tok, span: SourceSpan::new(start, start + 1) };
        match bytes[i] {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'%' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' => {
                toks.push(single(Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push(single(Tok::RParen));
                i += 1;
            }
            b'{' => {
                toks.push(single(Tok::LBrace));
                i += 1;
            }
            b'}' => {
                toks.push(single(Tok::RBrace));
                i += 1;
            }
            b',' => {
                toks.push(single(Tok::Comma));
                i += 1;
            }
            b'+' => {
                toks.push(single(Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push(single(Tok::Minus));
                i += 1;
            }
            b'=' => {
                toks.push(single(Tok::Eq));
                i += 1;
            }
            b'>' => {
                toks.push(single(Tok::Gt));
                i += 1;
            }
            b'<' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'>' {
                    toks.push(Lexed { tok: Tok::Neq, span: SourceSpan::new(start, start + 2) });
                    i += 2;
                } else {
                    toks.push(single(Tok::Lt));
                    i += 1;
                }
            }
            b'!' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'=' {
                    toks.push(Lexed { tok: Tok::Neq, span: SourceSpan::new(start, start + 2) });
                    i += 2;
                } else {
                    return Err(ParseError::new(
                        SourceSpan::new(start, start + 1),
                        "expected `!=`",
                    ));
                }
            }
            b':' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'-' {
                    toks.push(Lexed { tok: Tok::Implies, span: SourceSpan::new(start, start + 2) });
                    i += 2;
                } else {
                    toks.push(single(Tok::Colon));
                    i += 1;
                }
            }
            b'.' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'.' {
                    toks.push(Lexed { tok: Tok::DotDot, span: SourceSpan::new(start, start + 2) });
                    i += 2;
                } else {
                    toks.push(single(Tok::Dot));
                    i += 1;
                }
            }
            b'0'..=b'9' => {
                let mut value: i64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((bytes[i] - b'0') as i64))
                        .ok_or_else(|| {
                            ParseError::new(SourceSpan::new(start, i + 1), "number is too large")
                        })?;
                    i += 1;
                }
                toks.push(Lexed { tok: Tok::Num(value), span: SourceSpan::new(start, i) });
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let upper = bytes[i].is_ascii_uppercase();
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = text[start..i].to_string();
                let span = SourceSpan::new(start, i);
                let tok = if upper { Tok::Var(word) } else { Tok::Ident(word) };
                toks.push(Lexed { tok, span });
            }
            c => {
                return Err(ParseError::new(
                    SourceSpan::new(start, start + 1),
                    format!("unexpected character `{}`", c as char),
                ));
            }
        }
    }
    Ok(toks)
}

/// Nesting cap so hostile inputs cannot overflow the parser stack.
const MAX_DEPTH: u32 = 512;

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    depth: u32,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|l| l.span)
            .unwrap_or_else(|| SourceSpan::point(self.end))
    }

    fn bump(&mut self) -> &Tok {
        let t = &self.toks[self.pos].tok;
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(ParseError::new(
                self.here(),
                format!("expected {}, found {}", tok.describe(), t.describe()),
            )),
            None => Err(ParseError::new(
                self.here(),
                format!("expected {}, found end of input", tok.describe()),
            )),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.here(), "term is nested too deeply"));
        }
        Ok(())
    }

    fn program(&mut self) -> Result<AspProgram, ParseError> {
        let mut rules = Vec::new();
        while self.peek().is_some() {
            rules.push(self.rule()?);
        }
        Ok(AspProgram::new(rules))
    }

    fn rule(&mut self) -> Result<AspRule, ParseError> {
        if self.eat(&Tok::Implies) {
            let body = self.body()?;
            if body.is_empty() {
                return Err(ParseError::new(self.here(), "constraint needs a body"));
            }
            self.expect(Tok::Dot)?;
            return Ok(AspRule { head: None, body });
        }
        let head = match self.peek() {
            Some(Tok::Num(_)) => AspHead::Choice(self.choice_head()?),
            _ => AspHead::Atom(self.atom()?),
        };
        let body = if self.eat(&Tok::Implies) { self.body()? } else { Vec::new() };
        self.expect(Tok::Dot)?;
        Ok(AspRule { head: Some(head), body })
    }

    fn bound(&mut self) -> Result<u64, ParseError> {
        let span = self.here();
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                u64::try_from(n)
                    .map_err(|_| ParseError::new(span, "choice bound must be non-negative"))
            }
            other => Err(ParseError::new(
                span,
                format!(
                    "expected choice bound, found {}",
                    other.map_or("end of input".into(), Tok::describe)
                ),
            )),
        }
    }

    fn choice_head(&mut self) -> Result<ChoiceHead, ParseError> {
        let lower = self.bound()?;
        self.expect(Tok::LBrace)?;
        let template = self.atom()?;
        let condition = if self.eat(&Tok::Colon) {
            let span = self.here();
            let lit = self.literal()?;
            if matches!(lit, AspLiteral::NegAtom(_)) {
                return Err(ParseError::new(span, "negation is not allowed in a choice condition"));
            }
            Some(lit)
        } else {
            None
        };
        self.expect(Tok::RBrace)?;
        let upper = self.bound()?;
        if lower > upper {
            return Err(ParseError::new(self.here(), "choice bounds must satisfy lower <= upper"));
        }
        Ok(ChoiceHead { lower, upper, template, condition })
    }

    fn body(&mut self) -> Result<Vec<AspLiteral>, ParseError> {
        let mut lits = vec![self.literal()?];
        while self.eat(&Tok::Comma) {
            lits.push(self.literal()?);
        }
        Ok(lits)
    }

    fn literal(&mut self) -> Result<AspLiteral, ParseError> {
        if matches!(self.peek(), Some(Tok::Ident(w)) if w == "not") {
            self.pos += 1;
            return Ok(AspLiteral::NegAtom(self.atom()?));
        }
        let span = self.here();
        let term = self.term()?;
        let op = match self.peek() {
            Some(Tok::Lt) => Some(CmpOp::Lt),
            Some(Tok::Gt) => Some(CmpOp::Gt),
            Some(Tok::Eq) => Some(CmpOp::Eq),
            Some(Tok::Neq) => Some(CmpOp::Neq),
            _ => None,
        };
        match op {
            Some(op) => {
                self.pos += 1;
                let rhs = self.term()?;
                if self.eat(&Tok::DotDot) {
                    if op != CmpOp::Eq {
                        return Err(ParseError::new(span, "interval literals use `=`"));
                    }
                    let hi = self.term()?;
                    return Ok(AspLiteral::Range { term, lo: rhs, hi });
                }
                Ok(AspLiteral::Comparison(op, term, rhs))
            }
            None => match term {
                AspTerm::Const(name, args) => Ok(AspLiteral::Atom(AspAtom::new(name, args))),
                _ => Err(ParseError::new(span, "expected an atom or a comparison")),
            },
        }
    }

    fn atom(&mut self) -> Result<AspAtom, ParseError> {
        let span = self.here();
        match self.term()? {
            AspTerm::Const(name, args) => Ok(AspAtom::new(name, args)),
            other => Err(ParseError::new(span, format!("expected an atom, found term `{other}`"))),
        }
    }

    fn term(&mut self) -> Result<AspTerm, ParseError> {
        self.enter()?;
        let mut t = self.simple_term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => super::ArithOp::Add,
                Some(Tok::Minus) => super::ArithOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.simple_term()?;
            t = AspTerm::Arith(op, Box::new(t), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(t)
    }

    fn simple_term(&mut self) -> Result<AspTerm, ParseError> {
        let span = self.here();
        match self.peek() {
            Some(Tok::Num(_)) => {
                let Tok::Num(n) = self.bump() else { unreachable!() };
                Ok(AspTerm::Number(*n))
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Num(n)) => {
                        let value = n
                            .checked_neg()
                            .ok_or_else(|| ParseError::new(span, "number is too small"))?;
                        self.pos += 1;
                        Ok(AspTerm::Number(value))
                    }
                    _ => Err(ParseError::new(span, "expected a number after `-`")),
                }
            }
            Some(Tok::Var(_)) => {
                let Tok::Var(v) = self.bump() else { unreachable!() };
                Ok(AspTerm::Variable(v.clone()))
            }
            Some(Tok::Ident(_)) => {
                let Tok::Ident(name) = self.bump() else { unreachable!() };
                let name = name.clone();
                if self.eat(&Tok::LParen) {
                    let args = self.term_list()?;
                    self.expect(Tok::RParen)?;
                    Ok(AspTerm::Const(name, args))
                } else {
                    Ok(AspTerm::Const(name, Vec::new()))
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                if self.eat(&Tok::RParen) {
                    return Ok(AspTerm::Tuple(Vec::new()));
                }
                let items = self.term_list()?;
                self.expect(Tok::RParen)?;
                Ok(AspTerm::Tuple(items))
            }
            other => Err(ParseError::new(
                span,
                format!(
                    "expected a term, found {}",
                    other.map_or("end of input".into(), Tok::describe)
                ),
            )),
        }
    }

    fn term_list(&mut self) -> Result<Vec<AspTerm>, ParseError> {
        let mut items = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            items.push(self.term()?);
        }
        Ok(items)
    }
}

/// Parse an ASP program from `.lp` text.
pub fn parse_program(text: &str) -> Result<AspProgram, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, depth: 0, end: text.len() };
    p.program()
}
