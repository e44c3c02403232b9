//! Lexer and recursive-descent parser for the PCF surface syntax.
//!
//! Grammar, with application binding tighter than lambda bodies and ifz
//! branches, which extend as far right as possible:
//!
//! ```text
//! expr  := '\' IDENT '.' expr
//!        | 'lambda' IDENT '.' expr
//!        | 'ifz' expr 'then' expr 'else' expr
//!        | atom+                      (left-associative application)
//! atom  := IDENT | NUMBER | 'succ' | 'pred' | 'fix' | '(' expr ')'
//! ```
//!
//! Identifiers start with a lowercase letter so that they can double as ASP
//! symbols downstream. `#` starts a line comment.

use std::rc::Rc;

use crate::span::SourceSpan;

use super::Expr;

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
    Backslash,
    Dot,
    LParen,
    RParen,
    Ident(String),
    Num(u64),
    Ifz,
    Then,
    Else,
    Succ,
    Pred,
    Fix,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Backslash => "`\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(n) => format!("numeral `{n}`"),
            Tok::Ifz => "`ifz`".into(),
            Tok::Then => "`then`".into(),
            Tok::Else => "`else`".into(),
            Tok::Succ => "`succ`".into(),
            Tok::Pred => "`pred`".into(),
            Tok::Fix => "`fix`".into(),
        }
    }

    fn is_keyword(&self) -> bool {
        matches!(self, Tok::Ifz | Tok::Then | Tok::Else | Tok::Succ | Tok::Pred | Tok::Fix)
    }
}

struct Lexed {
    tok: Tok,
    span: SourceSpan,
}

/// Numerals must fit the ASP integer range so that translation stays total.
const MAX_NUMERAL: u64 = i64::MAX as u64;

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        match bytes[i] {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'\\' => {
                toks.push(Lexed { tok: Tok::Backslash, span: SourceSpan::new(start, start + 1) });
                i += 1;
            }
            b'.' => {
                toks.push(Lexed { tok: Tok::Dot, span: SourceSpan::new(start, start + 1) });
                i += 1;
            }
            b'(' => {
                toks.push(Lexed { tok: Tok::LParen, span: SourceSpan::new(start, start + 1) });
                i += 1;
            }
            b')' => {
                toks.push(Lexed { tok: Tok::RParen, span: SourceSpan::new(start, start + 1) });
                i += 1;
            }
            b'0'..=b'9' => {
                let mut value: u64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    let digit = (bytes[i] - b'0') as u64;
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(digit))
                        .filter(|&v| v <= MAX_NUMERAL)
                        .ok_or_else(|| {
                            ParseError::new(
                                SourceSpan::new(start, i + 1),
                                "numeral is too large",
                            )
                        })?;
                    i += 1;
                }
                toks.push(Lexed { tok: Tok::Num(value), span: SourceSpan::new(start, i) });
            }
            b'-' if i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() => {
                let mut end = i + 1;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                return Err(ParseError::new(
                    SourceSpan::new(start, end),
                    "negative numerals are not allowed",
                ));
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let span = SourceSpan::new(start, i);
                let tok = match word {
                    "lambda" => Tok::Backslash,
                    "ifz" => Tok::Ifz,
                    "then" => Tok::Then,
                    "else" => Tok::Else,
                    "succ" => Tok::Succ,
                    "pred" => Tok::Pred,
                    "fix" => Tok::Fix,
                    _ => Tok::Ident(word.to_string()),
                };
                toks.push(Lexed { tok, span });
            }
            b'A'..=b'Z' | b'_' => {
                let mut end = i;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
                {
                    end += 1;
                }
                return Err(ParseError::new(
                    SourceSpan::new(start, end),
                    "identifiers must start with a lowercase letter",
                ));
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

/// Nesting cap so that hostile inputs cannot overflow the parser stack.
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

    fn bump(&mut self) -> &Lexed {
        let l = &self.toks[self.pos];
        self.pos += 1;
        l
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(ParseError::new(
                self.here(),
                format!("expected {what}, found {}", t.describe()),
            )),
            None => Err(ParseError::new(self.here(), format!("expected {what}, found end of input"))),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.here(), "expression is nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let e = match self.peek() {
            Some(Tok::Backslash) => self.lambda(),
            Some(Tok::Ifz) => self.ifz(),
            _ => self.application(),
        };
        self.depth -= 1;
        e
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Lexed { tok: Tok::Ident(name), .. } = self.bump() else { unreachable!() };
                Ok(name.clone())
            }
            Some(t) if t.is_keyword() => Err(ParseError::new(
                self.here(),
                format!("reserved word {} cannot be used as an identifier", t.describe()),
            )),
            Some(t) => Err(ParseError::new(
                self.here(),
                format!("expected identifier, found {}", t.describe()),
            )),
            None => Err(ParseError::new(self.here(), "expected identifier, found end of input")),
        }
    }

    fn lambda(&mut self) -> Result<Expr, ParseError> {
        self.bump(); // `\` or `lambda`
        let param = self.binder()?;
        self.expect(Tok::Dot, "`.`")?;
        let body = self.expr()?;
        Ok(Expr::Lam(param, Rc::new(body)))
    }

    fn ifz(&mut self) -> Result<Expr, ParseError> {
        self.bump(); // `ifz`
        let scrutinee = self.expr()?;
        self.expect(Tok::Then, "`then`")?;
        let then_branch = self.expr()?;
        self.expect(Tok::Else, "`else`")?;
        let else_branch = self.expr()?;
        Ok(Expr::Ifz(Rc::new(scrutinee), Rc::new(then_branch), Rc::new(else_branch)))
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_) | Tok::Num(_) | Tok::Succ | Tok::Pred | Tok::Fix | Tok::LParen)
        )
    }

    fn application(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            e = Expr::App(Rc::new(e), Rc::new(arg));
        }
        // A lambda or ifz can never directly follow an application spine.
        if matches!(self.peek(), Some(Tok::Backslash | Tok::Ifz)) {
            return Err(ParseError::new(
                self.here(),
                "lambda or ifz arguments must be parenthesized",
            ));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Lexed { tok: Tok::Ident(name), .. } = self.bump() else { unreachable!() };
                Ok(Expr::Var(name.clone()))
            }
            Some(Tok::Num(_)) => {
                let Lexed { tok: Tok::Num(n), .. } = self.bump() else { unreachable!() };
                Ok(Expr::Num(*n))
            }
            Some(Tok::Succ) => {
                self.bump();
                Ok(Expr::Succ)
            }
            Some(Tok::Pred) => {
                self.bump();
                Ok(Expr::Pred)
            }
            Some(Tok::Fix) => {
                self.bump();
                Ok(Expr::Fix)
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Backslash | Tok::Ifz) => Err(ParseError::new(
                self.here(),
                "lambda or ifz arguments must be parenthesized",
            )),
            Some(t) => Err(ParseError::new(
                self.here(),
                format!("expected expression, found {}", t.describe()),
            )),
            None => Err(ParseError::new(self.here(), "expected expression, found end of input")),
        }
    }
}

/// Parse a PCF expression from source text.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, depth: 0, end: text.len() };
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(ParseError::new(p.here(), format!("unexpected {} after expression", t.describe())));
    }
    Ok(e)
}
