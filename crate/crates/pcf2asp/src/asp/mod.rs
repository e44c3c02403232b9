//! ASP intermediate representation and text emission.
//!
//! This covers the fragment the translation targets plus what the search
//! layer needs: normal rules, facts, constraints, cardinality choice heads,
//! comparisons between terms, interval assignments (`X = 1..10`) and `not`
//! in constraint bodies. Emission is deterministic and byte-stable; `!=` is
//! written for inequality and the parser also accepts `<>`.

use std::fmt;

mod parse;
mod safety;

pub use parse::{parse_program, ParseError};
pub use safety::{check_safety, SafetyReport};

/// An ASP term: numbers, named constants and function terms, variables,
/// tuples, or a flat arithmetic expression such as `X+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AspTerm {
    Number(i64),
    /// `Const(name, [])` is a plain constant; non-empty args model function
    /// terms like `f(F)`.
    Const(String, Vec<AspTerm>),
    Variable(String),
    /// `Tuple(vec![])` is the empty tuple `()`; a singleton renders `(t)`.
    Tuple(Vec<AspTerm>),
    Arith(ArithOp, Box<AspTerm>, Box<AspTerm>),
}

impl AspTerm {
    pub fn number(n: i64) -> AspTerm {
        AspTerm::Number(n)
    }

    pub fn constant(name: impl Into<String>) -> AspTerm {
        AspTerm::Const(name.into(), Vec::new())
    }

    pub fn func(name: impl Into<String>, args: Vec<AspTerm>) -> AspTerm {
        AspTerm::Const(name.into(), args)
    }

    pub fn var(name: impl Into<String>) -> AspTerm {
        AspTerm::Variable(name.into())
    }

    pub fn tuple(items: Vec<AspTerm>) -> AspTerm {
        AspTerm::Tuple(items)
    }

    pub fn plus(left: AspTerm, right: AspTerm) -> AspTerm {
        AspTerm::Arith(ArithOp::Add, Box::new(left), Box::new(right))
    }

    pub fn minus(left: AspTerm, right: AspTerm) -> AspTerm {
        AspTerm::Arith(ArithOp::Sub, Box::new(left), Box::new(right))
    }

    /// True when the term contains no variables.
    pub fn is_ground(&self) -> bool {
        match self {
            AspTerm::Number(_) => true,
            AspTerm::Variable(_) => false,
            AspTerm::Const(_, args) | AspTerm::Tuple(args) => args.iter().all(|t| t.is_ground()),
            AspTerm::Arith(_, l, r) => l.is_ground() && r.is_ground(),
        }
    }

    /// Collect every variable name in the term, arithmetic included.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            AspTerm::Number(_) => {}
            AspTerm::Variable(v) => out.push(v.clone()),
            AspTerm::Const(_, args) | AspTerm::Tuple(args) => {
                args.iter().for_each(|t| t.collect_vars(out));
            }
            AspTerm::Arith(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Gt,
    Eq,
    Neq,
}

/// A predicate applied to terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AspAtom {
    pub predicate: String,
    pub args: Vec<AspTerm>,
}

impl AspAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<AspTerm>) -> AspAtom {
        AspAtom { predicate: predicate.into(), args }
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        self.args.iter().for_each(|t| t.collect_vars(out));
    }
}

/// A body (or choice-condition) literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AspLiteral {
    Atom(AspAtom),
    /// `not a(..)`; only valid in rule bodies.
    NegAtom(AspAtom),
    Comparison(CmpOp, AspTerm, AspTerm),
    /// Interval assignment `term = lo..hi`; binds `term` when it is a
    /// variable.
    Range { term: AspTerm, lo: AspTerm, hi: AspTerm },
}

impl AspLiteral {
    pub fn atom(predicate: impl Into<String>, args: Vec<AspTerm>) -> AspLiteral {
        AspLiteral::Atom(AspAtom::new(predicate, args))
    }

    pub fn compare(op: CmpOp, left: AspTerm, right: AspTerm) -> AspLiteral {
        AspLiteral::Comparison(op, left, right)
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            AspLiteral::Atom(a) | AspLiteral::NegAtom(a) => a.collect_vars(out),
            AspLiteral::Comparison(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            AspLiteral::Range { term, lo, hi } => {
                term.collect_vars(out);
                lo.collect_vars(out);
                hi.collect_vars(out);
            }
        }
    }
}

/// Cardinality choice head `l {template : condition} u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceHead {
    pub lower: u64,
    pub upper: u64,
    pub template: AspAtom,
    pub condition: Option<AspLiteral>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AspHead {
    Atom(AspAtom),
    Choice(ChoiceHead),
}

/// A rule; a missing head makes it a constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AspRule {
    pub head: Option<AspHead>,
    pub body: Vec<AspLiteral>,
}

impl AspRule {
    pub fn fact(head: AspAtom) -> AspRule {
        AspRule { head: Some(AspHead::Atom(head)), body: Vec::new() }
    }

    pub fn rule(head: AspAtom, body: Vec<AspLiteral>) -> AspRule {
        AspRule { head: Some(AspHead::Atom(head)), body }
    }

    pub fn constraint(body: Vec<AspLiteral>) -> AspRule {
        debug_assert!(!body.is_empty(), "a constraint needs a body");
        AspRule { head: None, body }
    }

    pub fn choice(head: ChoiceHead, body: Vec<AspLiteral>) -> AspRule {
        AspRule { head: Some(AspHead::Choice(head)), body }
    }

    pub fn head_atom(&self) -> Option<&AspAtom> {
        match &self.head {
            Some(AspHead::Atom(a)) => Some(a),
            _ => None,
        }
    }
}

/// An ordered list of rules; order only matters for emission.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AspProgram {
    pub rules: Vec<AspRule>,
}

impl AspProgram {
    pub fn new(rules: Vec<AspRule>) -> AspProgram {
        AspProgram { rules }
    }
}

impl fmt::Display for ArithOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
        })
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Eq => "=",
            CmpOp::Neq => "!=",
        })
    }
}

impl fmt::Display for AspTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AspTerm::Number(n) => write!(f, "{n}"),
            AspTerm::Variable(v) => f.write_str(v),
            AspTerm::Const(name, args) => {
                f.write_str(name)?;
                if !args.is_empty() {
                    write!(f, "({})", join(args, ","))?;
                }
                Ok(())
            }
            AspTerm::Tuple(items) => write!(f, "({})", join(items, ",")),
            AspTerm::Arith(op, l, r) => {
                write!(f, "{l}{op}")?;
                // Right-nested arithmetic needs grouping to keep its meaning.
                if matches!(**r, AspTerm::Arith(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for AspAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "({})", join(&self.args, ","))?;
        }
        Ok(())
    }
}

impl fmt::Display for AspLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AspLiteral::Atom(a) => write!(f, "{a}"),
            AspLiteral::NegAtom(a) => write!(f, "not {a}"),
            AspLiteral::Comparison(op, l, r) => write!(f, "{l}{op}{r}"),
            AspLiteral::Range { term, lo, hi } => write!(f, "{term}={lo}..{hi}"),
        }
    }
}

impl fmt::Display for ChoiceHead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}", self.lower, self.template)?;
        if let Some(cond) = &self.condition {
            let rendered = cond.to_string();
            // A condition starting with a negative number would otherwise
            // print `:-`, which lexes as a rule separator.
            if rendered.starts_with('-') {
                write!(f, ": {rendered}")?;
            } else {
                write!(f, ":{rendered}")?;
            }
        }
        write!(f, "}}{}", self.upper)
    }
}

impl fmt::Display for AspHead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AspHead::Atom(a) => write!(f, "{a}"),
            AspHead::Choice(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for AspRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.head, self.body.is_empty()) {
            (Some(h), true) => write!(f, "{h}."),
            (Some(h), false) => write!(f, "{h}:-{}.", join(&self.body, ",")),
            (None, _) => write!(f, ":-{}.", join(&self.body, ",")),
        }
    }
}

impl fmt::Display for AspProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// Render a program one rule per line, in list order.
pub fn emit(p: &AspProgram) -> String {
    p.to_string()
}
