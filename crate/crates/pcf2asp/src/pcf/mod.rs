//! Abstract and concrete syntax of PCF.
//!
//! PCF is the lambda calculus extended with natural-number literals, the
//! `succ`/`pred` builtins, a fixpoint operator `fix` and the ternary
//! `ifz _ then _ else _` selection construct. The surface syntax accepted
//! here is plain ASCII: `\x. e` (or `lambda x. e`) for abstraction,
//! juxtaposition for application, and `#` for line comments.

use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

mod parse;

pub use parse::{parse_expr, ParseError};

/// A PCF expression. Subtrees are reference counted so that closures in the
/// evaluator can share them without cloning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// A variable occurrence.
    Var(String),
    /// Application `e1 e2`.
    App(Rc<Expr>, Rc<Expr>),
    /// Lambda abstraction `\x. e`.
    Lam(String, Rc<Expr>),
    /// A natural-number literal.
    Num(u64),
    Succ,
    Pred,
    Fix,
    /// `ifz scrutinee then t else e`.
    Ifz(Rc<Expr>, Rc<Expr>, Rc<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn app(fun: Expr, arg: Expr) -> Expr {
        Expr::App(Rc::new(fun), Rc::new(arg))
    }

    pub fn lam(param: impl Into<String>, body: Expr) -> Expr {
        Expr::Lam(param.into(), Rc::new(body))
    }

    pub fn ifz(scrutinee: Expr, then_branch: Expr, else_branch: Expr) -> Expr {
        Expr::Ifz(Rc::new(scrutinee), Rc::new(then_branch), Rc::new(else_branch))
    }

    /// Free variables of the expression; `Lam` binds its parameter in its body.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(e: &Expr, out: &mut BTreeSet<String>, bound: &mut Vec<String>) {
            match e {
                Expr::Var(x) => {
                    if !bound.iter().any(|b| b == x) {
                        out.insert(x.clone());
                    }
                }
                Expr::App(f, a) => {
                    go(f, out, bound);
                    go(a, out, bound);
                }
                Expr::Lam(x, body) => {
                    bound.push(x.clone());
                    go(body, out, bound);
                    bound.pop();
                }
                Expr::Ifz(s, t, e2) => {
                    go(s, out, bound);
                    go(t, out, bound);
                    go(e2, out, bound);
                }
                Expr::Num(_) | Expr::Succ | Expr::Pred | Expr::Fix => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out, &mut Vec::new());
        out
    }
}

/// Free variables of `e`; see [`Expr::free_vars`].
pub fn free_vars(e: &Expr) -> BTreeSet<String> {
    e.free_vars()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pos {
    /// The expression may extend as far right as possible (top level, lambda
    /// bodies, ifz scrutinee and branches).
    Open,
    /// Function position of an application.
    AppFn,
    /// Argument position of an application.
    AppArg,
}

fn write_expr(out: &mut String, e: &Expr, pos: Pos) {
    match e {
        Expr::Var(x) => out.push_str(x),
        Expr::Num(n) => out.push_str(&n.to_string()),
        Expr::Succ => out.push_str("succ"),
        Expr::Pred => out.push_str("pred"),
        Expr::Fix => out.push_str("fix"),
        Expr::Lam(x, body) => {
            let parens = pos != Pos::Open;
            if parens {
                out.push('(');
            }
            out.push('\\');
            out.push_str(x);
            out.push_str(". ");
            write_expr(out, body, Pos::Open);
            if parens {
                out.push(')');
            }
        }
        Expr::Ifz(s, t, e2) => {
            let parens = pos != Pos::Open;
            if parens {
                out.push('(');
            }
            out.push_str("ifz ");
            write_expr(out, s, Pos::Open);
            out.push_str(" then ");
            write_expr(out, t, Pos::Open);
            out.push_str(" else ");
            write_expr(out, e2, Pos::Open);
            if parens {
                out.push(')');
            }
        }
        Expr::App(f, a) => {
            let parens = pos == Pos::AppArg;
            if parens {
                out.push('(');
            }
            write_expr(out, f, Pos::AppFn);
            out.push(' ');
            write_expr(out, a, Pos::AppArg);
            if parens {
                out.push(')');
            }
        }
    }
}

/// Render `e` as surface syntax such that `parse_expr(pretty(e))` returns a
/// structurally equal expression.
pub fn pretty(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, Pos::Open);
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}
