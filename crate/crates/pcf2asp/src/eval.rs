//! Reference call-by-value interpreter for PCF.
//!
//! Evaluation relates closures to values through the usual big-step rules:
//! variables re-evaluate the closure stored in the environment, applications
//! evaluate the function and then the argument, lambdas and the builtin
//! constants evaluate to themselves as closures, numerals to themselves,
//! `succ`/`pred` shift numbers, `ifz` selects on zero, and `fix (\x. e)`
//! evaluates `e` with `x` bound to the unevaluated `fix` closure, which is
//! what makes recursion unfold on demand.
//!
//! The interpreter runs as a small machine with an explicit continuation
//! stack, so runaway recursion such as `fix (\x. x)` exhausts its step
//! budget instead of the process stack.

use std::fmt;
use std::rc::Rc;

use crate::pcf::Expr;

/// Environment mapping identifiers to closures. Extension shares the parent,
/// so older environments are never invalidated.
#[derive(Debug, Clone, Default)]
pub struct Env(Option<Rc<EnvNode>>);

#[derive(Debug)]
struct EnvNode {
    name: String,
    value: Closure,
    parent: Env,
}

impl Env {
    pub fn empty() -> Env {
        Env(None)
    }

    pub fn extend(&self, name: impl Into<String>, value: Closure) -> Env {
        Env(Some(Rc::new(EnvNode { name: name.into(), value, parent: self.clone() })))
    }

    /// The closure bound to `name`, innermost binding first.
    pub fn lookup(&self, name: &str) -> Option<&Closure> {
        let mut cur = self;
        while let Some(node) = &cur.0 {
            if node.name == name {
                return Some(&node.value);
            }
            cur = &node.parent;
        }
        None
    }

    pub fn interprets(&self, name: &str) -> bool {
        self.lookup(name).is_some()
    }

    fn bindings(&self) -> Vec<(&str, &Closure)> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Some(node) = &cur.0 {
            out.push((node.name.as_str(), &node.value));
            cur = &node.parent;
        }
        out
    }
}

impl PartialEq for Env {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.bindings(), other.bindings());
        a.len() == b.len()
            && a.iter().zip(&b).all(|((n1, c1), (n2, c2))| n1 == n2 && c1 == c2)
    }
}

impl Eq for Env {}

/// An expression paired with an environment interpreting its free variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub env: Env,
    pub expr: Rc<Expr>,
}

impl Closure {
    pub fn new(env: Env, expr: Rc<Expr>) -> Closure {
        Closure { env, expr }
    }

    /// Close an expression over the empty environment.
    pub fn closed(expr: Expr) -> Closure {
        Closure { env: Env::empty(), expr: Rc::new(expr) }
    }
}

/// Result of evaluation: a natural number or a closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Nat(u64),
    Closure(Closure),
}

impl Value {
    /// A number used where a closure is expected is wrapped with the empty
    /// environment.
    pub fn into_closure(self) -> Closure {
        match self {
            Value::Closure(c) => c,
            Value::Nat(n) => Closure::closed(Expr::Num(n)),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{n}"),
            Value::Closure(_) => f.write_str("<closure>"),
        }
    }
}

/// Cap on evaluation-rule applications; PCF admits divergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepBudget {
    pub remaining: u64,
}

impl StepBudget {
    pub const DEFAULT_STEPS: u64 = 1_000_000;

    pub fn new(remaining: u64) -> StepBudget {
        StepBudget { remaining }
    }
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget { remaining: Self::DEFAULT_STEPS }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("pred of zero")]
    PredOfZero,
    #[error("cannot apply a number as a function")]
    NotAFunction,
    #[error("expected a number, found a closure")]
    NotANumber,
    #[error("fix requires a lambda argument")]
    FixNotLambda,
    #[error("evaluation budget exhausted")]
    BudgetExhausted,
    #[error("numeral overflow in succ")]
    Overflow,
}

enum Cont {
    /// Function value computed; evaluate the argument next.
    EvalArg { env: Env, arg: Rc<Expr> },
    /// Argument value computed; apply the function to it.
    Apply { func: Value },
    /// Scrutinee value computed; select a branch.
    Branch { env: Env, then_br: Rc<Expr>, else_br: Rc<Expr> },
}

enum Step {
    Reduce(Env, Rc<Expr>),
    Produce(Value),
}

fn apply(func: Value, arg: Value) -> Result<Step, EvalError> {
    let Closure { env, expr } = match func {
        Value::Nat(_) => return Err(EvalError::NotAFunction),
        Value::Closure(c) => c,
    };
    match &*expr {
        Expr::Lam(x, body) => {
            let env = env.extend(x.clone(), arg.into_closure());
            Ok(Step::Reduce(env, Rc::clone(body)))
        }
        Expr::Succ => match arg {
            Value::Nat(n) => {
                let n = n.checked_add(1).ok_or(EvalError::Overflow)?;
                Ok(Step::Produce(Value::Nat(n)))
            }
            Value::Closure(_) => Err(EvalError::NotANumber),
        },
        Expr::Pred => match arg {
            Value::Nat(0) => Err(EvalError::PredOfZero),
            Value::Nat(n) => Ok(Step::Produce(Value::Nat(n - 1))),
            Value::Closure(_) => Err(EvalError::NotANumber),
        },
        Expr::Fix => match arg {
            Value::Closure(c) => match &*c.expr {
                Expr::Lam(x, body) => {
                    // Bind x to the unevaluated closure (E, fix (\x. e)).
                    let fix_expr =
                        Rc::new(Expr::App(Rc::new(Expr::Fix), Rc::clone(&c.expr)));
                    let rec = Closure::new(c.env.clone(), fix_expr);
                    Ok(Step::Reduce(c.env.extend(x.clone(), rec), Rc::clone(body)))
                }
                _ => Err(EvalError::FixNotLambda),
            },
            Value::Nat(_) => Err(EvalError::FixNotLambda),
        },
        // A closure over anything else is not callable; only hand-built
        // values can reach this arm.
        _ => Err(EvalError::NotAFunction),
    }
}

/// Evaluate a closure to a value within the given step budget.
pub fn evaluate(closure: &Closure, budget: StepBudget) -> Result<Value, EvalError> {
    let mut steps = budget.remaining;
    let mut conts: Vec<Cont> = Vec::new();
    let mut state = Step::Reduce(closure.env.clone(), Rc::clone(&closure.expr));
    loop {
        state = match state {
            Step::Reduce(env, expr) => {
                if steps == 0 {
                    return Err(EvalError::BudgetExhausted);
                }
                steps -= 1;
                match &*expr {
                    Expr::Var(x) => {
                        let c = env
                            .lookup(x)
                            .ok_or_else(|| EvalError::UnboundVariable(x.clone()))?
                            .clone();
                        Step::Reduce(c.env, c.expr)
                    }
                    Expr::Num(n) => Step::Produce(Value::Nat(*n)),
                    Expr::Lam(..) | Expr::Succ | Expr::Pred | Expr::Fix => {
                        Step::Produce(Value::Closure(Closure::new(env, Rc::clone(&expr))))
                    }
                    Expr::App(f, a) => {
                        conts.push(Cont::EvalArg { env: env.clone(), arg: Rc::clone(a) });
                        Step::Reduce(env, Rc::clone(f))
                    }
                    Expr::Ifz(s, t, e) => {
                        conts.push(Cont::Branch {
                            env: env.clone(),
                            then_br: Rc::clone(t),
                            else_br: Rc::clone(e),
                        });
                        Step::Reduce(env, Rc::clone(s))
                    }
                }
            }
            Step::Produce(value) => match conts.pop() {
                None => return Ok(value),
                Some(Cont::EvalArg { env, arg }) => {
                    conts.push(Cont::Apply { func: value });
                    Step::Reduce(env, arg)
                }
                Some(Cont::Apply { func }) => apply(func, value)?,
                Some(Cont::Branch { env, then_br, else_br }) => match value {
                    Value::Nat(0) => Step::Reduce(env, then_br),
                    Value::Nat(_) => Step::Reduce(env, else_br),
                    Value::Closure(_) => return Err(EvalError::NotANumber),
                },
            },
        };
    }
}

/// Evaluate a closed expression under the default budget.
pub fn evaluate_closed(expr: Expr) -> Result<Value, EvalError> {
    evaluate(&Closure::closed(expr), StepBudget::default())
}
