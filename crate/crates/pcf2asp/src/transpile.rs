//! Translation of PCF expressions into ASP rules.
//!
//! Every expression translates to a pair `(t, S)` of an ASP term and a set
//! of body literals keeping `t` safe. Functions are identified by tuples
//! `(name, scope)` where `scope` tuples up the codomain of the translation
//! environment, so nested expressions can see the values of the variables
//! in scope. Applications record their argument in the `domain` predicate —
//! the demand side of the encoding — and read the function's graph back out
//! of `inter`. The `result` predicate carries the value of the whole
//! program.
//!
//! A fixed preamble defines `succ`, `pred` and `fix`; `fix` goes through a
//! symbolic function term `f(F)` standing for the fixpoint of `F`, because
//! the direct recursive equation has no useful least model.

use indexmap::{IndexMap, IndexSet};

use crate::asp::{AspAtom, AspLiteral, AspProgram, AspRule, AspTerm, CmpOp};
use crate::pcf::Expr;

pub const PRED_INTER: &str = "inter";
pub const PRED_DOMAIN: &str = "domain";
pub const PRED_RESULT: &str = "result";
/// Function symbol wrapping `F` to denote `fix F` symbolically.
pub const FIX_WRAPPER: &str = "f";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("numeral {0} exceeds the ASP integer range")]
    NumeralOutOfRange(u64),
}

/// How lambda and ifz scope tuples are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScopeMode {
    /// Tuple the full codomain of the environment.
    #[default]
    Full,
    /// Keep only variables free in the subexpression at hand, in their
    /// original binding order. Shrinks groundings without changing results.
    UsedOnly,
}

/// Supply of fresh ASP constants and variables. Lambda and ifz constants
/// share one counter, so names come out in translation order (`l0`, `ite1`,
/// ...); variables count independently (`X0`, `X1`, ...).
#[derive(Debug, Clone, Default)]
pub struct FreshSupply {
    const_counter: u64,
    var_counter: u64,
    reserved_vars: IndexSet<String>,
}

impl FreshSupply {
    pub fn new() -> FreshSupply {
        FreshSupply::default()
    }

    /// Variable names the supply must never hand out (used when search
    /// variables map to fixed ASP variable names).
    pub fn with_reserved_vars<I, S>(reserved: I) -> FreshSupply
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FreshSupply {
            reserved_vars: reserved.into_iter().map(Into::into).collect(),
            ..FreshSupply::default()
        }
    }

    pub fn fresh_const(&mut self, prefix: &str) -> String {
        let name = format!("{prefix}{}", self.const_counter);
        self.const_counter += 1;
        name
    }

    pub fn fresh_var(&mut self) -> String {
        loop {
            let name = format!("X{}", self.var_counter);
            self.var_counter += 1;
            if !self.reserved_vars.contains(&name) {
                return name;
            }
        }
    }
}

/// Translation environment: the mapping from PCF variables to ASP terms and
/// the literals keeping those terms safe. Insertion order is binding order,
/// outermost first; re-binding an identifier replaces its entry in place.
#[derive(Debug, Clone, Default)]
pub struct TransEnv {
    pub var_map: IndexMap<String, AspTerm>,
    pub safety: IndexSet<AspLiteral>,
}

impl TransEnv {
    pub fn empty() -> TransEnv {
        TransEnv::default()
    }

    /// Every variable term in the codomain must occur in a positive safety
    /// atom.
    pub fn is_well_formed(&self) -> bool {
        let mut covered = Vec::new();
        for lit in &self.safety {
            if let AspLiteral::Atom(a) = lit {
                a.collect_vars(&mut covered);
            }
        }
        self.var_map.values().all(|t| {
            let mut vars = Vec::new();
            t.collect_vars(&mut vars);
            vars.iter().all(|v| covered.contains(v))
        })
    }
}

/// Output of translating one subexpression: the helper rules, the term
/// standing for the expression, and the literals keeping that term safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransResult {
    pub rules: Vec<AspRule>,
    pub term: AspTerm,
    pub safety: IndexSet<AspLiteral>,
}

/// One entry per translated node, for checking that safety sets only grow.
#[derive(Debug, Clone)]
pub struct GrowthRecord {
    pub input: IndexSet<AspLiteral>,
    pub output: IndexSet<AspLiteral>,
}

impl GrowthRecord {
    pub fn holds(&self) -> bool {
        self.input.iter().all(|lit| self.output.contains(lit))
    }
}

fn union(a: &IndexSet<AspLiteral>, b: &IndexSet<AspLiteral>) -> IndexSet<AspLiteral> {
    a.iter().chain(b.iter()).cloned().collect()
}

/// The scope of an environment: its codomain tupled in binding order.
pub fn scope_term(env: &TransEnv) -> AspTerm {
    AspTerm::Tuple(env.var_map.values().cloned().collect())
}

fn scope_term_used(env: &TransEnv, used: &std::collections::BTreeSet<String>) -> AspTerm {
    AspTerm::Tuple(
        env.var_map
            .iter()
            .filter(|(name, _)| used.contains(*name))
            .map(|(_, t)| t.clone())
            .collect(),
    )
}

/// The fixed rules interpreting `succ`, `pred` and `fix`.
pub fn static_preamble() -> AspProgram {
    let var = AspTerm::var;
    let num = AspTerm::number;
    let cst = AspTerm::constant;
    let pair = |a, b| AspTerm::tuple(vec![a, b]);
    let f_of = |t| AspTerm::func(FIX_WRAPPER, vec![t]);
    let inter = |a, b| AspLiteral::atom(PRED_INTER, vec![a, b]);
    let domain = |a, b| AspLiteral::atom(PRED_DOMAIN, vec![a, b]);
    let head = |lit: AspLiteral| match lit {
        AspLiteral::Atom(a) => a,
        _ => unreachable!(),
    };

    let rules = vec![
        // inter((pred,X),X-1) :- domain(pred,X), X > 0.
        AspRule::rule(
            head(inter(pair(cst("pred"), var("X")), AspTerm::minus(var("X"), num(1)))),
            vec![
                domain(cst("pred"), var("X")),
                AspLiteral::compare(CmpOp::Gt, var("X"), num(0)),
            ],
        ),
        // inter((succ,X),X+1) :- domain(succ,X).
        AspRule::rule(
            head(inter(pair(cst("succ"), var("X")), AspTerm::plus(var("X"), num(1)))),
            vec![domain(cst("succ"), var("X"))],
        ),
        // inter((fix,F),Y) :- domain(fix,F), inter((F,f(F)),Y).
        AspRule::rule(
            head(inter(pair(cst("fix"), var("F")), var("Y"))),
            vec![
                domain(cst("fix"), var("F")),
                inter(pair(var("F"), f_of(var("F"))), var("Y")),
            ],
        ),
        // inter((f(F),X),Y) :- domain(f(F),X), inter((F,f(F)),FIX), inter((FIX,X),Y).
        AspRule::rule(
            head(inter(pair(f_of(var("F")), var("X")), var("Y"))),
            vec![
                domain(f_of(var("F")), var("X")),
                inter(pair(var("F"), f_of(var("F"))), var("FIX")),
                inter(pair(var("FIX"), var("X")), var("Y")),
            ],
        ),
        // domain(F,f(F)) :- domain(fix,F).
        AspRule::rule(
            head(domain(var("F"), f_of(var("F")))),
            vec![domain(cst("fix"), var("F"))],
        ),
        // domain(FIX,X) :- domain(f(F),X), inter((F,f(F)),FIX).
        AspRule::rule(
            head(domain(var("FIX"), var("X"))),
            vec![
                domain(f_of(var("F")), var("X")),
                inter(pair(var("F"), f_of(var("F"))), var("FIX")),
            ],
        ),
    ];
    AspProgram::new(rules)
}

/// A translation session. Fresh-name counters reset on every top-level
/// translation, so equal inputs give byte-identical programs.
#[derive(Debug, Default)]
pub struct Translator {
    mode: ScopeMode,
    /// Declared free variables (search extension): PCF name to the ASP
    /// variable standing for its chosen value.
    free_vars: IndexMap<String, String>,
    fresh: FreshSupply,
    log_growth: bool,
    growth_log: Vec<GrowthRecord>,
}

impl Translator {
    pub fn new(mode: ScopeMode) -> Translator {
        Translator { mode, ..Translator::default() }
    }

    /// A translator that resolves the given free variables at their
    /// occurrences: variable `name` translates to the ASP variable `var`
    /// guarded by the safety atom `name(var)`.
    pub fn with_free_vars(
        mode: ScopeMode,
        mapping: impl IntoIterator<Item = (String, String)>,
    ) -> Translator {
        Translator {
            mode,
            free_vars: mapping.into_iter().collect(),
            ..Translator::default()
        }
    }

    /// Record safety sets per node so the growth invariant can be audited.
    pub fn log_growth(&mut self, on: bool) {
        self.log_growth = on;
    }

    pub fn growth_log(&self) -> &[GrowthRecord] {
        &self.growth_log
    }

    fn reset(&mut self) {
        self.fresh = FreshSupply::with_reserved_vars(self.free_vars.values().cloned());
        self.growth_log.clear();
    }

    /// Full translation: preamble, dynamic rules, and the final `result`
    /// rule. The expression must be closed up to the declared free
    /// variables.
    pub fn translate(&mut self, expr: &Expr) -> Result<AspProgram, TranslateError> {
        let mut rules = static_preamble().rules;
        rules.extend(self.dynamic_rules(expr)?);
        Ok(AspProgram::new(rules))
    }

    /// The dynamic part only: helper rules followed by the `result` rule
    /// (a plain fact when no safety literals are needed).
    pub fn dynamic_rules(&mut self, expr: &Expr) -> Result<Vec<AspRule>, TranslateError> {
        if let Some(missing) = expr
            .free_vars()
            .into_iter()
            .find(|v| !self.free_vars.contains_key(v))
        {
            return Err(TranslateError::UnboundVariable(missing));
        }
        self.reset();
        let out = self.translate_sub(&TransEnv::empty(), expr)?;
        let mut rules = out.rules;
        rules.push(AspRule {
            head: Some(crate::asp::AspHead::Atom(AspAtom::new(PRED_RESULT, vec![out.term]))),
            body: out.safety.into_iter().collect(),
        });
        Ok(rules)
    }

    fn scope(&self, env: &TransEnv, expr: &Expr) -> AspTerm {
        match self.mode {
            ScopeMode::Full => scope_term(env),
            ScopeMode::UsedOnly => scope_term_used(env, &expr.free_vars()),
        }
    }

    /// Translate one subexpression under the given environment.
    pub fn translate_sub(
        &mut self,
        env: &TransEnv,
        expr: &Expr,
    ) -> Result<TransResult, TranslateError> {
        let input_safety = self.log_growth.then(|| env.safety.clone());
        let out = match expr {
            Expr::Num(n) => {
                let value = i64::try_from(*n).map_err(|_| TranslateError::NumeralOutOfRange(*n))?;
                TransResult {
                    rules: Vec::new(),
                    term: AspTerm::Number(value),
                    safety: env.safety.clone(),
                }
            }
            Expr::Succ | Expr::Pred | Expr::Fix => {
                let name = match expr {
                    Expr::Succ => "succ",
                    Expr::Pred => "pred",
                    _ => "fix",
                };
                TransResult {
                    rules: Vec::new(),
                    term: AspTerm::constant(name),
                    safety: env.safety.clone(),
                }
            }
            Expr::Var(x) => {
                if let Some(term) = env.var_map.get(x) {
                    TransResult { rules: Vec::new(), term: term.clone(), safety: env.safety.clone() }
                } else if let Some(asp_var) = self.free_vars.get(x) {
                    // A declared search variable: its value is the single
                    // argument of the choice-defined predicate named after it.
                    let term = AspTerm::var(asp_var.clone());
                    let mut safety = env.safety.clone();
                    safety.insert(AspLiteral::atom(x.clone(), vec![term.clone()]));
                    TransResult { rules: Vec::new(), term, safety }
                } else {
                    return Err(TranslateError::UnboundVariable(x.clone()));
                }
            }
            Expr::App(fun, arg) => {
                let left = self.translate_sub(env, fun)?;
                let right = self.translate_sub(env, arg)?;
                let joined = union(&left.safety, &right.safety);
                let mut rules = left.rules;
                rules.extend(right.rules);
                rules.push(AspRule {
                    head: Some(crate::asp::AspHead::Atom(AspAtom::new(
                        PRED_DOMAIN,
                        vec![left.term.clone(), right.term.clone()],
                    ))),
                    body: joined.iter().cloned().collect(),
                });
                let result_var = AspTerm::var(self.fresh.fresh_var());
                let mut safety = joined;
                safety.insert(AspLiteral::atom(
                    PRED_INTER,
                    vec![
                        AspTerm::tuple(vec![left.term, right.term]),
                        result_var.clone(),
                    ],
                ));
                TransResult { rules, term: result_var, safety }
            }
            Expr::Lam(param, body) => {
                let bound_var = AspTerm::var(self.fresh.fresh_var());
                let lam_const = self.fresh.fresh_const("l");
                let scope = self.scope(env, expr);
                let func_term =
                    AspTerm::tuple(vec![AspTerm::constant(lam_const), scope]);
                let body_domain = AspLiteral::atom(
                    PRED_DOMAIN,
                    vec![func_term.clone(), bound_var.clone()],
                );
                let mut inner = env.clone();
                inner.var_map.insert(param.clone(), bound_var.clone());
                inner.safety.insert(body_domain);
                let body_out = self.translate_sub(&inner, body)?;
                let mut rules = body_out.rules;
                rules.push(AspRule {
                    head: Some(crate::asp::AspHead::Atom(AspAtom::new(
                        PRED_INTER,
                        vec![
                            AspTerm::tuple(vec![func_term.clone(), bound_var]),
                            body_out.term,
                        ],
                    ))),
                    body: body_out.safety.into_iter().collect(),
                });
                TransResult { rules, term: func_term, safety: env.safety.clone() }
            }
            Expr::Ifz(scrutinee, then_branch, else_branch) => {
                let scrut = self.translate_sub(env, scrutinee)?;

                let mut then_env = env.clone();
                then_env.safety = scrut.safety.clone();
                then_env.safety.insert(AspLiteral::compare(
                    CmpOp::Eq,
                    scrut.term.clone(),
                    AspTerm::number(0),
                ));
                let then_out = self.translate_sub(&then_env, then_branch)?;

                let mut else_env = env.clone();
                else_env.safety = scrut.safety.clone();
                else_env.safety.insert(AspLiteral::compare(
                    CmpOp::Neq,
                    scrut.term.clone(),
                    AspTerm::number(0),
                ));
                let else_out = self.translate_sub(&else_env, else_branch)?;

                let ite_const = self.fresh.fresh_const("ite");
                let result_var = AspTerm::var(self.fresh.fresh_var());
                let scope = self.scope(env, expr);
                let ite_term =
                    AspTerm::tuple(vec![AspTerm::constant(ite_const), scope]);

                let mut rules = scrut.rules;
                rules.extend(then_out.rules);
                rules.extend(else_out.rules);
                rules.push(AspRule {
                    head: Some(crate::asp::AspHead::Atom(AspAtom::new(
                        PRED_INTER,
                        vec![ite_term.clone(), then_out.term],
                    ))),
                    body: then_out.safety.into_iter().collect(),
                });
                rules.push(AspRule {
                    head: Some(crate::asp::AspHead::Atom(AspAtom::new(
                        PRED_INTER,
                        vec![ite_term.clone(), else_out.term],
                    ))),
                    body: else_out.safety.into_iter().collect(),
                });

                let mut safety = env.safety.clone();
                safety.insert(AspLiteral::atom(
                    PRED_INTER,
                    vec![ite_term, result_var.clone()],
                ));
                TransResult { rules, term: result_var, safety }
            }
        };
        if let Some(input) = input_safety {
            self.growth_log.push(GrowthRecord { input, output: out.safety.clone() });
        }
        Ok(out)
    }
}

/// Translate a closed expression with full scope tuples.
pub fn translate(expr: &Expr) -> Result<AspProgram, TranslateError> {
    Translator::new(ScopeMode::Full).translate(expr)
}

/// Translate a closed expression under the given scope mode.
pub fn translate_with_mode(expr: &Expr, mode: ScopeMode) -> Result<AspProgram, TranslateError> {
    Translator::new(mode).translate(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::emit;
    use crate::pcf::parse_expr;

    fn lines(p: &AspProgram) -> Vec<String> {
        p.rules.iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn preamble_matches_the_fixed_rules() {
        let p = static_preamble();
        let got = lines(&p);
        let expected = vec![
            "inter((pred,X),X-1):-domain(pred,X),X>0.",
            "inter((succ,X),X+1):-domain(succ,X).",
            "inter((fix,F),Y):-domain(fix,F),inter((F,f(F)),Y).",
            "inter((f(F),X),Y):-domain(f(F),X),inter((F,f(F)),FIX),inter((FIX,X),Y).",
            "domain(F,f(F)):-domain(fix,F).",
            "domain(FIX,X):-domain(f(F),X),inter((F,f(F)),FIX).",
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn preamble_rules_are_safe() {
        for rule in &static_preamble().rules {
            assert!(crate::asp::check_safety(rule).is_safe(), "unsafe: {rule}");
        }
    }

    #[test]
    fn scope_term_examples() {
        let mut env = TransEnv::empty();
        assert_eq!(scope_term(&env).to_string(), "()");
        env.var_map.insert("x".into(), AspTerm::var("X0"));
        assert_eq!(scope_term(&env).to_string(), "(X0)");
        env.var_map.insert("y".into(), AspTerm::var("X1"));
        assert_eq!(scope_term(&env).to_string(), "(X0,X1)");
    }

    #[test]
    fn shadowing_keeps_one_entry_per_binder() {
        let mut env = TransEnv::empty();
        env.var_map.insert("x".into(), AspTerm::var("X0"));
        env.var_map.insert("y".into(), AspTerm::var("X1"));
        env.var_map.insert("x".into(), AspTerm::var("X2"));
        assert_eq!(scope_term(&env).to_string(), "(X2,X1)");
    }

    #[test]
    fn constant_function_translation() {
        let e = parse_expr("\\x. 2").unwrap();
        let mut tr = Translator::new(ScopeMode::Full);
        let out = tr.translate_sub(&TransEnv::empty(), &e).unwrap();
        assert_eq!(
            out.rules.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            vec!["inter(((l0,()),X0),2):-domain((l0,()),X0)."]
        );
        assert_eq!(out.term.to_string(), "(l0,())");
        assert!(out.safety.is_empty());
    }

    #[test]
    fn application_translation() {
        let e = parse_expr("succ 1").unwrap();
        let mut tr = Translator::new(ScopeMode::Full);
        let out = tr.translate_sub(&TransEnv::empty(), &e).unwrap();
        assert_eq!(
            out.rules.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            vec!["domain(succ,1)."]
        );
        assert_eq!(out.term.to_string(), "X0");
        let safety: Vec<String> = out.safety.iter().map(|l| l.to_string()).collect();
        assert_eq!(safety, vec!["inter((succ,1),X0)"]);
    }

    #[test]
    fn builtin_translation_is_empty() {
        let mut tr = Translator::new(ScopeMode::Full);
        let out = tr.translate_sub(&TransEnv::empty(), &Expr::Num(5)).unwrap();
        assert!(out.rules.is_empty());
        assert_eq!(out.term, AspTerm::number(5));
        assert!(out.safety.is_empty());
    }

    #[test]
    fn translate_numeral_yields_result_fact() {
        let p = translate(&Expr::Num(0)).unwrap();
        let got = lines(&p);
        assert_eq!(got.len(), 7);
        assert_eq!(got[6], "result(0).");
    }

    #[test]
    fn translate_succ_one() {
        let p = translate(&parse_expr("succ 1").unwrap()).unwrap();
        let got = lines(&p);
        assert_eq!(&got[6..], &["domain(succ,1).", "result(X0):-inter((succ,1),X0)."]);
    }

    #[test]
    fn listing_style_translation_of_ifz_example() {
        // (\x. ifz x then succ else pred) 2 4
        let e = parse_expr("(\\x. ifz x then succ else pred) 2 4").unwrap();
        let p = translate(&e).unwrap();
        let dynamic: Vec<String> = lines(&p)[6..].to_vec();
        let expected = vec![
            "inter((ite1,(X0)),succ):-domain((l0,()),X0),X0=0.",
            "inter((ite1,(X0)),pred):-domain((l0,()),X0),X0!=0.",
            "inter(((l0,()),X0),X1):-domain((l0,()),X0),inter((ite1,(X0)),X1).",
            "domain((l0,()),2).",
            "domain(X2,4):-inter(((l0,()),2),X2).",
            "result(X3):-inter(((l0,()),2),X2),inter((X2,4),X3).",
        ];
        assert_eq!(dynamic, expected);
    }

    #[test]
    fn open_expression_is_rejected() {
        let err = translate(&Expr::var("a")).unwrap_err();
        assert_eq!(err, TranslateError::UnboundVariable("a".into()));
    }

    #[test]
    fn translation_is_deterministic() {
        let e = parse_expr("(\\x. ifz x then succ else pred) 2 4").unwrap();
        let mut tr = Translator::new(ScopeMode::Full);
        let a = emit(&tr.translate(&e).unwrap());
        let b = emit(&tr.translate(&e).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn every_emitted_rule_is_safe() {
        let sources = [
            "(\\x. ifz x then succ else pred) 2 4",
            "(fix (\\double. \\x. ifz x then 0 else succ (succ (double (pred x))))) 5",
            "(\\f. (f 1) ((f 2) 3)) (\\x. \\y. y)",
        ];
        for src in sources {
            let p = translate(&parse_expr(src).unwrap()).unwrap();
            for rule in &p.rules {
                assert!(crate::asp::check_safety(rule).is_safe(), "unsafe rule {rule} from {src}");
            }
        }
    }

    #[test]
    fn growth_log_confirms_monotone_safety() {
        let e = parse_expr("(\\x. ifz x then succ else pred) 2 4").unwrap();
        let mut tr = Translator::new(ScopeMode::Full);
        tr.log_growth(true);
        tr.translate(&e).unwrap();
        assert!(!tr.growth_log().is_empty());
        for record in tr.growth_log() {
            assert!(record.holds());
        }
    }

    #[test]
    fn used_only_scope_drops_unused_binders() {
        let e = parse_expr("(\\f. (f 1) ((f 2) 3)) (\\x. \\y. y)").unwrap();
        let full = emit(&translate_with_mode(&e, ScopeMode::Full).unwrap());
        let pruned = emit(&translate_with_mode(&e, ScopeMode::UsedOnly).unwrap());
        // The inner lambda `\y. y` does not use `x`, so its scope collapses.
        assert!(full.contains("(l2,(X5))"), "{full}");
        assert!(pruned.contains("(l2,())"), "{pruned}");
        assert!(!pruned.contains("(l2,(X5))"), "{pruned}");
    }

    #[test]
    fn pruning_without_binders_is_identity() {
        let e = parse_expr("ifz 0 then succ 1 else 2").unwrap();
        let full = emit(&translate_with_mode(&e, ScopeMode::Full).unwrap());
        let pruned = emit(&translate_with_mode(&e, ScopeMode::UsedOnly).unwrap());
        assert_eq!(full, pruned);
    }

    #[test]
    fn free_var_translation_resolves_at_occurrence() {
        let mut tr = Translator::with_free_vars(
            ScopeMode::Full,
            [("a".to_string(), "A".to_string())],
        );
        let rules = tr.dynamic_rules(&Expr::var("a")).unwrap();
        assert_eq!(
            rules.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            vec!["result(A):-a(A)."]
        );
    }

    #[test]
    fn fresh_supply_skips_reserved_variables() {
        let mut fresh = FreshSupply::with_reserved_vars(["X1"]);
        assert_eq!(fresh.fresh_var(), "X0");
        assert_eq!(fresh.fresh_var(), "X2");
    }

    #[test]
    fn trans_env_invariant_check() {
        let mut env = TransEnv::empty();
        env.var_map.insert("x".into(), AspTerm::var("X0"));
        assert!(!env.is_well_formed());
        env.safety.insert(AspLiteral::atom(
            PRED_DOMAIN,
            vec![AspTerm::tuple(vec![AspTerm::constant("l0"), AspTerm::tuple(vec![])]), AspTerm::var("X0")],
        ));
        assert!(env.is_well_formed());
    }
}
