#![allow(dead_code)] // shared across test binaries that each use a subset

//! Shared fixtures for the integration suites: the differential corpus, an
//! independent naive grounding oracle, and proptest generators.

use std::collections::BTreeSet;
use std::path::PathBuf;

use proptest::prelude::*;

use pcf2asp::asp::{
    ArithOp, AspAtom, AspHead, AspLiteral, AspProgram, AspRule, AspTerm, ChoiceHead, CmpOp,
};
use pcf2asp::pcf::Expr;

pub fn testdata(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata").join(rel)
}

pub fn read_testdata(rel: &str) -> String {
    std::fs::read_to_string(testdata(rel)).unwrap_or_else(|e| panic!("read {rel}: {e}"))
}

/// A closed PCF source together with its expected value when that value is
/// known from an independent computation (hand evaluation or arithmetic).
pub struct CorpusEntry {
    pub name: String,
    pub source: String,
    pub expected: Option<u64>,
}

fn entry(name: &str, source: &str, expected: Option<u64>) -> CorpusEntry {
    CorpusEntry { name: name.to_string(), source: source.to_string(), expected }
}

/// Closed, numerically-valued expressions for differential testing.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut items = vec![
        entry("example1", "(\\x. succ (succ x)) (succ 0)", Some(3)),
        entry("prooftree", "ifz (fix (\\f. 4)) then 3 else (\\x. pred x) 2", Some(1)),
        entry("listing4", "(\\x. ifz x then succ else pred) 2 4", Some(3)),
        entry("listing4_zero", "(\\x. ifz x then succ else pred) 0 4", Some(5)),
        entry("numeral", "0", Some(0)),
        entry("pred_succ", "pred (succ 0)", Some(0)),
        entry("succ_chain", "succ (succ (succ 7))", Some(10)),
        entry("ifz_zero", "ifz 0 then succ 1 else pred 1", Some(2)),
        entry("ifz_nonzero", "ifz 3 then 0 else succ 3", Some(4)),
        entry("const_fun", "(\\x. 2) 9", Some(2)),
        entry("identity", "(\\x. x) 9", Some(9)),
        entry("nested_apply", "(\\f. \\x. f (f x)) succ 5", Some(7)),
        entry("shadowing", "(\\x. (\\x. succ x) (succ x)) 3", Some(5)),
        entry("shared_lambda", "(\\f. (f 1) ((f 2) 3)) (\\x. \\y. y)", Some(3)),
        entry("first_class_fix", "(\\g. g (\\x. 7)) fix", Some(7)),
        entry("higher_order_branch", "(\\b. (ifz b then succ else (\\x. x)) 4) 0", Some(5)),
        entry("deep_parens", "((((succ)))) ((0))", Some(1)),
    ];
    // Doubling over 0..=8.
    for k in 0..=8u64 {
        items.push(entry(
            &format!("double_{k}"),
            &format!(
                "(fix (\\double. \\x. ifz x then 0 else succ (succ (double (pred x))))) {k}"
            ),
            Some(2 * k),
        ));
    }
    // Binary sum over 0..=6 x 0..=6.
    for a in 0..=6u64 {
        for b in 0..=6u64 {
            items.push(entry(
                &format!("plus_{a}_{b}"),
                &format!(
                    "(fix (\\plus. \\a. \\b. ifz a then b else plus (pred a) (succ b))) {a} {b}"
                ),
                Some(a + b),
            ));
        }
    }
    items
}

// ---------------------------------------------------------------------------
// Naive grounding oracle
//
// A deliberately simple least-model computation: substitute every rule
// variable with every ground term seen so far (plus interval values) and
// keep adding satisfied heads until nothing changes. Shares no code with
// the engine's planner, indexes or semi-naive machinery.

fn oracle_eval(term: &AspTerm, env: &[(String, AspTerm)]) -> Option<AspTerm> {
    match term {
        AspTerm::Number(n) => Some(AspTerm::Number(*n)),
        AspTerm::Variable(v) => env.iter().find(|(n, _)| n == v).map(|(_, t)| t.clone()),
        AspTerm::Const(name, args) => {
            let args: Option<Vec<_>> = args.iter().map(|t| oracle_eval(t, env)).collect();
            Some(AspTerm::Const(name.clone(), args?))
        }
        AspTerm::Tuple(items) => {
            let items: Option<Vec<_>> = items.iter().map(|t| oracle_eval(t, env)).collect();
            Some(AspTerm::Tuple(items?))
        }
        AspTerm::Arith(op, l, r) => {
            match (oracle_eval(l, env)?, oracle_eval(r, env)?) {
                (AspTerm::Number(l), AspTerm::Number(r)) => {
                    let value = match op {
                        ArithOp::Add => l.checked_add(r)?,
                        ArithOp::Sub => l.checked_sub(r)?,
                    };
                    Some(AspTerm::Number(value))
                }
                _ => None,
            }
        }
    }
}

fn oracle_compare(op: CmpOp, l: &AspTerm, r: &AspTerm) -> bool {
    match op {
        CmpOp::Eq => l == r,
        CmpOp::Neq => l != r,
        CmpOp::Lt => matches!((l, r), (AspTerm::Number(a), AspTerm::Number(b)) if a < b),
        CmpOp::Gt => matches!((l, r), (AspTerm::Number(a), AspTerm::Number(b)) if a > b),
    }
}

fn subterms(term: &AspTerm, out: &mut Vec<AspTerm>) {
    out.push(term.clone());
    match term {
        AspTerm::Const(_, args) | AspTerm::Tuple(args) => {
            args.iter().for_each(|t| subterms(t, out));
        }
        _ => {}
    }
}

fn rule_vars(rule: &AspRule) -> Vec<String> {
    let mut vars = Vec::new();
    if let Some(AspHead::Atom(a)) = &rule.head {
        a.collect_vars(&mut vars);
    }
    for lit in &rule.body {
        lit.collect_vars(&mut vars);
    }
    let mut seen = BTreeSet::new();
    vars.retain(|v| seen.insert(v.clone()));
    vars
}

fn body_holds(rule: &AspRule, env: &[(String, AspTerm)], atoms: &BTreeSet<String>) -> bool {
    rule.body.iter().all(|lit| match lit {
        AspLiteral::Atom(a) => {
            let args: Option<Vec<_>> = a.args.iter().map(|t| oracle_eval(t, env)).collect();
            match args {
                Some(args) => {
                    atoms.contains(&AspAtom::new(a.predicate.clone(), args).to_string())
                }
                None => false,
            }
        }
        AspLiteral::Comparison(op, l, r) => match (oracle_eval(l, env), oracle_eval(r, env)) {
            (Some(l), Some(r)) => oracle_compare(*op, &l, &r),
            _ => false,
        },
        AspLiteral::Range { term, lo, hi } => {
            match (oracle_eval(term, env), oracle_eval(lo, env), oracle_eval(hi, env)) {
                (
                    Some(AspTerm::Number(v)),
                    Some(AspTerm::Number(lo)),
                    Some(AspTerm::Number(hi)),
                ) => v >= lo && v <= hi,
                _ => false,
            }
        }
        AspLiteral::NegAtom(_) => panic!("oracle only handles positive programs"),
    })
}

/// Least model of a positive program by exhaustive substitution. Returns the
/// canonical atom strings, or panics when `max_rounds` is hit.
pub fn naive_least_model(program: &AspProgram, max_rounds: usize) -> BTreeSet<String> {
    let mut atoms: BTreeSet<String> = BTreeSet::new();
    // Terms the variables may range over: every subterm of a derived atom's
    // arguments plus the values of ground intervals.
    let mut universe: Vec<AspTerm> = Vec::new();
    let mut universe_keys: BTreeSet<String> = BTreeSet::new();
    let push_term = |t: &AspTerm, universe: &mut Vec<AspTerm>, keys: &mut BTreeSet<String>| {
        let mut subs = Vec::new();
        subterms(t, &mut subs);
        for s in subs {
            if keys.insert(s.to_string()) {
                universe.push(s);
            }
        }
    };
    for rule in &program.rules {
        for lit in &rule.body {
            if let AspLiteral::Range { lo, hi, .. } = lit {
                if let (Some(AspTerm::Number(lo)), Some(AspTerm::Number(hi))) =
                    (oracle_eval(lo, &[]), oracle_eval(hi, &[]))
                {
                    assert!(hi - lo <= 1000, "oracle interval too wide");
                    for v in lo..=hi {
                        push_term(&AspTerm::Number(v), &mut universe, &mut universe_keys);
                    }
                }
            }
        }
    }

    for round in 0.. {
        assert!(round < max_rounds, "oracle did not reach a fixpoint in {max_rounds} rounds");
        let mut new_atoms: Vec<AspAtom> = Vec::new();
        for rule in &program.rules {
            let Some(AspHead::Atom(head)) = &rule.head else {
                panic!("oracle only handles positive programs");
            };
            let vars = rule_vars(rule);
            let mut env: OracleEnv = Vec::new();
            assign_all(&vars, 0, &universe, &mut env, &mut |env| {
                if body_holds(rule, env, &atoms) {
                    if let Some(args) =
                        head.args.iter().map(|t| oracle_eval(t, env)).collect::<Option<Vec<_>>>()
                    {
                        new_atoms.push(AspAtom::new(head.predicate.clone(), args));
                    }
                }
            });
        }
        let before = atoms.len();
        for atom in new_atoms {
            for arg in &atom.args {
                push_term(arg, &mut universe, &mut universe_keys);
            }
            atoms.insert(atom.to_string());
        }
        if atoms.len() == before {
            break;
        }
    }
    atoms
}

type OracleEnv = Vec<(String, AspTerm)>;

fn assign_all(
    vars: &[String],
    idx: usize,
    universe: &[AspTerm],
    env: &mut OracleEnv,
    visit: &mut dyn FnMut(&OracleEnv),
) {
    if idx == vars.len() {
        visit(env);
        return;
    }
    for term in universe {
        env.push((vars[idx].clone(), term.clone()));
        assign_all(vars, idx + 1, universe, env, visit);
        env.pop();
    }
}

// ---------------------------------------------------------------------------
// Proptest generators

pub fn arb_pcf_ident() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("f".to_string()),
        Just("g".to_string()),
        Just("acc".to_string()),
        Just("x_1".to_string()),
        Just("lam2".to_string()),
    ]
}

pub fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        arb_pcf_ident().prop_map(Expr::Var),
        (0..=i64::MAX as u64).prop_map(Expr::Num),
        Just(Expr::Succ),
        Just(Expr::Pred),
        Just(Expr::Fix),
    ];
    leaf.prop_recursive(6, 48, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Expr::app(f, a)),
            (arb_pcf_ident(), inner.clone()).prop_map(|(x, b)| Expr::lam(x, b)),
            (inner.clone(), inner.clone(), inner)
                .prop_map(|(s, t, e)| Expr::ifz(s, t, e)),
        ]
    })
}

fn arb_asp_name() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,4}".prop_filter("`not` is reserved", |s| s != "not")
}

fn arb_asp_var() -> impl Strategy<Value = String> {
    "[A-Z][A-Za-z0-9_]{0,3}".prop_map(|s| s)
}

fn arb_simple_term() -> impl Strategy<Value = AspTerm> {
    prop_oneof![
        (-1000i64..1000).prop_map(AspTerm::Number),
        arb_asp_name().prop_map(AspTerm::constant),
        arb_asp_var().prop_map(AspTerm::Variable),
    ]
}

pub fn arb_asp_term() -> impl Strategy<Value = AspTerm> {
    let arith = (
        prop_oneof![Just(ArithOp::Add), Just(ArithOp::Sub)],
        arb_simple_term(),
        arb_simple_term(),
    )
        .prop_map(|(op, l, r)| AspTerm::Arith(op, Box::new(l), Box::new(r)));
    let leaf = prop_oneof![arb_simple_term(), arith];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            (arb_asp_name(), prop::collection::vec(inner.clone(), 1..3))
                .prop_map(|(n, args)| AspTerm::Const(n, args)),
            prop::collection::vec(inner, 0..3).prop_map(AspTerm::Tuple),
        ]
    })
}

fn arb_atom() -> impl Strategy<Value = AspAtom> {
    (arb_asp_name(), prop::collection::vec(arb_asp_term(), 0..3))
        .prop_map(|(n, args)| AspAtom::new(n, args))
}

fn arb_positive_literal() -> impl Strategy<Value = AspLiteral> {
    let cmp_op = prop_oneof![
        Just(CmpOp::Lt),
        Just(CmpOp::Gt),
        Just(CmpOp::Eq),
        Just(CmpOp::Neq)
    ];
    prop_oneof![
        arb_atom().prop_map(AspLiteral::Atom),
        (cmp_op, arb_asp_term(), arb_asp_term())
            .prop_map(|(op, l, r)| AspLiteral::Comparison(op, l, r)),
        (arb_simple_term(), arb_simple_term(), arb_simple_term())
            .prop_map(|(t, lo, hi)| AspLiteral::Range { term: t, lo, hi }),
    ]
}

fn arb_body_literal() -> impl Strategy<Value = AspLiteral> {
    prop_oneof![
        3 => arb_positive_literal(),
        1 => arb_atom().prop_map(AspLiteral::NegAtom),
    ]
}

fn arb_rule() -> impl Strategy<Value = AspRule> {
    let fact = arb_atom().prop_map(AspRule::fact);
    let rule = (arb_atom(), prop::collection::vec(arb_body_literal(), 1..4))
        .prop_map(|(h, b)| AspRule::rule(h, b));
    let constraint =
        prop::collection::vec(arb_body_literal(), 1..3).prop_map(AspRule::constraint);
    let choice = (
        0u64..3,
        0u64..3,
        arb_atom(),
        prop::option::of(arb_positive_literal()),
        prop::collection::vec(arb_body_literal(), 0..2),
    )
        .prop_map(|(a, b, template, condition, body)| {
            let (lower, upper) = (a.min(b), a.max(b));
            AspRule::choice(ChoiceHead { lower, upper, template, condition }, body)
        });
    prop_oneof![3 => fact, 4 => rule, 1 => constraint, 1 => choice]
}

pub fn arb_program() -> impl Strategy<Value = AspProgram> {
    prop::collection::vec(arb_rule(), 0..8).prop_map(AspProgram::new)
}
