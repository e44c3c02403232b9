//! Search over PCF programs with non-deterministic variables.
//!
//! A free PCF identifier `a` declared over `lo..hi` becomes a choice rule
//! `1{a(X)}1 :- X=lo..hi.`, and every occurrence of `a` in the translation
//! reads the chosen value through an `a(A)` body atom. Requiring the
//! program to evaluate to zero is the constraint `:- not result(0).`.
//!
//! The solver here is deliberately naive: it grounds choice candidates
//! against the positive core, enumerates every admissible selection, and
//! re-grounds per selection, checking cardinality bounds and constraints on
//! the final model. Exporting the program for a CDCL-based external system
//! is the scalable alternative.

use std::io;
use std::path::Path;

use indexmap::{IndexMap, IndexSet};
use itertools::Itertools;

use crate::asp::{
    emit, AspHead, AspLiteral, AspProgram, AspRule, AspTerm, ChoiceHead,
};
use crate::ground::{
    instantiate_atom, satisfied_instantiations, AnswerSet, GroundAtom, GroundBudget, GroundError,
    Grounder,
};
use crate::pcf::Expr;
use crate::transpile::{static_preamble, ScopeMode, TranslateError, Translator};

/// Declares a search variable ranging over `lower..=upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub lower: u64,
    pub upper: u64,
}

impl VarDecl {
    pub fn new(name: impl Into<String>, lower: u64, upper: u64) -> VarDecl {
        VarDecl { name: name.into(), lower, upper }
    }
}

/// A PCF expression with declared free variables, optionally constrained to
/// evaluate to zero.
#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub expr: Expr,
    pub decls: Vec<VarDecl>,
    pub require_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("free variable `{0}` has no declaration")]
    UndeclaredFreeVariable(String),
    #[error("variable `{0}` is declared twice")]
    DuplicateDecl(String),
    #[error("declaration of `{name}` has an invalid range {lower}..{upper}")]
    InvalidRange { name: String, lower: u64, upper: u64 },
    #[error("declaration name `{0}` collides with a translation predicate")]
    ReservedName(String),
    #[error("cannot parse variable declaration `{0}`, expected name=lo..hi")]
    InvalidDecl(String),
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("unsupported rule form: {0}")]
    UnsupportedRuleForm(String),
    #[error("solving budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error(transparent)]
    Ground(#[from] GroundError),
}

/// The ASP variable standing for a declared PCF variable: the name with its
/// first letter upcased (`a` becomes `A`).
pub fn choice_variable(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(first) => first.to_ascii_uppercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

fn validate(problem: &SearchProblem) -> Result<IndexMap<String, String>, SearchError> {
    let mut mapping = IndexMap::new();
    for decl in &problem.decls {
        if ["inter", "domain", "result"].contains(&decl.name.as_str()) {
            return Err(SearchError::ReservedName(decl.name.clone()));
        }
        if decl.lower > decl.upper || decl.upper > i64::MAX as u64 {
            return Err(SearchError::InvalidRange {
                name: decl.name.clone(),
                lower: decl.lower,
                upper: decl.upper,
            });
        }
        if mapping.insert(decl.name.clone(), choice_variable(&decl.name)).is_some() {
            return Err(SearchError::DuplicateDecl(decl.name.clone()));
        }
    }
    for free in problem.expr.free_vars() {
        if !mapping.contains_key(&free) {
            return Err(SearchError::UndeclaredFreeVariable(free));
        }
    }
    Ok(mapping)
}

/// Translate a search problem: preamble, one choice rule per declaration,
/// the dynamic rules, and the zero constraint when requested.
pub fn transpile_with_choices(problem: &SearchProblem) -> Result<AspProgram, SearchError> {
    transpile_with_choices_mode(problem, ScopeMode::Full)
}

pub fn transpile_with_choices_mode(
    problem: &SearchProblem,
    mode: ScopeMode,
) -> Result<AspProgram, SearchError> {
    let mapping = validate(problem)?;
    let mut rules = static_preamble().rules;
    for decl in &problem.decls {
        rules.push(AspRule::choice(
            ChoiceHead {
                lower: 1,
                upper: 1,
                template: crate::asp::AspAtom::new(decl.name.clone(), vec![AspTerm::var("X")]),
                condition: None,
            },
            vec![AspLiteral::Range {
                term: AspTerm::var("X"),
                lo: AspTerm::number(decl.lower as i64),
                hi: AspTerm::number(decl.upper as i64),
            }],
        ));
    }
    let mut translator = Translator::with_free_vars(mode, mapping);
    rules.extend(translator.dynamic_rules(&problem.expr)?);
    if problem.require_zero {
        rules.push(AspRule::constraint(vec![AspLiteral::NegAtom(
            crate::asp::AspAtom::new("result", vec![AspTerm::number(0)]),
        )]));
    }
    Ok(AspProgram::new(rules))
}

struct ChoiceInfo {
    lower: u64,
    upper: u64,
    candidates: Vec<GroundAtom>,
}

fn has_negation(body: &[AspLiteral]) -> bool {
    body.iter().any(|lit| matches!(lit, AspLiteral::NegAtom(_)))
}

/// Enumerate the answer sets of a program made of a positive core, choice
/// rules whose conditions depend only on the core, and constraints (the one
/// place `not` is allowed).
pub fn solve_enumerative(
    program: &AspProgram,
    budget: &GroundBudget,
) -> Result<Vec<AnswerSet>, SolveError> {
    let mut core = Vec::new();
    let mut choice_rules = Vec::new();
    let mut constraints = Vec::new();
    for rule in &program.rules {
        match &rule.head {
            Some(AspHead::Atom(_)) => {
                if has_negation(&rule.body) {
                    return Err(SolveError::UnsupportedRuleForm(format!(
                        "negation outside a constraint in `{rule}`"
                    )));
                }
                core.push(rule.clone());
            }
            Some(AspHead::Choice(choice)) => {
                if has_negation(&rule.body)
                    || matches!(choice.condition, Some(AspLiteral::NegAtom(_)))
                {
                    return Err(SolveError::UnsupportedRuleForm(format!(
                        "negation in a choice rule in `{rule}`"
                    )));
                }
                choice_rules.push((choice.clone(), rule.body.clone()));
            }
            None => constraints.push(rule.clone()),
        }
    }

    let base = Grounder::new(&AspProgram::new(core))?;
    let core_store = base.closed_store(budget)?;

    // Candidate instances per choice rule, from body and condition matches
    // against the core model.
    let mut infos = Vec::with_capacity(choice_rules.len());
    for (choice, body) in &choice_rules {
        let mut literals = body.clone();
        if let Some(cond) = &choice.condition {
            literals.push(cond.clone());
        }
        let matches =
            satisfied_instantiations(&literals, &core_store, budget, budget.max_iterations)?;
        let mut candidates: IndexSet<GroundAtom> = IndexSet::new();
        for bindings in &matches {
            if let Some(atom) = instantiate_atom(&choice.template, bindings)? {
                candidates.insert(atom);
            }
        }
        let mut candidates: Vec<GroundAtom> = candidates.into_iter().collect();
        candidates.sort_by_key(GroundAtom::to_string);
        infos.push(ChoiceInfo { lower: choice.lower, upper: choice.upper, candidates });
    }

    // Admissible selections per rule: between lower and upper candidates.
    // An unmeetable lower bound leaves the selection list empty, which makes
    // the whole product empty.
    let mut per_rule: Vec<Vec<Vec<GroundAtom>>> = Vec::with_capacity(infos.len());
    for info in &infos {
        let n = info.candidates.len();
        let lo = info.lower as usize;
        let hi = (info.upper as usize).min(n);
        let mut selections = Vec::new();
        for k in lo..=hi {
            selections.extend(info.candidates.iter().cloned().combinations(k));
        }
        per_rule.push(selections);
    }

    let total: u128 = per_rule.iter().map(|s| s.len() as u128).product();
    if total > budget.max_iterations as u128 {
        return Err(SolveError::BudgetExceeded(format!(
            "{total} candidate selections exceed the cap of {}",
            budget.max_iterations
        )));
    }

    let mut models: Vec<AnswerSet> = Vec::new();
    let selections = if per_rule.is_empty() {
        vec![Vec::new()]
    } else {
        per_rule
            .iter()
            .multi_cartesian_product()
            .map(|rows| rows.into_iter().flatten().cloned().collect::<Vec<_>>())
            .collect()
    };

    'selection: for chosen in selections {
        // The core model is a fixpoint, so grounding continues from the
        // chosen atoms alone.
        let store = base.extend_closed(&core_store, &chosen, budget)?;

        // Cardinality bounds against the final model.
        for info in &infos {
            let count = info.candidates.iter().filter(|c| store.contains(c)).count() as u64;
            if count < info.lower || count > info.upper {
                continue 'selection;
            }
        }
        // No constraint body may have a satisfied instantiation.
        for constraint in &constraints {
            let violations = satisfied_instantiations(
                &constraint.body,
                &store,
                budget,
                budget.max_iterations,
            )?;
            if !violations.is_empty() {
                continue 'selection;
            }
        }
        let model = store.into_answer_set();
        if !models.contains(&model) {
            models.push(model);
        }
    }
    Ok(models)
}

/// Write the program to a file for an ASP-Core-2 system to solve.
pub fn export_for_external_solver(program: &AspProgram, path: &Path) -> io::Result<()> {
    std::fs::write(path, emit(program))
}

/// Parse a declaration of the form `name=lo..hi` (whitespace ignored).
pub fn parse_var_decl(text: &str) -> Result<VarDecl, SearchError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let invalid = || SearchError::InvalidDecl(text.trim().to_string());
    let (name, range) = compact.split_once('=').ok_or_else(invalid)?;
    let (lo, hi) = range.split_once("..").ok_or_else(invalid)?;
    let mut chars = name.chars();
    let head_ok = chars.next().is_some_and(|c| c.is_ascii_lowercase());
    if !head_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(invalid());
    }
    let lower: u64 = lo.parse().map_err(|_| invalid())?;
    let upper: u64 = hi.parse().map_err(|_| invalid())?;
    Ok(VarDecl::new(name, lower, upper))
}

/// Collect `#var name = lo..hi` declarations from the header comments of a
/// PCF source file.
pub fn header_decls(source: &str) -> Result<Vec<VarDecl>, SearchError> {
    let mut decls = Vec::new();
    for line in source.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("#var") {
            if rest.starts_with(char::is_whitespace) {
                decls.push(parse_var_decl(rest)?);
            }
        }
    }
    Ok(decls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::parse_program;
    use crate::pcf::parse_expr;
    use crate::transpile::translate;

    fn listing_program() -> AspProgram {
        parse_program(
            "p(1). p(2). p(3). p(4).\n1 {q(X) : p(X) } 2.\nr(X + Y) :- q(X), q(Y).\n:- not r(5).\n",
        )
        .unwrap()
    }

    #[test]
    fn single_variable_problem_translates_to_choice_and_result() {
        let problem = SearchProblem {
            expr: parse_expr("a").unwrap(),
            decls: vec![VarDecl::new("a", 1, 10)],
            require_zero: false,
        };
        let p = transpile_with_choices(&problem).unwrap();
        let lines: Vec<String> = p.rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(&lines[6..], &["1{a(X)}1:-X=1..10.", "result(A):-a(A)."]);
    }

    #[test]
    fn no_free_vars_degenerates_to_plain_translation() {
        let expr = parse_expr("succ 1").unwrap();
        let problem =
            SearchProblem { expr: expr.clone(), decls: vec![], require_zero: false };
        assert_eq!(transpile_with_choices(&problem).unwrap(), translate(&expr).unwrap());
    }

    #[test]
    fn require_zero_appends_the_constraint() {
        let problem = SearchProblem {
            expr: parse_expr("a").unwrap(),
            decls: vec![VarDecl::new("a", 0, 3)],
            require_zero: true,
        };
        let p = transpile_with_choices(&problem).unwrap();
        assert_eq!(p.rules.last().unwrap().to_string(), ":-not result(0).");
    }

    #[test]
    fn undeclared_free_variable_is_an_error() {
        let problem = SearchProblem {
            expr: parse_expr("succ a").unwrap(),
            decls: vec![],
            require_zero: false,
        };
        assert_eq!(
            transpile_with_choices(&problem).unwrap_err(),
            SearchError::UndeclaredFreeVariable("a".into())
        );
    }

    #[test]
    fn duplicate_and_reserved_names_are_errors() {
        let dup = SearchProblem {
            expr: parse_expr("a").unwrap(),
            decls: vec![VarDecl::new("a", 1, 2), VarDecl::new("a", 1, 3)],
            require_zero: false,
        };
        assert_eq!(transpile_with_choices(&dup).unwrap_err(), SearchError::DuplicateDecl("a".into()));

        let reserved = SearchProblem {
            expr: parse_expr("0").unwrap(),
            decls: vec![VarDecl::new("result", 1, 2)],
            require_zero: false,
        };
        assert_eq!(
            transpile_with_choices(&reserved).unwrap_err(),
            SearchError::ReservedName("result".into())
        );
    }

    #[test]
    fn listing_program_has_exactly_the_two_expected_models() {
        let models = solve_enumerative(&listing_program(), &GroundBudget::default()).unwrap();
        let lines: Vec<String> = models.iter().map(AnswerSet::display_line).collect();
        assert_eq!(
            lines,
            vec![
                "p(1) p(2) p(3) p(4) q(1) q(4) r(2) r(5) r(8)",
                "p(1) p(2) p(3) p(4) q(2) q(3) r(4) r(5) r(6)",
            ]
        );
    }

    #[test]
    fn singleton_choice_over_a_range_has_ten_models() {
        // Both the condition form and the body form pick exactly one value.
        for src in ["1 {p(X) : X = 1..10 } 1.", "1{p(X)}1 :- X=1..10."] {
            let p = parse_program(src).unwrap();
            let models = solve_enumerative(&p, &GroundBudget::default()).unwrap();
            assert_eq!(models.len(), 10, "{src}");
        }
    }

    #[test]
    fn pred_search_finds_the_single_root() {
        let problem = SearchProblem {
            expr: parse_expr("pred a").unwrap(),
            decls: vec![VarDecl::new("a", 1, 10)],
            require_zero: true,
        };
        let p = transpile_with_choices(&problem).unwrap();
        let models = solve_enumerative(&p, &GroundBudget::default()).unwrap();
        assert_eq!(models.len(), 1);
        let expected = GroundAtom::new("a", vec![AspTerm::number(1)]);
        assert!(models[0].contains(&expected));
        assert!(models[0].contains(&GroundAtom::new("result", vec![AspTerm::number(0)])));
    }

    #[test]
    fn negation_outside_constraints_is_unsupported() {
        let p = parse_program("p(1). q(X) :- p(X), not r(X).").unwrap();
        assert!(matches!(
            solve_enumerative(&p, &GroundBudget::default()),
            Err(SolveError::UnsupportedRuleForm(_))
        ));
    }

    #[test]
    fn unmet_lower_bound_means_no_models() {
        let p = parse_program("1 {q(X) : p(X)} 1.").unwrap(); // p is empty
        let models = solve_enumerative(&p, &GroundBudget::default()).unwrap();
        assert!(models.is_empty());
    }

    #[test]
    fn decl_parsing_accepts_spaces_and_rejects_garbage() {
        assert_eq!(parse_var_decl("a=1..10").unwrap(), VarDecl::new("a", 1, 10));
        assert_eq!(parse_var_decl(" a = 1 .. 10 ").unwrap(), VarDecl::new("a", 1, 10));
        assert!(parse_var_decl("a=1").is_err());
        assert!(parse_var_decl("A=1..2").is_err());
        assert!(parse_var_decl("=1..2").is_err());
        assert!(parse_var_decl("a=x..2").is_err());
    }

    #[test]
    fn header_decls_are_collected() {
        let src = "#var a = 1..10\n# plain comment\n#var b=2..3\nsucc a\n";
        assert_eq!(
            header_decls(src).unwrap(),
            vec![VarDecl::new("a", 1, 10), VarDecl::new("b", 2, 3)]
        );
    }

    #[test]
    fn export_writes_the_emitted_text() {
        let p = listing_program();
        let dir = std::env::temp_dir().join("pcf2asp-export-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.lp");
        export_for_external_solver(&p, &path).unwrap();
        let written = std::fs::read_to_string(&path).unwrap();
        assert_eq!(written, emit(&p));
        // The emitted subset parses back to the same program.
        assert_eq!(parse_program(&written).unwrap(), p);

        let empty = dir.join("empty.lp");
        export_for_external_solver(&AspProgram::default(), &empty).unwrap();
        assert_eq!(std::fs::read_to_string(&empty).unwrap(), "");
    }

    #[test]
    fn choice_variable_upcases_the_first_letter() {
        assert_eq!(choice_variable("a"), "A");
        assert_eq!(choice_variable("foo"), "Foo");
        assert_eq!(choice_variable("x0"), "X0");
    }

    #[test]
    fn fresh_variables_avoid_declared_names() {
        // A declaration named x0 maps to ASP variable X0; the supply skips it.
        let problem = SearchProblem {
            expr: parse_expr("succ x0").unwrap(),
            decls: vec![VarDecl::new("x0", 1, 2)],
            require_zero: false,
        };
        let p = transpile_with_choices(&problem).unwrap();
        let text = emit(&p);
        assert!(text.contains("result(X1):-x0(X0),inter((succ,X0),X1)."), "{text}");
    }
}
