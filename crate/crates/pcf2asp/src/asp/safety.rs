//! Rule safety: every variable must be bound by a positive body literal.
//!
//! A variable is covered when it occurs in a positive body atom at a
//! position matchable by one-way term matching (so not inside an arithmetic
//! subterm), or when it is assigned by an interval literal `V = lo..hi`.
//! Variables in heads, comparisons, negative literals and arithmetic all
//! need such a covering occurrence. For choice heads, the template and
//! condition variables may additionally be covered by the condition itself.

use std::collections::BTreeSet;

use super::{AspHead, AspLiteral, AspRule, AspTerm};

/// Outcome of a safety check; an empty list of unsafe variables means the
/// rule is safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyReport {
    pub unsafe_vars: Vec<String>,
}

impl SafetyReport {
    pub fn is_safe(&self) -> bool {
        self.unsafe_vars.is_empty()
    }
}

/// Variables at matchable positions: inside constants and tuples but not
/// below arithmetic.
fn matchable_vars(term: &AspTerm, out: &mut BTreeSet<String>) {
    match term {
        AspTerm::Number(_) => {}
        AspTerm::Variable(v) => {
            out.insert(v.clone());
        }
        AspTerm::Const(_, args) | AspTerm::Tuple(args) => {
            args.iter().for_each(|t| matchable_vars(t, out));
        }
        AspTerm::Arith(..) => {}
    }
}

fn all_vars(lit: &AspLiteral, out: &mut BTreeSet<String>) {
    let mut vars = Vec::new();
    lit.collect_vars(&mut vars);
    out.extend(vars);
}

/// Covering occurrences contributed by one positive literal.
fn covered_by(lit: &AspLiteral, out: &mut BTreeSet<String>) {
    match lit {
        AspLiteral::Atom(a) => a.args.iter().for_each(|t| matchable_vars(t, out)),
        AspLiteral::Range { term: AspTerm::Variable(v), .. } => {
            out.insert(v.clone());
        }
        _ => {}
    }
}

/// Check the safety of a single rule.
pub fn check_safety(rule: &AspRule) -> SafetyReport {
    let mut covered = BTreeSet::new();
    let mut needed = BTreeSet::new();

    for lit in &rule.body {
        covered_by(lit, &mut covered);
        all_vars(lit, &mut needed);
    }

    let mut unsafe_vars: BTreeSet<String> = BTreeSet::new();

    match &rule.head {
        None => {}
        Some(AspHead::Atom(a)) => {
            let mut vars = Vec::new();
            a.collect_vars(&mut vars);
            needed.extend(vars);
        }
        Some(AspHead::Choice(choice)) => {
            // Template and condition variables live in a local scope that the
            // condition can bind.
            let mut local_needed = BTreeSet::new();
            let mut vars = Vec::new();
            choice.template.collect_vars(&mut vars);
            local_needed.extend(vars);
            let mut local_covered = covered.clone();
            if let Some(cond) = &choice.condition {
                all_vars(cond, &mut local_needed);
                covered_by(cond, &mut local_covered);
            }
            unsafe_vars.extend(local_needed.difference(&local_covered).cloned());
        }
    }

    unsafe_vars.extend(needed.difference(&covered).cloned());
    SafetyReport { unsafe_vars: unsafe_vars.into_iter().collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::{parse_program, AspAtom, AspRule, ChoiceHead};

    fn first_rule(src: &str) -> AspRule {
        parse_program(src).unwrap().rules.remove(0)
    }

    #[test]
    fn countdown_rule_is_safe() {
        let r = first_rule("d(X-1) :- d(X), X > 0.");
        assert!(check_safety(&r).is_safe());
    }

    #[test]
    fn head_variable_without_binding_is_unsafe() {
        let r = first_rule("p(X) :- q(Y).");
        assert_eq!(check_safety(&r).unsafe_vars, vec!["X".to_string()]);
    }

    #[test]
    fn ground_constraint_is_safe() {
        let r = first_rule(":- not r(5).");
        assert!(check_safety(&r).is_safe());
    }

    #[test]
    fn negative_occurrence_does_not_cover() {
        let r = first_rule(":- not r(X).");
        assert_eq!(check_safety(&r).unsafe_vars, vec!["X".to_string()]);
    }

    #[test]
    fn comparison_does_not_cover() {
        let r = first_rule("p(X) :- X > 0.");
        assert_eq!(check_safety(&r).unsafe_vars, vec!["X".to_string()]);
    }

    #[test]
    fn arithmetic_inside_positive_atom_does_not_cover() {
        let r = first_rule("q(X) :- p(X+1).");
        assert_eq!(check_safety(&r).unsafe_vars, vec!["X".to_string()]);
        let bound = first_rule("q(X) :- p(X+1), r(X).");
        assert!(check_safety(&bound).is_safe());
    }

    #[test]
    fn range_assignment_covers_its_variable() {
        let r = first_rule("p(X) :- X = 1..10.");
        assert!(check_safety(&r).is_safe());
    }

    #[test]
    fn choice_template_covered_by_condition() {
        let r = first_rule("1 {q(X) : p(X)} 2.");
        assert!(check_safety(&r).is_safe());
        let free = AspRule::choice(
            ChoiceHead {
                lower: 1,
                upper: 2,
                template: AspAtom::new("q", vec![crate::asp::AspTerm::var("X")]),
                condition: None,
            },
            vec![],
        );
        assert_eq!(check_safety(&free).unsafe_vars, vec!["X".to_string()]);
    }

    #[test]
    fn choice_with_range_body_is_safe() {
        let r = first_rule("1{a(X)}1 :- X=1..10.");
        assert!(check_safety(&r).is_safe());
    }
}
