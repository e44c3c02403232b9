//! Bottom-up grounding of positive programs.
//!
//! The grounder starts from the empty atom set and repeatedly instantiates
//! rules whose positive bodies match already-derived atoms, adding the
//! instantiated heads, until nothing new appears. For the positive fragment
//! the translation emits, this least fixpoint is the unique answer set.
//!
//! Evaluation is semi-naive: each round only considers instantiations that
//! use at least one atom derived in the previous round, by pivoting every
//! body atom over the delta in turn. Atoms are indexed by predicate and
//! arity with a bucket per first argument, since the generated programs key
//! almost everything on tuple first components.
//!
//! Comparisons and interval literals are checked once their variables are
//! bound; body literals are reordered up front so that arithmetic inside an
//! atom pattern only has to be evaluated, never inverted. `<`/`>` on
//! non-numbers and arithmetic over non-numbers are undefined and simply
//! drop the instantiation.

use std::borrow::Cow;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexSet;

use crate::asp::{
    check_safety, ArithOp, AspAtom, AspHead, AspLiteral, AspProgram, AspRule, AspTerm, CmpOp,
};

/// Caps on grounding work; divergent programs are cut off, not detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundBudget {
    pub max_atoms: usize,
    pub max_iterations: usize,
}

impl GroundBudget {
    pub const DEFAULT_MAX_ATOMS: usize = 1_000_000;
    pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;

    pub fn new(max_atoms: usize, max_iterations: usize) -> GroundBudget {
        GroundBudget { max_atoms, max_iterations }
    }
}

impl Default for GroundBudget {
    fn default() -> Self {
        GroundBudget {
            max_atoms: Self::DEFAULT_MAX_ATOMS,
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// A predicate over variable-free terms with all arithmetic evaluated away.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<AspTerm>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<AspTerm>) -> GroundAtom {
        let atom = GroundAtom { predicate: predicate.into(), args };
        debug_assert!(atom.args.iter().all(AspTerm::is_ground));
        atom
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", AspAtom::new(self.predicate.clone(), self.args.clone()))
    }
}

/// A set of ground atoms. Equality is set equality; printing is
/// space-separated atoms in lexicographic order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnswerSet {
    atoms: IndexSet<GroundAtom>,
}

impl AnswerSet {
    pub fn from_atoms(atoms: impl IntoIterator<Item = GroundAtom>) -> AnswerSet {
        AnswerSet { atoms: atoms.into_iter().collect() }
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroundAtom> {
        self.atoms.iter()
    }

    pub fn sorted_atom_strings(&self) -> Vec<String> {
        let mut out: Vec<String> = self.atoms.iter().map(GroundAtom::to_string).collect();
        out.sort();
        out
    }

    /// The canonical one-line rendering.
    pub fn display_line(&self) -> String {
        self.sorted_atom_strings().join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroundError {
    #[error("grounding budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unsafe rule `{rule}`: unbound variables {vars:?}")]
    UnsafeRule { rule: String, vars: Vec<String> },
    #[error("comparison or arithmetic over unbound variable in `{0}`")]
    UnboundComparison(String),
    #[error("not a positive program: `{0}`")]
    NonPositiveProgram(String),
    #[error("arithmetic overflow while grounding")]
    ArithmeticOverflow,
}

// ---------------------------------------------------------------------------
// Bindings and term evaluation

/// Variable bindings as a backtrackable stack. Names borrow from rule
/// patterns and values usually borrow from stored atoms, so matching does
/// not allocate.
#[derive(Debug, Default)]
struct Bindings<'a> {
    stack: Vec<(&'a str, Cow<'a, AspTerm>)>,
}

impl<'a> Bindings<'a> {
    fn get(&self, name: &str) -> Option<&AspTerm> {
        self.stack.iter().rev().find(|(n, _)| *n == name).map(|(_, t)| t.as_ref())
    }

    fn mark(&self) -> usize {
        self.stack.len()
    }

    fn undo(&mut self, mark: usize) {
        self.stack.truncate(mark);
    }

    fn bind(&mut self, name: &'a str, term: Cow<'a, AspTerm>) {
        self.stack.push((name, term));
    }

    fn snapshot(&self) -> Vec<(String, AspTerm)> {
        self.stack.iter().map(|(n, t)| (n.to_string(), t.clone().into_owned())).collect()
    }
}

fn arith(op: ArithOp, l: i64, r: i64) -> Result<i64, GroundError> {
    match op {
        ArithOp::Add => l.checked_add(r),
        ArithOp::Sub => l.checked_sub(r),
    }
    .ok_or(GroundError::ArithmeticOverflow)
}

/// Substitute bindings and evaluate arithmetic. `Ok(None)` means the term is
/// undefined (arithmetic over a non-number); unbound variables are an
/// internal error because planning guarantees boundness.
fn eval_term(term: &AspTerm, b: &Bindings<'_>) -> Result<Option<AspTerm>, GroundError> {
    match term {
        AspTerm::Number(n) => Ok(Some(AspTerm::Number(*n))),
        AspTerm::Variable(v) => match b.get(v) {
            Some(t) => Ok(Some(t.clone())),
            None => Err(GroundError::UnboundComparison(term.to_string())),
        },
        AspTerm::Const(name, args) => {
            let mut out = Vec::with_capacity(args.len());
            for a in args {
                match eval_term(a, b)? {
                    Some(t) => out.push(t),
                    None => return Ok(None),
                }
            }
            Ok(Some(AspTerm::Const(name.clone(), out)))
        }
        AspTerm::Tuple(items) => {
            let mut out = Vec::with_capacity(items.len());
            for a in items {
                match eval_term(a, b)? {
                    Some(t) => out.push(t),
                    None => return Ok(None),
                }
            }
            Ok(Some(AspTerm::Tuple(out)))
        }
        AspTerm::Arith(op, l, r) => {
            let (l, r) = match (eval_term(l, b)?, eval_term(r, b)?) {
                (Some(l), Some(r)) => (l, r),
                _ => return Ok(None),
            };
            match (l, r) {
                (AspTerm::Number(l), AspTerm::Number(r)) => {
                    Ok(Some(AspTerm::Number(arith(*op, l, r)?)))
                }
                _ => Ok(None),
            }
        }
    }
}

/// One-way matching of a pattern against a ground term, extending bindings.
fn match_term<'a>(
    pat: &'a AspTerm,
    ground: &'a AspTerm,
    b: &mut Bindings<'a>,
) -> Result<bool, GroundError> {
    match pat {
        AspTerm::Number(n) => Ok(matches!(ground, AspTerm::Number(m) if m == n)),
        AspTerm::Variable(v) => match b.get(v) {
            Some(bound) => Ok(bound == ground),
            None => {
                b.bind(v, Cow::Borrowed(ground));
                Ok(true)
            }
        },
        AspTerm::Const(name, args) => match ground {
            AspTerm::Const(gname, gargs) if gname == name && gargs.len() == args.len() => {
                for (p, g) in args.iter().zip(gargs) {
                    if !match_term(p, g, b)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        },
        AspTerm::Tuple(items) => match ground {
            AspTerm::Tuple(gitems) if gitems.len() == items.len() => {
                for (p, g) in items.iter().zip(gitems) {
                    if !match_term(p, g, b)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        },
        AspTerm::Arith(..) => match eval_term(pat, b)? {
            Some(value) => Ok(value == *ground),
            None => Ok(false),
        },
    }
}

/// Comparison on ground terms. `=`/`!=` are structural; `<`/`>` are defined
/// on numbers only and are false elsewhere.
fn compare(op: CmpOp, l: &AspTerm, r: &AspTerm) -> bool {
    match op {
        CmpOp::Eq => l == r,
        CmpOp::Neq => l != r,
        CmpOp::Lt | CmpOp::Gt => match (l, r) {
            (AspTerm::Number(l), AspTerm::Number(r)) => {
                if op == CmpOp::Lt {
                    l < r
                } else {
                    l > r
                }
            }
            _ => false,
        },
    }
}

// ---------------------------------------------------------------------------
// Join plans

#[derive(Debug, Clone)]
enum JoinItem {
    /// A positive body atom; `canon` is its position among the rule's body
    /// atoms in source order, which the semi-naive ranges key on.
    Atom { pattern: AspAtom, canon: usize },
    Neg(AspAtom),
    Range { term: AspTerm, lo: AspTerm, hi: AspTerm },
    Cmp(CmpOp, AspTerm, AspTerm),
}

fn term_vars(t: &AspTerm) -> Vec<String> {
    let mut out = Vec::new();
    t.collect_vars(&mut out);
    out
}

/// Variables an atom pattern needs pre-bound: those under arithmetic.
fn atom_arith_vars(a: &AspAtom) -> Vec<String> {
    fn walk(t: &AspTerm, out: &mut Vec<String>) {
        match t {
            AspTerm::Arith(..) => t.collect_vars(out),
            AspTerm::Const(_, args) | AspTerm::Tuple(args) => {
                args.iter().for_each(|t| walk(t, out));
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    a.args.iter().for_each(|t| walk(t, &mut out));
    out
}

/// Order body literals so every literal's inputs are bound when reached.
/// Positive atoms bind their matchable variables; interval literals bind
/// their variable once the bounds are bound. When `pivot` names a body-atom
/// position whose pattern is arithmetic-free, that atom is joined first, so
/// a failing delta match cuts the whole instantiation off immediately.
fn plan_literals(
    body: &[AspLiteral],
    allow_neg: bool,
    pivot: Option<usize>,
    rule_text: &str,
) -> Result<Vec<JoinItem>, GroundError> {
    let mut canon = 0usize;
    let mut pending: Vec<(&AspLiteral, usize)> = body
        .iter()
        .map(|lit| {
            let tagged = (lit, canon);
            if matches!(lit, AspLiteral::Atom(_)) {
                canon += 1;
            }
            tagged
        })
        .collect();
    let mut bound: BTreeSet<String> = BTreeSet::new();
    let mut items = Vec::with_capacity(body.len());

    if let Some(p) = pivot {
        let idx = pending
            .iter()
            .position(|(lit, c)| *c == p && matches!(lit, AspLiteral::Atom(_)))
            .expect("pivot position exists");
        if let (AspLiteral::Atom(a), c) = pending[idx] {
            if atom_arith_vars(a).is_empty() {
                let mut vars = Vec::new();
                a.collect_vars(&mut vars);
                bound.extend(vars);
                items.push(JoinItem::Atom { pattern: a.clone(), canon: c });
                pending.remove(idx);
            }
        }
    }

    while !pending.is_empty() {
        let ready = pending.iter().position(|(lit, _)| match lit {
            AspLiteral::Atom(a) => atom_arith_vars(a).iter().all(|v| bound.contains(v)),
            AspLiteral::NegAtom(a) => {
                let mut vars = Vec::new();
                a.collect_vars(&mut vars);
                vars.iter().all(|v| bound.contains(v))
            }
            AspLiteral::Comparison(_, l, r) => {
                term_vars(l).iter().chain(term_vars(r).iter()).all(|v| bound.contains(v))
            }
            AspLiteral::Range { term, lo, hi } => {
                let bounds_ok =
                    term_vars(lo).iter().chain(term_vars(hi).iter()).all(|v| bound.contains(v));
                match term {
                    AspTerm::Variable(_) => bounds_ok,
                    other => bounds_ok && term_vars(other).iter().all(|v| bound.contains(v)),
                }
            }
        });
        let Some(idx) = ready else {
            let mut vars: Vec<String> = pending
                .iter()
                .flat_map(|(lit, _)| {
                    let mut v = Vec::new();
                    lit.collect_vars(&mut v);
                    v
                })
                .filter(|v| !bound.contains(v))
                .collect();
            vars.sort();
            vars.dedup();
            return Err(GroundError::UnsafeRule { rule: rule_text.to_string(), vars });
        };
        let (lit, c) = pending.remove(idx);
        match lit {
            AspLiteral::Atom(a) => {
                let mut vars = Vec::new();
                a.collect_vars(&mut vars);
                bound.extend(vars);
                items.push(JoinItem::Atom { pattern: a.clone(), canon: c });
            }
            AspLiteral::NegAtom(a) => {
                if !allow_neg {
                    return Err(GroundError::NonPositiveProgram(rule_text.to_string()));
                }
                items.push(JoinItem::Neg(a.clone()));
            }
            AspLiteral::Comparison(op, l, r) => {
                items.push(JoinItem::Cmp(*op, l.clone(), r.clone()));
            }
            AspLiteral::Range { term, lo, hi } => {
                if let AspTerm::Variable(v) = term {
                    bound.insert(v.clone());
                }
                items.push(JoinItem::Range { term: term.clone(), lo: lo.clone(), hi: hi.clone() });
            }
        }
    }
    Ok(items)
}

#[derive(Debug, Clone)]
struct RulePlan {
    head: AspAtom,
    /// Join order with no pivot preference (facts, full evaluation).
    base_items: Vec<JoinItem>,
    /// One join order per body-atom position, that atom fronted when its
    /// pattern allows it.
    pivot_items: Vec<Vec<JoinItem>>,
}

// ---------------------------------------------------------------------------
// Atom store with (predicate, arity) and first-argument indexing

#[derive(Debug, Clone, Default)]
struct PredIndex {
    all: Vec<usize>,
    by_first: HashMap<AspTerm, Vec<usize>>,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Store {
    atoms: IndexSet<GroundAtom>,
    /// predicate name -> arity -> occurrence indices
    index: HashMap<String, HashMap<usize, PredIndex>>,
}

impl Store {
    pub(crate) fn into_answer_set(self) -> AnswerSet {
        AnswerSet { atoms: self.atoms }
    }

    pub(crate) fn contains(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    fn len(&self) -> usize {
        self.atoms.len()
    }

    fn insert(&mut self, atom: GroundAtom) -> bool {
        let name = atom.predicate.clone();
        let arity = atom.args.len();
        let first = atom.args.first().cloned();
        let (idx, new) = self.atoms.insert_full(atom);
        if new {
            let entry = self.index.entry(name).or_default().entry(arity).or_default();
            entry.all.push(idx);
            if let Some(first) = first {
                entry.by_first.entry(first).or_default().push(idx);
            }
        }
        new
    }

    fn atom(&self, idx: usize) -> &GroundAtom {
        self.atoms.get_index(idx).expect("index in range")
    }

    /// Candidate indices for a pattern, narrowed by the first argument when
    /// it is ground under the current bindings.
    fn candidates(&self, pattern: &AspAtom, b: &Bindings<'_>) -> Result<&[usize], GroundError> {
        let Some(pred) = self
            .index
            .get(pattern.predicate.as_str())
            .and_then(|by_arity| by_arity.get(&pattern.args.len()))
        else {
            return Ok(&[]);
        };
        if let Some(first) = pattern.args.first() {
            let fully_bound = term_vars(first).iter().all(|v| b.get(v).is_some());
            if fully_bound {
                return match eval_term(first, b)? {
                    Some(key) => Ok(pred.by_first.get(&key).map_or(&[], Vec::as_slice)),
                    None => Ok(&[]),
                };
            }
        }
        Ok(&pred.all)
    }
}

// ---------------------------------------------------------------------------
// Joining

struct Join<'a> {
    store: &'a Store,
    items: &'a [JoinItem],
    /// Semi-naive pivot: the body atom with this canonical position must
    /// match the atom at `pivot_index` exactly; atoms at earlier canonical
    /// positions stay strictly below it, later ones are unrestricted.
    /// `None` disables pivoting.
    pivot: Option<usize>,
    pivot_index: usize,
    end: usize,
    budget: &'a GroundBudget,
}

impl<'a> Join<'a> {
    fn match_at(
        &self,
        idx: usize,
        pattern: &'a AspAtom,
        item_idx: usize,
        bindings: &mut Bindings<'a>,
        on_match: &mut dyn FnMut(&Bindings<'a>) -> Result<(), GroundError>,
    ) -> Result<(), GroundError> {
        let mark = bindings.mark();
        let ground = self.store.atom(idx);
        let mut matched = true;
        for (p, g) in pattern.args.iter().zip(&ground.args) {
            if !match_term(p, g, bindings)? {
                matched = false;
                break;
            }
        }
        if matched {
            self.run(item_idx + 1, bindings, on_match)?;
        }
        bindings.undo(mark);
        Ok(())
    }

    fn run(
        &self,
        item_idx: usize,
        bindings: &mut Bindings<'a>,
        on_match: &mut dyn FnMut(&Bindings<'a>) -> Result<(), GroundError>,
    ) -> Result<(), GroundError> {
        let Some(item) = self.items.get(item_idx) else {
            return on_match(bindings);
        };
        match item {
            JoinItem::Atom { pattern, canon } => {
                match self.pivot {
                    // The pivot position matches the pivot atom and nothing
                    // else; its predicate and arity were checked up front.
                    Some(p) if *canon == p => {
                        self.match_at(self.pivot_index, pattern, item_idx, bindings, on_match)?;
                    }
                    // Canonically earlier atoms stay strictly below the
                    // pivot so each instantiation is found exactly once.
                    Some(p) if *canon < p => {
                        let candidates = self.store.candidates(pattern, bindings)?;
                        for &idx in candidates {
                            if idx < self.pivot_index {
                                self.match_at(idx, pattern, item_idx, bindings, on_match)?;
                            }
                        }
                    }
                    _ => {
                        let candidates = self.store.candidates(pattern, bindings)?;
                        for &idx in candidates {
                            if idx < self.end {
                                self.match_at(idx, pattern, item_idx, bindings, on_match)?;
                            }
                        }
                    }
                }
                Ok(())
            }
            JoinItem::Neg(atom) => {
                let mut args = Vec::with_capacity(atom.args.len());
                let mut undefined = false;
                for arg in &atom.args {
                    match eval_term(arg, bindings)? {
                        Some(t) => args.push(t),
                        None => {
                            undefined = true;
                            break;
                        }
                    }
                }
                // An undefined atom cannot be in the model, so `not` holds.
                let holds = undefined || {
                    let ground = GroundAtom { predicate: atom.predicate.clone(), args };
                    !self.store.atoms.contains(&ground)
                };
                if holds {
                    self.run(item_idx + 1, bindings, on_match)?;
                }
                Ok(())
            }
            JoinItem::Cmp(op, l, r) => {
                let holds = match (eval_term(l, bindings)?, eval_term(r, bindings)?) {
                    (Some(l), Some(r)) => compare(*op, &l, &r),
                    _ => false,
                };
                if holds {
                    self.run(item_idx + 1, bindings, on_match)?;
                }
                Ok(())
            }
            JoinItem::Range { term, lo, hi } => {
                let (lo_v, hi_v) = match (eval_term(lo, bindings)?, eval_term(hi, bindings)?) {
                    (Some(AspTerm::Number(lo)), Some(AspTerm::Number(hi))) => (lo, hi),
                    _ => return Ok(()), // undefined bounds: no instances
                };
                match term {
                    AspTerm::Variable(v) if bindings.get(v).is_none() => {
                        if hi_v >= lo_v
                            && (hi_v - lo_v) as u128 >= self.budget.max_atoms as u128
                        {
                            return Err(GroundError::BudgetExceeded(format!(
                                "interval {lo_v}..{hi_v} is too wide"
                            )));
                        }
                        for value in lo_v..=hi_v {
                            let mark = bindings.mark();
                            bindings.bind(v, Cow::Owned(AspTerm::Number(value)));
                            self.run(item_idx + 1, bindings, on_match)?;
                            bindings.undo(mark);
                        }
                        Ok(())
                    }
                    other => {
                        let holds = match eval_term(other, bindings)? {
                            Some(AspTerm::Number(n)) => n >= lo_v && n <= hi_v,
                            _ => false,
                        };
                        if holds {
                            self.run(item_idx + 1, bindings, on_match)?;
                        }
                        Ok(())
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Grounder

/// A validated, planned positive program ready to be grounded, possibly
/// several times with different seed facts.
#[derive(Debug, Clone)]
pub struct Grounder {
    plans: Vec<RulePlan>,
    /// predicate name -> arity -> (plan, pivot position) pairs activated by
    /// a new atom of that shape.
    activation: HashMap<String, HashMap<usize, Vec<(usize, usize)>>>,
}

impl Grounder {
    pub fn new(program: &AspProgram) -> Result<Grounder, GroundError> {
        let mut plans = Vec::with_capacity(program.rules.len());
        let mut activation: HashMap<String, HashMap<usize, Vec<(usize, usize)>>> = HashMap::new();
        for rule in &program.rules {
            let head = match &rule.head {
                Some(AspHead::Atom(a)) => a.clone(),
                Some(AspHead::Choice(_)) | None => {
                    return Err(GroundError::NonPositiveProgram(rule.to_string()));
                }
            };
            let report = check_safety(rule);
            if !report.is_safe() {
                return Err(GroundError::UnsafeRule {
                    rule: rule.to_string(),
                    vars: report.unsafe_vars,
                });
            }
            let text = rule.to_string();
            let base_items = plan_literals(&rule.body, false, None, &text)?;
            let plan_idx = plans.len();
            let mut pivot_items = Vec::new();
            for lit in &rule.body {
                if let AspLiteral::Atom(a) = lit {
                    let canon = pivot_items.len();
                    activation
                        .entry(a.predicate.clone())
                        .or_default()
                        .entry(a.args.len())
                        .or_default()
                        .push((plan_idx, canon));
                    pivot_items.push(plan_literals(&rule.body, false, Some(canon), &text)?);
                }
            }
            plans.push(RulePlan { head, base_items, pivot_items });
        }
        Ok(Grounder { plans, activation })
    }

    /// Compute the least model containing the seed atoms.
    pub fn least_model(
        &self,
        seed: &[GroundAtom],
        budget: &GroundBudget,
    ) -> Result<AnswerSet, GroundError> {
        let mut store = Store::default();
        for atom in seed {
            check_atom_budget(store.len(), budget)?;
            store.insert(atom.clone());
        }
        self.close(&mut store, 0, budget)?;
        Ok(store.into_answer_set())
    }

    /// The least model from no seeds, kept in indexed form for reuse.
    pub(crate) fn closed_store(&self, budget: &GroundBudget) -> Result<Store, GroundError> {
        let mut store = Store::default();
        self.close(&mut store, 0, budget)?;
        Ok(store)
    }

    /// Extend a store that is already closed under this grounder's rules
    /// with extra facts, deriving only what the new atoms enable.
    pub(crate) fn extend_closed(
        &self,
        base: &Store,
        extra: &[GroundAtom],
        budget: &GroundBudget,
    ) -> Result<Store, GroundError> {
        let mut store = base.clone();
        let delta_from = store.len();
        for atom in extra {
            check_atom_budget(store.len(), budget)?;
            store.insert(atom.clone());
        }
        self.close(&mut store, delta_from, budget)?;
        Ok(store)
    }

    /// Run the fixpoint as a worklist: every atom from index `delta_from`
    /// on is processed once as the pivot of each rule position it can fill;
    /// freshly derived heads extend the store and the worklist. One budget
    /// iteration is one processed atom.
    fn close(
        &self,
        store: &mut Store,
        delta_from: usize,
        budget: &GroundBudget,
    ) -> Result<(), GroundError> {
        let mut buffer: Vec<GroundAtom> = Vec::new();
        if delta_from == 0 {
            // Rules whose bodies contain no atoms can only fire once.
            for plan in self.plans.iter().filter(|p| p.pivot_items.is_empty()) {
                self.fire(store, plan, None, 0, budget, &mut buffer)?;
            }
            for atom in buffer.drain(..) {
                check_atom_budget(store.len(), budget)?;
                store.insert(atom);
            }
        }

        let mut next = delta_from;
        let mut processed = 0usize;
        while next < store.len() {
            processed += 1;
            if processed > budget.max_iterations {
                return Err(GroundError::BudgetExceeded(format!(
                    "more than {} iterations",
                    budget.max_iterations
                )));
            }
            let activated = {
                let popped = store.atom(next);
                self.activation
                    .get(popped.predicate.as_str())
                    .and_then(|by_arity| by_arity.get(&popped.args.len()))
            };
            if let Some(pairs) = activated {
                for &(plan_idx, pivot) in pairs {
                    self.fire(store, &self.plans[plan_idx], Some(pivot), next, budget, &mut buffer)?;
                }
                for atom in buffer.drain(..) {
                    check_atom_budget(store.len(), budget)?;
                    store.insert(atom);
                }
            }
            next += 1;
        }
        Ok(())
    }

    fn fire(
        &self,
        store: &Store,
        plan: &RulePlan,
        pivot: Option<usize>,
        pivot_index: usize,
        budget: &GroundBudget,
        buffer: &mut Vec<GroundAtom>,
    ) -> Result<(), GroundError> {
        let items = match pivot {
            Some(p) => &plan.pivot_items[p],
            None => &plan.base_items,
        };
        let join = Join { store, items, pivot, pivot_index, end: store.len(), budget };
        let mut bindings = Bindings::default();
        join.run(0, &mut bindings, &mut |b| {
            let mut args = Vec::with_capacity(plan.head.args.len());
            for arg in &plan.head.args {
                match eval_term(arg, b)? {
                    Some(t) => args.push(t),
                    None => return Ok(()), // undefined arithmetic: no head
                }
            }
            let atom = GroundAtom { predicate: plan.head.predicate.clone(), args };
            if !store.atoms.contains(&atom) && !buffer.contains(&atom) {
                check_atom_budget(store.len() + buffer.len(), budget)?;
                buffer.push(atom);
            }
            Ok(())
        })
    }
}

fn check_atom_budget(current: usize, budget: &GroundBudget) -> Result<(), GroundError> {
    if current >= budget.max_atoms {
        return Err(GroundError::BudgetExceeded(format!("more than {} atoms", budget.max_atoms)));
    }
    Ok(())
}

/// Ground a positive program (atom heads, no negation) to its unique answer
/// set.
pub fn ground_positive(p: &AspProgram, budget: &GroundBudget) -> Result<AnswerSet, GroundError> {
    Grounder::new(p)?.least_model(&[], budget)
}

/// A saved substitution: variable names bound to ground terms.
pub(crate) type BindingList = Vec<(String, AspTerm)>;

/// All instantiations of `literals` satisfied by the atoms in `store`, as
/// variable bindings. Negative literals are allowed; used for choice-rule
/// candidates and constraint checking.
pub(crate) fn satisfied_instantiations(
    literals: &[AspLiteral],
    store: &Store,
    budget: &GroundBudget,
    limit: usize,
) -> Result<Vec<BindingList>, GroundError> {
    let probe = AspRule { head: None, body: literals.to_vec() }.to_string();
    let items = plan_literals(literals, true, None, &probe)?;
    let mut out = Vec::new();
    let join = Join {
        store,
        items: &items,
        pivot: None,
        pivot_index: 0,
        end: store.len(),
        budget,
    };
    let mut bindings = Bindings::default();
    join.run(0, &mut bindings, &mut |b| {
        if out.len() >= limit {
            return Err(GroundError::BudgetExceeded(format!("more than {limit} instantiations")));
        }
        out.push(b.snapshot());
        Ok(())
    })?;
    Ok(out)
}

/// Instantiate an atom under bindings produced by
/// [`satisfied_instantiations`]; `None` when arithmetic is undefined.
pub(crate) fn instantiate_atom(
    atom: &AspAtom,
    bindings: &[(String, AspTerm)],
) -> Result<Option<GroundAtom>, GroundError> {
    let b = Bindings {
        stack: bindings.iter().map(|(n, t)| (n.as_str(), Cow::Borrowed(t))).collect(),
    };
    let mut args = Vec::with_capacity(atom.args.len());
    for arg in &atom.args {
        match eval_term(arg, &b)? {
            Some(t) => args.push(t),
            None => return Ok(None),
        }
    }
    Ok(Some(GroundAtom { predicate: atom.predicate.clone(), args }))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResultError {
    #[error("multiple result atoms: {0:?}")]
    Ambiguous(Vec<String>),
    #[error("result argument is not a number: {0}")]
    NonNumeric(String),
}

/// Read the program's value out of an answer set: `Some(n)` for exactly one
/// `result(n)`, `None` when no result atom was derived.
pub fn extract_result(answer: &AnswerSet) -> Result<Option<i64>, ResultError> {
    let results: Vec<&GroundAtom> = answer.iter().filter(|a| a.predicate == "result").collect();
    match results.as_slice() {
        [] => Ok(None),
        [single] => match single.args.as_slice() {
            [AspTerm::Number(n)] => Ok(Some(*n)),
            _ => Err(ResultError::NonNumeric(single.to_string())),
        },
        many => {
            let mut atoms: Vec<String> = many.iter().map(|a| a.to_string()).collect();
            atoms.sort();
            Err(ResultError::Ambiguous(atoms))
        }
    }
}
