//! Answer set solving for ground, discrete programs.
//!
//! The solver works on a compiled form of the program: atoms become dense
//! integer ids, choice rules `{a} :- body` become disjunctions
//! `a ; __not_a :- body` over a fresh complement atom, and every `#count`
//! aggregate is precompiled into its possible element tuples.
//!
//! Enumeration proceeds in three steps. First the deterministic closure of
//! the assumed facts under the definite rules (single head, purely positive
//! body) is computed; it is contained in every stable model. Second, the
//! remaining candidate atoms — head atoms not already forced — are
//! enumerated exhaustively, up to a configurable cap. Third, each candidate
//! interpretation is checked: it must satisfy every rule, and no proper
//! subset may satisfy the rules whose bodies it makes true (the reduct).
//! The subset search is a small DPLL over the positive remainder of the
//! reduct, which collapses to pure unit propagation on stratified programs.
//!
//! Aggregates are evaluated with respect to the candidate itself, both in
//! the model check and in the reduct, which handles their non-monotone
//! equality guard uniformly. Recursion through an aggregate — a condition
//! predicate that depends on the head it helps derive — is rejected at
//! compile time.

use crate::error::{Error, Result};
use crate::syntax::{
    AggGuard, AnswerSetCollection, Atom, BodyLit, Const, CountAgg, HybridProgram, Interpretation,
    Rule,
};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Default bound on the number of undetermined atoms a single solve may
/// enumerate over (2^24 candidate interpretations).
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// A fixed-width bit set over atom ids; doubles as the cache key for
/// sampled worlds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(bits: usize) -> Self {
        BitSet { words: vec![0; bits.div_ceil(64).max(1)] }
    }

    pub fn insert(&mut self, i: u32) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: u32) -> bool {
        (self.words[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, w)| {
            let w = *w;
            (0..64u32).filter(move |b| (w >> b) & 1 == 1).map(move |b| wi as u32 * 64 + b)
        })
    }
}

/// One compiled rule: disjunctive head, positive and negative body atoms,
/// and indices of its aggregates.
struct CRule {
    head: Vec<u32>,
    pos: Vec<u32>,
    neg: Vec<u32>,
    aggs: Vec<u32>,
    /// Single head, purely positive, aggregate-free: drives the closure.
    definite: bool,
}

/// A candidate element tuple of an aggregate: the atom ids its positive
/// conditions require and the ids its negated conditions forbid.
struct CTuple {
    pos: Vec<u32>,
    neg: Vec<u32>,
}

struct CAgg {
    tuples: Vec<CTuple>,
    guard: i64,
}

/// A compiled ground program, reusable across many fact assignments.
pub struct Solver {
    atoms: Vec<Atom>,
    index: HashMap<Atom, u32>,
    rules: Vec<CRule>,
    /// Desugared source rules, aligned with `rules`; kept for reducts.
    src_rules: Vec<Rule>,
    aggs: Vec<CAgg>,
    /// Atom ids of the probabilistic facts, in declaration order.
    fact_ids: Vec<u32>,
    /// Choice rules as (head id, complement id, rule index).
    choice: Vec<(u32, u32, usize)>,
    /// For each atom, the indices of the rules with it in the head.
    head_rules: Vec<Vec<u32>>,
    cap: usize,
}

impl Solver {
    /// Compile a ground, discretized program with the default enumeration
    /// cap. Panics if the program still contains variables, ranges, or
    /// continuous declarations; fails on comparison atoms, aggregates with
    /// unbound element variables, or recursion through an aggregate.
    pub fn new(prog: &HybridProgram) -> Result<Self> {
        Self::with_cap(prog, DEFAULT_ENUMERATION_CAP)
    }

    /// Like [`Solver::new`] with an explicit enumeration cap.
    pub fn with_cap(prog: &HybridProgram, cap: usize) -> Result<Self> {
        assert!(prog.continuous.is_empty(), "solver requires a discretized program");
        assert!(prog.is_ground(), "solver requires a ground program");
        check_aggregate_recursion(prog)?;

        let mut s = Solver {
            atoms: Vec::new(),
            index: HashMap::new(),
            rules: Vec::new(),
            src_rules: Vec::new(),
            aggs: Vec::new(),
            fact_ids: Vec::new(),
            choice: Vec::new(),
            head_rules: Vec::new(),
            cap,
        };
        for pf in &prog.prob_facts {
            let id = s.intern(&pf.atom);
            s.fact_ids.push(id);
        }
        let mut pending: Vec<CountAgg> = Vec::new();
        for rule in &prog.rules {
            let mut src = rule.clone();
            let mut c = CRule {
                head: Vec::new(),
                pos: Vec::new(),
                neg: Vec::new(),
                aggs: Vec::new(),
                definite: false,
            };
            for h in &rule.head {
                c.head.push(s.intern(h));
            }
            if rule.choice {
                let h = &rule.head[0];
                let complement = Atom::new(format!("__not_{}", h.pred), h.args.clone());
                let nid = s.intern(&complement);
                s.choice.push((c.head[0], nid, s.rules.len()));
                c.head.push(nid);
                src.choice = false;
                src.head.push(complement);
            }
            for lit in &rule.body {
                match lit {
                    BodyLit::Atom(a, false) => c.pos.push(s.intern(a)),
                    BodyLit::Atom(a, true) => c.neg.push(s.intern(a)),
                    BodyLit::Agg(g) => {
                        c.aggs.push(pending.len() as u32);
                        pending.push(g.clone());
                    }
                    BodyLit::Comp(_) => {
                        return Err(Error::IllegalComparison(
                            "comparison atoms must be discretized before solving".into(),
                        ))
                    }
                    BodyLit::Lin(_) => unreachable!("ground programs carry no linear literals"),
                }
            }
            c.definite =
                c.head.len() == 1 && c.neg.is_empty() && c.aggs.is_empty() && !rule.choice;
            s.rules.push(c);
            s.src_rules.push(src);
        }
        // The atom table is complete; aggregates can now be expanded into
        // their candidate tuples.
        for g in &pending {
            let compiled = s.compile_aggregate(g)?;
            s.aggs.push(compiled);
        }
        s.head_rules = vec![Vec::new(); s.atoms.len()];
        for (ri, r) in s.rules.iter().enumerate() {
            for &h in &r.head {
                s.head_rules[h as usize].push(ri as u32);
            }
        }
        Ok(s)
    }

    fn intern(&mut self, atom: &Atom) -> u32 {
        if let Some(&id) = self.index.get(atom) {
            return id;
        }
        let id = self.atoms.len() as u32;
        self.atoms.push(atom.clone());
        self.index.insert(atom.clone(), id);
        id
    }

    pub(crate) fn atom_id(&self, atom: &Atom) -> Option<u32> {
        self.index.get(atom).copied()
    }

    pub(crate) fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub(crate) fn fact_ids(&self) -> &[u32] {
        &self.fact_ids
    }

    /// Expand an aggregate into its candidate element tuples by joining the
    /// positive conditions against the atom table. Instances that the table
    /// does not contain can never become true and drop out here.
    fn compile_aggregate(&self, g: &CountAgg) -> Result<CAgg> {
        let guard = match g.guard {
            AggGuard::Int(n) => n,
            AggGuard::Var(_) => unreachable!("ground aggregates carry integer guards"),
        };
        for e in &g.elems {
            let positively_bound = g.cond.iter().any(|(a, neg)| {
                !neg && {
                    let mut vars = BTreeSet::new();
                    a.collect_vars(&mut vars);
                    vars.contains(e)
                }
            });
            if !positively_bound {
                return Err(Error::UnsafeRule {
                    var: e.clone(),
                    rule: format!("#count aggregate '{g}'"),
                });
            }
        }
        let mut bindings: Vec<BTreeMap<String, Const>> = vec![BTreeMap::new()];
        for (pattern, neg) in &g.cond {
            if *neg {
                continue;
            }
            let mut next = Vec::new();
            for binding in &bindings {
                for atom in &self.atoms {
                    let mut extended = binding.clone();
                    if match_pattern(pattern, atom, &mut extended) {
                        next.push(extended);
                    }
                }
            }
            bindings = next;
        }
        // Key tuples by their element valuation; the join may visit one
        // valuation several times.
        let mut tuples: BTreeMap<Vec<Const>, CTuple> = BTreeMap::new();
        'bind: for binding in bindings {
            let key: Vec<Const> = g.elems.iter().map(|e| binding[e].clone()).collect();
            if tuples.contains_key(&key) {
                continue;
            }
            let mut tuple = CTuple { pos: Vec::new(), neg: Vec::new() };
            for (pattern, neg) in &g.cond {
                let instance = instantiate_pattern(pattern, &binding);
                match (self.index.get(&instance), neg) {
                    (Some(&id), false) => tuple.pos.push(id),
                    // A positive condition no rule can derive: the tuple
                    // never counts.
                    (None, false) => continue 'bind,
                    (Some(&id), true) => tuple.neg.push(id),
                    // A negated condition over an underivable atom is
                    // always satisfied.
                    (None, true) => {}
                }
            }
            tuples.insert(key, tuple);
        }
        Ok(CAgg { tuples: tuples.into_values().collect(), guard })
    }

    fn eval_agg(&self, i: &BitSet, agg: u32) -> bool {
        let a = &self.aggs[agg as usize];
        let count = a
            .tuples
            .iter()
            .filter(|t| {
                t.pos.iter().all(|&p| i.contains(p)) && t.neg.iter().all(|&n| !i.contains(n))
            })
            .count() as i64;
        count == a.guard
    }

    fn body_true(&self, i: &BitSet, rule: &CRule) -> bool {
        rule.pos.iter().all(|&p| i.contains(p))
            && rule.neg.iter().all(|&n| !i.contains(n))
            && rule.aggs.iter().all(|&a| self.eval_agg(i, a))
    }

    /// All answer sets of the program under the given assumed-true atoms
    /// (typically a world: a subset of the probabilistic facts).
    pub(crate) fn answer_sets_ids(&self, assumed: &BitSet) -> Result<Vec<BitSet>> {
        let mut out = Vec::new();
        self.visit_answer_sets(assumed, &mut |i| {
            out.push(i.clone());
            true
        })?;
        Ok(out)
    }

    /// Stream the answer sets under the given assumptions to a visitor; a
    /// `false` return stops the enumeration early (used by the inference
    /// layers once a world's classification is settled).
    pub(crate) fn visit_answer_sets(
        &self,
        assumed: &BitSet,
        visitor: &mut dyn FnMut(&BitSet) -> bool,
    ) -> Result<()> {
        // Alternating closure. `t0` underapproximates the atoms contained
        // in every answer set: it grows by definite rules and by
        // single-head aggregate-free rules whose negated atoms turned out
        // underivable. `possible` overapproximates the union of all answer
        // sets: every head of a rule whose positive body is possible and
        // whose negated atoms are not already settled true. Each refines
        // the other until neither moves.
        let mut t0 = assumed.clone();
        let mut possible;
        loop {
            loop {
                let mut changed = false;
                for r in &self.rules {
                    if r.definite
                        && !t0.contains(r.head[0])
                        && r.pos.iter().all(|&p| t0.contains(p))
                    {
                        t0.insert(r.head[0]);
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            possible = t0.clone();
            loop {
                let mut changed = false;
                for r in &self.rules {
                    if r.neg.iter().all(|&n| !t0.contains(n))
                        && r.pos.iter().all(|&p| possible.contains(p))
                    {
                        for &h in &r.head {
                            if !possible.contains(h) {
                                possible.insert(h);
                                changed = true;
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            // Negation over underivable atoms is settled: such rules fire
            // in every answer set, so their heads join the certain core.
            let mut changed = false;
            for r in &self.rules {
                if r.head.len() == 1
                    && r.aggs.is_empty()
                    && !t0.contains(r.head[0])
                    && r.pos.iter().all(|&p| t0.contains(p))
                    && r.neg.iter().all(|&n| !possible.contains(n))
                {
                    t0.insert(r.head[0]);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        // Undetermined atoms: anything a live non-definite head could
        // still add. Atoms outside `possible` can never appear in an
        // answer set and are skipped outright.
        let mut free: Vec<u32> = Vec::new();
        let mut seen = BitSet::new(self.atoms.len());
        for r in &self.rules {
            for &h in &r.head {
                if !t0.contains(h) && !seen.contains(h) && possible.contains(h) {
                    seen.insert(h);
                    free.push(h);
                }
            }
        }
        let effective_cap = self.cap.min(63);
        if free.len() > effective_cap {
            return Err(Error::EnumerationCapExceeded { atoms: free.len(), cap: effective_cap });
        }
        for mask in 0u64..(1u64 << free.len()) {
            let mut candidate = t0.clone();
            for (bit, &atom) in free.iter().enumerate() {
                if (mask >> bit) & 1 == 1 {
                    candidate.insert(atom);
                }
            }
            if self.check_stable_ids(&candidate, assumed) && !visitor(&candidate) {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Stability of one interpretation: it must satisfy every rule, and no
    /// proper subset may satisfy the rules whose bodies it makes true.
    pub(crate) fn check_stable_ids(&self, i: &BitSet, assumed: &BitSet) -> bool {
        for r in &self.rules {
            if self.body_true(i, r) && !r.head.iter().any(|&h| i.contains(h)) {
                return false;
            }
        }
        // Every member outside the assumptions needs a supporting rule:
        // true body and no other member sharing the head. An unsupported
        // atom could be dropped while still modelling the reduct, so such
        // interpretations are never stable; rejecting them here keeps the
        // expensive submodel search for the genuine near-misses.
        'member: for id in i.iter_ones() {
            if assumed.contains(id) {
                continue;
            }
            for &ri in &self.head_rules[id as usize] {
                let r = &self.rules[ri as usize];
                if self.body_true(i, r) && r.head.iter().all(|&h| h == id || !i.contains(h)) {
                    continue 'member;
                }
            }
            return false;
        }
        !self.has_proper_submodel(i, assumed)
    }

    /// Search for a proper subset of `i` that still models the reduct.
    ///
    /// In a rule whose body is true under `i`, every negated atom lies
    /// outside `i`, hence outside any subset, and its aggregates were
    /// already checked against `i`: both drop away and kept rules become
    /// positive clauses `¬b1 ∨ ... ∨ h1 ∨ ...` over members of `i`.
    fn has_proper_submodel(&self, i: &BitSet, assumed: &BitSet) -> bool {
        let members: Vec<u32> = i.iter_ones().collect();
        if members.is_empty() {
            return false;
        }
        let mut var_of = vec![usize::MAX; self.atoms.len()];
        for (v, &id) in members.iter().enumerate() {
            var_of[id as usize] = v;
        }
        // (variable, wanted polarity) literals.
        let mut clauses: Vec<Vec<(usize, bool)>> = Vec::new();
        for r in &self.rules {
            if !self.body_true(i, r) {
                continue;
            }
            let mut clause: Vec<(usize, bool)> =
                r.pos.iter().map(|&p| (var_of[p as usize], false)).collect();
            clause.extend(
                r.head
                    .iter()
                    .filter(|h| i.contains(**h))
                    .map(|&h| (var_of[h as usize], true)),
            );
            clauses.push(clause);
        }
        // A proper subset leaves out at least one member.
        clauses.push((0..members.len()).map(|v| (v, false)).collect());
        let mut assign: Vec<i8> = vec![-1; members.len()];
        // Assumed atoms act as facts of the world program: the reduct pins
        // them true, so no submodel may drop them.
        for id in assumed.iter_ones() {
            if var_of[id as usize] != usize::MAX {
                assign[var_of[id as usize]] = 1;
            }
        }
        self.submodel_dpll(&clauses, &mut assign)
    }

    fn submodel_dpll(&self, clauses: &[Vec<(usize, bool)>], assign: &mut Vec<i8>) -> bool {
        // Unit propagation to fixpoint.
        loop {
            let mut progress = false;
            for clause in clauses {
                let mut satisfied = false;
                let mut unassigned = None;
                let mut open = 0;
                for &(v, want) in clause {
                    match assign[v] {
                        -1 => {
                            open += 1;
                            unassigned = Some((v, want));
                        }
                        a => {
                            if (a == 1) == want {
                                satisfied = true;
                                break;
                            }
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match open {
                    0 => return false,
                    1 => {
                        let (v, want) = unassigned.expect("counted one open literal");
                        assign[v] = want as i8;
                        progress = true;
                    }
                    _ => {}
                }
            }
            if !progress {
                break;
            }
        }
        match assign.iter().position(|&a| a == -1) {
            None => true,
            Some(v) => {
                // Prefer the smaller model: try leaving the atom out first.
                for value in [0, 1] {
                    let mut next = assign.clone();
                    next[v] = value;
                    if self.submodel_dpll(clauses, &mut next) {
                        return true;
                    }
                }
                false
            }
        }
    }

    /// Map an interpretation over source atoms into the id space, extending
    /// choice rules with their complement atoms. `None` when it contains an
    /// atom the program cannot derive (hence cannot be stable).
    fn lift(&self, i: &Interpretation) -> Option<BitSet> {
        let mut bits = BitSet::new(self.atoms.len());
        for atom in i {
            bits.insert(self.atom_id(atom)?);
        }
        for &(head, complement, rule) in &self.choice {
            if self.body_true(&bits, &self.rules[rule]) && !bits.contains(head) {
                bits.insert(complement);
            }
        }
        Some(bits)
    }
}

/// Check a pattern atom (constants and local variables) against a ground
/// atom, extending the binding consistently.
fn match_pattern(pattern: &Atom, atom: &Atom, binding: &mut BTreeMap<String, Const>) -> bool {
    use crate::syntax::Term;
    if pattern.pred != atom.pred || pattern.args.len() != atom.args.len() {
        return false;
    }
    for (p, a) in pattern.args.iter().zip(&atom.args) {
        let Term::Const(value) = a else { return false };
        match p {
            Term::Const(c) => {
                if c != value {
                    return false;
                }
            }
            Term::Var(v) => match binding.get(v) {
                Some(bound) => {
                    if bound != value {
                        return false;
                    }
                }
                None => {
                    binding.insert(v.clone(), value.clone());
                }
            },
            _ => return false,
        }
    }
    true
}

fn instantiate_pattern(pattern: &Atom, binding: &BTreeMap<String, Const>) -> Atom {
    use crate::syntax::Term;
    let args = pattern
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) => Term::Const(binding[v].clone()),
            other => other.clone(),
        })
        .collect();
    Atom { pred: pattern.pred.clone(), args }
}

/// Reject recursion through aggregates: a condition predicate must not
/// depend, transitively, on a head the aggregate's rule derives.
fn check_aggregate_recursion(prog: &HybridProgram) -> Result<()> {
    let mut edges: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for rule in &prog.rules {
        for h in &rule.head {
            let out = edges.entry(h.pred.as_str()).or_default();
            for lit in &rule.body {
                match lit {
                    BodyLit::Atom(a, _) => {
                        out.insert(a.pred.as_str());
                    }
                    BodyLit::Agg(g) => {
                        for (a, _) in &g.cond {
                            out.insert(a.pred.as_str());
                        }
                    }
                    BodyLit::Comp(_) | BodyLit::Lin(_) => {}
                }
            }
        }
    }
    let reaches = |from: &str, to: &str| -> bool {
        let mut stack = vec![from];
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        while let Some(p) = stack.pop() {
            if p == to {
                return true;
            }
            if seen.insert(p) {
                if let Some(next) = edges.get(p) {
                    stack.extend(next.iter().copied());
                }
            }
        }
        false
    };
    for rule in &prog.rules {
        for lit in &rule.body {
            if let BodyLit::Agg(g) = lit {
                for (cond, _) in &g.cond {
                    for h in &rule.head {
                        if reaches(cond.pred.as_str(), h.pred.as_str()) {
                            return Err(Error::AggregateRecursion(cond.pred.clone()));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// All answer sets of the rule part of a ground program. The fresh
/// complement atoms introduced by choice-rule desugaring are stripped;
/// every other atom, including solver-introduced interval facts in a
/// discretized program, is reported. Probabilistic fact declarations are
/// exogenous and treated as absent here; use the exact or sampling layers
/// for their probabilistic semantics.
pub fn answer_sets(prog: &HybridProgram) -> Result<AnswerSetCollection> {
    answer_sets_with_cap(prog, DEFAULT_ENUMERATION_CAP)
}

/// Like [`answer_sets`] with an explicit enumeration cap.
pub fn answer_sets_with_cap(prog: &HybridProgram, cap: usize) -> Result<AnswerSetCollection> {
    let solver = Solver::with_cap(prog, cap)?;
    let empty = BitSet::new(solver.atom_count());
    let sets = solver.answer_sets_ids(&empty)?;
    let visible: BTreeSet<Interpretation> = sets
        .iter()
        .map(|s| {
            s.iter_ones()
                .map(|id| solver.atoms[id as usize].clone())
                .filter(|a| !a.pred.starts_with("__not_"))
                .collect()
        })
        .collect();
    Ok(visible.into_iter().collect())
}

/// Rewrite every probabilistic fact into a choice rule, dropping the
/// probabilities. The answer sets of the result range over every world of
/// the original program, which makes qualitative checks (such as listing
/// the possible joint states) independent of the numeric layer.
pub fn to_choice_program(prog: &HybridProgram) -> HybridProgram {
    let choices = prog.prob_facts.iter().map(|f| Rule {
        head: vec![f.atom.clone()],
        choice: true,
        body: Vec::new(),
    });
    HybridProgram {
        prob_facts: Vec::new(),
        continuous: prog.continuous.clone(),
        rules: choices.chain(prog.rules.iter().cloned()).collect(),
    }
}

/// The answer sets projected onto a set of atoms, deduplicated and sorted.
pub fn projected_answer_sets(
    prog: &HybridProgram,
    onto: &[Atom],
) -> Result<AnswerSetCollection> {
    let target: BTreeSet<&Atom> = onto.iter().collect();
    let projected: BTreeSet<Interpretation> = answer_sets(prog)?
        .into_iter()
        .map(|i| i.into_iter().filter(|a| target.contains(a)).collect())
        .collect();
    Ok(projected.into_iter().collect())
}

/// Whether `i` (over visible atoms) is a stable model of the rule part.
pub fn is_stable_model(prog: &HybridProgram, i: &Interpretation) -> Result<bool> {
    let solver = Solver::new(prog)?;
    let no_facts = BitSet::new(solver.atom_count());
    Ok(match solver.lift(i) {
        Some(bits) => solver.check_stable_ids(&bits, &no_facts),
        None => false,
    })
}

/// The reduct of the program with respect to `i`: the rules whose body `i`
/// satisfies, as a positive program — negative literals and aggregates
/// were checked against `i` and are removed — with choice rules in their
/// expanded disjunctive form.
pub fn reduct(prog: &HybridProgram, i: &Interpretation) -> Result<Vec<Rule>> {
    let solver = Solver::new(prog)?;
    let Some(bits) = solver.lift(i) else { return Ok(Vec::new()) };
    Ok(solver
        .rules
        .iter()
        .zip(&solver.src_rules)
        .filter(|(c, _)| solver.body_true(&bits, c))
        .map(|(_, src)| Rule {
            head: src.head.clone(),
            choice: false,
            body: src
                .body
                .iter()
                .filter(|l| matches!(l, BodyLit::Atom(_, false)))
                .cloned()
                .collect(),
        })
        .collect())
}

/// Evaluate a ground `#count` aggregate against an interpretation: the
/// number of distinct element tuples whose positive conditions all hold
/// in `i` and whose negated conditions all fail.
pub fn evaluate_aggregate(agg: &CountAgg, i: &Interpretation) -> i64 {
    let mut bindings: Vec<BTreeMap<String, Const>> = vec![BTreeMap::new()];
    for (pattern, neg) in &agg.cond {
        if *neg {
            continue;
        }
        let mut next = Vec::new();
        for binding in &bindings {
            for atom in i {
                let mut extended = binding.clone();
                if match_pattern(pattern, atom, &mut extended) {
                    next.push(extended);
                }
            }
        }
        bindings = next;
    }
    let mut counted: BTreeSet<Vec<Const>> = BTreeSet::new();
    'bind: for binding in bindings {
        let key: Vec<Const> = agg.elems.iter().map(|e| binding[e].clone()).collect();
        if counted.contains(&key) {
            continue;
        }
        for (pattern, neg) in &agg.cond {
            let instance = instantiate_pattern(pattern, &binding);
            if i.contains(&instance) == *neg {
                continue 'bind;
            }
        }
        counted.insert(key);
    }
    counted.len() as i64
}
