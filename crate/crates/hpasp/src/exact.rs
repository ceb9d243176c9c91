//! Exact credal inference by exhaustive world enumeration.
//!
//! A world assigns every probabilistic fact true or false; its probability
//! is the product of the matching fact probabilities. Solving the rule part
//! under a world classifies it for a query: if every answer set contains the
//! query the world's mass counts toward the lower and the upper bound, if
//! only some do it counts toward the upper bound alone, and worlds without
//! any answer set accumulate into a separately reported inconsistent mass.
//! Conditional bounds combine the same per-world classifications for the
//! joint events "query and evidence" and "complement and evidence".

use std::ops::Range;
use std::thread;

use crate::asp::{BitSet, Solver};
use crate::discretize::{discretize_with_evidence, DiscretizedProgram};
use crate::error::{Error, Result};
use crate::syntax::{Atom, Comparison, EvidenceLit, HybridProgram, Rule};

/// Default bound on the number of probabilistic facts the exact engine will
/// enumerate over (2^cap worlds).
pub const DEFAULT_WORLD_CAP: usize = 26;

/// A total choice over the probabilistic facts.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    /// Truth value per probabilistic fact, indexed in declaration order.
    pub assignment: Vec<bool>,
    /// Product of the chosen fact probabilities.
    pub probability: f64,
}

/// How a single world contributes to the credal bounds of a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorldClass {
    /// Satisfiable and the query holds in every answer set.
    LowerAndUpper,
    /// The query holds in at least one answer set but not in all of them.
    UpperOnly,
    /// Satisfiable but the query holds in no answer set.
    NoContribution,
    /// The world has no answer set at all.
    Unsatisfiable,
}

/// The outcome of an exact credal computation.
#[derive(Debug, Clone, Copy)]
pub struct CredalResult {
    pub lower: f64,
    pub upper: f64,
    /// Total probability of worlds without any answer set. Reported raw
    /// even when the bounds themselves are normalized.
    pub inconsistent_mass: f64,
    /// Whether the bounds were divided by `1 - inconsistent_mass`.
    pub normalized: bool,
    pub worlds_enumerated: u64,
}

/// Tunables for the exact engine.
#[derive(Debug, Clone, Copy)]
pub struct ExactOptions {
    /// Divide both bounds by the satisfiable mass.
    pub normalize: bool,
    /// Maximum number of probabilistic facts to enumerate over.
    pub world_cap: usize,
    /// Worker threads; worlds are split into contiguous chunks and the
    /// partial sums merged in chunk order, so results are reproducible for
    /// a fixed thread count.
    pub threads: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { normalize: false, world_cap: DEFAULT_WORLD_CAP, threads: 1 }
    }
}

/// Stream every world of a discretized program together with the ground
/// program it induces: the rules plus the facts chosen true. Worlds are
/// ordered lexicographically over the fact bit vector with the first
/// declared fact as the most significant bit, matching the row order of
/// the worked examples.
pub fn enumerate_worlds(
    dp: &DiscretizedProgram,
) -> Result<impl Iterator<Item = (World, HybridProgram)> + '_> {
    enumerate_worlds_with_cap(dp, DEFAULT_WORLD_CAP)
}

/// Like [`enumerate_worlds`] with an explicit cap on the fact count.
pub fn enumerate_worlds_with_cap(
    dp: &DiscretizedProgram,
    cap: usize,
) -> Result<impl Iterator<Item = (World, HybridProgram)> + '_> {
    let t = checked_fact_count(&dp.program, cap)?;
    Ok((0..world_count(t)).map(move |k| {
        let assignment: Vec<bool> = (0..t).map(|i| world_bit(k, t, i)).collect();
        let probability = world_probability(&dp.program, &assignment);
        let facts = dp
            .program
            .prob_facts
            .iter()
            .zip(&assignment)
            .filter(|(_, &chosen)| chosen)
            .map(|(f, _)| Rule { head: vec![f.atom.clone()], choice: false, body: Vec::new() });
        let program = HybridProgram {
            prob_facts: Vec::new(),
            continuous: Vec::new(),
            rules: facts.chain(dp.program.rules.iter().cloned()).collect(),
        };
        (World { assignment, probability }, program)
    }))
}

/// Classify one world's ground program with respect to a query atom.
pub fn classify_world(world_program: &HybridProgram, query: &Atom) -> Result<WorldClass> {
    let solver = Solver::new(world_program)?;
    let qid = solver.atom_id(query);
    let empty = BitSet::new(solver.atom_count());
    let mut any = false;
    let mut all_q = true;
    let mut some_q = false;
    solver.visit_answer_sets(&empty, &mut |i| {
        any = true;
        let q = qid.is_some_and(|id| i.contains(id));
        all_q &= q;
        some_q |= q;
        // Once both a supporting and a refuting answer set have been seen
        // the classification cannot change any more.
        !(some_q && !all_q)
    })?;
    Ok(match (any, all_q, some_q) {
        (false, _, _) => WorldClass::Unsatisfiable,
        (true, true, _) => WorldClass::LowerAndUpper,
        (true, false, true) => WorldClass::UpperOnly,
        (true, false, false) => WorldClass::NoContribution,
    })
}

/// Exact credal bounds of a ground query atom over a discretized program,
/// along with the probability mass of inconsistent worlds.
pub fn credal_query(
    dp: &DiscretizedProgram,
    query: &Atom,
    normalize: bool,
) -> Result<CredalResult> {
    credal_query_with(dp, query, &ExactOptions { normalize, ..ExactOptions::default() })
}

/// Like [`credal_query`] with explicit engine options.
pub fn credal_query_with(
    dp: &DiscretizedProgram,
    query: &Atom,
    opts: &ExactOptions,
) -> Result<CredalResult> {
    let t = checked_fact_count(&dp.program, opts.world_cap)?;
    let solver = Solver::new(&dp.program)?;
    let sums = sum_worlds(
        &solver,
        &fact_probabilities(&dp.program),
        solver.atom_id(query),
        &CompiledEvidence::tautology(),
        opts.threads,
    )?;
    if sums.satisfiable_worlds == 0 {
        return Err(Error::AllWorldsInconsistent);
    }
    let inconsistent_mass = sums.inconsistent.value().clamp(0.0, 1.0);
    let mut lower = sums.lower_qe.value().clamp(0.0, 1.0);
    let mut upper = sums.upper_qe.value().clamp(0.0, 1.0);
    if opts.normalize {
        let z = 1.0 - inconsistent_mass;
        if z <= 0.0 {
            return Err(Error::AllWorldsInconsistent);
        }
        lower = (lower / z).clamp(0.0, 1.0);
        upper = (upper / z).clamp(0.0, 1.0);
    }
    Ok(CredalResult {
        lower,
        upper,
        inconsistent_mass,
        normalized: opts.normalize,
        worlds_enumerated: world_count(t),
    })
}

/// Conditional credal bounds of `query` given a conjunction of evidence
/// literals. Atom literals are tested directly against each answer set;
/// comparison literals refine the discretization so that the evidence
/// region becomes a union of intervals, represented as a disjunction of
/// interval indicators. With no evidence this reduces to the plain
/// discretize-and-solve pipeline.
pub fn conditional_query(
    prog: &HybridProgram,
    query: &Atom,
    evidence: &[EvidenceLit],
) -> Result<CredalResult> {
    conditional_query_with(prog, query, evidence, &ExactOptions::default())
}

/// Like [`conditional_query`] with explicit engine options.
pub fn conditional_query_with(
    prog: &HybridProgram,
    query: &Atom,
    evidence: &[EvidenceLit],
    opts: &ExactOptions,
) -> Result<CredalResult> {
    let mut atoms: Vec<(Atom, bool)> = Vec::new();
    let mut comps: Vec<Comparison> = Vec::new();
    for lit in evidence {
        match lit {
            EvidenceLit::Atom(a, neg) => {
                if matches!(a.pred.as_str(), "above" | "below" | "between" | "outside") {
                    return Err(Error::IllegalComparison(format!(
                        "evidence literal '{a}' looks like a comparison but its \
                         arguments are not a continuous variable and numeric bounds"
                    )));
                }
                atoms.push((a.clone(), *neg));
            }
            EvidenceLit::Comp(c) => comps.push(c.clone()),
        }
    }
    let (dp, requirements) = discretize_with_evidence(prog, &comps)?;
    if evidence.is_empty() {
        return credal_query_with(&dp, query, opts);
    }
    let t = checked_fact_count(&dp.program, opts.world_cap)?;
    let solver = Solver::new(&dp.program)?;
    let mut ev = CompiledEvidence::tautology();
    for (a, neg) in atoms {
        match solver.atom_id(&a) {
            Some(id) => ev.atoms.push((id, neg)),
            // An atom that occurs nowhere in the program is false in every
            // answer set: a negated literal on it holds vacuously, a
            // positive one makes the evidence unsatisfiable.
            None if neg => {}
            None => ev.impossible = true,
        }
    }
    for group in &requirements {
        let ids: Vec<u32> = group.iter().filter_map(|a| solver.atom_id(a)).collect();
        if ids.is_empty() {
            ev.impossible = true;
        } else {
            ev.any_of.push(ids);
        }
    }
    let sums = sum_worlds(
        &solver,
        &fact_probabilities(&dp.program),
        solver.atom_id(query),
        &ev,
        opts.threads,
    )?;
    // Both bounds are ratios of event masses, so the normalizing constant
    // cancels and inconsistent worlds need no special treatment here.
    let lower_num = sums.lower_qe.value().max(0.0);
    let upper_num = sums.upper_qe.value().max(0.0);
    let lower_den = lower_num + sums.upper_nqe.value().max(0.0);
    let upper_den = upper_num + sums.lower_nqe.value().max(0.0);
    if lower_den == 0.0 && upper_den == 0.0 {
        return Err(Error::UndefinedConditional(format!(
            "the evidence holds in no answer set of any world, so the \
             conditional bounds of '{query}' are 0/0"
        )));
    }
    if lower_den == 0.0 || upper_den == 0.0 {
        let which = if lower_den == 0.0 { "lower" } else { "upper" };
        return Err(Error::UndefinedConditional(format!(
            "the {which}-bound denominator for '{query}' given the evidence is zero"
        )));
    }
    Ok(CredalResult {
        lower: (lower_num / lower_den).clamp(0.0, 1.0),
        upper: (upper_num / upper_den).clamp(0.0, 1.0),
        inconsistent_mass: sums.inconsistent.value().clamp(0.0, 1.0),
        normalized: false,
        worlds_enumerated: world_count(t),
    })
}

fn checked_fact_count(program: &HybridProgram, cap: usize) -> Result<usize> {
    // Beyond 63 facts the world index would overflow u64 regardless of the
    // requested cap.
    let effective = cap.min(63);
    let t = program.prob_facts.len();
    if t > effective {
        return Err(Error::WorldCapExceeded { facts: t, cap: effective });
    }
    Ok(t)
}

fn world_count(t: usize) -> u64 {
    1u64 << t
}

/// Whether fact `i` (declaration order) is true in world `k`; the first
/// declared fact occupies the most significant bit.
fn world_bit(k: u64, t: usize, i: usize) -> bool {
    (k >> (t - 1 - i)) & 1 == 1
}

fn fact_probabilities(program: &HybridProgram) -> Vec<f64> {
    program.prob_facts.iter().map(|f| f.prob).collect()
}

fn world_probability(program: &HybridProgram, assignment: &[bool]) -> f64 {
    program
        .prob_facts
        .iter()
        .zip(assignment)
        .map(|(f, &chosen)| if chosen { f.prob } else { 1.0 - f.prob })
        .product()
}

/// Compensated (Neumaier) accumulator: world probabilities span many orders
/// of magnitude and arrive in bit-pattern order, so plain summation loses
/// low-order mass.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    correction: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.correction += (self.sum - t) + v;
        } else {
            self.correction += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.correction
    }
}

/// Evidence lowered into solver atom ids: a conjunction of atom literals
/// plus, per continuous comparison, a disjunction of interval indicators.
struct CompiledEvidence {
    /// Set when some positive evidence atom cannot occur in any answer set.
    impossible: bool,
    atoms: Vec<(u32, bool)>,
    any_of: Vec<Vec<u32>>,
}

impl CompiledEvidence {
    fn tautology() -> Self {
        CompiledEvidence { impossible: false, atoms: Vec::new(), any_of: Vec::new() }
    }

    fn holds(&self, i: &BitSet) -> bool {
        !self.impossible
            && self.atoms.iter().all(|&(id, neg)| i.contains(id) != neg)
            && self.any_of.iter().all(|alt| alt.iter().any(|&id| i.contains(id)))
    }
}

/// Per-world classification sums for the joint events `query ∧ evidence`
/// and `¬query ∧ evidence`. A plain (unconditional) query is the special
/// case of tautological evidence, where `lower_qe`/`upper_qe` are exactly
/// the credal bounds.
#[derive(Default)]
struct WorldSums {
    lower_qe: Compensated,
    upper_qe: Compensated,
    lower_nqe: Compensated,
    upper_nqe: Compensated,
    inconsistent: Compensated,
    satisfiable_worlds: u64,
}

fn sum_worlds(
    solver: &Solver,
    probs: &[f64],
    qid: Option<u32>,
    ev: &CompiledEvidence,
    threads: usize,
) -> Result<WorldSums> {
    let total = world_count(probs.len());
    let threads = threads.max(1).min(usize::try_from(total).unwrap_or(usize::MAX)).max(1);
    if threads <= 1 {
        return sum_range(solver, probs, qid, ev, 0..total);
    }
    let per = total / threads as u64;
    let extra = total % threads as u64;
    let mut partials: Vec<Result<WorldSums>> = Vec::with_capacity(threads);
    thread::scope(|scope| {
        let mut handles = Vec::with_capacity(threads);
        let mut start = 0u64;
        for i in 0..threads {
            let len = per + u64::from((i as u64) < extra);
            let range = start..start + len;
            start += len;
            handles.push(scope.spawn(move || sum_range(solver, probs, qid, ev, range)));
        }
        for h in handles {
            partials.push(h.join().expect("world-enumeration worker panicked"));
        }
    });
    // Merge in chunk order so the reduction is deterministic.
    let mut merged = WorldSums::default();
    for partial in partials {
        let p = partial?;
        merged.lower_qe.add(p.lower_qe.value());
        merged.upper_qe.add(p.upper_qe.value());
        merged.lower_nqe.add(p.lower_nqe.value());
        merged.upper_nqe.add(p.upper_nqe.value());
        merged.inconsistent.add(p.inconsistent.value());
        merged.satisfiable_worlds += p.satisfiable_worlds;
    }
    Ok(merged)
}

fn sum_range(
    solver: &Solver,
    probs: &[f64],
    qid: Option<u32>,
    ev: &CompiledEvidence,
    range: Range<u64>,
) -> Result<WorldSums> {
    let t = probs.len();
    let fact_ids = solver.fact_ids();
    let mut sums = WorldSums::default();
    for k in range {
        let mut assumed = BitSet::new(solver.atom_count());
        let mut p = 1.0;
        for i in 0..t {
            if world_bit(k, t, i) {
                assumed.insert(fact_ids[i]);
                p *= probs[i];
            } else {
                p *= 1.0 - probs[i];
            }
        }
        let mut any = false;
        let (mut all_qe, mut some_qe) = (true, false);
        let (mut all_nqe, mut some_nqe) = (true, false);
        solver.visit_answer_sets(&assumed, &mut |i| {
            any = true;
            let e = ev.holds(i);
            let q = qid.is_some_and(|id| i.contains(id));
            let qe = q && e;
            let nqe = !q && e;
            all_qe &= qe;
            some_qe |= qe;
            all_nqe &= nqe;
            some_nqe |= nqe;
            // Both joint events settled (seen an answer set with each):
            // nothing further can change this world's classification.
            !(some_qe && !all_qe && some_nqe && !all_nqe)
        })?;
        if !any {
            sums.inconsistent.add(p);
            continue;
        }
        sums.satisfiable_worlds += 1;
        if all_qe {
            sums.lower_qe.add(p);
        }
        if some_qe {
            sums.upper_qe.add(p);
        }
        if all_nqe {
            sums.lower_nqe.add(p);
        }
        if some_nqe {
            sums.upper_nqe.add(p);
        }
    }
    Ok(sums)
}
