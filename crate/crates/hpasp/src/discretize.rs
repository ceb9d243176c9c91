//! Interval discretization: rewrite a hybrid program into a purely
//! discrete probabilistic answer set program with the same query
//! probabilities.
//!
//! A continuous variable is only ever observed through comparison atoms,
//! so the finitely many comparison constants partition its domain into
//! intervals `I_1 = (-inf, b_1], ..., I_m = (b_{m-1}, +inf)`. The rewrite
//! proceeds in three phases:
//!
//! 1. `between`/`outside` atoms are reduced to `above`/`below`
//!    ([`convert_between_outside`]).
//! 2. Per variable, interval membership is encoded by a chain of fresh
//!    probabilistic facts `__int(v,k)` (the k-th fact carries the
//!    conditional mass of `I_k` given that no earlier interval was chosen)
//!    and indicator atoms `__h(v,k)` derived by the auxiliary clauses
//!    ([`build_aux_clauses`], [`interval_fact_probabilities`]).
//! 3. Every remaining comparison atom is replaced by the indicators of the
//!    intervals on which it holds, replicating the rule once per interval
//!    ([`handle_comparison_atoms`]).
//!
//! Boundary points carry no probability mass under a continuous
//! distribution, so the open/closed convention of the intervals is a
//! determinism choice, not a semantic one.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::syntax::{
    Atom, BodyLit, CompKind, Comparison, Const, HybridProgram, ProbFact, Rule, Term,
};
use std::collections::BTreeMap;
use std::fmt;

/// The ordered interval decomposition of one continuous variable's domain.
///
/// `bounds` holds the m−1 finite cut points (strictly increasing, no
/// duplicates); the implicit outer bounds are −∞ and +∞, giving m
/// intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalPartition {
    pub variable: Atom,
    pub bounds: Vec<f64>,
}

impl IntervalPartition {
    /// Number of intervals (one more than the number of cut points).
    pub fn intervals(&self) -> usize {
        self.bounds.len() + 1
    }

    /// The endpoints of the 1-based k-th interval.
    pub fn interval(&self, k: usize) -> (f64, f64) {
        assert!(k >= 1 && k <= self.intervals(), "interval index out of range");
        let lo = if k == 1 { f64::NEG_INFINITY } else { self.bounds[k - 2] };
        let hi = if k == self.intervals() { f64::INFINITY } else { self.bounds[k - 1] };
        (lo, hi)
    }
}

/// How the introduced atoms map back to the continuous variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FactProvenance {
    /// Introduced fact → (variable, interval index, attached probability).
    pub facts: BTreeMap<Atom, (Atom, usize, f64)>,
    /// Auxiliary indicator head → (variable, interval index).
    pub aux_heads: BTreeMap<Atom, (Atom, usize)>,
}

/// A hybrid program rewritten into discrete facts and ordinary rules.
#[derive(Debug, Clone)]
pub struct DiscretizedProgram {
    /// The discrete program: original facts, introduced interval facts,
    /// auxiliary clauses, and comparison-free rules.
    pub program: HybridProgram,
    /// One partition per declared continuous variable, declaration order.
    pub partitions: Vec<IntervalPartition>,
    pub provenance: FactProvenance,
}

impl DiscretizedProgram {
    /// Total number of probabilistic facts, original plus introduced.
    pub fn fact_count(&self) -> usize {
        self.program.prob_facts.len()
    }
}

impl fmt::Display for DiscretizedProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.program)
    }
}

/// The k-th introduced interval fact for a continuous variable.
pub fn interval_fact(variable: &Atom, k: usize) -> Atom {
    Atom::new("__int", tagged_args(variable, k))
}

/// The k-th interval indicator defined by the auxiliary clauses.
pub fn interval_indicator(variable: &Atom, k: usize) -> Atom {
    Atom::new("__h", tagged_args(variable, k))
}

fn tagged_args(variable: &Atom, k: usize) -> Vec<Term> {
    let mut args = vec![Term::Const(Const::Sym(variable.pred.clone()))];
    args.extend(variable.args.iter().cloned());
    args.push(Term::int(k as i64));
    args
}

/// Phase 1: reduce every `between` and `outside` atom to `above`/`below`.
///
/// `between(f,l,u)` becomes the conjunction `above(f,l), below(f,u)` in
/// the same body. `outside(f,l,u)` splits the rule into two copies that
/// keep the original head: one with `below(f,l)`, one with `above(f,u)`.
/// A body with o outside-atoms therefore yields 2^o copies.
pub fn convert_between_outside(rules: &[Rule]) -> Vec<Rule> {
    let mut out = Vec::new();
    for rule in rules {
        convert_rule(rule, &mut out);
    }
    out
}

fn convert_rule(rule: &Rule, out: &mut Vec<Rule>) {
    for (i, lit) in rule.body.iter().enumerate() {
        let BodyLit::Comp(c) = lit else { continue };
        match c.kind {
            CompKind::Between(l, u) => {
                let mut r = rule.clone();
                r.body[i] = comp(&c.var, CompKind::Above(l));
                r.body.insert(i + 1, comp(&c.var, CompKind::Below(u)));
                convert_rule(&r, out);
                return;
            }
            CompKind::Outside(l, u) => {
                for kind in [CompKind::Below(l), CompKind::Above(u)] {
                    let mut r = rule.clone();
                    r.body[i] = comp(&c.var, kind);
                    convert_rule(&r, out);
                }
                return;
            }
            CompKind::Above(_) | CompKind::Below(_) => {}
        }
    }
    out.push(rule.clone());
}

fn comp(var: &Atom, kind: CompKind) -> BodyLit {
    BodyLit::Comp(Comparison { var: var.clone(), kind })
}

/// Phase 2a: collect the sorted, deduplicated comparison constants per
/// declared continuous variable. A variable never compared gets an empty
/// bound list (the single interval (−∞, +∞)).
pub fn compute_partitions(prog: &HybridProgram) -> Vec<IntervalPartition> {
    let mut index: BTreeMap<&Atom, usize> = BTreeMap::new();
    let mut partitions: Vec<IntervalPartition> = prog
        .continuous
        .iter()
        .enumerate()
        .map(|(i, c)| {
            index.insert(&c.atom, i);
            IntervalPartition { variable: c.atom.clone(), bounds: Vec::new() }
        })
        .collect();
    for rule in &prog.rules {
        for lit in &rule.body {
            if let BodyLit::Comp(c) = lit {
                if let Some(&i) = index.get(&c.var) {
                    partitions[i].bounds.extend(c.kind.bounds());
                }
            }
        }
    }
    for p in &mut partitions {
        p.bounds.sort_by(f64::total_cmp);
        p.bounds.dedup();
    }
    partitions
}

/// Phase 2b: the probabilities attached to the introduced interval facts.
///
/// Fact k (k = 1..m−1) carries the mass of interval I_k conditioned on no
/// earlier interval being selected:
/// `mass(I_k) / (1 − cdf(b_{k−1}))`. The chain of facts then reconstructs
/// every interval mass exactly.
pub fn interval_fact_probabilities(
    dist: &DistributionSpec,
    partition: &IntervalPartition,
) -> Result<Vec<f64>> {
    let mut probs = Vec::with_capacity(partition.bounds.len());
    for (i, &b) in partition.bounds.iter().enumerate() {
        let lo = if i == 0 { f64::NEG_INFINITY } else { partition.bounds[i - 1] };
        let mass = dist.interval_mass(lo, b)?;
        let remaining = if i == 0 { 1.0 } else { 1.0 - dist.cdf(partition.bounds[i - 1]) };
        if remaining == 0.0 {
            return Err(Error::DegeneratePartition {
                var: partition.variable.to_string(),
                bound: partition.bounds[i - 1],
            });
        }
        // Guard against round-off pushing the ratio a hair past 1.
        probs.push((mass / remaining).clamp(0.0, 1.0));
    }
    Ok(probs)
}

/// Phase 2c: the clause chain defining the interval indicators.
///
/// `__h(v,k) :- not __int(v,1), ..., not __int(v,k−1), __int(v,k).` for
/// k < m, and the final indicator from all-negative:
/// `__h(v,m) :- not __int(v,1), ..., not __int(v,m−1).`
/// For m = 1 the single indicator is a plain fact.
pub fn build_aux_clauses(variable: &Atom, m: usize) -> Vec<Rule> {
    assert!(m >= 1, "a partition has at least one interval");
    (1..=m)
        .map(|k| {
            let mut body: Vec<BodyLit> = (1..k)
                .map(|j| BodyLit::Atom(interval_fact(variable, j), true))
                .collect();
            if k < m {
                body.push(BodyLit::Atom(interval_fact(variable, k), false));
            }
            Rule { head: vec![interval_indicator(variable, k)], choice: false, body }
        })
        .collect()
}

/// The 1-based interval indices on which a comparison holds. Every bound
/// of the comparison must be a cut point of the partition.
fn satisfying_intervals(kind: &CompKind, partition: &IntervalPartition) -> Result<Vec<usize>> {
    let position = |b: f64| -> Result<usize> {
        partition.bounds.iter().position(|&x| x == b).map(|p| p + 1).ok_or(
            Error::BoundNotInPartition { var: partition.variable.to_string(), bound: b },
        )
    };
    let m = partition.intervals();
    Ok(match *kind {
        CompKind::Below(b) => (1..=position(b)?).collect(),
        CompKind::Above(b) => (position(b)? + 1..=m).collect(),
        CompKind::Between(l, u) => (position(l)? + 1..=position(u)?).collect(),
        CompKind::Outside(l, u) => {
            let (kl, ku) = (position(l)?, position(u)?);
            (1..=kl).chain(ku + 1..=m).collect()
        }
    })
}

/// Phase 3: replace every comparison atom by interval indicators.
///
/// A rule whose body compares k variables against the partition cut
/// points is replicated once per combination of satisfying intervals (the
/// cross product); each copy substitutes the corresponding indicator atom
/// for the comparison. No comparison atoms remain afterwards.
pub fn handle_comparison_atoms(
    rules: &[Rule],
    partitions: &[IntervalPartition],
) -> Result<Vec<Rule>> {
    let index: BTreeMap<&Atom, &IntervalPartition> =
        partitions.iter().map(|p| (&p.variable, p)).collect();
    let mut out = Vec::new();
    for rule in rules {
        replicate_rule(rule, 0, &index, &mut out)?;
    }
    Ok(out)
}

fn replicate_rule(
    rule: &Rule,
    from: usize,
    partitions: &BTreeMap<&Atom, &IntervalPartition>,
    out: &mut Vec<Rule>,
) -> Result<()> {
    for i in from..rule.body.len() {
        let BodyLit::Comp(c) = &rule.body[i] else { continue };
        let partition = partitions
            .get(&c.var)
            .ok_or_else(|| Error::UnknownContinuousVariable(c.var.to_string()))?;
        for k in satisfying_intervals(&c.kind, partition)? {
            let mut copy = rule.clone();
            copy.body[i] = BodyLit::Atom(interval_indicator(&c.var, k), false);
            replicate_rule(&copy, i + 1, partitions, out)?;
        }
        return Ok(());
    }
    out.push(rule.clone());
    Ok(())
}

/// Full discretization: the three phases composed, with provenance.
///
/// The input must be ground and validated. The output contains only
/// discrete probabilistic facts (original declarations first, then the
/// introduced interval facts in declaration order of their variables) and
/// ordinary rules (auxiliary clauses first, then the rewritten original
/// rules).
pub fn discretize(prog: &HybridProgram) -> Result<DiscretizedProgram> {
    let converted = convert_between_outside(&prog.rules);
    let scan = HybridProgram {
        prob_facts: Vec::new(),
        continuous: prog.continuous.clone(),
        rules: converted,
    };
    let partitions = compute_partitions(&scan);
    discretize_core(prog, scan.rules, partitions)
}

/// Discretization with evidence over continuous variables: each evidence
/// comparison's constants refine the corresponding partition, and the
/// comparison is translated into the disjunction of interval indicators
/// on which it holds (returned in input order, for the
/// conditional-inference engine to test against answer sets).
pub fn discretize_with_evidence(
    prog: &HybridProgram,
    evidence: &[Comparison],
) -> Result<(DiscretizedProgram, Vec<Vec<Atom>>)> {
    let converted = convert_between_outside(&prog.rules);
    let scan = HybridProgram {
        prob_facts: Vec::new(),
        continuous: prog.continuous.clone(),
        rules: converted,
    };
    let mut partitions = compute_partitions(&scan);
    for comp in evidence {
        let Some(p) = partitions.iter_mut().find(|p| p.variable == comp.var) else {
            return Err(Error::UnknownContinuousVariable(comp.var.to_string()));
        };
        p.bounds.extend(comp.kind.bounds());
        p.bounds.sort_by(f64::total_cmp);
        p.bounds.dedup();
    }
    let requirements = evidence
        .iter()
        .map(|comp| {
            let p = partitions
                .iter()
                .find(|p| p.variable == comp.var)
                .expect("evidence variables were checked above");
            Ok(satisfying_intervals(&comp.kind, p)?
                .into_iter()
                .map(|k| interval_indicator(&comp.var, k))
                .collect())
        })
        .collect::<Result<Vec<Vec<Atom>>>>()?;
    let dp = discretize_core(prog, scan.rules, partitions)?;
    Ok((dp, requirements))
}

fn discretize_core(
    prog: &HybridProgram,
    converted_rules: Vec<Rule>,
    partitions: Vec<IntervalPartition>,
) -> Result<DiscretizedProgram> {
    let mut program = HybridProgram {
        prob_facts: prog.prob_facts.clone(),
        continuous: Vec::new(),
        rules: Vec::new(),
    };
    let mut provenance = FactProvenance::default();
    for (partition, decl) in partitions.iter().zip(&prog.continuous) {
        debug_assert_eq!(partition.variable, decl.atom);
        let probs = interval_fact_probabilities(&decl.dist, partition)?;
        for (i, &p) in probs.iter().enumerate() {
            let fact = interval_fact(&partition.variable, i + 1);
            provenance.facts.insert(fact.clone(), (partition.variable.clone(), i + 1, p));
            program.prob_facts.push(ProbFact { prob: p, atom: fact });
        }
        let m = partition.intervals();
        for k in 1..=m {
            provenance
                .aux_heads
                .insert(interval_indicator(&partition.variable, k), (partition.variable.clone(), k));
        }
        program.rules.extend(build_aux_clauses(&partition.variable, m));
    }
    program.rules.extend(handle_comparison_atoms(&converted_rules, &partitions)?);
    Ok(DiscretizedProgram { program, partitions, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{DistributionSpec, GaussianParam};
    use crate::syntax::{ground, parse_program, validate};
    use proptest::prelude::*;

    fn prepared(text: &str) -> HybridProgram {
        let prog = ground(&parse_program(text).unwrap()).unwrap();
        validate(&prog).unwrap();
        prog
    }

    fn rule_strings(rules: &[Rule]) -> Vec<String> {
        rules.iter().map(|r| r.to_string()).collect()
    }

    const EXAMPLE_3: &str = "0.4::b.\na:gaussian(0,1).\nq0 ; q1:- below(a,0.5).\nq0:- below(a,0.7), b.\n";

    #[test]
    fn between_becomes_a_conjunction() {
        let prog = prepared("d:gaussian(0,10).\nq :- e, between(d,-30,-29.75).");
        let converted = convert_between_outside(&prog.rules);
        assert_eq!(
            rule_strings(&converted),
            vec!["q :- e, above(d,-30), below(d,-29.75)."]
        );
    }

    #[test]
    fn outside_splits_the_rule() {
        let prog = prepared("d:gamma(70,1).\nprob_d :- outside(d, 60, 80).");
        let converted = convert_between_outside(&prog.rules);
        assert_eq!(
            rule_strings(&converted),
            vec!["prob_d :- below(d,60).", "prob_d :- above(d,80)."]
        );
        // Untouched rules pass through unchanged.
        let prog = prepared("d:gaussian(0,1).\nq :- above(d, 1), not r.");
        assert_eq!(rule_strings(&convert_between_outside(&prog.rules)), vec![
            "q :- above(d,1), not r."
        ]);
    }

    #[test]
    fn partitions_sort_and_dedupe_bounds() {
        let prog = prepared(EXAMPLE_3);
        let parts = compute_partitions(&prog);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].variable, Atom::prop("a"));
        assert_eq!(parts[0].bounds, vec![0.5, 0.7]);
        assert_eq!(parts[0].intervals(), 3);
        assert_eq!(parts[0].interval(1), (f64::NEG_INFINITY, 0.5));
        assert_eq!(parts[0].interval(3), (0.7, f64::INFINITY));

        // An extra comparison refines the partition (duplicates collapse).
        let refined = prepared(&format!("{EXAMPLE_3}:- b, below(a, 0.2).\nq2 :- below(a, 0.5)."));
        let parts = compute_partitions(&refined);
        assert_eq!(parts[0].bounds, vec![0.2, 0.5, 0.7]);
        assert_eq!(parts[0].intervals(), 4);

        // A declared but never-compared variable keeps one interval.
        let idle = prepared("c:gaussian(0,1).\nq :- r.");
        let parts = compute_partitions(&idle);
        assert_eq!(parts[0].bounds, Vec::<f64>::new());
        assert_eq!(parts[0].intervals(), 1);
    }

    #[test]
    fn fact_probabilities_match_the_cdf_chain() {
        let gaussian = DistributionSpec::gaussian(0.0, 1.0, GaussianParam::StdDev).unwrap();
        let part = |bounds: Vec<f64>| IntervalPartition { variable: Atom::prop("a"), bounds };
        let two = interval_fact_probabilities(&gaussian, &part(vec![0.5, 0.7])).unwrap();
        assert!((two[0] - 0.6914624612740131).abs() < 1e-12);
        assert!((two[1] - 0.2157724041548096).abs() < 1e-12);
        let three = interval_fact_probabilities(&gaussian, &part(vec![0.2, 0.5, 0.7])).unwrap();
        assert!((three[0] - 0.5792597094391030).abs() < 1e-12);
        assert!((three[1] - 0.2666793610027945).abs() < 1e-12);
        assert!((three[2] - 0.2157724041548097).abs() < 1e-12);
        // A single bound at the median gives a fair coin.
        let median = interval_fact_probabilities(&gaussian, &part(vec![0.0])).unwrap();
        assert!((median[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_partition_is_reported() {
        let gaussian = DistributionSpec::gaussian(0.0, 1.0, GaussianParam::StdDev).unwrap();
        let part = IntervalPartition { variable: Atom::prop("a"), bounds: vec![60.0, 61.0] };
        match interval_fact_probabilities(&gaussian, &part) {
            Err(Error::DegeneratePartition { var, bound }) => {
                assert_eq!(var, "a");
                assert_eq!(bound, 60.0);
            }
            other => panic!("expected DegeneratePartition, got {other:?}"),
        }
    }

    #[test]
    fn aux_clauses_follow_the_chain_schema() {
        let rules = build_aux_clauses(&Atom::prop("a"), 3);
        assert_eq!(
            rule_strings(&rules),
            vec![
                "__h(a,1) :- __int(a,1).",
                "__h(a,2) :- not __int(a,1), __int(a,2).",
                "__h(a,3) :- not __int(a,1), not __int(a,2).",
            ]
        );
        assert_eq!(rule_strings(&build_aux_clauses(&Atom::prop("a"), 1)), vec!["__h(a,1)."]);
        assert_eq!(build_aux_clauses(&Atom::prop("v"), 4).len(), 4);
    }

    #[test]
    fn comparison_replication_covers_the_satisfying_intervals() {
        let prog = prepared(EXAMPLE_3);
        let partitions = compute_partitions(&prog);
        let rewritten = handle_comparison_atoms(&prog.rules, &partitions).unwrap();
        assert_eq!(
            rule_strings(&rewritten),
            vec![
                "q0 ; q1 :- __h(a,1).",
                "q0 :- __h(a,1), b.",
                "q0 :- __h(a,2), b.",
            ]
        );
    }

    #[test]
    fn cross_product_replication() {
        // below(x,...) spans 2 intervals, below(y,...) spans 3: 6 copies.
        let prog = prepared(
            "x:gaussian(0,1).\ny:gaussian(0,1).\n\
             q :- below(x, 0.3), below(y, 0.9).\nr :- above(x, 0.1), above(y, 0.4).",
        );
        let partitions = compute_partitions(&prog);
        let rewritten = handle_comparison_atoms(&prog.rules, &partitions).unwrap();
        // x: bounds [0.1, 0.3]; y: bounds [0.4, 0.9]. below(x,0.3) → h1,h2;
        // below(y,0.9) → h1,h2; above(x,0.1) → h2,h3; above(y,0.4) → h2,h3.
        assert_eq!(rewritten.len(), 8);
        assert_eq!(rewritten[0].to_string(), "q :- __h(x,1), __h(y,1).");
        assert_eq!(rewritten[3].to_string(), "q :- __h(x,2), __h(y,2).");
        assert_eq!(rewritten[4].to_string(), "r :- __h(x,2), __h(y,2).");
        assert_eq!(rewritten[7].to_string(), "r :- __h(x,3), __h(y,3).");
    }

    #[test]
    fn discretizes_the_worked_example() {
        let dp = discretize(&prepared(EXAMPLE_3)).unwrap();
        assert_eq!(dp.fact_count(), 3);
        let facts: Vec<String> =
            dp.program.prob_facts.iter().map(|f| f.atom.to_string()).collect();
        assert_eq!(facts, vec!["b", "__int(a,1)", "__int(a,2)"]);
        assert!((dp.program.prob_facts[1].prob - 0.6914624612740131).abs() < 1e-12);
        assert!((dp.program.prob_facts[2].prob - 0.2157724041548096).abs() < 1e-12);
        assert_eq!(
            rule_strings(&dp.program.rules),
            vec![
                "__h(a,1) :- __int(a,1).",
                "__h(a,2) :- not __int(a,1), __int(a,2).",
                "__h(a,3) :- not __int(a,1), not __int(a,2).",
                "q0 ; q1 :- __h(a,1).",
                "q0 :- __h(a,1), b.",
                "q0 :- __h(a,2), b.",
            ]
        );
        // No comparison atom survives, and provenance inverts the naming.
        assert!(dp
            .program
            .rules
            .iter()
            .all(|r| r.body.iter().all(|l| !matches!(l, BodyLit::Comp(_)))));
        let (var, k, p) = &dp.provenance.facts[&interval_fact(&Atom::prop("a"), 2)];
        assert_eq!((var, *k), (&Atom::prop("a"), 2));
        assert!((p - 0.2157724041548096).abs() < 1e-12);
        assert_eq!(
            dp.provenance.aux_heads[&interval_indicator(&Atom::prop("a"), 3)],
            (Atom::prop("a"), 3)
        );
    }

    #[test]
    fn pure_discrete_programs_pass_through() {
        let prog = prepared("0.3::a.\n0.4::b.\nq0 ; q1:- a.\nq0:- b.");
        let dp = discretize(&prog).unwrap();
        assert_eq!(dp.program.prob_facts, prog.prob_facts);
        assert_eq!(dp.program.rules, prog.rules);
        assert!(dp.partitions.is_empty());
    }

    #[test]
    fn evidence_refines_the_partition() {
        let prog = prepared(EXAMPLE_3);
        let above = Comparison { var: Atom::prop("a"), kind: CompKind::Above(0.6) };
        let (dp, reqs) = discretize_with_evidence(&prog, &[above]).unwrap();
        assert_eq!(dp.partitions[0].bounds, vec![0.5, 0.6, 0.7]);
        assert_eq!(dp.fact_count(), 4);
        // above(a,0.6) holds on intervals 3 and 4 of the refined partition.
        assert_eq!(reqs, vec![vec![
            interval_indicator(&Atom::prop("a"), 3),
            interval_indicator(&Atom::prop("a"), 4),
        ]]);
        // A bound already in the partition changes nothing.
        let dup = Comparison { var: Atom::prop("a"), kind: CompKind::Below(0.7) };
        let (dp, reqs) = discretize_with_evidence(&prog, &[dup]).unwrap();
        assert_eq!(dp.partitions[0].bounds, vec![0.5, 0.7]);
        assert_eq!(reqs[0].len(), 2);

        let unknown = Comparison { var: Atom::prop("z"), kind: CompKind::Above(0.0) };
        assert!(matches!(
            discretize_with_evidence(&prog, &[unknown]),
            Err(Error::UnknownContinuousVariable(_))
        ));
    }

    #[test]
    fn fact_count_identity() {
        // d discrete facts plus Σ (intervals − 1) introduced facts.
        let prog = prepared(
            "0.5::d1.\n0.5::d2.\nx:gaussian(0,1).\ny:gamma(70,1).\n\
             q :- below(x, 0.1).\nq :- between(y, 60, 80), d1.\nr :- above(x, 0.9), d2.",
        );
        let dp = discretize(&prog).unwrap();
        // x: bounds {0.1, 0.9} → 2 facts; y: bounds {60, 80} → 2 facts.
        assert_eq!(dp.fact_count(), 2 + 2 + 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        // The chained fact probabilities must reconstruct every interval
        // mass: Π_{j<k}(1−π_j)·π_k = mass(I_k), and the leftover product
        // equals the mass of the final interval.
        #[test]
        fn chain_reconstructs_interval_masses(
            mean in -1.0..1.0f64,
            sd in 0.5..2.0f64,
            mut cuts in proptest::collection::vec(-3.0..3.0f64, 1..6),
        ) {
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            let dist = DistributionSpec::gaussian(mean, sd, GaussianParam::StdDev).unwrap();
            let partition = IntervalPartition { variable: Atom::prop("v"), bounds: cuts };
            let probs = interval_fact_probabilities(&dist, &partition).unwrap();
            let mut remaining = 1.0;
            for (k, &p) in probs.iter().enumerate() {
                let (lo, hi) = partition.interval(k + 1);
                let mass = dist.interval_mass(lo, hi).unwrap();
                prop_assert!((remaining * p - mass).abs() < 1e-9);
                remaining *= 1.0 - p;
            }
            let (lo, hi) = partition.interval(partition.intervals());
            let last = dist.interval_mass(lo, hi).unwrap();
            prop_assert!((remaining - last).abs() < 1e-9);
        }
    }
}
