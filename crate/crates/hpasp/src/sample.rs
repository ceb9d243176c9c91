//! Monte Carlo approximation of the credal bounds.
//!
//! Two sampling modes share one estimator. Discrete mode first discretizes
//! the program and then samples the (possibly enlarged) set of probabilistic
//! facts; hybrid mode samples the continuous variables directly, evaluates
//! every comparison atom against the drawn values, and solves the residual
//! program. Either way a sample reduces to a ground ASP program whose
//! answer sets classify the query, and repeated reductions are memoized
//! under a cache key that identifies the residual program exactly.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asp::{BitSet, Solver};
use crate::discretize::{convert_between_outside, discretize, DiscretizedProgram};
use crate::error::{Error, Result};
use crate::syntax::{Atom, BodyLit, Comparison, HybridProgram, Rule, Term};

/// Which program the sampler draws worlds from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Discretize first, then sample the probabilistic facts.
    Discrete,
    /// Sample the continuous variables directly and reduce the rules.
    Hybrid,
}

/// Sampler configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    /// Number of samples to draw (at least 1).
    pub n_samples: u64,
    /// Base seed; each sample gets an independent substream derived from it.
    pub seed: u64,
    pub mode: SampleMode,
    /// Memoize world classifications by cache key.
    pub cache_enabled: bool,
    /// Divide the estimates by the satisfiable fraction instead of the
    /// sample count, mirroring exact normalization.
    pub normalize: bool,
    /// Stop inserting new cache entries past this size; existing entries
    /// keep serving hits, so results stay deterministic.
    pub cache_max: Option<usize>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            n_samples: 10_000,
            seed: 0,
            mode: SampleMode::Discrete,
            cache_enabled: true,
            normalize: false,
            cache_max: None,
        }
    }
}

/// The sampler's output counters and estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    pub lower_hat: f64,
    pub upper_hat: f64,
    pub samples_taken: u64,
    pub cache_hits: u64,
    /// Samples whose world had no answer set; they are reported here and
    /// excluded from both bound numerators.
    pub unsat_samples: u64,
}

/// Identifies the reduced ground program a sample produced: equal keys
/// always denote identical residual programs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CacheKey {
    /// Truth value per probabilistic fact, in declaration order.
    Discrete(Vec<bool>),
    /// Fact bits plus one truth bit per ground comparison occurrence
    /// (after between/outside conversion, in order of appearance).
    Hybrid(Vec<bool>, Vec<bool>),
}

/// Draw one world of a discretized program: every probabilistic fact is
/// included independently with its probability. Returns the cache key and
/// the induced ground program (chosen facts plus the rules).
pub fn sample_world_discrete<R: Rng + ?Sized>(
    p: &DiscretizedProgram,
    rng: &mut R,
) -> (CacheKey, HybridProgram) {
    let bits = draw_fact_bits(&p.program, rng);
    let program = world_program(&p.program, &bits);
    (CacheKey::Discrete(bits), program)
}

/// Draw a hybrid sample: one value per continuous variable (declaration
/// order), then one truth value per probabilistic fact (declaration order).
/// Comparisons are evaluated against the drawn values and the residual
/// ground program is returned with its cache key.
pub fn sample_and_reduce_hybrid<R: Rng + ?Sized>(
    p: &HybridProgram,
    rng: &mut R,
) -> Result<(CacheKey, HybridProgram)> {
    let values: Vec<f64> = p.continuous.iter().map(|c| c.dist.sample(rng)).collect();
    let facts = draw_fact_bits(p, rng);
    residual_hybrid_program(p, &facts, &values)
}

/// The deterministic part of hybrid sampling: reduce the program under
/// already-drawn fact truth values and continuous variable values
/// (`values[i]` belongs to the i-th declared continuous variable).
/// Satisfied comparison atoms are deleted from their bodies; a falsified
/// comparison deletes the whole rule.
pub fn residual_hybrid_program(
    p: &HybridProgram,
    facts: &[bool],
    values: &[f64],
) -> Result<(CacheKey, HybridProgram)> {
    let converted = convert_between_outside(&p.rules);
    let value_of = variable_values(p, values)?;
    let mut comp_bits = Vec::new();
    let mut rules = Vec::new();
    for rule in &converted {
        let mut keep = true;
        let mut body = Vec::new();
        for lit in &rule.body {
            match lit {
                BodyLit::Comp(c) => {
                    let holds = c.kind.holds_for(value_of(&c.var)?);
                    comp_bits.push(holds);
                    keep &= holds;
                }
                other => body.push(other.clone()),
            }
        }
        if keep {
            rules.push(Rule { head: rule.head.clone(), choice: rule.choice, body });
        }
    }
    let chosen = p
        .prob_facts
        .iter()
        .zip(facts)
        .filter(|(_, &b)| b)
        .map(|(f, _)| Rule { head: vec![f.atom.clone()], choice: false, body: Vec::new() });
    let program = HybridProgram {
        prob_facts: Vec::new(),
        continuous: Vec::new(),
        rules: chosen.chain(rules).collect(),
    };
    Ok((CacheKey::Hybrid(facts.to_vec(), comp_bits), program))
}

/// Estimate the credal bounds of `query` by sampling.
pub fn estimate(p: &HybridProgram, query: &Atom, cfg: &SampleConfig) -> Result<EstimateResult> {
    if cfg.n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
    }
    match cfg.mode {
        SampleMode::Discrete => estimate_discrete(p, query, cfg),
        SampleMode::Hybrid => estimate_hybrid(p, query, cfg),
    }
}

fn estimate_discrete(
    p: &HybridProgram,
    query: &Atom,
    cfg: &SampleConfig,
) -> Result<EstimateResult> {
    let dp = discretize(p)?;
    let solver = Solver::new(&dp.program)?;
    let probs: Vec<f64> = dp.program.prob_facts.iter().map(|f| f.prob).collect();
    let mut counters = Counters::default();
    let mut cache: Cache = HashMap::new();
    for i in 0..cfg.n_samples {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, i));
        let mut assumed = BitSet::new(solver.atom_count());
        for (idx, &prob) in probs.iter().enumerate() {
            if rng.gen::<f64>() < prob {
                assumed.insert(solver.fact_ids()[idx]);
            }
        }
        counters.record(classified(&solver, assumed, query, cfg, &mut cache)?);
    }
    counters.finish(cfg)
}

fn estimate_hybrid(p: &HybridProgram, query: &Atom, cfg: &SampleConfig) -> Result<EstimateResult> {
    let converted = convert_between_outside(&p.rules);
    let (rewritten, occurrences) = rewrite_comparisons(&converted);
    let sampler_program = HybridProgram {
        prob_facts: p.prob_facts.clone(),
        continuous: Vec::new(),
        rules: rewritten,
    };
    let solver = Solver::new(&sampler_program)?;
    let occurrence_ids: Vec<u32> = (0..occurrences.len())
        .map(|k| solver.atom_id(&occurrence_atom(k)).expect("occurrence atom was interned"))
        .collect();
    // Comparison variables resolved to their declaration index once.
    let var_index: HashMap<&Atom, usize> =
        p.continuous.iter().enumerate().map(|(i, c)| (&c.atom, i)).collect();
    let mut occ_vars = Vec::with_capacity(occurrences.len());
    for c in &occurrences {
        let &idx = var_index.get(&c.var).ok_or_else(|| {
            Error::UnknownContinuousVariable(c.var.to_string())
        })?;
        occ_vars.push(idx);
    }
    let probs: Vec<f64> = p.prob_facts.iter().map(|f| f.prob).collect();
    let mut counters = Counters::default();
    let mut cache: Cache = HashMap::new();
    for i in 0..cfg.n_samples {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, i));
        let values: Vec<f64> = p.continuous.iter().map(|c| c.dist.sample(&mut rng)).collect();
        let mut assumed = BitSet::new(solver.atom_count());
        for (idx, &prob) in probs.iter().enumerate() {
            if rng.gen::<f64>() < prob {
                assumed.insert(solver.fact_ids()[idx]);
            }
        }
        for (k, c) in occurrences.iter().enumerate() {
            if c.kind.holds_for(values[occ_vars[k]]) {
                assumed.insert(occurrence_ids[k]);
            }
        }
        counters.record(classified(&solver, assumed, query, cfg, &mut cache)?);
    }
    counters.finish(cfg)
}

/// Theorem-style sample-size bound for an absolute error of `epsilon` with
/// failure probability `delta`: ceil((ε + 1/2) / (ε²δ)).
pub fn samples_for_absolute_error(epsilon: f64, delta: f64) -> Result<u64> {
    check_tolerance("epsilon", epsilon)?;
    check_tolerance("delta", delta)?;
    Ok(ceil_with_slack((epsilon + 0.5) / (epsilon * epsilon * delta)))
}

/// Sample-size bound for a relative error of `epsilon` with failure
/// probability `delta`: ceil((3/ε²)·ln(1/δ)).
pub fn samples_for_relative_error(epsilon: f64, delta: f64) -> Result<u64> {
    check_tolerance("epsilon", epsilon)?;
    check_tolerance("delta", delta)?;
    Ok(ceil_with_slack(3.0 / (epsilon * epsilon) * (1.0 / delta).ln()))
}

fn check_tolerance(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(format!("{name} = {v} is outside (0, 1]")))
    }
}

/// Ceiling that forgives floating-point noise: values within a relative
/// 1e-9 of an integer round to it instead of being bumped up.
fn ceil_with_slack(x: f64) -> u64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as u64
    } else {
        x.ceil() as u64
    }
}

/// Per-sample substream seed: a splitmix64-style finalizer over the base
/// seed and the sample counter, so streams are independent of iteration
/// order.
fn stream_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

type Cache = HashMap<BitSet, Outcome>;

/// One sample's classification: whether the world was satisfiable and
/// whether the query held in all / at least one answer set.
#[derive(Debug, Clone, Copy)]
struct Outcome {
    satisfiable: bool,
    in_all: bool,
    in_some: bool,
}

#[derive(Debug, Clone, Copy)]
struct Classified {
    outcome: Outcome,
    from_cache: bool,
}

fn classified(
    solver: &Solver,
    assumed: BitSet,
    query: &Atom,
    cfg: &SampleConfig,
    cache: &mut Cache,
) -> Result<Classified> {
    if cfg.cache_enabled {
        if let Some(&outcome) = cache.get(&assumed) {
            return Ok(Classified { outcome, from_cache: true });
        }
    }
    let qid = solver.atom_id(query);
    let mut any = false;
    let mut all_q = true;
    let mut some_q = false;
    solver.visit_answer_sets(&assumed, &mut |i| {
        any = true;
        let q = qid.is_some_and(|id| i.contains(id));
        all_q &= q;
        some_q |= q;
        !(some_q && !all_q)
    })?;
    let outcome =
        Outcome { satisfiable: any, in_all: any && all_q, in_some: any && some_q };
    if cfg.cache_enabled && cfg.cache_max.map_or(true, |max| cache.len() < max) {
        cache.insert(assumed, outcome);
    }
    Ok(Classified { outcome, from_cache: false })
}

#[derive(Debug, Default)]
struct Counters {
    all: u64,
    some: u64,
    unsat: u64,
    hits: u64,
    taken: u64,
}

impl Counters {
    fn record(&mut self, c: Classified) {
        self.taken += 1;
        self.hits += u64::from(c.from_cache);
        if !c.outcome.satisfiable {
            self.unsat += 1;
            return;
        }
        self.all += u64::from(c.outcome.in_all);
        self.some += u64::from(c.outcome.in_some);
    }

    fn finish(&self, cfg: &SampleConfig) -> Result<EstimateResult> {
        let denominator = if cfg.normalize {
            let satisfiable = self.taken - self.unsat;
            if satisfiable == 0 {
                return Err(Error::AllWorldsInconsistent);
            }
            satisfiable as f64
        } else {
            self.taken as f64
        };
        Ok(EstimateResult {
            lower_hat: self.all as f64 / denominator,
            upper_hat: self.some as f64 / denominator,
            samples_taken: self.taken,
            cache_hits: self.hits,
            unsat_samples: self.unsat,
        })
    }
}

fn draw_fact_bits<R: Rng + ?Sized>(p: &HybridProgram, rng: &mut R) -> Vec<bool> {
    p.prob_facts.iter().map(|f| rng.gen::<f64>() < f.prob).collect()
}

/// The ground program of a world: the facts drawn true (as rules, in
/// declaration order) followed by every rule of the program.
fn world_program(p: &HybridProgram, facts: &[bool]) -> HybridProgram {
    let chosen = p
        .prob_facts
        .iter()
        .zip(facts)
        .filter(|(_, &b)| b)
        .map(|(f, _)| Rule { head: vec![f.atom.clone()], choice: false, body: Vec::new() });
    HybridProgram {
        prob_facts: Vec::new(),
        continuous: Vec::new(),
        rules: chosen.chain(p.rules.iter().cloned()).collect(),
    }
}

fn occurrence_atom(k: usize) -> Atom {
    Atom::new("__c", vec![Term::int(k as i64)])
}

fn rewrite_comparisons(rules: &[Rule]) -> (Vec<Rule>, Vec<Comparison>) {
    let mut occurrences = Vec::new();
    let rewritten = rules
        .iter()
        .map(|r| Rule {
            head: r.head.clone(),
            choice: r.choice,
            body: r
                .body
                .iter()
                .map(|lit| match lit {
                    BodyLit::Comp(c) => {
                        let k = occurrences.len();
                        occurrences.push(c.clone());
                        BodyLit::Atom(occurrence_atom(k), false)
                    }
                    other => other.clone(),
                })
                .collect(),
        })
        .collect();
    (rewritten, occurrences)
}

fn variable_values<'a>(
    p: &'a HybridProgram,
    values: &'a [f64],
) -> Result<impl Fn(&Atom) -> Result<f64> + 'a> {
    if values.len() != p.continuous.len() {
        return Err(Error::InvalidParameter(format!(
            "expected {} drawn values, got {}",
            p.continuous.len(),
            values.len()
        )));
    }
    Ok(move |var: &Atom| {
        p.continuous
            .iter()
            .position(|c| &c.atom == var)
            .map(|i| values[i])
            .ok_or_else(|| Error::UnknownContinuousVariable(var.to_string()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{ground, parse_program, validate};

    const TWO_FACTS: &str = "0.3::a.\n0.4::b.\nq0 ; q1:- a.\nq0:- b.\n";
    const GAUSSIAN: &str =
        "0.4::b.\na:gaussian(0,1).\nq0 ; q1:- below(a,0.5).\nq0:- below(a,0.7), b.\n";

    fn prepared(text: &str) -> HybridProgram {
        let prog = ground(&parse_program(text).unwrap()).unwrap();
        validate(&prog).unwrap();
        prog
    }

    fn q0() -> Atom {
        Atom::prop("q0")
    }

    #[test]
    fn planners_match_the_theorem_bounds() {
        assert_eq!(samples_for_absolute_error(0.1, 0.05).unwrap(), 1200);
        assert_eq!(samples_for_absolute_error(0.5, 1.0).unwrap(), 4);
        assert_eq!(samples_for_absolute_error(0.01, 0.05).unwrap(), 102_000);
        assert_eq!(samples_for_relative_error(0.1, 0.05).unwrap(), 899);
        assert_eq!(samples_for_relative_error(1.0, 1.0 / std::f64::consts::E).unwrap(), 3);
        assert_eq!(samples_for_relative_error(0.1, 0.01).unwrap(), 1382);
        for (eps, delta) in [(0.0, 0.5), (-0.1, 0.5), (0.5, 0.0), (0.5, 1.1), (f64::NAN, 0.5)] {
            assert!(matches!(
                samples_for_absolute_error(eps, delta),
                Err(Error::InvalidTolerance(_))
            ));
            assert!(matches!(
                samples_for_relative_error(eps, delta),
                Err(Error::InvalidTolerance(_))
            ));
        }
    }

    #[test]
    fn degenerate_fact_probabilities_sample_deterministically() {
        let dp = discretize(&prepared("1::a.\n0::b.\nq:- a.\n")).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let (key, program) = sample_world_discrete(&dp, &mut rng);
            assert_eq!(key, CacheKey::Discrete(vec![true, false]));
            assert_eq!(program.rules[0].to_string(), "a.");
        }
    }

    #[test]
    fn world_frequencies_match_the_fact_distribution() {
        let dp = discretize(&prepared(TWO_FACTS)).unwrap();
        let n = 100_000u32;
        let mut counts: HashMap<CacheKey, u32> = HashMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..n {
            let (key, _) = sample_world_discrete(&dp, &mut rng);
            *counts.entry(key).or_default() += 1;
        }
        let expected = [
            (vec![false, false], 0.42),
            (vec![false, true], 0.28),
            (vec![true, false], 0.18),
            (vec![true, true], 0.12),
        ];
        for (bits, p) in expected {
            let got = f64::from(counts[&CacheKey::Discrete(bits)]) / f64::from(n);
            let sigma = (p * (1.0 - p) / f64::from(n)).sqrt();
            assert!((got - p).abs() < 3.0 * sigma, "{got} vs {p}");
        }
    }

    #[test]
    fn residual_reduction_follows_the_drawn_value() {
        let prog = prepared(GAUSSIAN);
        // A draw far to the right falsifies both comparisons.
        let (key, residual) = residual_hybrid_program(&prog, &[true], &[1.2]).unwrap();
        assert_eq!(key, CacheKey::Hybrid(vec![true], vec![false, false]));
        let rules: Vec<String> = residual.rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(rules, vec!["b."]);

        // 0.6 sits between the two bounds: only the second rule survives,
        // with the satisfied comparison deleted from its body.
        let (key, residual) = residual_hybrid_program(&prog, &[false], &[0.6]).unwrap();
        assert_eq!(key, CacheKey::Hybrid(vec![false], vec![false, true]));
        let rules: Vec<String> = residual.rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(rules, vec!["q0 :- b."]);

        // No comparisons at all: hybrid sampling is discrete sampling.
        let discrete = prepared(TWO_FACTS);
        let (key, residual) = residual_hybrid_program(&discrete, &[true, false], &[]).unwrap();
        assert_eq!(key, CacheKey::Hybrid(vec![true, false], vec![]));
        assert_eq!(residual.rules.len(), 3);
    }

    #[test]
    fn comparison_bits_are_per_occurrence() {
        let prog = prepared("a:gaussian(0,1).\nq:- below(a,0.5).\nr:- below(a,0.5).\n");
        let (key, _) = residual_hybrid_program(&prog, &[], &[0.0]).unwrap();
        assert_eq!(key, CacheKey::Hybrid(vec![], vec![true, true]));
    }

    #[test]
    fn estimates_converge_on_the_two_fact_program() {
        let prog = prepared(TWO_FACTS);
        let cfg = SampleConfig { n_samples: 100_000, seed: 7, ..SampleConfig::default() };
        let r = estimate(&prog, &q0(), &cfg).unwrap();
        assert!((r.lower_hat - 0.40).abs() < 0.012, "lower {}", r.lower_hat);
        assert!((r.upper_hat - 0.58).abs() < 0.012, "upper {}", r.upper_hat);
        assert_eq!(r.samples_taken, 100_000);
        assert_eq!(r.unsat_samples, 0);
        // Only four distinct worlds exist, so nearly everything is a hit.
        assert!(r.cache_hits >= 99_000);
    }

    #[test]
    fn both_modes_agree_on_the_gaussian_program() {
        let prog = prepared(GAUSSIAN);
        let discrete = SampleConfig { n_samples: 100_000, seed: 11, ..SampleConfig::default() };
        let hybrid = SampleConfig { mode: SampleMode::Hybrid, ..discrete.clone() };
        let d = estimate(&prog, &q0(), &discrete).unwrap();
        let h = estimate(&prog, &q0(), &hybrid).unwrap();
        for r in [&d, &h] {
            assert!((r.lower_hat - 0.303).abs() < 0.012, "lower {}", r.lower_hat);
            assert!((r.upper_hat - 0.718).abs() < 0.012, "upper {}", r.upper_hat);
        }
    }

    #[test]
    fn estimates_are_deterministic_and_cache_transparent() {
        let prog = prepared(GAUSSIAN);
        let cfg = SampleConfig {
            n_samples: 5_000,
            seed: 3,
            mode: SampleMode::Hybrid,
            ..SampleConfig::default()
        };
        let a = estimate(&prog, &q0(), &cfg).unwrap();
        let b = estimate(&prog, &q0(), &cfg).unwrap();
        assert_eq!(a, b);

        let uncached = SampleConfig { cache_enabled: false, ..cfg.clone() };
        let c = estimate(&prog, &q0(), &uncached).unwrap();
        assert_eq!(c.lower_hat.to_bits(), a.lower_hat.to_bits());
        assert_eq!(c.upper_hat.to_bits(), a.upper_hat.to_bits());
        assert_eq!(c.unsat_samples, a.unsat_samples);
        assert_eq!(c.cache_hits, 0);

        let capped = SampleConfig { cache_max: Some(2), ..cfg };
        let d = estimate(&prog, &q0(), &capped).unwrap();
        assert_eq!(d.lower_hat.to_bits(), a.lower_hat.to_bits());
        assert_eq!(d.upper_hat.to_bits(), a.upper_hat.to_bits());
        assert!(d.cache_hits <= a.cache_hits);
    }

    #[test]
    fn provable_query_needs_no_probabilities() {
        let prog = prepared("q.\n");
        let cfg = SampleConfig { n_samples: 50, seed: 1, ..SampleConfig::default() };
        let r = estimate(&prog, &Atom::prop("q"), &cfg).unwrap();
        assert_eq!((r.lower_hat, r.upper_hat), (1.0, 1.0));
        assert_eq!(r.samples_taken, 50);
        assert_eq!(r.unsat_samples, 0);
    }

    #[test]
    fn unsat_samples_are_reported_and_excluded() {
        let prog = prepared("0.5::a.\nq:- a.\n:- not a.\n");
        let cfg = SampleConfig { n_samples: 10_000, seed: 5, ..SampleConfig::default() };
        let r = estimate(&prog, &Atom::prop("q"), &cfg).unwrap();
        let unsat_frac = r.unsat_samples as f64 / r.samples_taken as f64;
        assert!((unsat_frac - 0.5).abs() < 0.015, "unsat {unsat_frac}");
        assert!((r.lower_hat - 0.5).abs() < 0.015, "lower {}", r.lower_hat);
        assert_eq!(r.lower_hat, r.upper_hat);

        // Normalized estimates divide by the satisfiable fraction instead.
        let norm = SampleConfig { normalize: true, ..cfg };
        let r = estimate(&prog, &Atom::prop("q"), &norm).unwrap();
        assert_eq!((r.lower_hat, r.upper_hat), (1.0, 1.0));

        // A program whose every world is inconsistent cannot be normalized.
        let broken = prepared("q.\n:- q.\n");
        assert!(matches!(
            estimate(&broken, &Atom::prop("q"), &SampleConfig { normalize: true, n_samples: 10, ..SampleConfig::default() }),
            Err(Error::AllWorldsInconsistent)
        ));
    }

    #[test]
    fn zero_samples_is_rejected() {
        let prog = prepared(TWO_FACTS);
        assert!(matches!(
            estimate(&prog, &q0(), &SampleConfig { n_samples: 0, ..SampleConfig::default() }),
            Err(Error::InvalidParameter(_))
        ));
    }
}
