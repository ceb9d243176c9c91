//! End-to-end library tests over the worked example programs: parse,
//! ground, discretize, and solve, checking frozen full-precision values
//! rather than the rounded presentation figures (those live in the
//! acceptance gate). The frozen constants were computed independently with
//! arbitrary-precision arithmetic.

use std::collections::BTreeSet;

use hpasp::asp;
use hpasp::discretize::{discretize, discretize_with_evidence, DiscretizedProgram};
use hpasp::exact::{conditional_query, credal_query};
use hpasp::sample::{estimate, SampleConfig, SampleMode};
use hpasp::syntax::{
    ground, parse_evidence_literal, parse_program, validate, Atom, EvidenceLit, HybridProgram,
    Interpretation,
};

fn load_text(text: &str) -> HybridProgram {
    let parsed = parse_program(text).expect("program text parses");
    let grounded = ground(&parsed).expect("program grounds");
    validate(&grounded).expect("program validates");
    grounded
}

fn prepare(text: &str) -> DiscretizedProgram {
    discretize(&load_text(text)).expect("program discretizes")
}

fn evidence(lits: &[&str]) -> Vec<EvidenceLit> {
    lits.iter().map(|l| parse_evidence_literal(l).expect("evidence literal parses")).collect()
}

const TWO_FACTS: &str = "0.3::a. 0.4::b.\nq0 ; q1 :- a.\nq0 :- b.\n";

const ONE_GAUSSIAN: &str =
    "0.4::b.\na:gaussian(0,1).\nq0 ; q1 :- below(a,0.5).\nq0 :- below(a,0.7), b.\n";

const WITH_CONSTRAINT: &str = "0.4::b.\na:gaussian(0,1).\nq0 ; q1 :- below(a,0.5).\n\
                               q0 :- below(a,0.7), b.\n:- b, below(a,0.2).\n";

#[test]
fn two_fact_program_full_precision_bounds() {
    let r = credal_query(&prepare(TWO_FACTS), &Atom::prop("q0"), false).expect("solve");
    // 0.4 = P(b), 0.58 = P(a or b); both are exact binary fractions of the
    // inputs so the sums land within one ulp.
    assert!((r.lower - 0.4).abs() < 1e-15);
    assert!((r.upper - 0.58).abs() < 1e-15);
    assert_eq!(r.inconsistent_mass, 0.0);
    assert_eq!(r.worlds_enumerated, 4);
    assert!(!r.normalized);
}

#[test]
fn discretization_produces_the_aux_clause_program() {
    let dp = prepare(ONE_GAUSSIAN);
    // Partition of `a`: two bounds, three intervals, two introduced facts.
    assert_eq!(dp.partitions.len(), 1);
    assert_eq!(dp.partitions[0].bounds, vec![0.5, 0.7]);
    assert_eq!(dp.partitions[0].intervals(), 3);
    assert_eq!(dp.fact_count(), 3);
    assert!(dp.program.continuous.is_empty());

    // Full-precision interval masses: Phi(0.5) and the renormalized strip
    // (Phi(0.7) - Phi(0.5)) / (1 - Phi(0.5)).
    let var = Atom::prop("a");
    let pi = |k: usize| -> f64 {
        dp.provenance
            .facts
            .values()
            .find(|(v, idx, _)| *v == var && *idx == k)
            .map(|t| t.2)
            .expect("interval fact present")
    };
    assert!((pi(1) - 0.6914624612740131).abs() < 1e-12);
    assert!((pi(2) - 0.21577240415480966).abs() < 1e-12);
}

#[test]
fn gaussian_program_full_precision_bounds() {
    let r = credal_query(&prepare(ONE_GAUSSIAN), &Atom::prop("q0"), false).expect("solve");
    // lower = P(b) * Phi(0.7), upper = Phi(0.5) + P(b) * (Phi(0.7) - Phi(0.5)).
    assert!((r.lower - 0.3032145391107708).abs() < 1e-12, "lower {}", r.lower);
    assert!((r.upper - 0.7180920158751787).abs() < 1e-12, "upper {}", r.upper);
    assert_eq!(r.inconsistent_mass, 0.0);
    assert_eq!(r.worlds_enumerated, 8);
}

#[test]
fn constraint_program_unnormalized_and_normalized() {
    let dp = prepare(WITH_CONSTRAINT);
    let q0 = Atom::prop("q0");
    let raw = credal_query(&dp, &q0, false).expect("raw solve");
    // The constraint kills worlds with b and the lowest interval:
    // P(inc) = 0.4 * Phi(0.2).
    assert!((raw.inconsistent_mass - 0.23170388377564121).abs() < 1e-12);
    assert!((raw.lower - 0.07151065533512959).abs() < 1e-12, "lower {}", raw.lower);
    assert!((raw.upper - 0.48638813209953745).abs() < 1e-12, "upper {}", raw.upper);

    let norm = credal_query(&dp, &q0, true).expect("normalized solve");
    let z = 1.0 - raw.inconsistent_mass;
    assert!((norm.lower - raw.lower / z).abs() < 1e-15);
    assert!((norm.upper - raw.upper / z).abs() < 1e-15);
    // Inconsistent mass is reported raw either way.
    assert_eq!(norm.inconsistent_mass, raw.inconsistent_mass);
}

#[test]
fn mixture_program_collapses_to_a_point() {
    let dp = prepare(
        "0.4::c.\na:gaussian(10,3).\nb:gaussian(9,2).\n\
         q0 :- c, above(a,6.0).\nq0 :- not c, above(b,6.0).\n",
    );
    let r = credal_query(&dp, &Atom::prop("q0"), false).expect("solve");
    // Every world has a single answer set, so the interval degenerates:
    // 0.4 * Phi(4/3) + 0.6 * Phi(3/2).
    assert_eq!(r.lower, r.upper);
    assert!((r.lower - 0.923431191348338).abs() < 1e-12, "point {}", r.lower);
}

#[test]
fn conditional_queries_follow_the_ratio_semantics() {
    let prog = load_text(ONE_GAUSSIAN);
    let q0 = Atom::prop("q0");

    // Continuous evidence refines the partition: P(q0 | a > 0.6).
    let above = conditional_query(&prog, &q0, &evidence(&["above(a,0.6)"])).expect("solve");
    assert!((above.lower - 0.047094400664463407).abs() < 1e-12, "lower {}", above.lower);
    assert!((above.upper - 0.047094400664463407).abs() < 1e-12, "upper {}", above.upper);

    // Evidence implying the disjunctive trigger keeps the interval wide:
    // given a < 0.5 the first rule fires, so q0 ranges from P(b) to 1.
    let below = conditional_query(&prog, &q0, &evidence(&["below(a,0.5)"])).expect("solve");
    assert!((below.lower - 0.4).abs() < 1e-12, "lower {}", below.lower);
    assert!((below.upper - 1.0).abs() < 1e-12, "upper {}", below.upper);

    // Negated atom evidence: without b only the disjunctive rule remains.
    let not_b = conditional_query(&prog, &q0, &evidence(&["not b"])).expect("solve");
    assert!((not_b.lower - 0.0).abs() < 1e-12, "lower {}", not_b.lower);
    assert!((not_b.upper - 0.6914624612740131).abs() < 1e-12, "upper {}", not_b.upper);

    // No evidence reduces to the plain pipeline.
    let plain = conditional_query(&prog, &q0, &[]).expect("solve");
    assert!((plain.lower - 0.3032145391107708).abs() < 1e-12);
    assert!((plain.upper - 0.7180920158751787).abs() < 1e-12);
}

#[test]
fn evidence_refinement_keeps_fact_count_minimal() {
    let prog = load_text(ONE_GAUSSIAN);
    // Discretizing with evidence on a fresh bound adds exactly one cut:
    // partition {0.5, 0.6, 0.7} and three facts for `a`.
    let ev = evidence(&["above(a,0.6)"]);
    let comps: Vec<_> = ev
        .iter()
        .map(|l| match l {
            EvidenceLit::Comp(c) => c.clone(),
            EvidenceLit::Atom(a, _) => panic!("expected comparison evidence, got {a}"),
        })
        .collect();
    let (dp, groups) = discretize_with_evidence(&prog, &comps).expect("discretize");
    assert_eq!(dp.partitions.len(), 1);
    assert_eq!(dp.partitions[0].bounds, vec![0.5, 0.6, 0.7]);
    assert_eq!(dp.fact_count(), 4);
    // One evidence literal, one group of interval atoms covering (0.6, inf).
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].len(), 2);
}

#[test]
fn projection_matches_world_by_world_enumeration() {
    // The choice-converted program's projected answer sets are exactly the
    // per-world answer sets projected onto the query and fact atoms.
    let listing = "0.4::b.\n0.6915::a1.\n0.2139::a2.\n\
                   int1 :- a1.\nint2 :- not a1, a2.\n\
                   q0 ; q1 :- int1.\nq0 :- int1, b.\nq0 :- int2, b.\n";
    let prog = load_text(listing);
    let onto =
        [Atom::prop("q0"), Atom::prop("a1"), Atom::prop("a2"), Atom::prop("b")];
    let converted = asp::to_choice_program(&prog);
    let projected: BTreeSet<Interpretation> =
        asp::projected_answer_sets(&converted, &onto).expect("project").into_iter().collect();

    let mut from_worlds: BTreeSet<Interpretation> = BTreeSet::new();
    let dp = discretize(&prog).expect("discretize");
    for (_, world_program) in hpasp::exact::enumerate_worlds(&dp).expect("enumerate") {
        for set in asp::answer_sets(&world_program).expect("answer sets") {
            from_worlds.insert(set.into_iter().filter(|a| onto.contains(a)).collect());
        }
    }
    assert_eq!(projected, from_worlds);
}

#[test]
fn discrete_sampling_converges_on_the_two_fact_program() {
    let prog = load_text(TWO_FACTS);
    let cfg = SampleConfig { n_samples: 200_000, seed: 5, ..SampleConfig::default() };
    let est = estimate(&prog, &Atom::prop("q0"), &cfg).expect("sampling");
    assert_eq!(est.samples_taken, 200_000);
    assert_eq!(est.unsat_samples, 0);
    // Three-sigma band around the exact bounds.
    let n = est.samples_taken as f64;
    let tol = |p: f64| 3.0 * (p * (1.0 - p) / n).sqrt();
    assert!((est.lower_hat - 0.4).abs() <= tol(0.4), "lower_hat {}", est.lower_hat);
    assert!((est.upper_hat - 0.58).abs() <= tol(0.58), "upper_hat {}", est.upper_hat);
    // With four distinct worlds almost every sample is a cache hit.
    assert!(est.cache_hits > est.samples_taken - 100);
}

#[test]
fn sampling_is_deterministic_per_seed_and_mode() {
    let prog = load_text(ONE_GAUSSIAN);
    let q0 = Atom::prop("q0");
    for mode in [SampleMode::Discrete, SampleMode::Hybrid] {
        let cfg = SampleConfig { n_samples: 20_000, seed: 11, mode, ..SampleConfig::default() };
        let a = estimate(&prog, &q0, &cfg).expect("first run");
        let b = estimate(&prog, &q0, &cfg).expect("second run");
        assert_eq!(a, b, "rerun drift in {mode:?} mode");
        // Disabling the cache changes counters but not estimates.
        let uncached = SampleConfig { cache_enabled: false, ..cfg };
        let c = estimate(&prog, &q0, &uncached).expect("uncached run");
        assert_eq!(c.cache_hits, 0);
        assert_eq!((a.lower_hat, a.upper_hat), (c.lower_hat, c.upper_hat), "{mode:?} mode");
    }
}

#[test]
fn normalized_sampling_divides_by_the_satisfiable_mass() {
    let prog = load_text(WITH_CONSTRAINT);
    let q0 = Atom::prop("q0");
    let base = SampleConfig { n_samples: 150_000, seed: 17, ..SampleConfig::default() };
    let raw = estimate(&prog, &q0, &base).expect("raw");
    assert!(raw.unsat_samples > 0, "constraint should produce unsatisfiable samples");
    let norm =
        estimate(&prog, &q0, &SampleConfig { normalize: true, ..base }).expect("normalized");
    let satisfiable = (raw.samples_taken - raw.unsat_samples) as f64;
    let rescale = raw.samples_taken as f64 / satisfiable;
    assert!((norm.lower_hat - raw.lower_hat * rescale).abs() < 1e-12);
    assert!((norm.upper_hat - raw.upper_hat * rescale).abs() < 1e-12);
}
