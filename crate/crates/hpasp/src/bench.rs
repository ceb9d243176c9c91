//! Deterministic generators for the five benchmark families t1–t5.
//!
//! Each generator emits program text in the surface syntax, shaped exactly
//! like the published instances: t1 grows discrete and continuous variables
//! together, t2 and t3 fix one kind and grow the other, t4 tiles an
//! ever-finer sequence of intervals over a single Gaussian variable, and t5
//! scales the blood-pressure program by the number of people involved.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A benchmark instance selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchSpec {
    T1 { n: usize },
    T2 { k: usize, n: usize },
    T3 { k: usize, n: usize },
    T4 { n: usize, seed: u64 },
    T5 { n: usize },
}

/// Generate the program text for a benchmark instance.
pub fn generate(spec: &BenchSpec) -> Result<String> {
    match *spec {
        BenchSpec::T1 { n } => gen_t1(n),
        BenchSpec::T2 { k, n } => gen_t2(k, n),
        BenchSpec::T3 { k, n } => gen_t3(k, n),
        BenchSpec::T4 { n, seed } => gen_t4(n, seed),
        BenchSpec::T5 { n } => gen_t5(n),
    }
}

/// t1: n/2 discrete facts d_i, n/2 unit Gaussians c_i, one q0/q1 rule pair
/// per c_i and one `q0 :- below(c_i,0.7), d_i` rule. Requires even n ≥ 2.
pub fn gen_t1(n: usize) -> Result<String> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidSize(format!("t1 needs an even size of at least 2, got {n}")));
    }
    let m = n / 2;
    let mut out = String::new();
    for i in 1..=m {
        let _ = writeln!(out, "0.5::d{i}.");
    }
    for i in 1..=m {
        let _ = writeln!(out, "c{i}:gaussian(0,1).");
    }
    for i in 1..=m {
        let _ = writeln!(out, "q0 :- below(c{i},0.5), not q1.");
        let _ = writeln!(out, "q1 :- below(c{i},0.5), not q0.");
    }
    for i in 1..=m {
        let _ = writeln!(out, "q0 :- below(c{i},0.7), d{i}.");
    }
    Ok(out)
}

/// t2: k discrete facts d_0..d_{k-1}, n unit Gaussians c_1..c_n, one rule
/// pair per c_i and rules `q0 :- below(c_i,0.7), d_{(i-1) mod k}`.
pub fn gen_t2(k: usize, n: usize) -> Result<String> {
    positive("t2", "k", k)?;
    positive("t2", "n", n)?;
    let mut out = String::new();
    for i in 0..k {
        let _ = writeln!(out, "0.5::d{i}.");
    }
    for i in 1..=n {
        let _ = writeln!(out, "c{i}:gaussian(0,1).");
    }
    for i in 1..=n {
        let _ = writeln!(out, "q0 :- below(c{i},0.5), not q1.");
        let _ = writeln!(out, "q1 :- below(c{i},0.5), not q0.");
    }
    for i in 1..=n {
        let _ = writeln!(out, "q0 :- below(c{i},0.7), d{}.", (i - 1) % k);
    }
    Ok(out)
}

/// t3: n discrete facts d_1..d_n, k unit Gaussians c_0..c_{k-1}, one rule
/// pair per c_i and rules `q0 :- below(c_{(i-1) mod k},0.7), d_i`.
pub fn gen_t3(k: usize, n: usize) -> Result<String> {
    positive("t3", "k", k)?;
    positive("t3", "n", n)?;
    let mut out = String::new();
    for i in 1..=n {
        let _ = writeln!(out, "0.5::d{i}.");
    }
    for i in 0..k {
        let _ = writeln!(out, "c{i}:gaussian(0,1).");
    }
    for i in 0..k {
        let _ = writeln!(out, "q0 :- below(c{i},0.5), not q1.");
        let _ = writeln!(out, "q1 :- below(c{i},0.5), not q0.");
    }
    for i in 1..=n {
        let _ = writeln!(out, "q0 :- below(c{},0.7), d{i}.", (i - 1) % k);
    }
    Ok(out)
}

/// t4: one fact `0.4::d`, one `gaussian(0,10)` variable, and two families
/// of n `between` rules whose intervals tile the line starting at -30.
/// Each family's intervals are contiguous — a rule's lower bound is the
/// previous rule's upper bound — and every upper bound is drawn uniformly
/// from the next `60/n`-wide window, rounded to three decimals. Draws that
/// would collide with an existing bound after rounding are retried, so all
/// bounds across both families stay distinct except for the shared start.
pub fn gen_t4(n: usize, seed: u64) -> Result<String> {
    positive("t4", "n", n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = std::collections::BTreeSet::from([to_millis(-30.0)]);
    let pairs = bound_sequence(n, &mut rng, &mut used);
    let singles = bound_sequence(n, &mut rng, &mut used);
    let mut out = String::from("0.4::d.\nc:gaussian(0,10).\n");
    for (lb, ub) in &pairs {
        let _ = writeln!(out, "q0:- between(c,{},{}), not q1.", fmt_bound(*lb), fmt_bound(*ub));
        let _ = writeln!(out, "q1:- between(c,{},{}), not q0.", fmt_bound(*lb), fmt_bound(*ub));
    }
    for (lb, ub) in &singles {
        let _ = writeln!(out, "q0:- d, between(c,{},{}).", fmt_bound(*lb), fmt_bound(*ub));
    }
    Ok(out)
}

/// t5: the blood-pressure program over n people (the published instance is
/// n = 4), with ranges `1..n` in the declarations.
pub fn gen_t5(n: usize) -> Result<String> {
    positive("t5", "n", n)?;
    let people = if n == 1 { "1".to_string() } else { format!("1..{n}") };
    Ok(format!(
        "0.4::pred_d({people}).\n\
         0.6::pred_s({people}).\n\
         d({people}):gamma(70,1).\n\
         s({people}):gamma(120,1).\n\
         \n\
         prob_d(P):- outside(d(P), 60, 80).\n\
         prob_s(P):- outside(s(P), 110, 130).\n\
         \n\
         prob(P):- prob_d(P), pred_d(P).\n\
         prob(P):- prob_s(P), pred_s(P).\n\
         \n\
         stroke(P);not_stroke(P):- prob(P).\n\
         \n\
         :- #count{{X:prob(X)}}=P, #count{{X:stroke(X),prob(X)}}=S, 10*S < 4*P.\n\
         \n\
         high_number_strokes:- #count{{X : stroke(X)}}=CS, CS > 1.\n"
    ))
}

fn positive(family: &str, what: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidSize(format!("{family} needs {what} of at least 1")));
    }
    Ok(())
}

/// One family of n contiguous intervals: (-30, u_1), (u_1, u_2), ...
/// All bounds are canonicalized to three decimals; `used` tracks every
/// bound emitted so far (across families) to keep them globally distinct.
fn bound_sequence(
    n: usize,
    rng: &mut ChaCha8Rng,
    used: &mut std::collections::BTreeSet<i64>,
) -> Vec<(f64, f64)> {
    let step = 60.0 / n as f64;
    let mut prev = -30.0;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut next = 0.0;
        let mut accepted = false;
        for _ in 0..100 {
            let draw = round3(rng.gen_range(prev..prev + step));
            if draw > prev && used.insert(to_millis(draw)) {
                next = draw;
                accepted = true;
                break;
            }
        }
        if !accepted {
            // The window is narrower than the rounding grid (huge n); fall
            // back to the smallest free grid point above the current bound.
            let mut candidate = to_millis(prev) + 1;
            while !used.insert(candidate) {
                candidate += 1;
            }
            next = candidate as f64 / 1000.0;
        }
        out.push((prev, next));
        prev = next;
    }
    out
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

fn to_millis(v: f64) -> i64 {
    (v * 1000.0).round() as i64
}

/// Three-decimal formatting with trailing zeros (and a bare point) trimmed:
/// -30.0 → "-30", -29.750 → "-29.75", -23.606 → "-23.606".
fn fmt_bound(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::discretize;
    use crate::exact::{classify_world, enumerate_worlds, WorldClass};
    use crate::syntax::{ground, parse_program, validate, Atom, HybridProgram};

    fn prepared(text: &str) -> HybridProgram {
        let prog = ground(&parse_program(text).unwrap()).unwrap();
        validate(&prog).unwrap();
        prog
    }

    #[test]
    fn t1_size_2_matches_the_published_listing() {
        assert_eq!(
            gen_t1(2).unwrap(),
            "0.5::d1.\n\
             c1:gaussian(0,1).\n\
             q0 :- below(c1,0.5), not q1.\n\
             q1 :- below(c1,0.5), not q0.\n\
             q0 :- below(c1,0.7), d1.\n"
        );
    }

    #[test]
    fn t1_counts_and_round_trips() {
        let p = parse_program(&gen_t1(4).unwrap()).unwrap();
        assert_eq!(p.prob_facts.len(), 2);
        assert_eq!(p.continuous.len(), 2);
        assert_eq!(p.rules.len(), 6);
        for n in (2..=20).step_by(2) {
            prepared(&gen_t1(n).unwrap());
        }
        for bad in [0, 1, 3, 7] {
            assert!(matches!(gen_t1(bad), Err(Error::InvalidSize(_))));
        }
    }

    #[test]
    fn t2_size_2_matches_the_published_listing() {
        assert_eq!(
            gen_t2(2, 2).unwrap(),
            "0.5::d0.\n\
             0.5::d1.\n\
             c1:gaussian(0,1).\n\
             c2:gaussian(0,1).\n\
             q0 :- below(c1,0.5), not q1.\n\
             q1 :- below(c1,0.5), not q0.\n\
             q0 :- below(c2,0.5), not q1.\n\
             q1 :- below(c2,0.5), not q0.\n\
             q0 :- below(c1,0.7), d0.\n\
             q0 :- below(c2,0.7), d1.\n"
        );
    }

    #[test]
    fn t2_wraps_fact_indices_and_tolerates_unused_facts() {
        // With more facts than variables, the extra facts appear in no rule.
        let p = parse_program(&gen_t2(5, 1).unwrap()).unwrap();
        assert_eq!(p.prob_facts.len(), 5);
        assert_eq!(p.continuous.len(), 1);
        assert_eq!(p.rules.len(), 3);
        // i = 3 with k = 2 selects d0.
        assert!(gen_t2(2, 3).unwrap().contains("q0 :- below(c3,0.7), d0.\n"));
        assert!(matches!(gen_t2(0, 1), Err(Error::InvalidSize(_))));
        assert!(matches!(gen_t2(1, 0), Err(Error::InvalidSize(_))));
    }

    #[test]
    fn t3_size_3_matches_the_published_listing() {
        assert_eq!(
            gen_t3(2, 3).unwrap(),
            "0.5::d1.\n\
             0.5::d2.\n\
             0.5::d3.\n\
             c0:gaussian(0,1).\n\
             c1:gaussian(0,1).\n\
             q0 :- below(c0,0.5), not q1.\n\
             q1 :- below(c0,0.5), not q0.\n\
             q0 :- below(c1,0.5), not q1.\n\
             q1 :- below(c1,0.5), not q0.\n\
             q0 :- below(c0,0.7), d1.\n\
             q0 :- below(c1,0.7), d2.\n\
             q0 :- below(c0,0.7), d3.\n"
        );
    }

    #[test]
    fn t3_rule_count_is_2k_plus_n() {
        let p = parse_program(&gen_t3(3, 4).unwrap()).unwrap();
        assert_eq!(p.rules.len(), 2 * 3 + 4);
        prepared(&gen_t3(1, 1).unwrap());
    }

    #[test]
    fn t4_has_the_listing_shape_and_contiguous_increasing_bounds() {
        let text = gen_t4(2, 123).unwrap();
        assert!(text.starts_with("0.4::d.\nc:gaussian(0,10).\n"));
        let p = prepared(&text);
        assert_eq!(p.prob_facts.len(), 1);
        assert_eq!(p.continuous.len(), 1);
        assert_eq!(p.rules.len(), 6);
        assert_eq!(text.matches("between(c,-30,").count(), 3, "both families start at -30");

        // Within a family the intervals tile: each lower bound repeats the
        // previous upper bound, and bounds strictly increase.
        let bound_list = |needle: &str| -> Vec<(f64, f64)> {
            text.lines()
                .filter(|l| l.contains(needle))
                .map(|l| {
                    let args = l.split("between(c,").nth(1).unwrap();
                    let args = args.split(')').next().unwrap();
                    let mut it = args.split(',');
                    (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
                })
                .collect()
        };
        for family in [bound_list("not q1"), bound_list("q0:- d,")] {
            assert_eq!(family[0].0, -30.0);
            for w in family.windows(2) {
                assert_eq!(w[0].1, w[1].0);
            }
            for (lb, ub) in &family {
                assert!(lb < ub);
            }
        }

        // Deterministic per seed, different across seeds.
        assert_eq!(text, gen_t4(2, 123).unwrap());
        assert_ne!(text, gen_t4(2, 124).unwrap());
    }

    #[test]
    fn t4_size_70_discretizes_to_142_facts() {
        let dp = discretize(&prepared(&gen_t4(70, 99).unwrap())).unwrap();
        assert_eq!(dp.program.prob_facts.len(), 142);
    }

    #[test]
    fn t5_size_4_is_the_blood_pressure_program() {
        // The published instance writes the constraint and final rule over
        // several lines; after grounding both spellings coincide.
        let published = "0.4::pred_d(1..4).\n\
                         0.6::pred_s(1..4).\n\
                         d(1..4):gamma(70,1).\n\
                         s(1..4):gamma(120,1).\n\
                         \n\
                         prob_d(P):- outside(d(P), 60, 80).\n\
                         prob_s(P):- outside(s(P), 110, 130).\n\
                         \n\
                         prob(P):- prob_d(P), pred_d(P).\n\
                         prob(P):- prob_s(P), pred_s(P).\n\
                         \n\
                         stroke(P);not_stroke(P):- prob(P).\n\
                         \n\
                         :- #count{X:prob(X)}=P, \n   \
                         #count{X:stroke(X),prob(X)}=S,\n   \
                         10*S < 4*P.\n\
                         \n\
                         high_number_strokes:- \n   \
                         #count{X : stroke(X)}=CS, CS > 1.\n";
        let ours = ground(&parse_program(&gen_t5(4).unwrap()).unwrap()).unwrap();
        let theirs = ground(&parse_program(published).unwrap()).unwrap();
        assert_eq!(ours, theirs);
    }

    #[test]
    fn t5_discretization_and_small_sizes() {
        let dp = discretize(&prepared(&gen_t5(4).unwrap())).unwrap();
        assert_eq!(dp.program.prob_facts.len(), 24);
        prepared(&gen_t5(1).unwrap());
        assert!(matches!(gen_t5(0), Err(Error::InvalidSize(_))));
    }

    #[test]
    fn small_instances_have_no_inconsistent_worlds() {
        let q0 = Atom::prop("q0");
        for text in [
            gen_t1(2).unwrap(),
            gen_t2(2, 2).unwrap(),
            gen_t3(2, 2).unwrap(),
            gen_t5(1).unwrap(),
        ] {
            let dp = discretize(&prepared(&text)).unwrap();
            for (_, program) in enumerate_worlds(&dp).unwrap() {
                assert_ne!(classify_world(&program, &q0).unwrap(), WorldClass::Unsatisfiable);
            }
        }
    }
}
