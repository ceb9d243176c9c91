//! Command-line front end.
//!
//! One subcommand per capability: `check` parses, grounds, and validates a
//! program; `discretize` prints the comparison-free translation; `solve`
//! computes exact credal bounds, optionally conditioned on evidence;
//! `sample` estimates the bounds by Monte Carlo; `samplesize` plans how
//! many samples a tolerance needs; `bench` generates benchmark programs.
//!
//! Programs are read from a file argument, or from standard input when the
//! argument is absent or `-`. Results go to stdout, diagnostics to stderr.
//! Exit codes: 0 on success, 1 on user error, 2 on an exceeded resource cap.
//! Output is deterministic: rerunning with the same flags and seed yields
//! byte-identical bytes.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchSpec};
use crate::discretize::discretize;
use crate::exact::{self, CredalResult, ExactOptions, DEFAULT_WORLD_CAP};
use crate::sample::{self, SampleConfig, SampleMode};
use crate::syntax::{
    ground, parse_evidence_literal, parse_program, validate, Atom, EvidenceLit, HybridProgram,
};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "hpasp",
    version,
    about = "Credal inference for hybrid probabilistic answer set programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, ground, and validate a program, reporting its dimensions.
    Check {
        /// Program file; `-` or absent reads standard input.
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Replace comparison atoms by interval facts and print the result.
    Discretize {
        /// Program file; `-` or absent reads standard input.
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Exact credal bounds of a ground query atom.
    Solve {
        /// Program file; `-` or absent reads standard input.
        input: Option<PathBuf>,
        /// Ground query atom.
        #[arg(long)]
        query: String,
        /// Comma-separated evidence literals: atoms, `not` atoms, or
        /// comparisons such as `above(a,0.6)`.
        #[arg(long)]
        evidence: Option<String>,
        /// Rescale the bounds by the total mass of consistent worlds.
        #[arg(long)]
        normalize: bool,
        /// Refuse to enumerate more than 2^CAP worlds.
        #[arg(long, value_name = "CAP", default_value_t = DEFAULT_WORLD_CAP)]
        world_cap: usize,
        /// Worker threads for world enumeration.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Monte Carlo estimate of the credal bounds.
    Sample {
        /// Program file; `-` or absent reads standard input.
        input: Option<PathBuf>,
        /// Ground query atom.
        #[arg(long)]
        query: String,
        /// Number of samples.
        #[arg(long, default_value_t = 10_000)]
        n: u64,
        /// `discrete` samples the facts of the discretized program; `hybrid`
        /// samples the continuous variables directly.
        #[arg(long, value_enum, default_value = "discrete")]
        mode: SampleModeArg,
        /// Base seed for the per-sample random streams.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Memoize world classifications (the default).
        #[arg(long, overrides_with = "no_cache")]
        cache: bool,
        /// Classify every sampled world from scratch.
        #[arg(long)]
        no_cache: bool,
        /// Stop adding cache entries beyond this count.
        #[arg(long, value_name = "ENTRIES")]
        cache_max: Option<usize>,
        /// Divide by the satisfiable fraction instead of the sample count.
        #[arg(long)]
        normalize: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Number of samples needed for a target error tolerance.
    Samplesize {
        /// Error tolerance, in (0, 1].
        #[arg(long)]
        epsilon: f64,
        /// Failure probability, in (0, 1].
        #[arg(long)]
        delta: f64,
        /// Whether epsilon is an additive or a multiplicative error.
        #[arg(long, value_enum, default_value = "absolute")]
        mode: PlanModeArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Generate a benchmark program.
    Bench {
        /// Benchmark family.
        #[arg(long, value_enum)]
        dataset: DatasetArg,
        /// Instance size parameter.
        #[arg(long)]
        size: usize,
        /// Number of shared facts (t2) or continuous variables (t3).
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Seed for t4's randomized interval bounds.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the program here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum SampleModeArg {
    Discrete,
    Hybrid,
}

impl From<SampleModeArg> for SampleMode {
    fn from(mode: SampleModeArg) -> Self {
        match mode {
            SampleModeArg::Discrete => SampleMode::Discrete,
            SampleModeArg::Hybrid => SampleMode::Hybrid,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum PlanModeArg {
    Absolute,
    Relative,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum DatasetArg {
    T1,
    T2,
    T3,
    T4,
    T5,
}

/// Parse `argv`, run the requested subcommand, and return the process exit
/// code. Never panics on bad input; diagnostics go to stderr.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Flag mistakes are user errors (exit 1); --help and --version
            // print on stdout and exit 0.
            let code = i32::from(err.use_stderr());
            let _ = err.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Check { input, format } => {
            let prog = load(input.as_deref())?;
            match format {
                Format::Text => println!(
                    "ok facts={} continuous={} rules={}",
                    prog.prob_facts.len(),
                    prog.continuous.len(),
                    prog.rules.len()
                ),
                Format::Json => print_json(&serde_json::json!({
                    "ok": true,
                    "facts": prog.prob_facts.len(),
                    "continuous": prog.continuous.len(),
                    "rules": prog.rules.len(),
                })),
            }
            Ok(())
        }
        Command::Discretize { input, format } => {
            let dp = discretize(&load(input.as_deref())?)?;
            match format {
                Format::Text => print!("{dp}"),
                Format::Json => print_json(&serde_json::json!({
                    "program": dp.to_string(),
                    "facts": dp.program.prob_facts.len(),
                })),
            }
            Ok(())
        }
        Command::Solve { input, query, evidence, normalize, world_cap, threads, format } => {
            let prog = load(input.as_deref())?;
            let query = parse_query(&query)?;
            let evidence = parse_evidence(evidence.as_deref())?;
            let opts = ExactOptions { normalize, world_cap, threads };
            let result = exact::conditional_query_with(&prog, &query, &evidence, &opts)?;
            print_credal(&result, format);
            Ok(())
        }
        Command::Sample { input, query, n, mode, seed, cache: _, no_cache, cache_max, normalize, format } => {
            let prog = load(input.as_deref())?;
            let query = parse_query(&query)?;
            let cfg = SampleConfig {
                n_samples: n,
                seed,
                mode: mode.into(),
                cache_enabled: !no_cache,
                normalize,
                cache_max,
            };
            let r = sample::estimate(&prog, &query, &cfg)?;
            match format {
                Format::Text => println!(
                    "lower={:.6} upper={:.6} inconsistent={:.6} samples={} cache_hits={} unsat={}",
                    r.lower_hat,
                    r.upper_hat,
                    r.unsat_samples as f64 / r.samples_taken as f64,
                    r.samples_taken,
                    r.cache_hits,
                    r.unsat_samples
                ),
                Format::Json => print_json(&serde_json::json!({
                    "lower_hat": r.lower_hat,
                    "upper_hat": r.upper_hat,
                    "samples_taken": r.samples_taken,
                    "cache_hits": r.cache_hits,
                    "unsat_samples": r.unsat_samples,
                })),
            }
            Ok(())
        }
        Command::Samplesize { epsilon, delta, mode, format } => {
            let n = match mode {
                PlanModeArg::Absolute => sample::samples_for_absolute_error(epsilon, delta)?,
                PlanModeArg::Relative => sample::samples_for_relative_error(epsilon, delta)?,
            };
            match format {
                Format::Text => println!("{n}"),
                Format::Json => print_json(&serde_json::json!({ "samples": n })),
            }
            Ok(())
        }
        Command::Bench { dataset, size, k, seed, out } => {
            let spec = match dataset {
                DatasetArg::T1 => BenchSpec::T1 { n: size },
                DatasetArg::T2 => BenchSpec::T2 { k, n: size },
                DatasetArg::T3 => BenchSpec::T3 { k, n: size },
                DatasetArg::T4 => BenchSpec::T4 { n: size, seed },
                DatasetArg::T5 => BenchSpec::T5 { n: size },
            };
            let text = bench::generate(&spec)?;
            match out {
                Some(path) => fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

/// Read, parse, ground, and validate the input program.
fn load(input: Option<&std::path::Path>) -> Result<HybridProgram> {
    let text = match input {
        Some(path) if path.as_os_str() != "-" => fs::read_to_string(path)?,
        _ => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text)?;
            text
        }
    };
    let prog = ground(&parse_program(&text)?)?;
    validate(&prog)?;
    Ok(prog)
}

fn parse_query(text: &str) -> Result<Atom> {
    match parse_evidence_literal(text)? {
        EvidenceLit::Atom(atom, false) => Ok(atom),
        EvidenceLit::Atom(atom, true) => Err(Error::InvalidParameter(format!(
            "the query must be a plain atom; 'not {atom}' is a negated literal"
        ))),
        EvidenceLit::Comp(c) => Err(Error::InvalidParameter(format!(
            "the query must be a ground atom, not the comparison '{c}'"
        ))),
    }
}

fn parse_evidence(text: Option<&str>) -> Result<Vec<EvidenceLit>> {
    let Some(text) = text else { return Ok(Vec::new()) };
    split_literals(text)
        .into_iter()
        .map(parse_evidence_literal)
        .collect()
}

/// Split a literal list on commas outside parentheses, so comparison
/// arguments like `above(a,0.6)` stay intact.
fn split_literals(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts.into_iter().map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn print_credal(r: &CredalResult, format: Format) {
    match format {
        Format::Text => println!(
            "lower={:.6} upper={:.6} inconsistent={:.6}",
            r.lower, r.upper, r.inconsistent_mass
        ),
        Format::Json => print_json(&serde_json::json!({
            "lower": r.lower,
            "upper": r.upper,
            "inconsistent": r.inconsistent_mass,
            "normalized": r.normalized,
            "worlds_enumerated": r.worlds_enumerated,
        })),
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{value}");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_lists_split_outside_parentheses_only() {
        assert_eq!(split_literals("b"), vec!["b"]);
        assert_eq!(
            split_literals("not b, above(a,0.6), between(c,-1,2.5)"),
            vec!["not b", "above(a,0.6)", "between(c,-1,2.5)"]
        );
        assert_eq!(split_literals(" e(1,2) ,f "), vec!["e(1,2)", "f"]);
        assert!(split_literals("  ").is_empty());
    }

    #[test]
    fn queries_must_be_positive_atoms() {
        assert_eq!(parse_query("q0").unwrap(), Atom::prop("q0"));
        assert!(parse_query("not q0").is_err());
        assert!(parse_query("above(a,0.5)").is_err());
    }

    #[test]
    fn command_line_grammar_accepts_the_documented_forms() {
        for argv in [
            vec!["hpasp", "check", "p.hpasp"],
            vec!["hpasp", "discretize", "-", "--format", "json"],
            vec!["hpasp", "solve", "p.hpasp", "--query", "q0"],
            vec!["hpasp", "solve", "--query", "q0", "--evidence", "not b,above(a,0.6)", "--normalize", "--world-cap", "20", "--threads", "4"],
            vec!["hpasp", "sample", "p.hpasp", "--query", "q0", "--n", "100", "--mode", "hybrid", "--seed", "7", "--no-cache", "--cache-max", "10"],
            vec!["hpasp", "samplesize", "--epsilon", "0.1", "--delta", "0.05", "--mode", "relative"],
            vec!["hpasp", "bench", "--dataset", "t4", "--size", "70", "--seed", "3", "--out", "x.hpasp"],
        ] {
            Cli::try_parse_from(&argv).unwrap_or_else(|e| panic!("{argv:?}: {e}"));
        }
        assert!(Cli::try_parse_from(["hpasp", "solve", "p.hpasp"]).is_err());
        assert!(Cli::try_parse_from(["hpasp", "bench", "--dataset", "t9", "--size", "2"]).is_err());
    }
}
