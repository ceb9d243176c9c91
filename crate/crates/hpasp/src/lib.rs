//! Credal inference for hybrid probabilistic answer set programs.
//!
//! A program mixes three ingredients:
//!
//! * independent probabilistic facts `0.3::a.`,
//! * continuous random variables `x:gaussian(0,1).` queried through
//!   comparison atoms such as `below(x,0.7)` or `between(x,-1,1)`,
//! * an answer set program over those facts: normal, disjunctive, and
//!   choice rules, integrity constraints, `#count` aggregates, and linear
//!   integer comparisons.
//!
//! Each assignment of the facts (a *world*) selects a plain answer set
//! program, which may have several answer sets — so a query atom does not
//! get a single probability but a *credal interval*: the lower bound sums
//! the worlds where the query holds in every answer set, the upper bound
//! those where it holds in at least one. Continuous variables are reduced
//! to finitely many interval facts by discretizing against the comparison
//! bounds that actually occur in the program, after which the discrete
//! machinery applies unchanged.
//!
//! The crate exposes the full pipeline: parsing and grounding
//! ([`syntax`]), discretization ([`discretize`]), exact enumeration over
//! worlds ([`exact`]), and sampling-based approximation ([`sample`]),
//! plus the benchmark program generators ([`bench`]) used by the
//! command-line driver.

pub mod asp;
pub mod bench;
pub mod cli;
pub mod discretize;
pub mod dist;
pub mod error;
pub mod exact;
pub mod sample;
pub mod math;
pub mod syntax;

pub use error::{Error, Result};
