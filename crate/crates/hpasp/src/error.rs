//! Crate-wide error type.
//!
//! Every fallible operation in the library reports one of these variants.
//! User-facing tools map them onto exit codes: anything that stems from the
//! input program is a user error, while resource caps (world or enumeration
//! limits) signal that the request exceeded a configured budget.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Lexical or grammatical error in the program text.
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    /// The same ground atom was declared twice with conflicting annotations.
    #[error("duplicate declaration for '{0}'")]
    DuplicateDeclaration(String),

    /// A range `l..u` with `l > u`, or a range in a position where ranges
    /// are not allowed.
    #[error("invalid range: {0}")]
    InvalidRange(String),

    /// A rule variable that cannot be bound during grounding.
    #[error("unsafe rule: variable '{var}' in '{rule}' has no binding occurrence")]
    UnsafeRule { var: String, rule: String },

    /// A ground comparison atom refers to an undeclared continuous variable.
    #[error("unknown continuous variable '{0}' in comparison atom")]
    UnknownContinuousVariable(String),

    /// A probabilistic or continuous fact atom appears in a rule head.
    #[error("head violation: declared fact atom '{0}' appears in a rule head")]
    HeadViolation(String),

    /// A comparison predicate is used in a way the semantics does not allow
    /// (non-numeric bound, continuous variable outside a comparison, ...).
    #[error("illegal comparison: {0}")]
    IllegalComparison(String),

    /// A distribution parameter outside its legal domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An interval query with lower bound above its upper bound.
    #[error("invalid interval: [{0}, {1}]")]
    InvalidInterval(f64, f64),

    /// An interval partition whose conditional fact probabilities are not
    /// well defined because a tail has zero mass.
    #[error("degenerate partition for '{var}': no probability mass beyond bound {bound}")]
    DegeneratePartition { var: String, bound: f64 },

    /// Internal consistency failure: a comparison bound that was not folded
    /// into the partition it should belong to.
    #[error("internal error: bound {bound} not in the partition of '{var}'")]
    BoundNotInPartition { var: String, bound: f64 },

    /// Too many undetermined atoms for exhaustive answer-set enumeration.
    #[error("answer-set enumeration over {atoms} free atoms exceeds the cap of {cap}")]
    EnumerationCapExceeded { atoms: usize, cap: usize },

    /// Too many probabilistic facts for exhaustive world enumeration.
    #[error("world enumeration over {facts} probabilistic facts exceeds the cap of {cap} (2^{cap} worlds)")]
    WorldCapExceeded { facts: usize, cap: usize },

    /// Normalization is impossible because no world has an answer set.
    #[error("all worlds are inconsistent; normalization is undefined")]
    AllWorldsInconsistent,

    /// Conditional probability with zero denominator.
    #[error("conditional probability is undefined: {0}")]
    UndefinedConditional(String),

    /// A sample-size planner tolerance outside (0, 1].
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    /// A benchmark generator size that the family does not support.
    #[error("invalid benchmark size: {0}")]
    InvalidSize(String),

    /// Recursion through an aggregate's own condition atoms.
    #[error("aggregate recursion: predicate '{0}' occurs both in an aggregate condition and in a head it depends on")]
    AggregateRecursion(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for command-line reporting: 2 for configured resource
    /// limits, 1 for everything caused by the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EnumerationCapExceeded { .. } | Error::WorldCapExceeded { .. } => 2,
            _ => 1,
        }
    }
}
