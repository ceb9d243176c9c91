//! Program syntax: abstract syntax tree, lexer, parser, printer, range
//! expansion, grounding, and validation.
//!
//! The surface language covers probabilistic facts (`0.3::a.`), continuous
//! random-variable declarations (`a:gaussian(0,1).`), normal/disjunctive/
//! choice rules, integrity constraints, `#count` aggregates with an equality
//! guard, linear integer comparisons, comparison predicates over continuous
//! variables (`above`, `below`, `between`, `outside`), `%` comments, and
//! integer ranges `p(l..u)` in declarations.

mod ground;
mod lexer;
mod parser;

pub use ground::{expand_ranges, ground, validate};
pub use parser::{parse_evidence_literal, parse_program, parse_program_with, EvidenceLit, ParseOptions};

use crate::dist::DistributionSpec;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

/// A constant: a lowercase symbol or an integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Const {
    Int(i64),
    Sym(String),
}

/// An arithmetic expression over integers and variables with `+`, `-`, `*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arith {
    Int(i64),
    Var(String),
    Add(Box<Arith>, Box<Arith>),
    Sub(Box<Arith>, Box<Arith>),
    Mul(Box<Arith>, Box<Arith>),
}

/// A term in an atom argument position.
///
/// `Range` only survives parsing inside declarations and is eliminated by
/// [`expand_ranges`]; after grounding every term is a `Const`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Const),
    Var(String),
    Range(i64, i64),
    Arith(Arith),
}

/// A predicate applied to terms. `pred/args.len()` identifies the schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

/// The four comparison predicates over a continuous variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompKind {
    Above(f64),
    Below(f64),
    Between(f64, f64),
    Outside(f64, f64),
}

/// A comparison atom: a continuous variable atom tested against constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Comparison {
    pub var: Atom,
    pub kind: CompKind,
}

/// Relational operators usable in linear comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

/// An integer linear comparison such as `10*S < 4*P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearCmp {
    pub lhs: Arith,
    pub op: CmpOp,
    pub rhs: Arith,
}

/// Guard of a `#count` aggregate: `= V` binds or checks a variable,
/// `= n` compares to an integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AggGuard {
    Var(String),
    Int(i64),
}

/// `#count{X : cond, ...} = guard`. The element variables are local to the
/// aggregate; condition literals may be negated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountAgg {
    pub elems: Vec<String>,
    pub cond: Vec<(Atom, bool)>,
    pub guard: AggGuard,
}

/// One body literal. The `bool` on `Atom` is the negation flag
/// (`true` = `not a`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BodyLit {
    Atom(Atom, bool),
    Comp(Comparison),
    Agg(CountAgg),
    Lin(LinearCmp),
}

/// A rule. `head` is a disjunction (empty for integrity constraints);
/// `choice` marks `{a} :- body` rules, which carry exactly one head atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Vec<Atom>,
    pub choice: bool,
    pub body: Vec<BodyLit>,
}

/// `prob::atom.` — an independent Bernoulli fact.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbFact {
    pub prob: f64,
    pub atom: Atom,
}

/// `atom:dist(...).` — a continuous random variable declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuousFact {
    pub atom: Atom,
    pub dist: DistributionSpec,
}

/// A hybrid probabilistic answer set program.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HybridProgram {
    pub prob_facts: Vec<ProbFact>,
    pub continuous: Vec<ContinuousFact>,
    pub rules: Vec<Rule>,
}

/// A set of ground atoms; the candidate/stable-model representation.
pub type Interpretation = BTreeSet<Atom>;

/// Answer sets in deterministic (sorted) order.
pub type AnswerSetCollection = Vec<Interpretation>;

// Comparisons carry validated (finite, non-NaN) bounds, so bitwise float
// identity is a sound equality and hash.
impl Eq for CompKind {}
impl Hash for CompKind {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match *self {
            CompKind::Above(b) => (0u8, b.to_bits()).hash(state),
            CompKind::Below(b) => (1u8, b.to_bits()).hash(state),
            CompKind::Between(l, u) => (2u8, l.to_bits(), u.to_bits()).hash(state),
            CompKind::Outside(l, u) => (3u8, l.to_bits(), u.to_bits()).hash(state),
        }
    }
}
impl Eq for ProbFact {}
impl Eq for HybridProgram {}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { pred: pred.into(), args }
    }

    /// A 0-ary atom.
    pub fn prop(pred: impl Into<String>) -> Self {
        Atom { pred: pred.into(), args: Vec::new() }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Const(_)))
    }

    /// Atoms introduced by the solver pipeline (reserved `__` prefix).
    pub fn is_internal(&self) -> bool {
        self.pred.starts_with("__")
    }

    /// Collect the variables occurring in the arguments into `out`.
    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        for t in &self.args {
            t.collect_vars(out);
        }
    }
}

impl Term {
    pub fn int(v: i64) -> Self {
        Term::Const(Const::Int(v))
    }

    pub fn sym(s: impl Into<String>) -> Self {
        Term::Const(Const::Sym(s.into()))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Arith(a) => a.collect_vars(out),
            Term::Const(_) | Term::Range(..) => {}
        }
    }
}

impl Arith {
    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Arith::Int(_) => {}
            Arith::Var(v) => {
                out.insert(v.clone());
            }
            Arith::Add(l, r) | Arith::Sub(l, r) | Arith::Mul(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }
}

impl CompKind {
    /// The numeric constants of the comparison, in source order.
    pub fn bounds(&self) -> Vec<f64> {
        match *self {
            CompKind::Above(b) | CompKind::Below(b) => vec![b],
            CompKind::Between(l, u) | CompKind::Outside(l, u) => vec![l, u],
        }
    }

    /// Whether a drawn value satisfies the comparison (strict inequalities;
    /// boundaries have measure zero under continuous distributions).
    pub fn holds_for(&self, value: f64) -> bool {
        match *self {
            CompKind::Above(b) => value > b,
            CompKind::Below(b) => value < b,
            CompKind::Between(l, u) => value > l && value < u,
            CompKind::Outside(l, u) => value < l || value > u,
        }
    }
}

impl CmpOp {
    pub fn eval(self, l: i64, r: i64) -> bool {
        match self {
            CmpOp::Lt => l < r,
            CmpOp::Le => l <= r,
            CmpOp::Gt => l > r,
            CmpOp::Ge => l >= r,
            CmpOp::Eq => l == r,
            CmpOp::Ne => l != r,
        }
    }
}

/// Format a float the way program text writes it: shortest round-trip
/// decimal, so `-30.0` prints as `-30` and `0.5` as `0.5`.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Int(v) => write!(f, "{v}"),
            Const::Sym(s) => write!(f, "{s}"),
        }
    }
}

impl Arith {
    fn is_primary(&self) -> bool {
        matches!(self, Arith::Int(_) | Arith::Var(_))
    }
}

impl fmt::Display for Arith {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Parenthesize only where reparsing would regroup the expression.
        match self {
            Arith::Int(v) => write!(f, "{v}"),
            Arith::Var(v) => write!(f, "{v}"),
            Arith::Add(l, r) => {
                write!(f, "{l}+")?;
                if matches!(**r, Arith::Add(..) | Arith::Sub(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            Arith::Sub(l, r) => {
                write!(f, "{l}-")?;
                if matches!(**r, Arith::Add(..) | Arith::Sub(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            Arith::Mul(l, r) => {
                if l.is_primary() {
                    write!(f, "{l}*")?;
                } else {
                    write!(f, "({l})*")?;
                }
                if r.is_primary() {
                    write!(f, "{r}")
                } else {
                    write!(f, "({r})")
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Range(l, u) => write!(f, "{l}..{u}"),
            Term::Arith(a) => write!(f, "{a}"),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CompKind::Above(b) => write!(f, "above({},{})", self.var, fmt_f64(b)),
            CompKind::Below(b) => write!(f, "below({},{})", self.var, fmt_f64(b)),
            CompKind::Between(l, u) => {
                write!(f, "between({},{},{})", self.var, fmt_f64(l), fmt_f64(u))
            }
            CompKind::Outside(l, u) => {
                write!(f, "outside({},{},{})", self.var, fmt_f64(l), fmt_f64(u))
            }
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        };
        write!(f, "{s}")
    }
}

impl fmt::Display for LinearCmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op, self.rhs)
    }
}

impl fmt::Display for CountAgg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#count{{{} : ", self.elems.join(","))?;
        for (i, (atom, neg)) in self.cond.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if *neg {
                write!(f, "not ")?;
            }
            write!(f, "{atom}")?;
        }
        let guard = match &self.guard {
            AggGuard::Var(v) => v.clone(),
            AggGuard::Int(n) => n.to_string(),
        };
        write!(f, "}} = {guard}")
    }
}

impl fmt::Display for BodyLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyLit::Atom(a, false) => write!(f, "{a}"),
            BodyLit::Atom(a, true) => write!(f, "not {a}"),
            BodyLit::Comp(c) => write!(f, "{c}"),
            BodyLit::Agg(g) => write!(f, "{g}"),
            BodyLit::Lin(l) => write!(f, "{l}"),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.choice {
            write!(f, "{{{}}}", self.head[0])?;
        } else {
            for (i, h) in self.head.iter().enumerate() {
                if i > 0 {
                    write!(f, " ; ")?;
                }
                write!(f, "{h}")?;
            }
        }
        if !self.body.is_empty() || self.head.is_empty() {
            if !self.head.is_empty() {
                write!(f, " ")?;
            }
            write!(f, ":- ")?;
            for (i, l) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{l}")?;
            }
        }
        write!(f, ".")
    }
}

impl fmt::Display for ProbFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}::{}.", fmt_f64(self.prob), self.atom)
    }
}

impl fmt::Display for ContinuousFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}.", self.atom, self.dist)
    }
}

impl fmt::Display for HybridProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pf in &self.prob_facts {
            writeln!(f, "{pf}")?;
        }
        for cf in &self.continuous {
            writeln!(f, "{cf}")?;
        }
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl Rule {
    /// A deterministic fact rule `atom.`
    pub fn fact(atom: Atom) -> Self {
        Rule { head: vec![atom], choice: false, body: Vec::new() }
    }

    /// An integrity constraint `:- body.`
    pub fn constraint(body: Vec<BodyLit>) -> Self {
        Rule { head: Vec::new(), choice: false, body }
    }

    /// The variables of the rule, excluding aggregate element variables.
    pub fn rule_vars(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        for h in &self.head {
            h.collect_vars(&mut vars);
        }
        for lit in &self.body {
            match lit {
                BodyLit::Atom(a, _) => a.collect_vars(&mut vars),
                BodyLit::Comp(c) => c.var.collect_vars(&mut vars),
                BodyLit::Lin(l) => {
                    l.lhs.collect_vars(&mut vars);
                    l.rhs.collect_vars(&mut vars);
                }
                BodyLit::Agg(g) => {
                    if let AggGuard::Var(v) = &g.guard {
                        vars.insert(v.clone());
                    }
                    let locals: BTreeSet<&String> = g.elems.iter().collect();
                    let mut inner = BTreeSet::new();
                    for (a, _) in &g.cond {
                        a.collect_vars(&mut inner);
                    }
                    vars.extend(inner.into_iter().filter(|v| !locals.contains(v)));
                }
            }
        }
        vars
    }
}

impl HybridProgram {
    /// True when every rule and declaration is variable- and range-free.
    pub fn is_ground(&self) -> bool {
        self.prob_facts.iter().all(|pf| pf.atom.is_ground())
            && self.continuous.iter().all(|cf| cf.atom.is_ground())
            && self.rules.iter().all(|r| {
                r.rule_vars().is_empty()
                    && r.head.iter().all(|h| h.is_ground())
                    && r.body.iter().all(|l| match l {
                        BodyLit::Atom(a, _) => a.is_ground(),
                        BodyLit::Comp(c) => c.var.is_ground(),
                        BodyLit::Agg(g) => !matches!(g.guard, AggGuard::Var(_)),
                        BodyLit::Lin(_) => false,
                    })
            })
    }
}
