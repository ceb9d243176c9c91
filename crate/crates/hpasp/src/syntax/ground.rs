//! Range expansion, grounding, and semantic validation.
//!
//! Grounding instantiates rule variables over the constants that occur in
//! atom argument positions anywhere in the program. Variables used only as
//! `#count` guards range over the possible count values instead. Linear
//! comparisons are decided during instantiation: a false comparison drops
//! the instance, a true one disappears from the body.

use super::*;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, HashSet};

/// Replace every `p(l..u)` declaration by one declaration per integer in
/// `l..=u` (cartesian over multiple range arguments), preserving order and
/// collapsing exact duplicates. Ranges anywhere else are rejected.
pub fn expand_ranges(prog: &HybridProgram) -> Result<HybridProgram> {
    let mut out = HybridProgram::default();
    for pf in &prog.prob_facts {
        for atom in expand_atom(&pf.atom)? {
            let pf = ProbFact { prob: pf.prob, atom };
            if !out.prob_facts.contains(&pf) {
                out.prob_facts.push(pf);
            }
        }
    }
    for cf in &prog.continuous {
        for atom in expand_atom(&cf.atom)? {
            let cf = ContinuousFact { atom, dist: cf.dist };
            if !out.continuous.contains(&cf) {
                out.continuous.push(cf);
            }
        }
    }
    for rule in &prog.rules {
        if rule_has_range(rule) {
            return Err(Error::InvalidRange(format!(
                "ranges are only allowed in declarations, not in '{rule}'"
            )));
        }
        out.rules.push(rule.clone());
    }
    super::parser::check_ground_duplicates(&out)?;
    Ok(out)
}

/// Ground the program: expand ranges, then instantiate every rule over the
/// constant universe, deciding linear comparisons and filtering comparison
/// atoms against the declared continuous variables. Duplicate ground rules
/// are emitted once, in first-occurrence order.
pub fn ground(prog: &HybridProgram) -> Result<HybridProgram> {
    let prog = expand_ranges(prog)?;
    let universe = collect_universe(&prog);
    let declared: HashSet<&Atom> = prog.continuous.iter().map(|cf| &cf.atom).collect();
    let mut rules = Vec::new();
    let mut seen: HashSet<Rule> = HashSet::new();
    for rule in &prog.rules {
        for subst in substitutions(rule, &universe)? {
            if let Some(g) = instantiate(rule, &subst, &declared)? {
                if seen.insert(g.clone()) {
                    rules.push(g);
                }
            }
        }
    }
    Ok(HybridProgram { prob_facts: prog.prob_facts, continuous: prog.continuous, rules })
}

/// Semantic checks that parsing cannot perform:
///
/// * declared fact atoms must not occur in rule heads (`HeadViolation`);
/// * comparison predicates must not be used as ordinary atoms or with
///   out-of-order bounds (`IllegalComparison`);
/// * ground comparisons must refer to declared continuous variables
///   (`UnknownContinuousVariable`);
/// * every rule variable needs a binding occurrence (`UnsafeRule`).
pub fn validate(prog: &HybridProgram) -> Result<()> {
    let declared: HashSet<&Atom> = prog.continuous.iter().map(|cf| &cf.atom).collect();
    let mut fact_schemas: HashSet<(&str, usize)> = HashSet::new();
    for pf in &prog.prob_facts {
        fact_schemas.insert((&pf.atom.pred, pf.atom.args.len()));
    }
    for cf in &prog.continuous {
        fact_schemas.insert((&cf.atom.pred, cf.atom.args.len()));
    }

    let universe = collect_universe(prog);
    for rule in &prog.rules {
        for h in &rule.head {
            if is_comparison_pred(&h.pred) {
                return Err(Error::IllegalComparison(format!(
                    "'{h}' cannot appear in a rule head"
                )));
            }
            if fact_schemas.contains(&(h.pred.as_str(), h.args.len())) {
                return Err(Error::HeadViolation(h.to_string()));
            }
        }
        for lit in &rule.body {
            match lit {
                BodyLit::Atom(a, _) if is_comparison_pred(&a.pred) => {
                    return Err(Error::IllegalComparison(format!(
                        "'{a}' does not match a comparison over a continuous variable"
                    )));
                }
                BodyLit::Comp(c) => {
                    check_comparison_kind(c)?;
                    if c.var.is_ground() && !declared.contains(&c.var) {
                        return Err(Error::UnknownContinuousVariable(c.var.to_string()));
                    }
                }
                _ => {}
            }
        }
        // Safety: computing the domains errors out on unbound variables.
        var_domains(rule, universe.len())?;
    }
    Ok(())
}

fn is_comparison_pred(pred: &str) -> bool {
    matches!(pred, "above" | "below" | "between" | "outside")
}

fn check_comparison_kind(c: &Comparison) -> Result<()> {
    match c.kind {
        CompKind::Between(l, u) | CompKind::Outside(l, u) if l >= u => {
            Err(Error::IllegalComparison(format!("'{c}' needs bounds in increasing order")))
        }
        _ => Ok(()),
    }
}

fn expand_atom(atom: &Atom) -> Result<Vec<Atom>> {
    for t in &atom.args {
        if matches!(t, Term::Var(_) | Term::Arith(_)) {
            return Err(Error::InvalidRange(format!(
                "declaration '{atom}' must be ground (use ranges for families of facts)"
            )));
        }
    }
    let mut arg_lists: Vec<Vec<Term>> = vec![Vec::with_capacity(atom.args.len())];
    for t in &atom.args {
        match t {
            Term::Range(lo, hi) => {
                if lo > hi {
                    return Err(Error::InvalidRange(format!("{lo}..{hi} in '{atom}' is empty")));
                }
                let mut next = Vec::with_capacity(arg_lists.len() * (hi - lo + 1) as usize);
                for prefix in &arg_lists {
                    for v in *lo..=*hi {
                        let mut args = prefix.clone();
                        args.push(Term::int(v));
                        next.push(args);
                    }
                }
                arg_lists = next;
            }
            _ => {
                for prefix in &mut arg_lists {
                    prefix.push(t.clone());
                }
            }
        }
    }
    Ok(arg_lists.into_iter().map(|args| Atom { pred: atom.pred.clone(), args }).collect())
}

fn rule_has_range(rule: &Rule) -> bool {
    let atom_has = |a: &Atom| a.args.iter().any(|t| matches!(t, Term::Range(..)));
    rule.head.iter().any(&atom_has)
        || rule.body.iter().any(|lit| match lit {
            BodyLit::Atom(a, _) => atom_has(a),
            BodyLit::Comp(c) => atom_has(&c.var),
            BodyLit::Agg(g) => g.cond.iter().any(|(a, _)| atom_has(a)),
            BodyLit::Lin(_) => false,
        })
}

/// The constants appearing in atom argument positions across the program.
/// Comparison bounds, linear-expression constants, and distribution
/// parameters are numbers, not terms, and do not join the universe.
fn collect_universe(prog: &HybridProgram) -> Vec<Const> {
    let mut set = BTreeSet::new();
    let mut add_atom = |a: &Atom| {
        for t in &a.args {
            if let Term::Const(c) = t {
                set.insert(c.clone());
            }
        }
    };
    for pf in &prog.prob_facts {
        add_atom(&pf.atom);
    }
    for cf in &prog.continuous {
        add_atom(&cf.atom);
    }
    for rule in &prog.rules {
        for h in &rule.head {
            add_atom(h);
        }
        for lit in &rule.body {
            match lit {
                BodyLit::Atom(a, _) => add_atom(a),
                BodyLit::Comp(c) => add_atom(&c.var),
                BodyLit::Agg(g) => {
                    for (a, _) in &g.cond {
                        add_atom(a);
                    }
                }
                BodyLit::Lin(_) => {}
            }
        }
    }
    set.into_iter().collect()
}

enum Domain {
    /// All constants of the program.
    Universe,
    /// `0..=max`: the possible values of a `#count` guard.
    Counts(i64),
}

/// Assign each rule variable its instantiation domain, or fail with
/// `UnsafeRule`. Variables with a positive occurrence in an atom argument
/// position range over the universe; variables used only as aggregate
/// guards range over the counts the aggregate can reach.
fn var_domains(rule: &Rule, universe_len: usize) -> Result<Vec<(String, Domain)>> {
    let mut positive: BTreeSet<String> = BTreeSet::new();
    let mut guard_max: BTreeMap<String, i64> = BTreeMap::new();
    for lit in &rule.body {
        match lit {
            BodyLit::Atom(a, false) => a.collect_vars(&mut positive),
            BodyLit::Atom(_, true) | BodyLit::Lin(_) => {}
            BodyLit::Comp(c) => c.var.collect_vars(&mut positive),
            BodyLit::Agg(g) => {
                let locals: BTreeSet<&String> = g.elems.iter().collect();
                let mut inner = BTreeSet::new();
                for (a, neg) in &g.cond {
                    if !neg {
                        a.collect_vars(&mut inner);
                    }
                }
                positive.extend(inner.into_iter().filter(|v| !locals.contains(v)));
                if let AggGuard::Var(v) = &g.guard {
                    // Counts cannot exceed the number of distinct element
                    // tuples; with several guarded aggregates the tightest
                    // bound wins.
                    let max = (universe_len as i64).saturating_pow(g.elems.len() as u32);
                    guard_max
                        .entry(v.clone())
                        .and_modify(|m| *m = (*m).min(max))
                        .or_insert(max);
                }
            }
        }
    }
    let mut domains = Vec::new();
    for var in rule.rule_vars() {
        if positive.contains(&var) {
            domains.push((var, Domain::Universe));
        } else if let Some(max) = guard_max.get(&var) {
            domains.push((var.clone(), Domain::Counts(*max)));
        } else {
            return Err(Error::UnsafeRule { var, rule: rule.to_string() });
        }
    }
    Ok(domains)
}

type Subst = BTreeMap<String, Const>;

fn substitutions(rule: &Rule, universe: &[Const]) -> Result<Vec<Subst>> {
    let domains = var_domains(rule, universe.len())?;
    let mut subs: Vec<Subst> = vec![Subst::new()];
    for (var, domain) in domains {
        let values: Vec<Const> = match domain {
            Domain::Universe => universe.to_vec(),
            Domain::Counts(max) => (0..=max).map(Const::Int).collect(),
        };
        if values.is_empty() {
            return Ok(Vec::new());
        }
        let mut next = Vec::with_capacity(subs.len() * values.len());
        for sub in &subs {
            for v in &values {
                let mut s = sub.clone();
                s.insert(var.clone(), v.clone());
                next.push(s);
            }
        }
        subs = next;
    }
    Ok(subs)
}

/// Apply a substitution to one rule. `None` means the instance vanishes: a
/// linear comparison is false (or mixes symbols into arithmetic), or an
/// instantiated comparison atom does not name a declared continuous
/// variable. A comparison that was already ground in the source and is
/// undeclared is an error instead.
fn instantiate(rule: &Rule, subst: &Subst, declared: &HashSet<&Atom>) -> Result<Option<Rule>> {
    let mut head = Vec::with_capacity(rule.head.len());
    for h in &rule.head {
        match subst_atom(h, subst) {
            Some(a) => head.push(a),
            None => return Ok(None),
        }
    }
    let mut body = Vec::with_capacity(rule.body.len());
    for lit in &rule.body {
        match lit {
            BodyLit::Atom(a, neg) => match subst_atom(a, subst) {
                Some(g) => body.push(BodyLit::Atom(g, *neg)),
                None => return Ok(None),
            },
            BodyLit::Comp(c) => {
                let var = match subst_atom(&c.var, subst) {
                    Some(v) => v,
                    None => return Ok(None),
                };
                if declared.contains(&var) {
                    body.push(BodyLit::Comp(Comparison { var, kind: c.kind }));
                } else if c.var.is_ground() {
                    return Err(Error::UnknownContinuousVariable(var.to_string()));
                } else {
                    return Ok(None);
                }
            }
            BodyLit::Lin(l) => match (eval_arith(&l.lhs, subst), eval_arith(&l.rhs, subst)) {
                (Some(a), Some(b)) if l.op.eval(a, b) => {}
                _ => return Ok(None),
            },
            BodyLit::Agg(g) => {
                let locals: BTreeSet<&String> = g.elems.iter().collect();
                let mut cond = Vec::with_capacity(g.cond.len());
                for (a, neg) in &g.cond {
                    match subst_cond_atom(a, subst, &locals) {
                        Some(c) => cond.push((c, *neg)),
                        None => return Ok(None),
                    }
                }
                let guard = match &g.guard {
                    AggGuard::Int(n) => AggGuard::Int(*n),
                    AggGuard::Var(v) => match subst.get(v) {
                        Some(Const::Int(n)) => AggGuard::Int(*n),
                        // A count never equals a symbolic constant.
                        _ => return Ok(None),
                    },
                };
                body.push(BodyLit::Agg(CountAgg { elems: g.elems.clone(), cond, guard }));
            }
        }
    }
    Ok(Some(Rule { head, choice: rule.choice, body }))
}

fn subst_atom(atom: &Atom, subst: &Subst) -> Option<Atom> {
    let mut args = Vec::with_capacity(atom.args.len());
    for t in &atom.args {
        args.push(subst_term(t, subst)?);
    }
    Some(Atom { pred: atom.pred.clone(), args })
}

/// Like [`subst_atom`], but leaves the aggregate's element variables alone.
/// Arithmetic over element variables is not supported and vanishes with the
/// instance.
fn subst_cond_atom(atom: &Atom, subst: &Subst, locals: &BTreeSet<&String>) -> Option<Atom> {
    let mut args = Vec::with_capacity(atom.args.len());
    for t in &atom.args {
        match t {
            Term::Var(v) if locals.contains(v) => args.push(t.clone()),
            _ => args.push(subst_term(t, subst)?),
        }
    }
    Some(Atom { pred: atom.pred.clone(), args })
}

fn subst_term(t: &Term, subst: &Subst) -> Option<Term> {
    match t {
        Term::Const(_) => Some(t.clone()),
        Term::Var(v) => subst.get(v).map(|c| Term::Const(c.clone())),
        Term::Arith(a) => eval_arith(a, subst).map(Term::int),
        Term::Range(..) => None,
    }
}

/// Evaluate integer arithmetic under a substitution; `None` when a variable
/// is bound to a symbolic constant (the comparison or term then fails the
/// instance, mirroring how typed grounders treat ill-typed builtins).
fn eval_arith(a: &Arith, subst: &Subst) -> Option<i64> {
    match a {
        Arith::Int(v) => Some(*v),
        Arith::Var(v) => match subst.get(v) {
            Some(Const::Int(n)) => Some(*n),
            _ => None,
        },
        Arith::Add(l, r) => Some(eval_arith(l, subst)?.wrapping_add(eval_arith(r, subst)?)),
        Arith::Sub(l, r) => Some(eval_arith(l, subst)?.wrapping_sub(eval_arith(r, subst)?)),
        Arith::Mul(l, r) => Some(eval_arith(l, subst)?.wrapping_mul(eval_arith(r, subst)?)),
    }
}
