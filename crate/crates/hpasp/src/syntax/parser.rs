//! Recursive-descent parser producing the AST in [`super`].

use super::lexer::{lex, Spanned, Tok};
use super::*;
use crate::dist::GaussianParam;
use crate::error::{Error, Result};

/// Options affecting how program text is interpreted.
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Reading of the second `gaussian` argument (standard deviation by
    /// default).
    pub gaussian_param: GaussianParam,
}

/// Parse a program with default options.
pub fn parse_program(text: &str) -> Result<HybridProgram> {
    parse_program_with(text, &ParseOptions::default())
}

/// Parse a program. Ranges `p(l..u)` are kept unexpanded in declarations;
/// see [`super::expand_ranges`].
pub fn parse_program_with(text: &str, opts: &ParseOptions) -> Result<HybridProgram> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0, opts };
    let mut prog = HybridProgram::default();
    while !p.done() {
        p.statement(&mut prog)?;
    }
    check_ground_duplicates(&prog)?;
    Ok(prog)
}

/// An evidence literal on the command line: a possibly negated ground atom,
/// or a comparison over a continuous variable.
#[derive(Debug, Clone, PartialEq)]
pub enum EvidenceLit {
    Atom(Atom, bool),
    Comp(Comparison),
}

/// Parse one evidence literal, e.g. `b`, `not b`, or `above(a,0.6)`.
pub fn parse_evidence_literal(text: &str) -> Result<EvidenceLit> {
    let toks = lex(text)?;
    let opts = ParseOptions::default();
    let mut p = Parser { toks: &toks, pos: 0, opts: &opts };
    let lit = match p.body_lit()? {
        BodyLit::Atom(a, neg) => EvidenceLit::Atom(a, neg),
        BodyLit::Comp(c) => EvidenceLit::Comp(c),
        other => {
            return Err(Error::Syntax {
                line: 1,
                col: 1,
                msg: format!("'{other}' cannot be used as evidence"),
            })
        }
    };
    if !p.done() {
        return Err(p.err_here("trailing input after evidence literal"));
    }
    Ok(lit)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    opts: &'a ParseOptions,
}

const COMPARISON_PREDS: [&str; 4] = ["above", "below", "between", "outside"];

impl<'a> Parser<'a> {
    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|s| &s.tok)
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|s| &s.tok);
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err_here(&format!("expected {what}")))
        }
    }

    fn err_here(&self, msg: &str) -> Error {
        let (line, col) = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1));
        Error::Syntax { line, col, msg: msg.to_string() }
    }

    fn statement(&mut self, prog: &mut HybridProgram) -> Result<()> {
        match self.peek() {
            Some(Tok::Int(_) | Tok::Float(_)) => self.prob_fact(prog),
            Some(Tok::LBrace) => {
                self.bump();
                let head = self.atom(false)?;
                self.expect(&Tok::RBrace, "'}' after choice atom")?;
                let body =
                    if self.eat(&Tok::ColonDash) { self.body()? } else { Vec::new() };
                self.expect(&Tok::Dot, "'.' at end of rule")?;
                prog.rules.push(Rule { head: vec![head], choice: true, body });
                Ok(())
            }
            Some(Tok::ColonDash) => {
                self.bump();
                let body = if self.peek() == Some(&Tok::Dot) { Vec::new() } else { self.body()? };
                self.expect(&Tok::Dot, "'.' at end of constraint")?;
                prog.rules.push(Rule::constraint(body));
                Ok(())
            }
            Some(Tok::Ident(_)) => {
                let first = self.atom(true)?;
                if self.eat(&Tok::Colon) {
                    return self.continuous_decl(prog, first);
                }
                // An ordinary rule: ranges must not sneak in via the
                // declaration-style first atom.
                reject_ranges(&first, self)?;
                let mut head = vec![first];
                while self.eat(&Tok::Semi) {
                    head.push(self.atom(false)?);
                }
                let body =
                    if self.eat(&Tok::ColonDash) { self.body()? } else { Vec::new() };
                self.expect(&Tok::Dot, "'.' at end of rule")?;
                prog.rules.push(Rule { head, choice: false, body });
                Ok(())
            }
            _ => Err(self.err_here("expected a fact, declaration, or rule")),
        }
    }

    fn prob_fact(&mut self, prog: &mut HybridProgram) -> Result<()> {
        let prob = match self.bump() {
            Some(Tok::Int(v)) => *v as f64,
            Some(Tok::Float(v)) => *v,
            _ => unreachable!("caller checked"),
        };
        if !(0.0..=1.0).contains(&prob) {
            return Err(self.err_here(&format!("probability {prob} is outside [0, 1]")));
        }
        self.expect(&Tok::ColonColon, "'::' after probability")?;
        let atom = self.atom(true)?;
        self.expect(&Tok::Dot, "'.' at end of fact declaration")?;
        prog.prob_facts.push(ProbFact { prob, atom });
        Ok(())
    }

    fn continuous_decl(&mut self, prog: &mut HybridProgram, atom: Atom) -> Result<()> {
        let name = match self.bump() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => return Err(self.err_here("expected a distribution name after ':'")),
        };
        self.expect(&Tok::LParen, "'(' after distribution name")?;
        let a = self.signed_number()?;
        self.expect(&Tok::Comma, "',' between distribution parameters")?;
        let b = self.signed_number()?;
        self.expect(&Tok::RParen, "')' after distribution parameters")?;
        self.expect(&Tok::Dot, "'.' at end of declaration")?;
        let dist = match name.as_str() {
            "gaussian" => DistributionSpec::gaussian(a, b, self.opts.gaussian_param)?,
            "gamma" => DistributionSpec::gamma(a, b)?,
            other => {
                return Err(self.err_here(&format!(
                    "unknown distribution '{other}' (expected gaussian or gamma)"
                )))
            }
        };
        prog.continuous.push(ContinuousFact { atom, dist });
        Ok(())
    }

    fn body(&mut self) -> Result<Vec<BodyLit>> {
        let mut lits = vec![self.body_lit()?];
        while self.eat(&Tok::Comma) {
            lits.push(self.body_lit()?);
        }
        Ok(lits)
    }

    fn body_lit(&mut self) -> Result<BodyLit> {
        match self.peek() {
            Some(Tok::Not) => {
                self.bump();
                let a = self.atom(false)?;
                Ok(BodyLit::Atom(a, true))
            }
            Some(Tok::Count) => self.aggregate(),
            Some(Tok::Ident(name)) => {
                if COMPARISON_PREDS.contains(&name.as_str()) && self.peek2() == Some(&Tok::LParen)
                {
                    if let Some(comp) = self.try_comparison()? {
                        return Ok(BodyLit::Comp(comp));
                    }
                }
                let a = self.atom(false)?;
                Ok(BodyLit::Atom(a, false))
            }
            Some(Tok::Var(_) | Tok::Int(_) | Tok::Minus | Tok::LParen) => self.linear(),
            _ => Err(self.err_here("expected a body literal")),
        }
    }

    /// Attempt `above(atom, c)` / `between(atom, l, u)` shapes. Returns
    /// `None` (with the cursor restored) when the arguments do not fit, so
    /// the caller can fall back to a plain atom that validation will flag.
    fn try_comparison(&mut self) -> Result<Option<Comparison>> {
        let save = self.pos;
        let name = match self.bump() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => unreachable!("caller checked"),
        };
        let mut attempt = || -> Option<Comparison> {
            if !self.eat(&Tok::LParen) {
                return None;
            }
            let var = self.atom(false).ok()?;
            if !var.args.iter().all(|t| matches!(t, Term::Const(_) | Term::Var(_))) {
                return None;
            }
            if !self.eat(&Tok::Comma) {
                return None;
            }
            let first = self.signed_number().ok()?;
            let kind = match name.as_str() {
                "above" | "below" => {
                    if !self.eat(&Tok::RParen) {
                        return None;
                    }
                    if name == "above" {
                        CompKind::Above(first)
                    } else {
                        CompKind::Below(first)
                    }
                }
                _ => {
                    if !self.eat(&Tok::Comma) {
                        return None;
                    }
                    let second = self.signed_number().ok()?;
                    if !self.eat(&Tok::RParen) {
                        return None;
                    }
                    if name == "between" {
                        CompKind::Between(first, second)
                    } else {
                        CompKind::Outside(first, second)
                    }
                }
            };
            Some(Comparison { var, kind })
        };
        match attempt() {
            Some(c) => Ok(Some(c)),
            None => {
                self.pos = save;
                Ok(None)
            }
        }
    }

    fn aggregate(&mut self) -> Result<BodyLit> {
        self.expect(&Tok::Count, "#count")?;
        self.expect(&Tok::LBrace, "'{' after #count")?;
        let mut elems = Vec::new();
        loop {
            match self.bump() {
                Some(Tok::Var(v)) => elems.push(v.clone()),
                _ => return Err(self.err_here("expected an element variable in #count")),
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::Colon, "':' between element variables and conditions")?;
        let mut cond = Vec::new();
        loop {
            let neg = self.eat(&Tok::Not);
            let atom = self.atom(false)?;
            cond.push((atom, neg));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::RBrace, "'}' after #count conditions")?;
        self.expect(&Tok::Eq, "'=' guard after #count")?;
        let guard = match self.peek() {
            Some(Tok::Var(v)) => {
                let v = v.clone();
                self.bump();
                AggGuard::Var(v)
            }
            Some(Tok::Int(_) | Tok::Minus) => {
                let n = self.signed_int()?;
                AggGuard::Int(n)
            }
            _ => return Err(self.err_here("expected a variable or integer after '='")),
        };
        Ok(BodyLit::Agg(CountAgg { elems, cond, guard }))
    }

    fn linear(&mut self) -> Result<BodyLit> {
        let lhs = self.arith()?;
        let op = match self.bump() {
            Some(Tok::Lt) => CmpOp::Lt,
            Some(Tok::Le) => CmpOp::Le,
            Some(Tok::Gt) => CmpOp::Gt,
            Some(Tok::Ge) => CmpOp::Ge,
            Some(Tok::Eq) => CmpOp::Eq,
            Some(Tok::Ne) => CmpOp::Ne,
            _ => return Err(self.err_here("expected a relational operator")),
        };
        let rhs = self.arith()?;
        Ok(BodyLit::Lin(LinearCmp { lhs, op, rhs }))
    }

    fn arith(&mut self) -> Result<Arith> {
        let mut lhs = self.arith_term()?;
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.arith_term()?;
                lhs = Arith::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&Tok::Minus) {
                let rhs = self.arith_term()?;
                lhs = Arith::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn arith_term(&mut self) -> Result<Arith> {
        let mut lhs = self.arith_factor()?;
        while self.eat(&Tok::Star) {
            let rhs = self.arith_factor()?;
            lhs = Arith::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn arith_factor(&mut self) -> Result<Arith> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.bump();
                Ok(Arith::Int(v))
            }
            Some(Tok::Var(v)) => {
                let v = v.clone();
                self.bump();
                Ok(Arith::Var(v))
            }
            Some(Tok::Minus) => {
                self.bump();
                let inner = self.arith_factor()?;
                Ok(match inner {
                    Arith::Int(v) => Arith::Int(-v),
                    other => Arith::Sub(Box::new(Arith::Int(0)), Box::new(other)),
                })
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.arith()?;
                self.expect(&Tok::RParen, "')' in arithmetic expression")?;
                Ok(inner)
            }
            _ => Err(self.err_here("expected an integer, variable, or '('")),
        }
    }

    /// An atom; `allow_range` admits `l..u` terms (declarations only).
    fn atom(&mut self, allow_range: bool) -> Result<Atom> {
        let pred = match self.bump() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => return Err(self.err_here("expected a predicate name")),
        };
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.term(allow_range)?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen, "')' after atom arguments")?;
        }
        Ok(Atom { pred, args })
    }

    fn term(&mut self, allow_range: bool) -> Result<Term> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.bump();
                Ok(Term::sym(s))
            }
            Some(Tok::Float(_)) => Err(self.err_here(
                "real constants are only allowed in comparison bounds and distribution parameters",
            )),
            Some(Tok::Int(_) | Tok::Minus)
                if allow_range && self.range_ahead() =>
            {
                let lo = self.signed_int()?;
                self.expect(&Tok::DotDot, "'..' in range")?;
                let hi = self.signed_int()?;
                Ok(Term::Range(lo, hi))
            }
            Some(Tok::Int(_) | Tok::Var(_) | Tok::Minus | Tok::LParen) => {
                let a = self.arith()?;
                Ok(match a {
                    Arith::Int(v) => Term::int(v),
                    Arith::Var(v) => Term::Var(v),
                    other => Term::Arith(other),
                })
            }
            _ => Err(self.err_here("expected a term")),
        }
    }

    /// Look ahead for `[-] int ..` from the current position.
    fn range_ahead(&self) -> bool {
        let mut i = self.pos;
        if self.toks.get(i).map(|s| &s.tok) == Some(&Tok::Minus) {
            i += 1;
        }
        matches!(self.toks.get(i).map(|s| &s.tok), Some(Tok::Int(_)))
            && self.toks.get(i + 1).map(|s| &s.tok) == Some(&Tok::DotDot)
    }

    fn signed_number(&mut self) -> Result<f64> {
        let neg = self.eat(&Tok::Minus);
        let v = match self.peek() {
            Some(Tok::Int(v)) => *v as f64,
            Some(Tok::Float(v)) => *v,
            _ => return Err(self.err_here("expected a number")),
        };
        self.bump();
        Ok(if neg { -v } else { v })
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        let v = match self.peek() {
            Some(Tok::Int(v)) => *v,
            _ => return Err(self.err_here("expected an integer")),
        };
        self.bump();
        Ok(if neg { -v } else { v })
    }
}

fn reject_ranges(atom: &Atom, p: &Parser) -> Result<()> {
    if atom.args.iter().any(|t| matches!(t, Term::Range(..))) {
        return Err(p.err_here(&format!("ranges are only allowed in declarations: '{atom}'")));
    }
    Ok(())
}

/// Reject conflicting duplicate declarations among the range-free ones;
/// ranged declarations are checked after expansion.
pub(super) fn check_ground_duplicates(prog: &HybridProgram) -> Result<()> {
    use std::collections::HashMap;
    let mut probs: HashMap<&Atom, f64> = HashMap::new();
    for pf in &prog.prob_facts {
        if !pf.atom.args.iter().any(|t| matches!(t, Term::Range(..))) {
            if let Some(prev) = probs.insert(&pf.atom, pf.prob) {
                if prev != pf.prob {
                    return Err(Error::DuplicateDeclaration(pf.atom.to_string()));
                }
            }
        }
    }
    let mut dists: HashMap<&Atom, &DistributionSpec> = HashMap::new();
    for cf in &prog.continuous {
        if !cf.atom.args.iter().any(|t| matches!(t, Term::Range(..))) {
            if probs.contains_key(&cf.atom) {
                return Err(Error::DuplicateDeclaration(cf.atom.to_string()));
            }
            if let Some(prev) = dists.insert(&cf.atom, &cf.dist) {
                if *prev != cf.dist {
                    return Err(Error::DuplicateDeclaration(cf.atom.to_string()));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_fact_program() {
        // 0.3::a. 0.4::b.
        // q0 ; q1:- a. q0:- b.
        let p = parse_program("0.3::a. 0.4::b.\nq0 ; q1:- a. q0:- b.").unwrap();
        assert_eq!(p.prob_facts.len(), 2);
        assert_eq!(p.prob_facts[0].prob, 0.3);
        assert_eq!(p.prob_facts[0].atom, Atom::prop("a"));
        assert_eq!(p.rules.len(), 2);
        assert_eq!(p.rules[0].head, vec![Atom::prop("q0"), Atom::prop("q1")]);
        assert_eq!(p.rules[0].body, vec![BodyLit::Atom(Atom::prop("a"), false)]);
        assert_eq!(p.rules[1].head, vec![Atom::prop("q0")]);
    }

    #[test]
    fn parses_continuous_declaration_and_comparisons() {
        let p = parse_program(
            "0.4::b.\na:gaussian(0,1).\nq0 ; q1:- below(a,0.5).\nq0:- below(a,0.7), b.",
        )
        .unwrap();
        assert_eq!(p.continuous.len(), 1);
        assert_eq!(
            p.continuous[0].dist,
            DistributionSpec::gaussian(0.0, 1.0, GaussianParam::StdDev).unwrap()
        );
        match &p.rules[0].body[0] {
            BodyLit::Comp(c) => {
                assert_eq!(c.var, Atom::prop("a"));
                assert_eq!(c.kind, CompKind::Below(0.5));
            }
            other => panic!("expected comparison, got {other:?}"),
        }
    }

    #[test]
    fn parses_ranges_aggregates_and_linear_comparisons() {
        let text = "0.4::pred_d(1..4).\nd(1..4):gamma(70,1).\nprob_d(P):- outside(d(P), 60, 80).\n\
                    stroke(P);not_stroke(P):- prob(P).\n\
                    :- #count{X:prob(X)}=P, #count{X:stroke(X),prob(X)}=S, 10*S < 4*P.\n\
                    high_number_strokes:- #count{X : stroke(X)}=CS, CS > 1.";
        let p = parse_program(text).unwrap();
        assert_eq!(p.prob_facts[0].atom.args, vec![Term::Range(1, 4)]);
        let constraint = &p.rules[2];
        assert!(constraint.head.is_empty());
        assert_eq!(constraint.body.len(), 3);
        assert!(matches!(constraint.body[0], BodyLit::Agg(_)));
        assert!(matches!(constraint.body[2], BodyLit::Lin(_)));
        let hns = &p.rules[3];
        assert_eq!(hns.body.len(), 2);
        match &hns.body[0] {
            BodyLit::Agg(g) => {
                assert_eq!(g.elems, vec!["X".to_string()]);
                assert_eq!(g.guard, AggGuard::Var("CS".into()));
            }
            other => panic!("expected aggregate, got {other:?}"),
        }
    }

    #[test]
    fn parses_choice_rules_and_constraints() {
        let p = parse_program("{a1}.\n{a2}:- b.\n:- a1, not a2.\n:-.").unwrap();
        assert!(p.rules[0].choice);
        assert!(p.rules[0].body.is_empty());
        assert_eq!(p.rules[1].body.len(), 1);
        assert!(p.rules[2].head.is_empty());
        assert!(p.rules[3].head.is_empty() && p.rules[3].body.is_empty());
    }

    #[test]
    fn negative_bounds_parse() {
        let p = parse_program("0.4::d.\nc:gaussian(0,10).\nq0:- between(c,-30,-23.606), not q1.")
            .unwrap();
        match &p.rules[0].body[0] {
            BodyLit::Comp(c) => assert_eq!(c.kind, CompKind::Between(-30.0, -23.606)),
            other => panic!("expected comparison, got {other:?}"),
        }
    }

    #[test]
    fn malformed_comparison_falls_back_to_plain_atom() {
        // Non-numeric second argument: parses as an ordinary atom; the
        // validator rejects it later.
        let p = parse_program("a:gaussian(0,1).\nq :- above(a,b).").unwrap();
        assert_eq!(
            p.rules[0].body[0],
            BodyLit::Atom(Atom::new("above", vec![Term::sym("a"), Term::sym("b")]), false)
        );
    }

    #[test]
    fn duplicate_declarations_rejected() {
        assert!(matches!(
            parse_program("0.3::a. 0.6::a."),
            Err(Error::DuplicateDeclaration(_))
        ));
        assert!(matches!(
            parse_program("0.3::a. a:gaussian(0,1)."),
            Err(Error::DuplicateDeclaration(_))
        ));
        // Same probability twice is tolerated (collapsed downstream).
        assert!(parse_program("0.3::a. 0.3::a.").is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_program("q :- .") {
            Err(Error::Syntax { line: 1, col, .. }) => assert!(col >= 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_program("0.3:a.").is_err());
        assert!(parse_program("1.5::a.").is_err());
        assert!(parse_program("q(1.5).").is_err());
    }

    #[test]
    fn evidence_literals() {
        assert_eq!(
            parse_evidence_literal("not b").unwrap(),
            EvidenceLit::Atom(Atom::prop("b"), true)
        );
        assert_eq!(
            parse_evidence_literal("above(a,0.6)").unwrap(),
            EvidenceLit::Comp(Comparison { var: Atom::prop("a"), kind: CompKind::Above(0.6) })
        );
        assert!(parse_evidence_literal("b, c").is_err());
        assert!(parse_evidence_literal("10*S < 4*P").is_err());
    }

    #[test]
    fn unknown_distribution_rejected() {
        assert!(parse_program("a:beta(1,1).").is_err());
        assert!(matches!(
            parse_program("a:gaussian(0,-1)."),
            Err(Error::InvalidParameter(_))
        ));
    }
}
