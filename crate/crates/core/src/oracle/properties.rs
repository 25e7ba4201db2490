//! Properties checked on generated cases.
//!
//! Each property is a theorem of the bounded model: pre-state questions
//! are asked over `U_f` and post-state questions over `U_q`, matching the
//! checker (see [`crate::triples`]). A property whose hypothesis fails on
//! a case is [`Outcome::Vacuous`] there.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::gen::Case;
use super::{exact_valid, ox_valid, reach_valid, ux_valid};
use crate::ast::{Assertion, Command, Expr, Sort};
use crate::entail::Query;
use crate::semantics::{exec, holds, states, DomainConfig, EvalError, State};
use crate::transformers::{sp_in, wp};
use crate::triples::{CheckError, Checker, GradualFormula, Logic, Mutation, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    HlAgreesWithOx,
    IlAgreesWithUx,
    ElAgreesWithExact,
    ElIsIntersection,
    GelImprecisePostIsHl,
    GelImprecisePreIsIl,
    ReachabilityChain,
    HlInGv,
    IlInGv,
    IlFalsePre,
    IlSat,
    IlWpSat,
    WitnessSound,
    WpStrengthen,
    SpStrengthen,
    SpFalse,
    SpIsFalse,
    SpSat,
    SpExists,
    SpDisj,
    SpFrame,
    SpIf,
    SpWpEquiv,
    SpWpFixpointP,
    SpWpFixpoint,
    SpSound,
}

impl Property {
    pub const ALL: [Property; 26] = [
        Property::HlAgreesWithOx,
        Property::IlAgreesWithUx,
        Property::ElAgreesWithExact,
        Property::ElIsIntersection,
        Property::GelImprecisePostIsHl,
        Property::GelImprecisePreIsIl,
        Property::ReachabilityChain,
        Property::HlInGv,
        Property::IlInGv,
        Property::IlFalsePre,
        Property::IlSat,
        Property::IlWpSat,
        Property::WitnessSound,
        Property::WpStrengthen,
        Property::SpStrengthen,
        Property::SpFalse,
        Property::SpIsFalse,
        Property::SpSat,
        Property::SpExists,
        Property::SpDisj,
        Property::SpFrame,
        Property::SpIf,
        Property::SpWpEquiv,
        Property::SpWpFixpointP,
        Property::SpWpFixpoint,
        Property::SpSound,
    ];

    /// Checker/oracle agreement.
    pub const AGREEMENT: [Property; 4] = [
        Property::HlAgreesWithOx,
        Property::IlAgreesWithUx,
        Property::ElAgreesWithExact,
        Property::ElIsIntersection,
    ];

    /// Gradual characterizations.
    pub const GRADUAL: [Property; 3] = [
        Property::GelImprecisePostIsHl,
        Property::GelImprecisePreIsIl,
        Property::ReachabilityChain,
    ];

    /// Strongest-postcondition and weakest-precondition lemmas.
    pub const LEMMAS: [Property; 13] = [
        Property::WpStrengthen,
        Property::SpStrengthen,
        Property::SpFalse,
        Property::SpIsFalse,
        Property::SpSat,
        Property::SpExists,
        Property::SpDisj,
        Property::SpFrame,
        Property::SpIf,
        Property::SpWpEquiv,
        Property::SpWpFixpointP,
        Property::SpWpFixpoint,
        Property::SpSound,
    ];

    pub const UNION: [Property; 2] = [Property::HlInGv, Property::IlInGv];

    pub fn name(self) -> &'static str {
        match self {
            Property::HlAgreesWithOx => "hl-agrees-with-ox",
            Property::IlAgreesWithUx => "il-agrees-with-ux",
            Property::ElAgreesWithExact => "el-agrees-with-exact",
            Property::ElIsIntersection => "el-is-hl-and-il",
            Property::GelImprecisePostIsHl => "gel-imprecise-post-is-hl",
            Property::GelImprecisePreIsIl => "gel-imprecise-pre-is-il",
            Property::ReachabilityChain => "reachability-chain",
            Property::HlInGv => "hl-in-gv",
            Property::IlInGv => "il-in-gv",
            Property::IlFalsePre => "il-false-pre",
            Property::IlSat => "il-sat",
            Property::IlWpSat => "il-wp-sat",
            Property::WitnessSound => "witness-sound",
            Property::WpStrengthen => "wp-strengthen",
            Property::SpStrengthen => "sp-strengthen",
            Property::SpFalse => "sp-false",
            Property::SpIsFalse => "sp-is-false",
            Property::SpSat => "sp-sat",
            Property::SpExists => "sp-exists",
            Property::SpDisj => "sp-disj",
            Property::SpFrame => "sp-frame",
            Property::SpIf => "sp-if",
            Property::SpWpEquiv => "sp-wp-equiv",
            Property::SpWpFixpointP => "sp-wp-fixpoint-p",
            Property::SpWpFixpoint => "sp-wp-fixpoint",
            Property::SpSound => "sp-sound",
        }
    }

    pub fn from_name(name: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// The hypothesis did not hold on this case.
    Vacuous,
    Fail(Failure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub detail: String,
    pub counterexample: Option<State>,
}

impl Outcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PropertyError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<crate::entail::EntailError> for PropertyError {
    fn from(e: crate::entail::EntailError) -> Self {
        PropertyError::Check(CheckError::Entail(e))
    }
}

type R = Result<Outcome, PropertyError>;

fn fail(detail: String) -> Outcome {
    Outcome::Fail(Failure {
        detail,
        counterexample: None,
    })
}

fn fail_at(detail: String, s: Option<State>) -> Outcome {
    Outcome::Fail(Failure {
        detail,
        counterexample: s,
    })
}

/// Combines the outcomes of several instances: any failure fails, any
/// non-vacuous pass passes.
fn combine(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
    let mut out = Outcome::Vacuous;
    for o in outcomes {
        match o {
            Outcome::Fail(_) => return o,
            Outcome::Pass => out = Outcome::Pass,
            Outcome::Vacuous => {}
        }
    }
    out
}

struct Ctx<'a> {
    case: &'a Case,
    k: Checker,
}

impl<'a> Ctx<'a> {
    fn pre(&self) -> DomainConfig {
        self.k.pre_domain()
    }

    fn post(&self) -> DomainConfig {
        self.k.post_domain()
    }

    fn sat(&self, p: &Assertion, d: DomainConfig) -> Result<bool, PropertyError> {
        Ok(Query::sat(p.clone(), self.case.env.clone(), d)
            .decide()?
            .result)
    }

    fn implies(
        &self,
        p: &Assertion,
        q: &Assertion,
        d: DomainConfig,
    ) -> Result<(bool, Option<State>), PropertyError> {
        let r = Query::implies(p.clone(), q.clone(), self.case.env.clone(), d).decide()?;
        Ok((r.result, r.model))
    }

    fn equiv(
        &self,
        p: &Assertion,
        q: &Assertion,
        d: DomainConfig,
    ) -> Result<(bool, Option<State>), PropertyError> {
        let r = Query::equiv(p.clone(), q.clone(), self.case.env.clone(), d).decide()?;
        Ok((r.result, r.model))
    }

    /// Plain `sp`, no box.
    fn sp(&self, p: &Assertion, c: &Command) -> Assertion {
        sp_in(p, c, &self.case.env)
    }

    /// `premise ==> conclusion`, both implications over the given universes.
    fn lemma_implication(
        &self,
        name: &str,
        premise: bool,
        conclusion: (bool, Option<State>),
    ) -> Outcome {
        if !premise {
            Outcome::Vacuous
        } else if conclusion.0 {
            Outcome::Pass
        } else {
            fail_at(
                format!("{name}: hypothesis holds but conclusion fails"),
                conclusion.1,
            )
        }
    }

    fn equiv_post(&self, name: &str, a: &Assertion, b: &Assertion) -> R {
        let (ok, cex) = self.equiv(a, b, self.post())?;
        Ok(if ok {
            Outcome::Pass
        } else {
            fail_at(format!("{name}: `{a}` and `{b}` differ"), cex)
        })
    }
}

fn agree(name: &str, checker: bool, oracle: bool) -> Outcome {
    if checker == oracle {
        Outcome::Pass
    } else {
        fail(format!(
            "{name}: checker says {checker}, oracle says {oracle}"
        ))
    }
}

/// Evaluates `prop` on `case`, optionally against a mutated checker.
pub fn check_property(prop: Property, case: &Case, mutation: Option<Mutation>) -> R {
    let mut k = case.checker();
    if let Some(m) = mutation {
        k = k.with_mutation(m);
    }
    let cx = Ctx { case, k };
    let (p, c, q, r) = (&case.pre, &case.cmd, &case.post, &case.extra);
    let (env, d) = (&case.env, &case.domain);
    let k = &cx.k;
    let imp = |a: &Assertion| GradualFormula::Imprecise(a.clone());
    let pre = |a: &Assertion| GradualFormula::Precise(a.clone());

    match prop {
        Property::HlAgreesWithOx => {
            let v = k.check_hl(p, c, q)?;
            Ok(agree("hl vs ox", v.valid, ox_valid(p, c, q, env, d)?))
        }
        Property::IlAgreesWithUx => {
            let v = k.check_il(p, c, q)?;
            Ok(agree("il vs ux", v.valid, ux_valid(p, c, q, env, d)?))
        }
        Property::ElAgreesWithExact => {
            let v = k.check_el(p, c, q)?;
            Ok(agree("el vs exact", v.valid, exact_valid(p, c, q, env, d)?))
        }
        Property::ElIsIntersection => {
            let el = k.check_el(p, c, q)?.valid;
            let both = k.check_hl(p, c, q)?.valid && k.check_il(p, c, q)?.valid;
            Ok(agree("el vs hl && il", el, both))
        }
        Property::GelImprecisePostIsHl => {
            if !cx.sat(p, cx.pre())? {
                return Ok(Outcome::Vacuous);
            }
            let gel = k.check_gel(&pre(p), c, &imp(q))?.valid;
            Ok(agree(
                "gel(P, ? && Q) vs hl",
                gel,
                k.check_hl(p, c, q)?.valid,
            ))
        }
        Property::GelImprecisePreIsIl => {
            if !cx.sat(q, cx.post())? {
                return Ok(Outcome::Vacuous);
            }
            let gel = k.check_gel(&imp(p), c, &pre(q))?.valid;
            Ok(agree(
                "gel(? && P, Q) vs il",
                gel,
                k.check_il(p, c, q)?.valid,
            ))
        }
        Property::ReachabilityChain => {
            let lifted = k.check_il_lifted(p, c, &imp(q))?.valid;
            let gel = k.check_gel(&imp(p), c, &imp(q))?.valid;
            let gv = k.check_gv(&imp(p), c, q)?.valid;
            let reach = reach_valid(p, c, q, env, d)?;
            Ok(if lifted == gel && gel == gv && gv == reach {
                Outcome::Pass
            } else {
                fail(format!(
                    "il-lifted {lifted}, gel {gel}, gv {gv}, reachable {reach}"
                ))
            })
        }
        Property::HlInGv => {
            if !(cx.sat(p, cx.pre())? && k.check_hl(p, c, q)?.valid) {
                return Ok(Outcome::Vacuous);
            }
            let gv = k.check_gv(&imp(p), c, q)?.valid;
            Ok(if gv {
                Outcome::Pass
            } else {
                fail("valid hl triple with satisfiable pre rejected by gv".into())
            })
        }
        Property::IlInGv => {
            if !(cx.sat(q, cx.post())? && k.check_il(p, c, q)?.valid) {
                return Ok(Outcome::Vacuous);
            }
            let gv = k.check_gv(&imp(p), c, q)?.valid;
            Ok(if gv {
                Outcome::Pass
            } else {
                fail("valid il triple with satisfiable post rejected by gv".into())
            })
        }
        Property::IlFalsePre => {
            let valid = k.check_il(&Assertion::ff(), c, q)?.valid;
            let empty = cx.equiv(q, &Assertion::ff(), cx.post())?;
            Ok(cx.lemma_implication("[false] C [Q] => Q == false", valid, empty))
        }
        Property::IlSat => {
            let hyp = k.check_il(p, c, q)?.valid && cx.sat(q, cx.post())?;
            let concl = cx.sat(p, cx.pre())?;
            Ok(cx.lemma_implication("il-sat", hyp, (concl, None)))
        }
        Property::IlWpSat => {
            let hyp = k.check_il(p, c, q)?.valid && cx.sat(q, cx.post())?;
            let concl = cx.sat(&Assertion::and(p.clone(), wp(c, q)), cx.pre())?;
            Ok(cx.lemma_implication("il-wp-sat", hyp, (concl, None)))
        }
        Property::WitnessSound => witness_sound(&cx),
        Property::WpStrengthen => {
            let q2 = Assertion::or(q.clone(), r.clone());
            let mut outs = Vec::new();
            for (a, b) in [(q, &q2), (q, r)] {
                let hyp = cx.implies(a, b, cx.post())?.0;
                let concl = if hyp {
                    cx.implies(&wp(c, a), &wp(c, b), cx.pre())?
                } else {
                    (true, None)
                };
                outs.push(cx.lemma_implication("wp-strengthen", hyp, concl));
            }
            Ok(combine(outs))
        }
        Property::SpStrengthen => {
            let p2 = Assertion::or(p.clone(), r.clone());
            let mut outs = Vec::new();
            for (a, b) in [(p, &p2), (p, q)] {
                let hyp = cx.implies(a, b, cx.post())?.0;
                let concl = if hyp {
                    cx.implies(&cx.sp(a, c), &cx.sp(b, c), cx.post())?
                } else {
                    (true, None)
                };
                outs.push(cx.lemma_implication("sp-strengthen", hyp, concl));
            }
            Ok(combine(outs))
        }
        Property::SpFalse => {
            cx.equiv_post("sp-false", &cx.sp(&Assertion::ff(), c), &Assertion::ff())
        }
        Property::SpIsFalse => {
            let mut outs = Vec::new();
            let beyond = out_of_range(case);
            for a in [p.clone(), Assertion::and(p.clone(), beyond)] {
                let hyp = cx.equiv(&cx.sp(&a, c), &Assertion::ff(), cx.post())?.0;
                let concl = if hyp {
                    cx.equiv(&a, &Assertion::ff(), cx.pre())?
                } else {
                    (true, None)
                };
                outs.push(cx.lemma_implication("sp-is-false", hyp, concl));
            }
            Ok(combine(outs))
        }
        Property::SpSat => {
            let hyp = cx.sat(p, cx.pre())?;
            let concl = if hyp {
                cx.sat(&cx.sp(p, c), cx.post())?
            } else {
                true
            };
            Ok(cx.lemma_implication("sp-sat", hyp, (concl, None)))
        }
        Property::SpExists => {
            let (y, sort) = exists_variable(case);
            let lhs = cx.sp(&Assertion::exists(y.clone(), sort, p.clone()), c);
            let rhs = Assertion::exists(y, sort, cx.sp(p, c));
            cx.equiv_post("sp-exists", &lhs, &rhs)
        }
        Property::SpDisj => {
            let lhs = cx.sp(&Assertion::or(p.clone(), r.clone()), c);
            let rhs = Assertion::or(cx.sp(p, c), cx.sp(r, c));
            cx.equiv_post("sp-disj", &lhs, &rhs)
        }
        Property::SpFrame => {
            let frame = frame_of(p, c);
            let lhs = cx.sp(&Assertion::and(frame.clone(), r.clone()), c);
            let rhs = Assertion::and(frame, cx.sp(r, c));
            cx.equiv_post("sp-frame", &lhs, &rhs)
        }
        Property::SpIf => {
            let (e, c1, c2) = conditional_of(case);
            let cond = Assertion::atom(e.clone());
            let ite = Command::ite(e, c1.clone(), c2.clone());
            let pe = Assertion::and(p.clone(), cond.clone());
            let pne = Assertion::and(p.clone(), Assertion::not(cond));
            let then = cx.equiv_post("sp-if (then)", &cx.sp(&pe, &ite), &cx.sp(&pe, &c1))?;
            let els = cx.equiv_post("sp-if (else)", &cx.sp(&pne, &ite), &cx.sp(&pne, &c2))?;
            Ok(combine([then, els]))
        }
        Property::SpWpEquiv => {
            let lhs = cx.sp(&Assertion::and(wp(c, q), p.clone()), c);
            let rhs = Assertion::and(q.clone(), cx.sp(p, c));
            cx.equiv_post("sp-wp-equiv", &lhs, &rhs)
        }
        Property::SpWpFixpointP => {
            let sp = cx.sp(p, c);
            let mut outs = Vec::new();
            for target in [q.clone(), Assertion::and(sp.clone(), r.clone())] {
                let hyp = cx.implies(&target, &sp, cx.post())?.0;
                let concl = if hyp {
                    let fix = cx.sp(&Assertion::and(p.clone(), wp(c, &target)), c);
                    cx.equiv(&target, &fix, cx.post())?
                } else {
                    (true, None)
                };
                outs.push(cx.lemma_implication("sp-wp-fixpoint-p", hyp, concl));
            }
            Ok(combine(outs))
        }
        Property::SpWpFixpoint => {
            let top = cx.sp(&Assertion::tt(), c);
            let mut outs = Vec::new();
            for target in [q.clone(), Assertion::and(top.clone(), r.clone())] {
                let hyp = cx.implies(&target, &top, cx.post())?.0;
                let concl = if hyp {
                    cx.equiv(&target, &cx.sp(&wp(c, &target), c), cx.post())?
                } else {
                    (true, None)
                };
                outs.push(cx.lemma_implication("sp-wp-fixpoint", hyp, concl));
            }
            Ok(combine(outs))
        }
        Property::SpSound => {
            let sp = cx.sp(p, c);
            let (dpre, dpost) = (cx.pre(), cx.post());
            let mut any = false;
            for s in states(env, d.free_radius()) {
                if holds(p, &s, &dpre)? {
                    any = true;
                    let t = exec(c, &s)?;
                    if !holds(&sp, &t, &dpost)? {
                        return Ok(fail_at(
                            format!("sp-sound: final state {t} violates sp"),
                            Some(s),
                        ));
                    }
                }
            }
            Ok(if any { Outcome::Pass } else { Outcome::Vacuous })
        }
    }
}

/// `P && z > q` for the first integer variable `z`: satisfiable nowhere in
/// the pre-state box, and mapped to nothing inside the quantifier range.
fn out_of_range(case: &Case) -> Assertion {
    let q = i64::from(case.domain.quant_radius());
    match case.env.iter().find(|(_, s)| **s == Sort::Int) {
        Some((z, _)) => Assertion::atom(Expr::lt(Expr::Int(q), Expr::var(z.clone()))),
        None => Assertion::ff(),
    }
}

/// A variable the command does not touch: preferably free in `P`,
/// otherwise a fresh name.
fn exists_variable(case: &Case) -> (String, Sort) {
    let used = case.cmd.vars();
    for v in case.pre.free_vars() {
        if !used.contains(&v) {
            let sort = case.env.get(&v).copied().unwrap_or(Sort::Int);
            return (v, sort);
        }
    }
    let mut all = case.pre.all_vars();
    all.extend(used);
    let fresh = (0..)
        .map(|i| format!("u{i}"))
        .find(|n| !all.contains(n))
        .expect("unbounded");
    (fresh, Sort::Int)
}

/// `P` with every variable the command modifies replaced by 0 (or
/// `false`), so that no modified variable is free.
fn frame_of(p: &Assertion, c: &Command) -> Assertion {
    let env = crate::typeck::typecheck(c, &[p]).unwrap_or_default();
    let mut frame = p.clone();
    for x in c.modified() {
        let zero = match env.get(&x) {
            Some(Sort::Bool) => Expr::Bool(false),
            _ => Expr::Int(0),
        };
        frame = frame.subst(&x, &zero);
    }
    frame
}

/// The case's conditional if it has one at the top, otherwise
/// `if E then C else skip` with `E` the first atom of the extra assertion.
fn conditional_of(case: &Case) -> (Expr, Command, Command) {
    if let Command::If(e, a, b) = &case.cmd {
        return (e.clone(), (**a).clone(), (**b).clone());
    }
    let mut first = None;
    case.extra.for_each_atom(&mut |e| {
        if first.is_none() && e.vars().iter().all(|v| case.env.contains_key(v)) {
            first = Some(e.clone());
        }
    });
    let e = first.unwrap_or(Expr::Bool(true));
    (e, case.cmd.clone(), Command::Skip)
}

/// Every witness of a valid gradual verdict lies in the concretization of
/// its side and turns the triple into a valid precise one.
fn witness_sound(cx: &Ctx<'_>) -> R {
    let case = cx.case;
    let (p, c, q) = (&case.pre, &case.cmd, &case.post);
    let k = &cx.k;
    let imp = |a: &Assertion| GradualFormula::Imprecise(a.clone());
    let pre = |a: &Assertion| GradualFormula::Precise(a.clone());
    let verdicts: [(GradualFormula, GradualFormula, Verdict); 5] = [
        (pre(p), imp(q), k.check_gel(&pre(p), c, &imp(q))?),
        (imp(p), pre(q), k.check_gel(&imp(p), c, &pre(q))?),
        (imp(p), imp(q), k.check_gel(&imp(p), c, &imp(q))?),
        (imp(p), imp(q), k.check_gv(&imp(p), c, q)?),
        (pre(p), imp(q), k.check_il_lifted(p, c, &imp(q))?),
    ];
    let mut any = false;
    for (gp, gq, v) in verdicts {
        if !v.valid {
            continue;
        }
        any = true;
        let wp_ = v.witness_pre.clone();
        let wq = v.witness_post.clone();
        if !gp.is_precise() && wp_.is_none() || !gq.is_precise() && wq.is_none() {
            return Ok(fail(format!("{}: valid verdict without witness", v.logic)));
        }
        if let Some(w) = &wp_ {
            if !k.in_gamma_pre(w, &gp)? {
                return Ok(fail(format!(
                    "{}: precondition witness `{w}` not in gamma of `{gp}`",
                    v.logic
                )));
            }
        }
        if let Some(w) = &wq {
            if !k.in_gamma_post(w, &gq)? {
                return Ok(fail(format!(
                    "{}: postcondition witness `{w}` not in gamma of `{gq}`",
                    v.logic
                )));
            }
        }
        let wpre = wp_.unwrap_or_else(|| gp.assertion().clone());
        let wpost = wq.unwrap_or_else(|| gq.assertion().clone());
        let concrete = if v.logic == Logic::IlLifted {
            k.check_il(&wpre, c, &wpost)?
        } else {
            k.check_el(&wpre, c, &wpost)?
        };
        if !concrete.valid {
            return Ok(fail_at(
                format!(
                    "{}: witnesses ({wpre}) / ({wpost}) do not form a valid triple",
                    v.logic
                ),
                concrete.counterexample,
            ));
        }
    }
    Ok(if any { Outcome::Pass } else { Outcome::Vacuous })
}

/// Runs `props` on `case`; the first failing (or erroring) property, if any.
pub fn first_failure(
    props: &[Property],
    case: &Case,
    mutation: Option<Mutation>,
) -> Option<(Property, Failure)> {
    for &prop in props {
        match check_property(prop, case, mutation) {
            Ok(Outcome::Fail(f)) => return Some((prop, f)),
            Err(e) => {
                return Some((
                    prop,
                    Failure {
                        detail: format!("error: {e}"),
                        counterexample: None,
                    },
                ))
            }
            Ok(_) => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::gen::{gen_case_at, GenConfig};
    use crate::parse::{parse_assertion, parse_command};

    fn case(p: &str, c: &str, q: &str, r: &str) -> Case {
        Case::new(
            parse_command(c).unwrap(),
            parse_assertion(p).unwrap(),
            parse_assertion(q).unwrap(),
            parse_assertion(r).unwrap(),
            2,
        )
        .unwrap()
    }

    #[test]
    fn all_properties_hold_on_the_motivating_example() {
        let k = case("true", "x := x + 1", "x > 0", "x == 1");
        for prop in Property::ALL {
            let o = check_property(prop, &k, None).unwrap();
            assert!(!o.is_fail(), "{}: {o:?}", prop.name());
        }
    }

    #[test]
    fn all_properties_hold_on_generated_cases() {
        let cfg = GenConfig {
            max_depth: 2,
            ..GenConfig::default()
        };
        for i in 0..25 {
            let c = gen_case_at(&cfg, i).unwrap();
            assert_eq!(first_failure(&Property::ALL, &c, None), None, "case {c}");
        }
    }

    #[test]
    fn mutation_is_caught_by_the_chain() {
        let k = case("x < 0", "x := x + 1", "x > 5", "true");
        let o = check_property(
            Property::ReachabilityChain,
            &k,
            Some(Mutation::GvSkipsSatisfiability),
        )
        .unwrap();
        assert!(o.is_fail());
    }

    #[test]
    fn names_are_unique_and_parse_back() {
        for p in Property::ALL {
            assert_eq!(Property::from_name(p.name()), Some(p));
        }
    }

    #[test]
    fn frame_drops_modified_variables() {
        let p = parse_assertion("x < y && b").unwrap();
        let c = parse_command("x := 1 ; b := false").unwrap();
        assert_eq!(frame_of(&p, &c), parse_assertion("0 < y && false").unwrap());
    }
}
