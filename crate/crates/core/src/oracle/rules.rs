//! Inference rules of the three precise logics, checked as admissibility
//! properties: on sampled instances whose premises check valid, the
//! conclusion must check valid too.
//!
//! Premises are built to hold (postconditions derived from `sp`, weakened
//! or strengthened by random formulas) and are still checked before an
//! instance counts. All judgements of an instance share one quantifier
//! radius; the second premise of a sequence rule starts from the box that
//! contains every state the first command can reach.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use super::gen::{Gen, GenConfig};
use super::properties::{Failure, Outcome, PropertyError};
use crate::ast::{Assertion, Command, Expr, Sort};
use crate::entail::Query;
use crate::interval;
use crate::semantics::DomainConfig;
use crate::transformers::sp_in;
use crate::triples::{Checker, Logic};
use crate::typeck::{typecheck_in, TypeEnv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    OxSkip,
    OxAssign,
    OxSeq,
    OxIf,
    OxCons,
    UxSkip,
    UxSeq,
    UxAssign,
    UxIfThen,
    UxIfElse,
    UxCons,
    UxDisj,
    ExSkip,
    ExAssign,
    ExIfThen,
    ExSeq,
    ExIfElse,
    ExFrame,
    ExExists,
    ExDisj,
}

impl Rule {
    pub const ALL: [Rule; 20] = [
        Rule::OxSkip,
        Rule::OxAssign,
        Rule::OxSeq,
        Rule::OxIf,
        Rule::OxCons,
        Rule::UxSkip,
        Rule::UxSeq,
        Rule::UxAssign,
        Rule::UxIfThen,
        Rule::UxIfElse,
        Rule::UxCons,
        Rule::UxDisj,
        Rule::ExSkip,
        Rule::ExAssign,
        Rule::ExIfThen,
        Rule::ExSeq,
        Rule::ExIfElse,
        Rule::ExFrame,
        Rule::ExExists,
        Rule::ExDisj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::OxSkip => "OX-Skip",
            Rule::OxAssign => "OX-Assign",
            Rule::OxSeq => "OX-Seq",
            Rule::OxIf => "OX-If",
            Rule::OxCons => "OX-Cons",
            Rule::UxSkip => "UX-Skip",
            Rule::UxSeq => "UX-Seq",
            Rule::UxAssign => "UX-Assign",
            Rule::UxIfThen => "UX-IfThen",
            Rule::UxIfElse => "UX-IfElse",
            Rule::UxCons => "UX-Cons",
            Rule::UxDisj => "UX-Disj",
            Rule::ExSkip => "EX-Skip",
            Rule::ExAssign => "EX-Assign",
            Rule::ExIfThen => "EX-IfThen",
            Rule::ExSeq => "EX-Seq",
            Rule::ExIfElse => "EX-IfElse",
            Rule::ExFrame => "EX-Frame",
            Rule::ExExists => "EX-Exists",
            Rule::ExDisj => "EX-Disj",
        }
    }
}

/// A triple in one of the precise logics, checked with pre-state box `f`.
#[derive(Debug, Clone)]
struct Judgement {
    logic: Logic,
    env: TypeEnv,
    f: u32,
    pre: Assertion,
    cmd: Command,
    post: Assertion,
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = match self.logic {
            Logic::Hl => ("{", "}"),
            Logic::Il => ("[", "]"),
            _ => ("(", ")"),
        };
        write!(f, "{l} {} {r} {} {l} {} {r}", self.pre, self.cmd, self.post)
    }
}

#[derive(Debug, Clone)]
enum Premise {
    Triple(Judgement),
    /// `left => right` about pre-states (box `f`) or post-states.
    Implies {
        left: Assertion,
        right: Assertion,
        env: TypeEnv,
        f: u32,
        post: bool,
    },
}

struct Instance {
    premises: Vec<Premise>,
    conclusion: Judgement,
}

/// Builds formulas relative to one environment and box.
struct Builder {
    env: TypeEnv,
}

impl Builder {
    fn sp_rel(&self, f: u32, p: &Assertion, c: &Command) -> Assertion {
        Checker::new(self.env.clone(), DomainConfig::uniform(f)).sp_rel(p, c)
    }

    fn boxed(&self, f: u32, p: &Assertion) -> Assertion {
        let b = Checker::new(self.env.clone(), DomainConfig::uniform(f)).box_guard();
        Assertion::and(p.clone(), b)
    }

    fn judge(
        &self,
        logic: Logic,
        f: u32,
        pre: Assertion,
        cmd: Command,
        post: Assertion,
    ) -> Judgement {
        Judgement {
            logic,
            env: self.env.clone(),
            f,
            pre,
            cmd,
            post,
        }
    }
}

fn base_env(cfg: &GenConfig) -> TypeEnv {
    let mut env = TypeEnv::new();
    for v in ["x", "y", "z"]
        .into_iter()
        .take(cfg.num_int_vars.clamp(1, 3))
    {
        env.insert(v.into(), Sort::Int);
    }
    if cfg.num_bool_vars > 0 {
        env.insert("b".into(), Sort::Bool);
    }
    env
}

/// An integer expression whose value stays inside the box: a variable, a
/// literal, or a negated variable.
fn small_expr(g: &mut Gen, f: u32) -> Expr {
    match g.rng().random_range(0..3) {
        0 => Expr::var(g.int_var()),
        1 => {
            let f = i64::from(f);
            Expr::Int(g.constant().clamp(-f, f))
        }
        _ => Expr::sub(Expr::Int(0), Expr::var(g.int_var())),
    }
}

fn build(rule: Rule, g: &mut Gen, cfg: &GenConfig) -> Option<Instance> {
    let f = cfg.free_radius;
    let env = base_env(cfg);
    let b = Builder { env: env.clone() };
    let depth = cfg.max_depth.max(2) - 1;
    let single = |t: Judgement| {
        Some(Instance {
            premises: vec![],
            conclusion: t,
        })
    };
    let closure = |c: &Command| interval::closure(&env, f, c);

    match rule {
        Rule::OxSkip => {
            let p = g.assertion(2);
            single(b.judge(Logic::Hl, f, p.clone(), Command::Skip, p))
        }
        Rule::OxAssign => {
            let (p, c) = (g.assertion(2), g.assignment());
            let Command::Assign(x, e) = &c else {
                unreachable!()
            };
            single(b.judge(Logic::Hl, f, p.subst(x, e), c, p))
        }
        Rule::OxSeq => {
            let (p, c1, c2) = (g.assertion(2), g.command(depth), g.command(depth));
            let q1 = closure(&c1);
            let r = Assertion::or(b.sp_rel(f, &p, &c1), g.assertion(1));
            let q = Assertion::or(b.sp_rel(q1, &r, &c2), g.assertion(1));
            Some(Instance {
                premises: vec![
                    Premise::Triple(b.judge(Logic::Hl, f, p.clone(), c1.clone(), r.clone())),
                    Premise::Triple(b.judge(Logic::Hl, q1, r, c2.clone(), q.clone())),
                ],
                conclusion: b.judge(Logic::Hl, f, p, Command::seq(c1, c2), q),
            })
        }
        Rule::OxIf => {
            let (p, e) = (g.assertion(2), g.bool_expr(1));
            let (c1, c2) = (g.command(depth), g.command(depth));
            let cond = Assertion::atom(e.clone());
            let (pe, pne) = (
                Assertion::and(cond.clone(), p.clone()),
                Assertion::and(Assertion::not(cond), p.clone()),
            );
            let q = Assertion::or(
                Assertion::or(b.sp_rel(f, &pe, &c1), b.sp_rel(f, &pne, &c2)),
                g.assertion(1),
            );
            Some(Instance {
                premises: vec![
                    Premise::Triple(b.judge(Logic::Hl, f, pe, c1.clone(), q.clone())),
                    Premise::Triple(b.judge(Logic::Hl, f, pne, c2.clone(), q.clone())),
                ],
                conclusion: b.judge(Logic::Hl, f, p, Command::ite(e, c1, c2), q),
            })
        }
        Rule::OxCons => {
            let (p2, c) = (g.assertion(2), g.command(depth + 1));
            let q2 = Assertion::or(b.sp_rel(f, &p2, &c), g.assertion(1));
            let p = Assertion::and(p2.clone(), g.assertion(1));
            let q = Assertion::or(q2.clone(), g.assertion(1));
            Some(Instance {
                premises: vec![
                    Premise::Implies {
                        left: p.clone(),
                        right: p2.clone(),
                        env: env.clone(),
                        f,
                        post: false,
                    },
                    Premise::Triple(b.judge(Logic::Hl, f, p2, c.clone(), q2.clone())),
                    Premise::Implies {
                        left: q2,
                        right: q.clone(),
                        env: env.clone(),
                        f,
                        post: true,
                    },
                ],
                conclusion: b.judge(Logic::Hl, f, p, c, q),
            })
        }
        Rule::UxSkip => {
            let p = b.boxed(f, &g.assertion(2));
            single(b.judge(Logic::Il, f, p.clone(), Command::Skip, p))
        }
        Rule::UxSeq => {
            let (p, c1, c2) = (g.assertion(2), g.command(depth), g.command(depth));
            let q1 = closure(&c1);
            let q = Assertion::and(b.sp_rel(f, &p, &c1), g.assertion(1));
            let r = Assertion::and(b.sp_rel(q1, &q, &c2), g.assertion(1));
            Some(Instance {
                premises: vec![
                    Premise::Triple(b.judge(Logic::Il, f, p.clone(), c1.clone(), q.clone())),
                    Premise::Triple(b.judge(Logic::Il, q1, q, c2.clone(), r.clone())),
                ],
                conclusion: b.judge(Logic::Il, f, p, Command::seq(c1, c2), r),
            })
        }
        Rule::UxAssign => {
            let p = b.boxed(f, &g.assertion(2));
            let c = g.assignment();
            let post = sp_in(&p, &c, &env);
            single(b.judge(Logic::Il, f, p, c, post))
        }
        Rule::UxIfThen | Rule::UxIfElse | Rule::ExIfThen | Rule::ExIfElse => {
            let (p, e) = (g.assertion(2), g.bool_expr(1));
            let (c1, c2) = (g.command(depth), g.command(depth));
            let cond = Assertion::atom(e.clone());
            let then = matches!(rule, Rule::UxIfThen | Rule::ExIfThen);
            let ux = matches!(rule, Rule::UxIfThen | Rule::UxIfElse);
            let (guard, branch) = if then {
                (cond, &c1)
            } else {
                (Assertion::not(cond), &c2)
            };
            // UX takes `E && P`, EX takes `P && E`.
            let pre = if ux {
                Assertion::and(guard, p)
            } else {
                Assertion::and(p, guard)
            };
            let sp = b.sp_rel(f, &pre, branch);
            let (logic, q) = if ux {
                (Logic::Il, Assertion::and(sp, g.assertion(1)))
            } else {
                (Logic::El, sp)
            };
            Some(Instance {
                premises: vec![Premise::Triple(b.judge(
                    logic,
                    f,
                    pre.clone(),
                    branch.clone(),
                    q.clone(),
                ))],
                conclusion: b.judge(logic, f, pre, Command::ite(e, c1, c2), q),
            })
        }
        Rule::UxCons => {
            let (p, c) = (g.assertion(2), g.command(depth + 1));
            let p2 = Assertion::and(p.clone(), g.assertion(1));
            let q2 = Assertion::and(b.sp_rel(f, &p2, &c), g.assertion(1));
            let q = Assertion::and(q2.clone(), g.assertion(1));
            Some(Instance {
                premises: vec![
                    Premise::Implies {
                        left: p2.clone(),
                        right: p.clone(),
                        env: env.clone(),
                        f,
                        post: false,
                    },
                    Premise::Triple(b.judge(Logic::Il, f, p2, c.clone(), q2.clone())),
                    Premise::Implies {
                        left: q.clone(),
                        right: q2,
                        env: env.clone(),
                        f,
                        post: true,
                    },
                ],
                conclusion: b.judge(Logic::Il, f, p, c, q),
            })
        }
        Rule::UxDisj | Rule::ExDisj => {
            let c = g.command(depth + 1);
            let (p1, p2) = (g.assertion(2), g.assertion(2));
            let ux = rule == Rule::UxDisj;
            let mut post = |p: &Assertion| {
                let sp = b.sp_rel(f, p, &c);
                if ux {
                    Assertion::and(sp, g.assertion(1))
                } else {
                    sp
                }
            };
            let (q1, q2) = (post(&p1), post(&p2));
            let logic = if ux { Logic::Il } else { Logic::El };
            Some(Instance {
                premises: vec![
                    Premise::Triple(b.judge(logic, f, p1.clone(), c.clone(), q1.clone())),
                    Premise::Triple(b.judge(logic, f, p2.clone(), c.clone(), q2.clone())),
                ],
                conclusion: b.judge(logic, f, Assertion::or(p1, p2), c, Assertion::or(q1, q2)),
            })
        }
        Rule::ExSkip => single(b.judge(
            Logic::El,
            f,
            Assertion::tt(),
            Command::Skip,
            Assertion::tt(),
        )),
        Rule::ExAssign => {
            let x = g.int_var();
            let e = small_expr(g, f);
            let e2 = small_expr(g, f);
            if e2.mentions(&x) {
                return None;
            }
            let pre = Assertion::atom(Expr::eq(Expr::var(x.clone()), e2.clone()));
            let post = Assertion::atom(Expr::eq(Expr::var(x.clone()), e.subst(&x, &e2)));
            single(b.judge(Logic::El, f, pre, Command::assign(x, e), post))
        }
        Rule::ExSeq => {
            let (p, c1, c2) = (g.assertion(2), g.command(depth), g.command(depth));
            let q1 = closure(&c1);
            let r = b.sp_rel(f, &p, &c1);
            let q = b.sp_rel(q1, &r, &c2);
            Some(Instance {
                premises: vec![
                    Premise::Triple(b.judge(Logic::El, f, p.clone(), c1.clone(), r.clone())),
                    Premise::Triple(b.judge(Logic::El, q1, r, c2.clone(), q.clone())),
                ],
                conclusion: b.judge(Logic::El, f, p, Command::seq(c1, c2), q),
            })
        }
        Rule::ExFrame => {
            let (p, c) = (g.assertion(2), g.command(depth + 1));
            let q = b.sp_rel(f, &p, &c);
            let mut r = g.assertion(1);
            for x in c.modified() {
                let zero = if env.get(&x) == Some(&Sort::Bool) {
                    Expr::Bool(false)
                } else {
                    Expr::Int(0)
                };
                r = r.subst(&x, &zero);
            }
            Some(Instance {
                premises: vec![Premise::Triple(b.judge(
                    Logic::El,
                    f,
                    p.clone(),
                    c.clone(),
                    q.clone(),
                ))],
                conclusion: b.judge(
                    Logic::El,
                    f,
                    Assertion::and(p, r.clone()),
                    c,
                    Assertion::and(q, r),
                ),
            })
        }
        Rule::ExExists => {
            let w = String::from("w");
            let mut inner_env = env.clone();
            inner_env.insert(w.clone(), Sort::Int);
            let inner = Builder { env: inner_env };
            let c = g.command(depth + 1);
            let fi = i64::from(f);
            let wv = Expr::var(w.clone());
            let link = if g.rng().random_bool(0.5) {
                Expr::eq(
                    Expr::var(g.int_var()),
                    Expr::add(wv.clone(), Expr::Int(g.constant())),
                )
            } else {
                Expr::lt(wv.clone(), Expr::var(g.int_var()))
            };
            let p = Assertion::conj([
                Assertion::not(Assertion::atom(Expr::lt(wv.clone(), Expr::Int(-fi)))),
                Assertion::not(Assertion::atom(Expr::lt(Expr::Int(fi), wv))),
                Assertion::atom(link),
                g.assertion(1),
            ]);
            let q = inner.sp_rel(f, &p, &c);
            Some(Instance {
                premises: vec![Premise::Triple(inner.judge(
                    Logic::El,
                    f,
                    p.clone(),
                    c.clone(),
                    q.clone(),
                ))],
                conclusion: b.judge(
                    Logic::El,
                    f,
                    Assertion::exists(w.clone(), Sort::Int, p),
                    c,
                    Assertion::exists(w, Sort::Int, q),
                ),
            })
        }
    }
}

fn judgement_radius(j: &Judgement) -> u32 {
    interval::quant_radius(&j.env, j.f, &j.cmd, &[&j.pre, &j.post])
}

fn check_judgement(
    j: &Judgement,
    q: u32,
) -> Result<(bool, Option<crate::semantics::State>), PropertyError> {
    let parts = [&j.pre, &j.post];
    let env = typecheck_in(&j.env, &j.cmd, &parts).map_err(crate::triples::CheckError::from)?;
    let k = Checker::new(
        env,
        DomainConfig::new(j.f, q).map_err(crate::triples::CheckError::from)?,
    );
    let v = match j.logic {
        Logic::Hl => k.check_hl(&j.pre, &j.cmd, &j.post)?,
        Logic::Il => k.check_il(&j.pre, &j.cmd, &j.post)?,
        _ => k.check_el(&j.pre, &j.cmd, &j.post)?,
    };
    Ok((v.valid, v.counterexample))
}

fn evaluate(
    rule: Rule,
    inst: &Instance,
    cfg: &GenConfig,
) -> Result<Option<Outcome>, PropertyError> {
    let mut q = judgement_radius(&inst.conclusion);
    for p in &inst.premises {
        match p {
            Premise::Triple(j) => q = q.max(judgement_radius(j)),
            Premise::Implies {
                left,
                right,
                env,
                f,
                ..
            } => {
                q = q.max(interval::quant_radius(
                    env,
                    *f,
                    &Command::Skip,
                    &[left, right],
                ));
            }
        }
    }
    if q > cfg.max_quant_radius {
        return Ok(None);
    }
    for p in &inst.premises {
        let ok = match p {
            Premise::Triple(j) => check_judgement(j, q)?.0,
            Premise::Implies {
                left,
                right,
                env,
                f,
                post,
            } => {
                let d = if *post {
                    DomainConfig::uniform(q)
                } else {
                    DomainConfig::new(*f, q).expect("q >= f")
                };
                Query::implies(left.clone(), right.clone(), env.clone(), d)
                    .decide()?
                    .result
            }
        };
        if !ok {
            return Ok(Some(Outcome::Vacuous));
        }
    }
    let (ok, cex) = check_judgement(&inst.conclusion, q)?;
    Ok(Some(if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(Failure {
            detail: format!(
                "{}: premises hold but {} is invalid",
                rule.name(),
                inst.conclusion
            ),
            counterexample: cex,
        })
    }))
}

/// Samples instance number `index` of `rule` (rejecting instances whose
/// radius exceeds `cfg.max_quant_radius`) and checks it. `Vacuous` means
/// a premise failed.
pub fn check_rule(rule: Rule, cfg: &GenConfig, index: u64) -> Result<Outcome, PropertyError> {
    let mut g = Gen::new(cfg, index);
    for _ in 0..cfg.max_attempts {
        let Some(inst) = build(rule, &mut g, cfg) else {
            continue;
        };
        if let Some(o) = evaluate(rule, &inst, cfg)? {
            return Ok(o);
        }
    }
    Ok(Outcome::Vacuous)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_rule_is_admissible_on_a_few_instances() {
        let cfg = GenConfig {
            seed: 7,
            ..GenConfig::default()
        };
        for rule in Rule::ALL {
            let mut passed = 0;
            for i in 0..8 {
                let o = check_rule(rule, &cfg, i).unwrap();
                assert!(!o.is_fail(), "{}: {o:?}", rule.name());
                passed += usize::from(o == Outcome::Pass);
            }
            assert!(passed > 0, "{} never had valid premises", rule.name());
        }
    }

    #[test]
    fn an_unsound_consequence_rule_is_caught() {
        // Strengthening the postcondition of a Hoare triple is not sound.
        let cfg = GenConfig::default();
        let mut failures = 0;
        for i in 0..20 {
            let mut g = Gen::new(&cfg, i);
            let mut inst = build(Rule::OxCons, &mut g, &cfg).unwrap();
            let post = &mut inst.conclusion.post;
            *post = Assertion::and(
                post.clone(),
                crate::parse::parse_assertion("x == 0").unwrap(),
            );
            if let Some(o) = evaluate(Rule::OxCons, &inst, &cfg).unwrap() {
                failures += usize::from(o.is_fail());
            }
        }
        assert!(failures > 0);
    }

    #[test]
    fn twenty_distinct_names() {
        let names: alloc::collections::BTreeSet<_> = Rule::ALL.iter().map(|r| r.name()).collect();
        assert_eq!(names.len(), 20);
    }
}
