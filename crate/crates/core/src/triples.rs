//! Validity of HL, IL, EL, gradual EL, GV and lifted IL triples.
//!
//! Every check reduces to a handful of entailment queries on the strongest
//! postcondition (and, for HL, the weakest precondition as a cross-check).
//!
//! Validity is relative to the pre-state box `U_f`: initial states have all
//! integers in `[-f, f]`. The checker therefore computes
//! `sp(Box_f && P, C)`, where `Box_f` pins every integer variable to that
//! range, and asks post-state questions over `U_q` (`q` the quantifier
//! radius, wide enough to contain every reachable state) and pre-state
//! questions over `U_f`. With `q` at least the interval closure of the
//! command, the verdicts coincide with execution over `U_f`
//! (see [`crate::oracle`]).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::ast::{Assertion, Command, Expr, Sort};
use crate::entail::{Decision, EntailError, Query};
use crate::interval;
use crate::semantics::{DomainConfig, DomainError, State};
use crate::transformers::{sp_in, wp};
use crate::typeck::{typecheck, TypeEnv, TypeError};

/// A precise assertion `P`, or the imprecise `? && P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GradualFormula {
    Precise(Assertion),
    Imprecise(Assertion),
}

impl GradualFormula {
    /// The precise part.
    pub fn assertion(&self) -> &Assertion {
        match self {
            GradualFormula::Precise(p) | GradualFormula::Imprecise(p) => p,
        }
    }

    pub fn is_precise(&self) -> bool {
        matches!(self, GradualFormula::Precise(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logic {
    Hl,
    Il,
    El,
    Gel,
    Gv,
    IlLifted,
}

impl Logic {
    pub const ALL: [Logic; 6] = [
        Logic::Hl,
        Logic::Il,
        Logic::El,
        Logic::Gel,
        Logic::Gv,
        Logic::IlLifted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Logic::Hl => "hl",
            Logic::Il => "il",
            Logic::El => "el",
            Logic::Gel => "gel",
            Logic::Gv => "gv",
            Logic::IlLifted => "il-lifted",
        }
    }

    /// Whether the logic accepts an imprecise precondition / postcondition.
    pub fn gradual_sides(self) -> (bool, bool) {
        match self {
            Logic::Hl | Logic::Il | Logic::El => (false, false),
            Logic::Gel => (true, true),
            Logic::Gv => (true, false),
            Logic::IlLifted => (false, true),
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown logic `{0}` (expected hl, il, el, gel, gv or il-lifted)")]
pub struct UnknownLogic(pub String);

impl FromStr for Logic {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Logic::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| UnknownLogic(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Entail(#[from] EntailError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("{logic} requires a precise {side}")]
    PreciseRequired { logic: Logic, side: &'static str },
    /// The two characterizations of a logic disagreed: a bug, never a
    /// property of the input.
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

/// One entailment query a verdict rests on, with its outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRecord {
    pub purpose: String,
    pub query: Query,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub logic: Logic,
    pub valid: bool,
    /// Concretization chosen for an imprecise precondition.
    pub witness_pre: Option<Assertion>,
    /// Concretization chosen for an imprecise postcondition.
    pub witness_post: Option<Assertion>,
    /// State refuting the decisive query of an invalid verdict.
    pub counterexample: Option<State>,
    pub queries: Vec<QueryRecord>,
    pub domain: DomainConfig,
    /// Set when a satisfiability hypothesis failed, so that "invalid"
    /// can be told apart from "no satisfiable concretization exists".
    pub note: Option<String>,
}

/// Deliberate defects for mutation testing of the fuzz harness.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// GV with an imprecise precondition accepts without testing
    /// satisfiability of the reachable postcondition.
    GvSkipsSatisfiability,
}

/// Decides triples over one type environment and universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checker {
    env: TypeEnv,
    domain: DomainConfig,
    mutation: Option<Mutation>,
}

/// `in_gamma` over an explicit universe: `Precise(P)` admits exactly the
/// formulas equivalent to `P`; `? && P` admits the satisfiable formulas
/// implying `P`.
pub fn in_gamma(
    w: &Assertion,
    g: &GradualFormula,
    env: &TypeEnv,
    d: DomainConfig,
) -> Result<bool, EntailError> {
    match g {
        GradualFormula::Precise(p) => Ok(Query::equiv(w.clone(), p.clone(), env.clone(), d)
            .decide()?
            .result),
        GradualFormula::Imprecise(p) => Ok(Query::sat(w.clone(), env.clone(), d).decide()?.result
            && Query::implies(w.clone(), p.clone(), env.clone(), d)
                .decide()?
                .result),
    }
}

struct Trace {
    logic: Logic,
    domain: DomainConfig,
    queries: Vec<QueryRecord>,
}

impl Trace {
    fn run(&mut self, purpose: &str, query: Query) -> Result<Decision, CheckError> {
        let decision = query.decide()?;
        self.queries.push(QueryRecord {
            purpose: purpose.to_string(),
            query,
            decision: decision.clone(),
        });
        Ok(decision)
    }

    fn verdict(self, valid: bool, counterexample: Option<State>) -> Verdict {
        Verdict {
            logic: self.logic,
            valid,
            witness_pre: None,
            witness_post: None,
            counterexample: if valid { None } else { counterexample },
            queries: self.queries,
            domain: self.domain,
            note: None,
        }
    }
}

impl Checker {
    pub fn new(env: TypeEnv, domain: DomainConfig) -> Self {
        Checker {
            env,
            domain,
            mutation: None,
        }
    }

    /// A checker for the given formulas and command: sorts by inference,
    /// quantifier radius by interval analysis (unless overridden).
    pub fn for_triple(
        c: &Command,
        asserts: &[&Assertion],
        free_radius: u32,
        quant_radius: Option<u32>,
    ) -> Result<Self, CheckError> {
        let env = typecheck(c, asserts)?;
        let q = match quant_radius {
            Some(q) => q,
            None => interval::quant_radius(&env, free_radius, c, asserts),
        };
        Ok(Checker::new(env, DomainConfig::new(free_radius, q)?))
    }

    #[doc(hidden)]
    pub fn with_mutation(mut self, m: Mutation) -> Self {
        self.mutation = Some(m);
        self
    }

    pub fn env(&self) -> &TypeEnv {
        &self.env
    }

    pub fn domain(&self) -> DomainConfig {
        self.domain
    }

    /// Universe for questions about pre-states.
    pub fn pre_domain(&self) -> DomainConfig {
        self.domain
    }

    /// Universe for questions about post-states.
    pub fn post_domain(&self) -> DomainConfig {
        DomainConfig::uniform(self.domain.quant_radius())
    }

    /// `Box_f`: every integer variable within the free radius.
    pub fn box_guard(&self) -> Assertion {
        let f = i64::from(self.domain.free_radius());
        Assertion::conj(
            self.env
                .iter()
                .filter(|(_, s)| **s == Sort::Int)
                .flat_map(|(v, _)| {
                    let x = Expr::var(v.clone());
                    [
                        Assertion::not(Assertion::atom(Expr::lt(x.clone(), Expr::Int(-f)))),
                        Assertion::not(Assertion::atom(Expr::lt(Expr::Int(f), x))),
                    ]
                }),
        )
    }

    /// `sp(Box_f && P, C)`: the post-states reachable from `P` inside the box.
    pub fn sp_rel(&self, p: &Assertion, c: &Command) -> Assertion {
        sp_in(&Assertion::and(self.box_guard(), p.clone()), c, &self.env)
    }

    fn trace(&self, logic: Logic) -> Trace {
        Trace {
            logic,
            domain: self.domain,
            queries: Vec::new(),
        }
    }

    fn pre_query(&self, p: Assertion, q: Option<Assertion>) -> Query {
        self.query(p, q, self.pre_domain())
    }

    fn post_query(&self, p: Assertion, q: Option<Assertion>) -> Query {
        self.query(p, q, self.post_domain())
    }

    fn query(&self, p: Assertion, q: Option<Assertion>, d: DomainConfig) -> Query {
        match q {
            Some(q) => Query::implies(p, q, self.env.clone(), d),
            None => Query::sat(p, self.env.clone(), d),
        }
    }

    /// Membership of a precondition witness in `γ(g)`.
    pub fn in_gamma_pre(&self, w: &Assertion, g: &GradualFormula) -> Result<bool, EntailError> {
        in_gamma(w, g, &self.env, self.pre_domain())
    }

    /// Membership of a postcondition witness in `γ(g)`.
    pub fn in_gamma_post(&self, w: &Assertion, g: &GradualFormula) -> Result<bool, EntailError> {
        in_gamma(w, g, &self.env, self.post_domain())
    }

    /// `{P} C {Q}`: `sp(P, C) => Q`, cross-checked against `P => wp(C, Q)`.
    pub fn check_hl(
        &self,
        p: &Assertion,
        c: &Command,
        q: &Assertion,
    ) -> Result<Verdict, CheckError> {
        let mut t = self.trace(Logic::Hl);
        let by_sp = t.run(
            "sp(P, C) => Q",
            self.post_query(self.sp_rel(p, c), Some(q.clone())),
        )?;
        let by_wp = t.run("P => wp(C, Q)", self.pre_query(p.clone(), Some(wp(c, q))))?;
        if by_sp.result != by_wp.result {
            return Err(CheckError::InternalInvariantViolation(alloc::format!(
                "sp-based check says {} but wp-based check says {} for {{{p}}} {c} {{{q}}}",
                by_sp.result,
                by_wp.result
            )));
        }
        Ok(t.verdict(by_wp.result, by_wp.model))
    }

    /// `[P] C [Q]`: `Q => sp(P, C)`.
    pub fn check_il(
        &self,
        p: &Assertion,
        c: &Command,
        q: &Assertion,
    ) -> Result<Verdict, CheckError> {
        let mut t = self.trace(Logic::Il);
        let d = t.run(
            "Q => sp(P, C)",
            self.post_query(q.clone(), Some(self.sp_rel(p, c))),
        )?;
        Ok(t.verdict(d.result, d.model))
    }

    /// `(P) C (Q)`: `sp(P, C) == Q`.
    pub fn check_el(
        &self,
        p: &Assertion,
        c: &Command,
        q: &Assertion,
    ) -> Result<Verdict, CheckError> {
        let mut t = self.trace(Logic::El);
        let query = Query::equiv(
            self.sp_rel(p, c),
            q.clone(),
            self.env.clone(),
            self.post_domain(),
        );
        let d = t.run("sp(P, C) == Q", query)?;
        Ok(t.verdict(d.result, d.model))
    }

    pub fn check_gel(
        &self,
        pre: &GradualFormula,
        c: &Command,
        post: &GradualFormula,
    ) -> Result<Verdict, CheckError> {
        use GradualFormula::{Imprecise, Precise};
        match (pre, post) {
            (Precise(p), Precise(q)) => {
                let mut v = self.check_el(p, c, q)?;
                v.logic = Logic::Gel;
                Ok(v)
            }
            (Precise(p), Imprecise(q)) => {
                let mut t = self.trace(Logic::Gel);
                let sat = t.run("P satisfiable", self.pre_query(p.clone(), None))?;
                if !sat.result {
                    let mut v = t.verdict(false, None);
                    v.note = Some(
                        "precondition is unsatisfiable, so no exact triple can start from it"
                            .into(),
                    );
                    return Ok(v);
                }
                let sp = self.sp_rel(p, c);
                let d = t.run(
                    "sp(P, C) => Q",
                    self.post_query(sp.clone(), Some(q.clone())),
                )?;
                let mut v = t.verdict(d.result, d.model);
                if v.valid {
                    v.witness_post = Some(sp);
                }
                Ok(v)
            }
            (Imprecise(p), Precise(q)) => {
                let mut t = self.trace(Logic::Gel);
                let sat = t.run("Q satisfiable", self.post_query(q.clone(), None))?;
                if !sat.result {
                    let mut v = t.verdict(false, None);
                    v.note = Some(
                        "postcondition is unsatisfiable, so no exact triple can end in it".into(),
                    );
                    return Ok(v);
                }
                let sp = self.sp_rel(p, c);
                let d = t.run("Q => sp(P, C)", self.post_query(q.clone(), Some(sp)))?;
                let mut v = t.verdict(d.result, d.model);
                if v.valid {
                    v.witness_pre = Some(Assertion::and(p.clone(), wp(c, q)));
                }
                Ok(v)
            }
            (Imprecise(p), Imprecise(q)) => self.reachable(Logic::Gel, p, c, q, true),
        }
    }

    /// `Q && sp(P, C)` satisfiable, with witnesses for both sides (or only
    /// the postcondition when `with_pre` is false).
    fn reachable(
        &self,
        logic: Logic,
        p: &Assertion,
        c: &Command,
        q: &Assertion,
        with_pre: bool,
    ) -> Result<Verdict, CheckError> {
        let mut t = self.trace(logic);
        let post = Assertion::and(q.clone(), self.sp_rel(p, c));
        let d = t.run(
            "Q && sp(P, C) satisfiable",
            self.post_query(post.clone(), None),
        )?;
        let valid = d.result
            || (logic == Logic::Gv && self.mutation == Some(Mutation::GvSkipsSatisfiability));
        let mut v = t.verdict(valid, None);
        if valid {
            if with_pre {
                v.witness_pre = Some(Assertion::and(p.clone(), wp(c, &post)));
            }
            v.witness_post = Some(post);
        }
        Ok(v)
    }

    /// `{P~} C {Q}`: HL for a precise precondition, reachability otherwise.
    pub fn check_gv(
        &self,
        pre: &GradualFormula,
        c: &Command,
        q: &Assertion,
    ) -> Result<Verdict, CheckError> {
        match pre {
            GradualFormula::Precise(p) => {
                let mut v = self.check_hl(p, c, q)?;
                v.logic = Logic::Gv;
                Ok(v)
            }
            GradualFormula::Imprecise(p) => self.reachable(Logic::Gv, p, c, q, true),
        }
    }

    /// `[P] C [Q~]`: IL for a precise postcondition, reachability otherwise.
    pub fn check_il_lifted(
        &self,
        p: &Assertion,
        c: &Command,
        post: &GradualFormula,
    ) -> Result<Verdict, CheckError> {
        match post {
            GradualFormula::Precise(q) => {
                let mut v = self.check_il(p, c, q)?;
                v.logic = Logic::IlLifted;
                Ok(v)
            }
            GradualFormula::Imprecise(q) => self.reachable(Logic::IlLifted, p, c, q, false),
        }
    }

    /// Dispatches on `logic`, rejecting imprecise sides it does not allow.
    pub fn check(
        &self,
        logic: Logic,
        pre: &GradualFormula,
        c: &Command,
        post: &GradualFormula,
    ) -> Result<Verdict, CheckError> {
        let (pre_ok, post_ok) = logic.gradual_sides();
        if !pre_ok && !pre.is_precise() {
            return Err(CheckError::PreciseRequired {
                logic,
                side: "precondition",
            });
        }
        if !post_ok && !post.is_precise() {
            return Err(CheckError::PreciseRequired {
                logic,
                side: "postcondition",
            });
        }
        let (p, q) = (pre.assertion(), post.assertion());
        match logic {
            Logic::Hl => self.check_hl(p, c, q),
            Logic::Il => self.check_il(p, c, q),
            Logic::El => self.check_el(p, c, q),
            Logic::Gel => self.check_gel(pre, c, post),
            Logic::Gv => self.check_gv(pre, c, q),
            Logic::IlLifted => self.check_il_lifted(p, c, post),
        }
    }
}
