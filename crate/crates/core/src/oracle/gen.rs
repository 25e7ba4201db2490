//! Deterministic random generation of typed cases.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ast::{Assertion, Command, Expr, Sort};
use crate::interval;
use crate::semantics::DomainConfig;
use crate::triples::Checker;
use crate::typeck::{typecheck, TypeEnv, TypeError};

const INT_NAMES: [&str; 3] = ["x", "y", "z"];
const BOOL_NAMES: [&str; 1] = ["b"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Maximum command depth; 1 means a single skip or assignment.
    pub max_depth: usize,
    /// At most 3.
    pub num_int_vars: usize,
    /// At most 1.
    pub num_bool_vars: usize,
    /// Integer literals are drawn from `const_range.0..=const_range.1`.
    pub const_range: (i64, i64),
    pub free_radius: u32,
    /// Cases whose interval-analysis radius exceeds this are rejected.
    pub max_quant_radius: u32,
    pub max_attempts: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 42,
            max_depth: 3,
            num_int_vars: 3,
            num_bool_vars: 1,
            const_range: (-2, 2),
            free_radius: 2,
            max_quant_radius: 6,
            max_attempts: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no acceptable case after {attempts} attempts")]
pub struct GenerationExhausted {
    pub attempts: usize,
}

/// A command with a pre- and postcondition, one auxiliary assertion for
/// properties that need a third formula, and the universe to check in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub cmd: Command,
    pub pre: Assertion,
    pub post: Assertion,
    pub extra: Assertion,
    pub env: TypeEnv,
    pub domain: DomainConfig,
}

impl Case {
    /// Types the parts and fixes the quantifier radius by interval analysis.
    pub fn new(
        cmd: Command,
        pre: Assertion,
        post: Assertion,
        extra: Assertion,
        free_radius: u32,
    ) -> Result<Case, TypeError> {
        let parts = [&pre, &post, &extra];
        let env = typecheck(&cmd, &parts)?;
        let q = interval::quant_radius(&env, free_radius, &cmd, &parts);
        let domain =
            DomainConfig::new(free_radius, q).expect("closure is at least the free radius");
        Ok(Case {
            cmd,
            pre,
            post,
            extra,
            env,
            domain,
        })
    }

    pub fn checker(&self) -> Checker {
        Checker::new(self.env.clone(), self.domain)
    }
}

impl core::fmt::Display for Case {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{{ {} }} {} {{ {} }}", self.pre, self.cmd, self.post)
    }
}

/// Random syntax over a fixed set of variables.
pub struct Gen {
    rng: ChaCha8Rng,
    ints: Vec<&'static str>,
    bools: Vec<&'static str>,
    consts: (i64, i64),
    binders: usize,
}

impl Gen {
    /// Generator for case number `stream` of the run seeded by `cfg.seed`.
    pub fn new(cfg: &GenConfig, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        Gen {
            rng,
            ints: INT_NAMES[..cfg.num_int_vars.clamp(1, 3)].to_vec(),
            bools: BOOL_NAMES[..cfg.num_bool_vars.min(1)].to_vec(),
            consts: cfg.const_range,
            binders: 0,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs[self.rng.random_range(0..xs.len())].clone()
    }

    pub fn constant(&mut self) -> i64 {
        self.rng.random_range(self.consts.0..=self.consts.1)
    }

    pub fn int_var(&mut self) -> String {
        let ints = self.ints.clone();
        self.pick(&ints).to_string()
    }

    pub fn int_expr(&mut self, depth: usize) -> Expr {
        if depth == 0 || self.chance(0.45) {
            return if self.chance(0.6) {
                Expr::var(self.int_var())
            } else {
                Expr::Int(self.constant())
            };
        }
        let a = self.int_expr(depth - 1);
        match self.rng.random_range(0..10) {
            0..=4 => Expr::add(a, self.int_expr(depth - 1)),
            5..=8 => Expr::sub(a, self.int_expr(depth - 1)),
            _ => Expr::mul(a, Expr::Int(self.constant())),
        }
    }

    /// A comparison, or the boolean variable.
    fn bool_leaf(&mut self) -> Expr {
        if !self.bools.is_empty() && self.chance(0.2) {
            let bools = self.bools.clone();
            return Expr::var(self.pick(&bools));
        }
        let a = self.int_expr(1);
        let b = self.int_expr(0);
        if self.chance(0.5) {
            Expr::lt(a, b)
        } else {
            Expr::eq(a, b)
        }
    }

    pub fn bool_expr(&mut self, depth: usize) -> Expr {
        if depth == 0 || self.chance(0.6) {
            return self.bool_leaf();
        }
        match self.rng.random_range(0..3) {
            0 => Expr::not(self.bool_expr(depth - 1)),
            1 => Expr::and(self.bool_expr(depth - 1), self.bool_expr(depth - 1)),
            _ => Expr::or(self.bool_expr(depth - 1), self.bool_expr(depth - 1)),
        }
    }

    pub fn command(&mut self, depth: usize) -> Command {
        let roll = self.rng.random_range(0..100);
        if depth <= 1 {
            return if roll < 15 {
                Command::Skip
            } else {
                self.assignment()
            };
        }
        match roll {
            0..=9 => Command::Skip,
            10..=34 => self.assignment(),
            35..=69 => Command::seq(self.command(depth - 1), self.command(depth - 1)),
            _ => Command::ite(
                self.bool_expr(1),
                self.command(depth - 1),
                self.command(depth - 1),
            ),
        }
    }

    pub fn assignment(&mut self) -> Command {
        if !self.bools.is_empty() && self.chance(0.2) {
            let bools = self.bools.clone();
            let b = self.pick(&bools);
            // A bare `b := b` would leave `b` without a boolean use.
            let e = match self.bool_expr(1) {
                e @ Expr::Var(_) => Expr::not(e),
                e => e,
            };
            Command::assign(b, e)
        } else {
            let x = self.int_var();
            Command::assign(x, self.int_expr(2))
        }
    }

    pub fn assertion(&mut self, depth: usize) -> Assertion {
        if depth == 0 || self.chance(0.4) {
            return match self.rng.random_range(0..20) {
                0 => Assertion::tt(),
                1 => Assertion::ff(),
                _ => Assertion::atom(self.bool_leaf()),
            };
        }
        match self.rng.random_range(0..10) {
            0..=1 => Assertion::not(self.assertion(depth - 1)),
            2..=5 => Assertion::and(self.assertion(depth - 1), self.assertion(depth - 1)),
            6..=8 => Assertion::or(self.assertion(depth - 1), self.assertion(depth - 1)),
            _ => self.existential(depth - 1),
        }
    }

    /// `exists w. (w relates to a program variable) && body`.
    fn existential(&mut self, depth: usize) -> Assertion {
        let w = alloc::format!("w{}", self.binders);
        self.binders += 1;
        let link = Expr::eq(
            Expr::var(self.int_var()),
            Expr::add(Expr::var(w.clone()), Expr::Int(self.constant())),
        );
        let body = Assertion::and(Assertion::atom(link), self.assertion(depth));
        Assertion::exists(w, Sort::Int, body)
    }
}

/// Case number 0 of the run seeded by `cfg.seed`.
pub fn gen_case(cfg: &GenConfig) -> Result<Case, GenerationExhausted> {
    gen_case_at(cfg, 0)
}

/// Case number `index`: deterministic in `(cfg, index)`, well-typed, and
/// with interval-analysis radius at most `cfg.max_quant_radius`.
pub fn gen_case_at(cfg: &GenConfig, index: u64) -> Result<Case, GenerationExhausted> {
    let mut g = Gen::new(cfg, index);
    for _ in 0..cfg.max_attempts {
        let cmd = g.command(cfg.max_depth.max(1));
        let pre = g.assertion(2);
        let post = g.assertion(2);
        let extra = g.assertion(1);
        if let Some(case) = accept(cfg, cmd, pre, post, extra) {
            return Ok(case);
        }
    }
    Err(GenerationExhausted {
        attempts: cfg.max_attempts,
    })
}

pub(crate) fn accept(
    cfg: &GenConfig,
    cmd: Command,
    pre: Assertion,
    post: Assertion,
    extra: Assertion,
) -> Option<Case> {
    let case = Case::new(cmd, pre, post, extra, cfg.free_radius).ok()?;
    (case.domain.quant_radius() <= cfg.max_quant_radius).then_some(case)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed_and_index() {
        let cfg = GenConfig::default();
        assert_eq!(gen_case(&cfg).unwrap(), gen_case(&cfg).unwrap());
        assert_eq!(gen_case_at(&cfg, 7).unwrap(), gen_case_at(&cfg, 7).unwrap());
        let distinct = (0..20).map(|i| gen_case_at(&cfg, i).unwrap().to_string());
        let set: alloc::collections::BTreeSet<_> = distinct.collect();
        assert!(set.len() > 15);
    }

    #[test]
    fn depth_one_gives_a_primitive_command() {
        let cfg = GenConfig {
            max_depth: 1,
            ..GenConfig::default()
        };
        for i in 0..50 {
            let c = gen_case_at(&cfg, i).unwrap().cmd;
            assert!(matches!(c, Command::Skip | Command::Assign(..)), "{c}");
        }
    }

    #[test]
    fn output_typechecks_within_bounds() {
        let cfg = GenConfig::default();
        for i in 0..200 {
            let case = gen_case_at(&cfg, i).unwrap();
            assert!(typecheck(&case.cmd, &[&case.pre, &case.post, &case.extra]).is_ok());
            assert!(case.domain.quant_radius() <= cfg.max_quant_radius);
            assert!(case.cmd.depth() <= cfg.max_depth);
            assert!(case.env.values().filter(|s| **s == Sort::Int).count() <= 3);
        }
    }

    #[test]
    fn impossible_bounds_exhaust() {
        let cfg = GenConfig {
            max_quant_radius: 1,
            free_radius: 2,
            max_attempts: 5,
            ..GenConfig::default()
        };
        assert_eq!(gen_case(&cfg), Err(GenerationExhausted { attempts: 5 }));
    }
}
