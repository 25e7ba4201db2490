//! Satisfiability, implication and equivalence over a bounded universe.
//!
//! Free variables range over `[-free_radius, free_radius]` and
//! quantifiers over `[-quant_radius, quant_radius]`. States are visited by
//! increasing magnitude (sum of absolute integer values), ties broken by
//! the order of [`crate::semantics::states`], so a reported model or
//! counterexample is always a smallest one.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ast::{Assertion, Command, Sort};
use crate::compile::Compiled;
use crate::semantics::{DomainConfig, State, Value};
use crate::typeck::{typecheck_in, TypeEnv, TypeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueryKind {
    Sat,
    Implies,
    Equiv,
}

/// One entailment question over a fixed universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub kind: QueryKind,
    pub left: Assertion,
    /// Absent for [`QueryKind::Sat`].
    pub right: Option<Assertion>,
    pub env: TypeEnv,
    pub domain: DomainConfig,
}

/// Outcome of a query. For `Sat` the model satisfies the formula; for
/// `Implies` and `Equiv` it is a counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub result: bool,
    pub model: Option<State>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EntailError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("variable `{0}` is not in the type environment")]
    UnboundVariable(String),
    #[error("integer overflow while evaluating `{0}`")]
    Overflow(String),
}

impl Query {
    pub fn sat(p: Assertion, env: TypeEnv, domain: DomainConfig) -> Self {
        Query {
            kind: QueryKind::Sat,
            left: p,
            right: None,
            env,
            domain,
        }
    }

    pub fn implies(p: Assertion, q: Assertion, env: TypeEnv, domain: DomainConfig) -> Self {
        Query {
            kind: QueryKind::Implies,
            left: p,
            right: Some(q),
            env,
            domain,
        }
    }

    pub fn equiv(p: Assertion, q: Assertion, env: TypeEnv, domain: DomainConfig) -> Self {
        Query {
            kind: QueryKind::Equiv,
            left: p,
            right: Some(q),
            env,
            domain,
        }
    }

    /// The assertions involved, left first.
    pub fn assertions(&self) -> impl Iterator<Item = &Assertion> {
        core::iter::once(&self.left).chain(self.right.as_ref())
    }

    pub fn decide(&self) -> Result<Decision, EntailError> {
        let parts: Vec<&Assertion> = self.assertions().collect();
        let full = typecheck_in(&self.env, &Command::Skip, &parts)?;
        if let Some(extra) = full.keys().find(|v| !self.env.contains_key(*v)) {
            return Err(EntailError::UnboundVariable(extra.clone()));
        }
        let q = self.domain.quant_radius();
        let compile =
            |p: &Assertion| Compiled::new(p, &self.env, q).map_err(EntailError::UnboundVariable);
        let left = compile(&self.left)?;
        let right = match &self.right {
            Some(r) => Some(compile(r)?),
            None => None,
        };
        let mut ls = vec![0; left.slots()];
        let mut rs = vec![0; right.as_ref().map_or(0, Compiled::slots)];
        let overflow = |p: &Assertion| EntailError::Overflow(alloc::string::ToString::to_string(p));

        let universe = Universe::new(&self.env, self.domain.free_radius());
        let n = self.env.len();
        for tuple in universe.iter() {
            ls[..n].copy_from_slice(tuple);
            let l = left.eval(&mut ls).ok_or_else(|| overflow(&self.left))?;
            let mut r = || -> Result<bool, EntailError> {
                let right = right.as_ref().expect("binary query has a right side");
                rs[..n].copy_from_slice(tuple);
                right
                    .eval(&mut rs)
                    .ok_or_else(|| overflow(self.right.as_ref().unwrap()))
            };
            let hit = match self.kind {
                QueryKind::Sat => l,
                QueryKind::Implies => l && !r()?,
                QueryKind::Equiv => l != r()?,
            };
            if hit {
                let model = Some(universe.state(tuple));
                return Ok(Decision {
                    result: self.kind == QueryKind::Sat,
                    model,
                });
            }
        }
        Ok(Decision {
            result: self.kind != QueryKind::Sat,
            model: None,
        })
    }
}

/// All value tuples of a universe, flattened, in search order.
struct Universe<'a> {
    env: &'a TypeEnv,
    width: usize,
    tuples: Vec<i64>,
}

impl<'a> Universe<'a> {
    fn new(env: &'a TypeEnv, radius: u32) -> Self {
        let r = i64::from(radius);
        let ranges: Vec<(i64, i64)> = env
            .values()
            .map(|s| match s {
                Sort::Int => (-r, r),
                Sort::Bool => (0, 1),
            })
            .collect();
        let width = ranges.len();
        let sizes: Vec<usize> = ranges
            .iter()
            .map(|(lo, hi)| (hi - lo + 1) as usize)
            .collect();
        let count: usize = sizes.iter().product();
        let mut all: Vec<Vec<i64>> = Vec::with_capacity(count);
        for index in 0..count {
            let mut rest = index;
            let mut t = vec![0; width];
            for i in (0..width).rev() {
                t[i] = ranges[i].0 + (rest % sizes[i]) as i64;
                rest /= sizes[i];
            }
            all.push(t);
        }
        let sorts: Vec<Sort> = env.values().copied().collect();
        let magnitude = |t: &Vec<i64>| -> u64 {
            t.iter()
                .zip(&sorts)
                .filter(|(_, s)| **s == Sort::Int)
                .map(|(v, _)| v.unsigned_abs())
                .sum()
        };
        all.sort_by_key(magnitude);
        Universe {
            env,
            width,
            tuples: all.concat(),
        }
    }

    fn iter(&self) -> impl Iterator<Item = &[i64]> {
        let count = self.tuples.len().checked_div(self.width).unwrap_or(1);
        (0..count).map(move |i| &self.tuples[i * self.width..(i + 1) * self.width])
    }

    fn state(&self, tuple: &[i64]) -> State {
        self.env
            .iter()
            .zip(tuple)
            .map(|((v, s), x)| {
                let value = match s {
                    Sort::Int => Value::Int(*x),
                    Sort::Bool => Value::Bool(*x != 0),
                };
                (v.clone(), value)
            })
            .collect()
    }
}

pub fn is_satisfiable(
    p: &Assertion,
    env: &TypeEnv,
    d: DomainConfig,
) -> Result<Decision, EntailError> {
    Query::sat(p.clone(), env.clone(), d).decide()
}

pub fn implies(
    p: &Assertion,
    q: &Assertion,
    env: &TypeEnv,
    d: DomainConfig,
) -> Result<Decision, EntailError> {
    Query::implies(p.clone(), q.clone(), env.clone(), d).decide()
}

pub fn equivalent(
    p: &Assertion,
    q: &Assertion,
    env: &TypeEnv,
    d: DomainConfig,
) -> Result<Decision, EntailError> {
    Query::equiv(p.clone(), q.clone(), env.clone(), d).decide()
}
