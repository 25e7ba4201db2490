//! Sort inference for commands and assertions.
//!
//! Every variable gets one sort. Constraints are solved with union-find;
//! variables that are never constrained default to `Int`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ast::{Assertion, Command, Expr, Sort};

/// Sorts of the free (program) variables.
pub type TypeEnv = BTreeMap<String, Sort>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("variable `{0}` is used both as int and as bool")]
    Conflict(String),
    #[error("`{expr}` must have sort {expected}")]
    Expected { expr: String, expected: Sort },
}

impl TypeError {
    /// The variable with conflicting uses, when there is one.
    pub fn variable(&self) -> Option<&str> {
        match self {
            TypeError::Conflict(v) => Some(v),
            TypeError::Expected { .. } => None,
        }
    }
}

#[derive(Default)]
struct Solver {
    parent: Vec<usize>,
    sort: Vec<Option<Sort>>,
    /// A variable name belonging to the class, for error messages.
    name: Vec<Option<String>>,
    free: BTreeMap<String, usize>,
}

impl Solver {
    fn fresh(&mut self, sort: Option<Sort>, name: Option<&str>) -> usize {
        self.parent.push(self.parent.len());
        self.sort.push(sort);
        self.name.push(name.map(ToString::to_string));
        self.parent.len() - 1
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize, ctx: &Expr) -> Result<(), TypeError> {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return Ok(());
        }
        let sort = match (self.sort[a], self.sort[b]) {
            (Some(x), Some(y)) if x != y => {
                return Err(
                    match self.name[a].clone().or_else(|| self.name[b].clone()) {
                        Some(v) => TypeError::Conflict(v),
                        None => TypeError::Expected {
                            expr: ctx.to_string(),
                            expected: x,
                        },
                    },
                );
            }
            (x, y) => x.or(y),
        };
        self.parent[b] = a;
        self.sort[a] = sort;
        if self.name[a].is_none() {
            self.name[a] = self.name[b].take();
        }
        Ok(())
    }

    fn expect(&mut self, e: &Expr, class: usize, sort: Sort) -> Result<(), TypeError> {
        let k = self.fresh(Some(sort), None);
        self.union(class, k, e)
    }

    fn lookup(&mut self, v: &str, scope: &[(&str, usize)]) -> usize {
        if let Some((_, k)) = scope.iter().rev().find(|(n, _)| *n == v) {
            return *k;
        }
        if let Some(k) = self.free.get(v) {
            return *k;
        }
        let k = self.fresh(None, Some(v));
        self.free.insert(v.to_string(), k);
        k
    }

    fn expr(&mut self, e: &Expr, scope: &[(&str, usize)]) -> Result<usize, TypeError> {
        let bin = |s: &mut Self, a: &Expr, b: &Expr, operand: Sort, result: Sort| {
            let ka = s.expr(a, scope)?;
            s.expect(a, ka, operand)?;
            let kb = s.expr(b, scope)?;
            s.expect(b, kb, operand)?;
            Ok(s.fresh(Some(result), None))
        };
        match e {
            Expr::Int(_) => Ok(self.fresh(Some(Sort::Int), None)),
            Expr::Bool(_) => Ok(self.fresh(Some(Sort::Bool), None)),
            Expr::Var(v) => Ok(self.lookup(v, scope)),
            Expr::Not(a) => {
                let k = self.expr(a, scope)?;
                self.expect(a, k, Sort::Bool)?;
                Ok(k)
            }
            Expr::Or(a, b) | Expr::And(a, b) => bin(self, a, b, Sort::Bool, Sort::Bool),
            Expr::Lt(a, b) => bin(self, a, b, Sort::Int, Sort::Bool),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                bin(self, a, b, Sort::Int, Sort::Int)
            }
            Expr::Eq(a, b) => {
                let ka = self.expr(a, scope)?;
                let kb = self.expr(b, scope)?;
                self.union(ka, kb, e)?;
                Ok(self.fresh(Some(Sort::Bool), None))
            }
        }
    }

    fn command(&mut self, c: &Command) -> Result<(), TypeError> {
        match c {
            Command::Skip => Ok(()),
            Command::Assign(x, e) => {
                let kx = self.lookup(x, &[]);
                let ke = self.expr(e, &[])?;
                self.union(kx, ke, e)
            }
            Command::Seq(a, b) => {
                self.command(a)?;
                self.command(b)
            }
            Command::If(cond, a, b) => {
                let k = self.expr(cond, &[])?;
                self.expect(cond, k, Sort::Bool)?;
                self.command(a)?;
                self.command(b)
            }
        }
    }

    fn assertion<'a>(
        &mut self,
        p: &'a Assertion,
        scope: &mut Vec<(&'a str, usize)>,
    ) -> Result<(), TypeError> {
        match p {
            Assertion::Atom(e) => {
                let k = self.expr(e, scope)?;
                self.expect(e, k, Sort::Bool)
            }
            Assertion::Not(a) => self.assertion(a, scope),
            Assertion::And(a, b) | Assertion::Or(a, b) => {
                self.assertion(a, scope)?;
                self.assertion(b, scope)
            }
            Assertion::Exists(v, sort, body) => {
                let k = self.fresh(Some(*sort), Some(v));
                scope.push((v, k));
                let r = self.assertion(body, scope);
                scope.pop();
                r
            }
        }
    }
}

/// Infers one consistent sort for every free variable of `c` and `ps`.
pub fn typecheck(c: &Command, ps: &[&Assertion]) -> Result<TypeEnv, TypeError> {
    typecheck_in(&TypeEnv::new(), c, ps)
}

/// Like [`typecheck`], starting from the sorts already fixed by `env`.
/// Variables only in `env` are kept in the result.
pub fn typecheck_in(env: &TypeEnv, c: &Command, ps: &[&Assertion]) -> Result<TypeEnv, TypeError> {
    let mut s = Solver::default();
    for (v, sort) in env {
        let k = s.fresh(Some(*sort), Some(v));
        s.free.insert(v.clone(), k);
    }
    s.command(c)?;
    for p in ps {
        s.assertion(p, &mut Vec::new())?;
    }
    let free: Vec<(String, usize)> = s.free.iter().map(|(v, k)| (v.clone(), *k)).collect();
    Ok(free
        .into_iter()
        .map(|(v, k)| {
            let root = s.find(k);
            (v, s.sort[root].unwrap_or(Sort::Int))
        })
        .collect())
}
