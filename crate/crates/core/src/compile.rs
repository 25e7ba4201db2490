//! Assertions compiled to a slot-addressed tree for fast enumeration.
//!
//! Values are `i64`, booleans encoded as 0/1. Free variables occupy the
//! first slots (in `TypeEnv` order) and every binder gets a slot of its
//! own. Overflow yields `None`.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::{Assertion, Expr, Sort};
use crate::typeck::TypeEnv;

#[derive(Debug)]
enum CExpr {
    Const(i64),
    Slot(usize),
    Or(Box<CExpr>, Box<CExpr>),
    And(Box<CExpr>, Box<CExpr>),
    Eq(Box<CExpr>, Box<CExpr>),
    Lt(Box<CExpr>, Box<CExpr>),
    Not(Box<CExpr>),
    Add(Box<CExpr>, Box<CExpr>),
    Sub(Box<CExpr>, Box<CExpr>),
    Mul(Box<CExpr>, Box<CExpr>),
}

#[derive(Debug)]
enum CAsrt {
    Atom(CExpr),
    Not(Box<CAsrt>),
    And(Box<CAsrt>, Box<CAsrt>),
    Or(Box<CAsrt>, Box<CAsrt>),
    Exists {
        slot: usize,
        lo: i64,
        hi: i64,
        body: Box<CAsrt>,
    },
}

/// A compiled assertion together with the number of slots it needs.
#[derive(Debug)]
pub(crate) struct Compiled {
    root: CAsrt,
    slots: usize,
}

struct Compiler<'a> {
    scope: Vec<(&'a str, usize)>,
    free: Vec<&'a str>,
    next: usize,
    quant: i64,
}

impl<'a> Compiler<'a> {
    fn var(&self, v: &str) -> Result<usize, String> {
        if let Some((_, k)) = self.scope.iter().rev().find(|(n, _)| *n == v) {
            return Ok(*k);
        }
        self.free
            .iter()
            .position(|n| *n == v)
            .ok_or_else(|| String::from(v))
    }

    fn expr(&self, e: &Expr) -> Result<CExpr, String> {
        let b = |x: &Expr| self.expr(x).map(Box::new);
        Ok(match e {
            Expr::Int(n) => CExpr::Const(*n),
            Expr::Bool(x) => CExpr::Const(i64::from(*x)),
            Expr::Var(v) => CExpr::Slot(self.var(v)?),
            Expr::Or(x, y) => CExpr::Or(b(x)?, b(y)?),
            Expr::And(x, y) => CExpr::And(b(x)?, b(y)?),
            Expr::Eq(x, y) => CExpr::Eq(b(x)?, b(y)?),
            Expr::Lt(x, y) => CExpr::Lt(b(x)?, b(y)?),
            Expr::Not(x) => CExpr::Not(b(x)?),
            Expr::Add(x, y) => CExpr::Add(b(x)?, b(y)?),
            Expr::Sub(x, y) => CExpr::Sub(b(x)?, b(y)?),
            Expr::Mul(x, y) => CExpr::Mul(b(x)?, b(y)?),
        })
    }

    fn asrt(&mut self, p: &'a Assertion) -> Result<CAsrt, String> {
        Ok(match p {
            Assertion::Atom(e) => CAsrt::Atom(self.expr(e)?),
            Assertion::Not(a) => CAsrt::Not(Box::new(self.asrt(a)?)),
            Assertion::And(a, b) => CAsrt::And(Box::new(self.asrt(a)?), Box::new(self.asrt(b)?)),
            Assertion::Or(a, b) => CAsrt::Or(Box::new(self.asrt(a)?), Box::new(self.asrt(b)?)),
            Assertion::Exists(v, sort, body) => {
                let slot = self.next;
                self.next += 1;
                self.scope.push((v, slot));
                let body = self.asrt(body);
                self.scope.pop();
                let (lo, hi) = match sort {
                    Sort::Int => (-self.quant, self.quant),
                    Sort::Bool => (0, 1),
                };
                CAsrt::Exists {
                    slot,
                    lo,
                    hi,
                    body: Box::new(body?),
                }
            }
        })
    }
}

impl Compiled {
    /// Compiles `p` against the free variables of `env`; the error names
    /// a free variable `env` lacks.
    pub(crate) fn new(p: &Assertion, env: &TypeEnv, quant_radius: u32) -> Result<Self, String> {
        let free: Vec<&str> = env.keys().map(String::as_str).collect();
        let mut c = Compiler {
            scope: Vec::new(),
            next: free.len(),
            free,
            quant: quant_radius.into(),
        };
        let root = c.asrt(p)?;
        Ok(Compiled {
            root,
            slots: c.next,
        })
    }

    pub(crate) fn slots(&self) -> usize {
        self.slots
    }

    /// Evaluates with free variables already written to `slots`.
    pub(crate) fn eval(&self, slots: &mut [i64]) -> Option<bool> {
        asrt(&self.root, slots)
    }
}

fn asrt(p: &CAsrt, s: &mut [i64]) -> Option<bool> {
    match p {
        CAsrt::Atom(e) => Some(expr(e, s)? != 0),
        CAsrt::Not(a) => Some(!asrt(a, s)?),
        CAsrt::And(a, b) => Some(asrt(a, s)? && asrt(b, s)?),
        CAsrt::Or(a, b) => Some(asrt(a, s)? || asrt(b, s)?),
        CAsrt::Exists { slot, lo, hi, body } => {
            for v in *lo..=*hi {
                s[*slot] = v;
                if asrt(body, s)? {
                    return Some(true);
                }
            }
            Some(false)
        }
    }
}

fn expr(e: &CExpr, s: &[i64]) -> Option<i64> {
    Some(match e {
        CExpr::Const(n) => *n,
        CExpr::Slot(k) => s[*k],
        CExpr::Or(a, b) => i64::from(expr(a, s)? != 0 || expr(b, s)? != 0),
        CExpr::And(a, b) => i64::from(expr(a, s)? != 0 && expr(b, s)? != 0),
        CExpr::Eq(a, b) => i64::from(expr(a, s)? == expr(b, s)?),
        CExpr::Lt(a, b) => i64::from(expr(a, s)? < expr(b, s)?),
        CExpr::Not(a) => i64::from(expr(a, s)? == 0),
        CExpr::Add(a, b) => expr(a, s)?.checked_add(expr(b, s)?)?,
        CExpr::Sub(a, b) => expr(a, s)?.checked_sub(expr(b, s)?)?,
        CExpr::Mul(a, b) => expr(a, s)?.checked_mul(expr(b, s)?)?,
    })
}
