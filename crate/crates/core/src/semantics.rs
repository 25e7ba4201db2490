//! Big-step execution and bounded satisfaction.
//!
//! Arithmetic is exact: an operation whose result does not fit in an `i64`
//! is reported as [`EvalError::Overflow`] rather than wrapping. Only
//! quantifier instantiation and state enumeration are bounded.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{Assertion, Command, Expr, Sort};
use crate::typeck::TypeEnv;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Bool(bool),
}

impl Value {
    pub fn sort(self) -> Sort {
        match self {
            Value::Int(_) => Sort::Int,
            Value::Bool(_) => Sort::Bool,
        }
    }

    /// Distance from the origin; booleans count as zero.
    pub fn magnitude(self) -> u64 {
        match self {
            Value::Int(n) => n.unsigned_abs(),
            Value::Bool(_) => 0,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// A program state: a finite map from variable names to values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(BTreeMap<String, Value>);

impl State {
    pub fn new() -> Self {
        State(BTreeMap::new())
    }

    pub fn get(&self, v: &str) -> Option<Value> {
        self.0.get(v).copied()
    }

    pub fn insert(&mut self, v: impl Into<String>, value: Value) -> Option<Value> {
        self.0.insert(v.into(), value)
    }

    pub fn remove(&mut self, v: &str) -> Option<Value> {
        self.0.remove(v)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, String, Value> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the absolute values of the integer entries.
    pub fn magnitude(&self) -> u64 {
        self.0.values().map(|v| v.magnitude()).sum()
    }
}

impl FromIterator<(String, Value)> for State {
    fn from_iter<I: IntoIterator<Item = (String, Value)>>(iter: I) -> Self {
        State(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<(&'a str, Value)> for State {
    fn from_iter<I: IntoIterator<Item = (&'a str, Value)>>(iter: I) -> Self {
        State(iter.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }
}

impl<'a> IntoIterator for &'a State {
    type Item = (&'a String, &'a Value);
    type IntoIter = btree_map::Iter<'a, String, Value>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("ill-typed operand in `{0}`")]
    TypeMismatch(String),
    #[error("integer overflow in `{0}`")]
    Overflow(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("quant_radius {quant_radius} is smaller than free_radius {free_radius}")]
pub struct DomainError {
    pub free_radius: u32,
    pub quant_radius: u32,
}

/// The finite universe: free variables range over
/// `[-free_radius, free_radius]`, quantified ones over
/// `[-quant_radius, quant_radius]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DomainConfig {
    free_radius: u32,
    quant_radius: u32,
}

impl DomainConfig {
    pub fn new(free_radius: u32, quant_radius: u32) -> Result<Self, DomainError> {
        if quant_radius < free_radius {
            return Err(DomainError {
                free_radius,
                quant_radius,
            });
        }
        Ok(DomainConfig {
            free_radius,
            quant_radius,
        })
    }

    /// Both radii equal to `r`.
    pub const fn uniform(r: u32) -> Self {
        DomainConfig {
            free_radius: r,
            quant_radius: r,
        }
    }

    pub const fn free_radius(self) -> u32 {
        self.free_radius
    }

    pub const fn quant_radius(self) -> u32 {
        self.quant_radius
    }
}

fn int(e: &Expr, v: Value) -> Result<i64, EvalError> {
    match v {
        Value::Int(n) => Ok(n),
        Value::Bool(_) => Err(EvalError::TypeMismatch(e.to_string())),
    }
}

fn boolean(e: &Expr, v: Value) -> Result<bool, EvalError> {
    match v {
        Value::Bool(b) => Ok(b),
        Value::Int(_) => Err(EvalError::TypeMismatch(e.to_string())),
    }
}

pub fn eval_expr(e: &Expr, s: &State) -> Result<Value, EvalError> {
    let arith = |a: &Expr, b: &Expr, op: fn(i64, i64) -> Option<i64>| {
        let x = int(e, eval_expr(a, s)?)?;
        let y = int(e, eval_expr(b, s)?)?;
        op(x, y)
            .map(Value::Int)
            .ok_or_else(|| EvalError::Overflow(e.to_string()))
    };
    match e {
        Expr::Int(n) => Ok(Value::Int(*n)),
        Expr::Bool(b) => Ok(Value::Bool(*b)),
        Expr::Var(v) => s
            .get(v)
            .ok_or_else(|| EvalError::UnboundVariable(v.clone())),
        Expr::Not(a) => Ok(Value::Bool(!boolean(e, eval_expr(a, s)?)?)),
        Expr::And(a, b) => Ok(Value::Bool(
            boolean(e, eval_expr(a, s)?)? && boolean(e, eval_expr(b, s)?)?,
        )),
        Expr::Or(a, b) => Ok(Value::Bool(
            boolean(e, eval_expr(a, s)?)? || boolean(e, eval_expr(b, s)?)?,
        )),
        Expr::Eq(a, b) => {
            let (x, y) = (eval_expr(a, s)?, eval_expr(b, s)?);
            if x.sort() != y.sort() {
                return Err(EvalError::TypeMismatch(e.to_string()));
            }
            Ok(Value::Bool(x == y))
        }
        Expr::Lt(a, b) => Ok(Value::Bool(
            int(e, eval_expr(a, s)?)? < int(e, eval_expr(b, s)?)?,
        )),
        Expr::Add(a, b) => arith(a, b, i64::checked_add),
        Expr::Sub(a, b) => arith(a, b, i64::checked_sub),
        Expr::Mul(a, b) => arith(a, b, i64::checked_mul),
    }
}

pub fn exec(c: &Command, s: &State) -> Result<State, EvalError> {
    let mut out = s.clone();
    exec_in_place(c, &mut out)?;
    Ok(out)
}

fn exec_in_place(c: &Command, s: &mut State) -> Result<(), EvalError> {
    match c {
        Command::Skip => Ok(()),
        Command::Assign(x, e) => {
            let v = eval_expr(e, s)?;
            s.insert(x.clone(), v);
            Ok(())
        }
        Command::Seq(a, b) => {
            exec_in_place(a, s)?;
            exec_in_place(b, s)
        }
        Command::If(cond, a, b) => {
            if boolean(cond, eval_expr(cond, s)?)? {
                exec_in_place(a, s)
            } else {
                exec_in_place(b, s)
            }
        }
    }
}

/// Satisfaction with `exists` ranging over `[-quant_radius, quant_radius]`
/// (or both booleans).
pub fn holds(p: &Assertion, s: &State, d: &DomainConfig) -> Result<bool, EvalError> {
    let mut s = s.clone();
    holds_mut(p, &mut s, i64::from(d.quant_radius))
}

fn holds_mut(p: &Assertion, s: &mut State, q: i64) -> Result<bool, EvalError> {
    match p {
        Assertion::Atom(e) => boolean(e, eval_expr(e, s)?),
        Assertion::Not(a) => Ok(!holds_mut(a, s, q)?),
        Assertion::And(a, b) => Ok(holds_mut(a, s, q)? && holds_mut(b, s, q)?),
        Assertion::Or(a, b) => Ok(holds_mut(a, s, q)? || holds_mut(b, s, q)?),
        Assertion::Exists(v, sort, body) => {
            let saved = s.get(v);
            let mut found = Ok(false);
            for value in sort_values(*sort, q) {
                s.insert(v.clone(), value);
                match holds_mut(body, s, q) {
                    Ok(false) => {}
                    r => {
                        found = r;
                        break;
                    }
                }
            }
            match saved {
                Some(old) => s.insert(v.clone(), old),
                None => s.remove(v),
            };
            found
        }
    }
}

fn sort_values(sort: Sort, radius: i64) -> impl Iterator<Item = Value> {
    let (ints, bools): (_, &[bool]) = match sort {
        Sort::Int => (Some(-radius..=radius), &[]),
        Sort::Bool => (None, &[false, true]),
    };
    ints.into_iter()
        .flatten()
        .map(Value::Int)
        .chain(bools.iter().map(|&b| Value::Bool(b)))
}

/// Every state over `env` with integers in `[-radius, radius]`, in
/// lexicographic order of the value tuples (variables sorted by name,
/// `false` before `true`).
pub fn states(env: &TypeEnv, radius: u32) -> States {
    let vars: Vec<(String, Sort)> = env.iter().map(|(v, s)| (v.clone(), *s)).collect();
    let radius = i64::from(radius);
    let first = vars.iter().map(|(_, s)| lowest(*s, radius)).collect();
    States {
        vars,
        radius,
        next: Some(first),
    }
}

fn lowest(sort: Sort, radius: i64) -> Value {
    match sort {
        Sort::Int => Value::Int(-radius),
        Sort::Bool => Value::Bool(false),
    }
}

/// Iterator returned by [`states`].
#[derive(Debug, Clone)]
pub struct States {
    vars: Vec<(String, Sort)>,
    radius: i64,
    next: Option<Vec<Value>>,
}

impl Iterator for States {
    type Item = State;

    fn next(&mut self) -> Option<State> {
        let current = self.next.take()?;
        let state = self
            .vars
            .iter()
            .map(|(v, _)| v.clone())
            .zip(current.iter().copied())
            .collect();
        let mut succ = current;
        let mut carried = true;
        for i in (0..succ.len()).rev() {
            match succ[i] {
                Value::Int(n) if n < self.radius => {
                    succ[i] = Value::Int(n + 1);
                    carried = false;
                    break;
                }
                Value::Bool(false) => {
                    succ[i] = Value::Bool(true);
                    carried = false;
                    break;
                }
                _ => succ[i] = lowest(self.vars[i].1, self.radius),
            }
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(state)
    }
}

/// Number of states [`states`] yields.
pub fn state_count(env: &TypeEnv, radius: u32) -> u128 {
    env.values()
        .map(|s| match s {
            Sort::Int => 2 * u128::from(radius) + 1,
            Sort::Bool => 2,
        })
        .product()
}
