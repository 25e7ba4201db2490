//! Syntax of programs and assertions.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;

use crate::typeck::{self, TypeError};

/// A finite set of variable names, ordered for deterministic output.
pub type VarSet = BTreeSet<String>;

/// Value sorts. Every variable, program or bound, has exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Int,
    Bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Var(String),
    Or(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
    Lt(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Command {
    Skip,
    Assign(String, Expr),
    Seq(Box<Command>, Box<Command>),
    If(Expr, Box<Command>, Box<Command>),
}

/// First-order assertions. Atoms are boolean expressions; the logical
/// connectives live at this level (see [`Assertion::atom`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Assertion {
    Atom(Expr),
    Not(Box<Assertion>),
    And(Box<Assertion>, Box<Assertion>),
    Or(Box<Assertion>, Box<Assertion>),
    Exists(String, Sort, Box<Assertion>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn or(a: Expr, b: Expr) -> Self {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Expr, b: Expr) -> Self {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn eq(a: Expr, b: Expr) -> Self {
        Expr::Eq(Box::new(a), Box::new(b))
    }

    pub fn lt(a: Expr, b: Expr) -> Self {
        Expr::Lt(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Expr) -> Self {
        Expr::Not(Box::new(a))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    /// Free variables (expressions have no binders).
    pub fn vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Expr::Int(_) | Expr::Bool(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Not(a) => a.collect_vars(out),
            Expr::Or(a, b)
            | Expr::And(a, b)
            | Expr::Eq(a, b)
            | Expr::Lt(a, b)
            | Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Expr::Int(_) | Expr::Bool(_) => false,
            Expr::Var(v) => v == name,
            Expr::Not(a) => a.mentions(name),
            Expr::Or(a, b)
            | Expr::And(a, b)
            | Expr::Eq(a, b)
            | Expr::Lt(a, b)
            | Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b) => a.mentions(name) || b.mentions(name),
        }
    }

    /// `self[x/e]`.
    pub fn subst(&self, x: &str, e: &Expr) -> Expr {
        let go = |a: &Expr| Box::new(a.subst(x, e));
        match self {
            Expr::Int(_) | Expr::Bool(_) => self.clone(),
            Expr::Var(v) if v == x => e.clone(),
            Expr::Var(_) => self.clone(),
            Expr::Not(a) => Expr::Not(go(a)),
            Expr::Or(a, b) => Expr::Or(go(a), go(b)),
            Expr::And(a, b) => Expr::And(go(a), go(b)),
            Expr::Eq(a, b) => Expr::Eq(go(a), go(b)),
            Expr::Lt(a, b) => Expr::Lt(go(a), go(b)),
            Expr::Add(a, b) => Expr::Add(go(a), go(b)),
            Expr::Sub(a, b) => Expr::Sub(go(a), go(b)),
            Expr::Mul(a, b) => Expr::Mul(go(a), go(b)),
        }
    }

    /// Integer literals occurring in the expression.
    pub(crate) fn for_each_int_literal(&self, f: &mut impl FnMut(i64)) {
        match self {
            Expr::Int(n) => f(*n),
            Expr::Bool(_) | Expr::Var(_) => {}
            Expr::Not(a) => a.for_each_int_literal(f),
            Expr::Or(a, b)
            | Expr::And(a, b)
            | Expr::Eq(a, b)
            | Expr::Lt(a, b)
            | Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b) => {
                a.for_each_int_literal(f);
                b.for_each_int_literal(f);
            }
        }
    }
}

impl Command {
    pub fn assign(x: impl Into<String>, e: Expr) -> Self {
        Command::Assign(x.into(), e)
    }

    pub fn seq(a: Command, b: Command) -> Self {
        Command::Seq(Box::new(a), Box::new(b))
    }

    pub fn ite(cond: Expr, then: Command, els: Command) -> Self {
        Command::If(cond, Box::new(then), Box::new(els))
    }

    /// Every variable read or written.
    pub fn vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Command::Skip => {}
            Command::Assign(x, e) => {
                out.insert(x.clone());
                e.collect_vars(out);
            }
            Command::Seq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Command::If(c, a, b) => {
                c.collect_vars(out);
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Variables assigned anywhere in the command.
    pub fn modified(&self) -> VarSet {
        match self {
            Command::Skip => VarSet::new(),
            Command::Assign(x, _) => VarSet::from([x.clone()]),
            Command::Seq(a, b) | Command::If(_, a, b) => {
                let mut m = a.modified();
                m.extend(b.modified());
                m
            }
        }
    }

    /// Height of the syntax tree; primitive commands have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Command::Skip | Command::Assign(..) => 1,
            Command::Seq(a, b) | Command::If(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl Assertion {
    pub fn tt() -> Self {
        Assertion::Atom(Expr::Bool(true))
    }

    pub fn ff() -> Self {
        Assertion::Atom(Expr::Bool(false))
    }

    /// Wraps a boolean expression, lifting top-level `!`, `&&` and `||` to
    /// the assertion level so that each formula has one representation.
    pub fn atom(e: Expr) -> Self {
        match e {
            Expr::Not(a) => Assertion::not(Assertion::atom(*a)),
            Expr::And(a, b) => Assertion::and(Assertion::atom(*a), Assertion::atom(*b)),
            Expr::Or(a, b) => Assertion::or(Assertion::atom(*a), Assertion::atom(*b)),
            e => Assertion::Atom(e),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Assertion) -> Self {
        Assertion::Not(Box::new(a))
    }

    pub fn and(a: Assertion, b: Assertion) -> Self {
        Assertion::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Assertion, b: Assertion) -> Self {
        Assertion::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<String>, sort: Sort, body: Assertion) -> Self {
        Assertion::Exists(v.into(), sort, Box::new(body))
    }

    /// Right-nested conjunction; empty input gives `true`.
    pub fn conj(parts: impl IntoIterator<Item = Assertion>) -> Self {
        let mut parts: alloc::vec::Vec<_> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Assertion::tt();
        };
        while let Some(p) = parts.pop() {
            acc = Assertion::and(p, acc);
        }
        acc
    }

    pub fn free_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_free(&mut alloc::vec::Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut alloc::vec::Vec<&'a str>, out: &mut VarSet) {
        match self {
            Assertion::Atom(e) => {
                let mut vs = VarSet::new();
                e.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(&v.as_str())));
            }
            Assertion::Not(a) => a.collect_free(bound, out),
            Assertion::And(a, b) | Assertion::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Assertion::Exists(v, _, body) => {
                bound.push(v);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Free and bound names.
    pub fn all_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut VarSet) {
        match self {
            Assertion::Atom(e) => e.collect_vars(out),
            Assertion::Not(a) => a.collect_all(out),
            Assertion::And(a, b) | Assertion::Or(a, b) => {
                a.collect_all(out);
                b.collect_all(out);
            }
            Assertion::Exists(v, _, body) => {
                out.insert(v.clone());
                body.collect_all(out);
            }
        }
    }

    pub fn is_free(&self, x: &str) -> bool {
        match self {
            Assertion::Atom(e) => e.mentions(x),
            Assertion::Not(a) => a.is_free(x),
            Assertion::And(a, b) | Assertion::Or(a, b) => a.is_free(x) || b.is_free(x),
            Assertion::Exists(v, _, body) => v != x && body.is_free(x),
        }
    }

    pub fn quantifier_free(&self) -> bool {
        match self {
            Assertion::Atom(_) => true,
            Assertion::Not(a) => a.quantifier_free(),
            Assertion::And(a, b) | Assertion::Or(a, b) => {
                a.quantifier_free() && b.quantifier_free()
            }
            Assertion::Exists(..) => false,
        }
    }

    /// Number of nodes, atoms counted once.
    pub fn size(&self) -> usize {
        match self {
            Assertion::Atom(_) => 1,
            Assertion::Not(a) | Assertion::Exists(_, _, a) => 1 + a.size(),
            Assertion::And(a, b) | Assertion::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Capture-avoiding `self[x/e]`, without type checking.
    pub fn subst(&self, x: &str, e: &Expr) -> Assertion {
        match self {
            Assertion::Atom(a) => Assertion::atom(a.subst(x, e)),
            Assertion::Not(a) => Assertion::not(a.subst(x, e)),
            Assertion::And(a, b) => Assertion::and(a.subst(x, e), b.subst(x, e)),
            Assertion::Or(a, b) => Assertion::or(a.subst(x, e), b.subst(x, e)),
            Assertion::Exists(v, s, body) => {
                if v == x || !body.is_free(x) {
                    return self.clone();
                }
                if e.mentions(v) {
                    let mut avoid = e.vars();
                    avoid.extend(body.all_vars());
                    avoid.insert(String::from(x));
                    let fresh = fresh_variant(v, &avoid);
                    let renamed = body.subst(v, &Expr::Var(fresh.clone()));
                    Assertion::exists(fresh, *s, renamed.subst(x, e))
                } else {
                    Assertion::exists(v.clone(), *s, body.subst(x, e))
                }
            }
        }
    }

    pub(crate) fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        match self {
            Assertion::Atom(e) => f(e),
            Assertion::Not(a) | Assertion::Exists(_, _, a) => a.for_each_atom(f),
            Assertion::And(a, b) | Assertion::Or(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
        }
    }
}

/// `name_1`, `name_2`, ... : the first variant absent from `avoid`.
fn fresh_variant(name: &str, avoid: &VarSet) -> String {
    (1..)
        .map(|i| format!("{name}_{i}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded search")
}

/// `P[x/E]`, rejecting an `E` whose sort differs from `x`'s.
pub fn substitute(p: &Assertion, x: &str, e: &Expr) -> Result<Assertion, TypeError> {
    typeck::typecheck(&Command::Assign(String::from(x), e.clone()), &[p])?;
    Ok(p.subst(x, e))
}

pub fn free_vars(p: &Assertion) -> VarSet {
    p.free_vars()
}

pub fn cmd_vars(c: &Command) -> VarSet {
    c.vars()
}

pub fn modified_vars(c: &Command) -> VarSet {
    c.modified()
}
