//! SMT-LIB 2.6 export of entailment queries.
//!
//! Quantifiers are emitted unbounded, so a solver answers the query over
//! all integers rather than the bounded universe. For implication and
//! equivalence the obligation is asserted negated (`unsat` means it
//! holds); a satisfiability query asserts the formula itself.

use alloc::format;
use alloc::string::String;
use core::fmt::Write;

use crate::ast::{Assertion, Expr, Sort};
use crate::entail::{Query, QueryKind};

fn sort_name(s: Sort) -> &'static str {
    match s {
        Sort::Int => "Int",
        Sort::Bool => "Bool",
    }
}

pub fn expr_term(e: &Expr) -> String {
    let bin = |op: &str, a: &Expr, b: &Expr| format!("({op} {} {})", expr_term(a), expr_term(b));
    match e {
        Expr::Int(n) if *n < 0 => format!("(- {})", n.unsigned_abs()),
        Expr::Int(n) => format!("{n}"),
        Expr::Bool(b) => format!("{b}"),
        Expr::Var(v) => v.clone(),
        Expr::Or(a, b) => bin("or", a, b),
        Expr::And(a, b) => bin("and", a, b),
        Expr::Eq(a, b) => bin("=", a, b),
        Expr::Lt(a, b) => bin("<", a, b),
        Expr::Not(a) => format!("(not {})", expr_term(a)),
        Expr::Add(a, b) => bin("+", a, b),
        Expr::Sub(a, b) => bin("-", a, b),
        Expr::Mul(a, b) => bin("*", a, b),
    }
}

pub fn assertion_term(p: &Assertion) -> String {
    match p {
        Assertion::Atom(e) => expr_term(e),
        Assertion::Not(a) => format!("(not {})", assertion_term(a)),
        Assertion::And(a, b) => format!("(and {} {})", assertion_term(a), assertion_term(b)),
        Assertion::Or(a, b) => format!("(or {} {})", assertion_term(a), assertion_term(b)),
        Assertion::Exists(v, s, body) => {
            format!(
                "(exists (({v} {})) {})",
                sort_name(*s),
                assertion_term(body)
            )
        }
    }
}

/// The script for `q`: logic, one declaration per variable of `q.env`,
/// the assertion, `(check-sat)`.
pub fn to_smtlib(q: &Query) -> String {
    let mut out = String::from("(set-logic ALL)\n");
    for (v, s) in &q.env {
        let _ = writeln!(out, "(declare-const {v} {})", sort_name(*s));
    }
    let left = assertion_term(&q.left);
    let right = q.right.as_ref().map(assertion_term);
    let body = match (q.kind, right) {
        (QueryKind::Sat, _) => left,
        (QueryKind::Implies, Some(r)) => format!("(and {left} (not {r}))"),
        (QueryKind::Equiv, Some(r)) => format!("(not (= {left} {r}))"),
        (_, None) => left,
    };
    let _ = writeln!(out, "(assert {body})");
    out.push_str("(check-sat)\n");
    out
}
