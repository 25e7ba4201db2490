//! Greedy syntactic shrinking of failing cases.
//!
//! Commands shrink toward `skip` and their own subcommands; assertions
//! toward `true`, `false` and their subformulas. A candidate is kept when
//! it is strictly smaller and still fails. No minimality is promised.

use alloc::vec;
use alloc::vec::Vec;

use super::gen::Case;
use crate::ast::{Assertion, Command, Expr};

fn expr_weight(e: &Expr) -> usize {
    match e {
        Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) => 1,
        Expr::Not(a) => 1 + expr_weight(a),
        Expr::Or(a, b)
        | Expr::And(a, b)
        | Expr::Eq(a, b)
        | Expr::Lt(a, b)
        | Expr::Add(a, b)
        | Expr::Sub(a, b)
        | Expr::Mul(a, b) => 1 + expr_weight(a) + expr_weight(b),
    }
}

fn cmd_weight(c: &Command) -> usize {
    match c {
        Command::Skip => 1,
        Command::Assign(_, e) => 2 + expr_weight(e),
        Command::Seq(a, b) => 1 + cmd_weight(a) + cmd_weight(b),
        Command::If(e, a, b) => 1 + expr_weight(e) + cmd_weight(a) + cmd_weight(b),
    }
}

fn asrt_weight(p: &Assertion) -> usize {
    match p {
        Assertion::Atom(Expr::Bool(_)) => 1,
        Assertion::Atom(e) => 1 + expr_weight(e),
        Assertion::Not(a) | Assertion::Exists(_, _, a) => 1 + asrt_weight(a),
        Assertion::And(a, b) | Assertion::Or(a, b) => 1 + asrt_weight(a) + asrt_weight(b),
    }
}

/// Size measure that every accepted shrink step strictly decreases.
pub fn weight(case: &Case) -> usize {
    cmd_weight(&case.cmd)
        + asrt_weight(&case.pre)
        + asrt_weight(&case.post)
        + asrt_weight(&case.extra)
}

fn cmd_candidates(c: &Command) -> Vec<Command> {
    let mut out = Vec::new();
    if *c != Command::Skip {
        out.push(Command::Skip);
    }
    match c {
        Command::Skip | Command::Assign(..) => {}
        Command::Seq(a, b) => {
            out.push((**a).clone());
            out.push((**b).clone());
            out.extend(
                cmd_candidates(a)
                    .into_iter()
                    .map(|a2| Command::seq(a2, (**b).clone())),
            );
            out.extend(
                cmd_candidates(b)
                    .into_iter()
                    .map(|b2| Command::seq((**a).clone(), b2)),
            );
        }
        Command::If(e, a, b) => {
            out.push((**a).clone());
            out.push((**b).clone());
            out.extend(
                cmd_candidates(a)
                    .into_iter()
                    .map(|a2| Command::ite(e.clone(), a2, (**b).clone())),
            );
            out.extend(
                cmd_candidates(b)
                    .into_iter()
                    .map(|b2| Command::ite(e.clone(), (**a).clone(), b2)),
            );
        }
    }
    out
}

fn asrt_candidates(p: &Assertion) -> Vec<Assertion> {
    let mut out = vec![];
    for lit in [Assertion::tt(), Assertion::ff()] {
        if *p != lit {
            out.push(lit);
        }
    }
    match p {
        Assertion::Atom(_) => {}
        Assertion::Not(a) => {
            out.push((**a).clone());
            out.extend(asrt_candidates(a).into_iter().map(Assertion::not));
        }
        Assertion::And(a, b) | Assertion::Or(a, b) => {
            let rebuild = |x: Assertion, y: Assertion| match p {
                Assertion::And(..) => Assertion::and(x, y),
                _ => Assertion::or(x, y),
            };
            out.push((**a).clone());
            out.push((**b).clone());
            out.extend(
                asrt_candidates(a)
                    .into_iter()
                    .map(|a2| rebuild(a2, (**b).clone())),
            );
            out.extend(
                asrt_candidates(b)
                    .into_iter()
                    .map(|b2| rebuild((**a).clone(), b2)),
            );
        }
        Assertion::Exists(v, s, body) => {
            out.extend(
                asrt_candidates(body)
                    .into_iter()
                    .map(|b2| Assertion::exists(v.clone(), *s, b2)),
            );
        }
    }
    out
}

fn candidates(case: &Case) -> Vec<(Command, Assertion, Assertion, Assertion)> {
    let Case {
        cmd,
        pre,
        post,
        extra,
        ..
    } = case;
    let mut out = Vec::new();
    out.extend(
        cmd_candidates(cmd)
            .into_iter()
            .map(|c| (c, pre.clone(), post.clone(), extra.clone())),
    );
    out.extend(
        asrt_candidates(pre)
            .into_iter()
            .map(|p| (cmd.clone(), p, post.clone(), extra.clone())),
    );
    out.extend(
        asrt_candidates(post)
            .into_iter()
            .map(|q| (cmd.clone(), pre.clone(), q, extra.clone())),
    );
    out.extend(
        asrt_candidates(extra)
            .into_iter()
            .map(|r| (cmd.clone(), pre.clone(), post.clone(), r)),
    );
    out
}

/// Repeatedly takes the first smaller candidate on which `fails` still
/// holds. The radius bound of the original case is kept.
pub fn shrink(case: &Case, mut fails: impl FnMut(&Case) -> bool) -> Case {
    let mut best = case.clone();
    let max_q = case.domain.quant_radius();
    'outer: loop {
        let w = weight(&best);
        for (c, p, q, r) in candidates(&best) {
            let Ok(next) = Case::new(c, p, q, r, best.domain.free_radius()) else {
                continue;
            };
            if next.domain.quant_radius() <= max_q && weight(&next) < w && fails(&next) {
                best = next;
                continue 'outer;
            }
        }
        return best;
    }
}
