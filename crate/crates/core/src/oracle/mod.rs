//! Ground-truth triple validity by running the command on every state.
//!
//! Pre-states are the states of `env` with integers in
//! `[-free_radius, free_radius]`; post-states for the under-approximate
//! reading range over `[-quant_radius, quant_radius]`. Evaluation uses the
//! tree-walking interpreter of [`crate::semantics`], not the compiled
//! evaluator behind [`crate::entail`], so the two paths stay independent.

pub mod gen;
pub mod properties;
pub mod rules;
pub mod shrink;

use alloc::collections::BTreeSet;

use crate::ast::{Assertion, Command};
use crate::semantics::{exec, holds, states, DomainConfig, EvalError, State};
use crate::typeck::TypeEnv;

fn pre_states<'a>(
    p: &'a Assertion,
    env: &TypeEnv,
    d: &'a DomainConfig,
) -> impl Iterator<Item = Result<State, EvalError>> + 'a {
    states(env, d.free_radius()).filter_map(move |s| match holds(p, &s, d) {
        Ok(true) => Some(Ok(s)),
        Ok(false) => None,
        Err(e) => Some(Err(e)),
    })
}

/// Every run from a `P`-state ends in a `Q`-state.
pub fn ox_valid(
    p: &Assertion,
    c: &Command,
    q: &Assertion,
    env: &TypeEnv,
    d: &DomainConfig,
) -> Result<bool, EvalError> {
    for s in pre_states(p, env, d) {
        if !holds(q, &exec(c, &s?)?, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every `Q`-state is the result of a run from some `P`-state.
pub fn ux_valid(
    p: &Assertion,
    c: &Command,
    q: &Assertion,
    env: &TypeEnv,
    d: &DomainConfig,
) -> Result<bool, EvalError> {
    let mut image = BTreeSet::new();
    for s in pre_states(p, env, d) {
        image.insert(exec(c, &s?)?);
    }
    for t in states(env, d.quant_radius()) {
        if holds(q, &t, d)? && !image.contains(&t) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Some run from a `P`-state ends in a `Q`-state.
pub fn reach_valid(
    p: &Assertion,
    c: &Command,
    q: &Assertion,
    env: &TypeEnv,
    d: &DomainConfig,
) -> Result<bool, EvalError> {
    for s in pre_states(p, env, d) {
        if holds(q, &exec(c, &s?)?, d)? {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn exact_valid(
    p: &Assertion,
    c: &Command,
    q: &Assertion,
    env: &TypeEnv,
    d: &DomainConfig,
) -> Result<bool, EvalError> {
    Ok(ox_valid(p, c, q, env, d)? && ux_valid(p, c, q, env, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Sort;
    use crate::parse::{parse_assertion, parse_command};

    fn a(s: &str) -> Assertion {
        parse_assertion(s).unwrap()
    }

    fn c(s: &str) -> Command {
        parse_command(s).unwrap()
    }

    fn env() -> TypeEnv {
        TypeEnv::from([("x".into(), Sort::Int)])
    }

    fn d() -> DomainConfig {
        DomainConfig::new(3, 4).unwrap()
    }

    #[test]
    fn over_approximate() {
        let inc = c("x := x + 1");
        assert!(ox_valid(&Assertion::ff(), &inc, &a("x == 9"), &env(), &d()).unwrap());
        assert!(!ox_valid(&Assertion::tt(), &inc, &a("x > 0"), &env(), &d()).unwrap());
        assert!(ox_valid(&a("x >= 0"), &inc, &a("x > 0"), &env(), &d()).unwrap());
    }

    #[test]
    fn under_approximate() {
        let inc = c("x := x + 1");
        assert!(ux_valid(&a("x == 1"), &inc, &Assertion::ff(), &env(), &d()).unwrap());
        assert!(ux_valid(&Assertion::tt(), &inc, &a("x == 2"), &env(), &d()).unwrap());
        assert!(!ux_valid(&a("x > 0"), &inc, &a("x == 1"), &env(), &d()).unwrap());
        // Post-states beyond the free radius are still reachable.
        assert!(ux_valid(&Assertion::tt(), &inc, &a("x == 4"), &env(), &d()).unwrap());
    }

    #[test]
    fn reachability() {
        let inc = c("x := x + 1");
        assert!(reach_valid(&Assertion::tt(), &inc, &a("x > 0"), &env(), &d()).unwrap());
        assert!(!reach_valid(&Assertion::ff(), &inc, &Assertion::tt(), &env(), &d()).unwrap());
        assert!(!reach_valid(&a("x < 0"), &inc, &a("x > 5"), &env(), &d()).unwrap());
    }

    #[test]
    fn exact() {
        let inc = c("x := x + 1");
        assert!(exact_valid(&a("x == 1"), &inc, &a("x == 2"), &env(), &d()).unwrap());
        let uniform = DomainConfig::uniform(3);
        assert!(exact_valid(
            &Assertion::tt(),
            &Command::Skip,
            &Assertion::tt(),
            &env(),
            &uniform
        )
        .unwrap());
        assert!(!exact_valid(&Assertion::tt(), &inc, &a("x > 0"), &env(), &d()).unwrap());
    }
}
