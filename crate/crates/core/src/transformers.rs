//! Weakest preconditions and strongest postconditions.
//!
//! Both follow the structural equations literally; the output is never
//! simplified.

use alloc::format;
use alloc::string::String;

use crate::ast::{Assertion, Command, Expr, Sort, VarSet};
use crate::typeck::{typecheck, TypeEnv, TypeError};

/// Supplies `v0`, `v1`, ... skipping anything in `avoid`.
#[derive(Debug, Clone)]
pub struct FreshNameSource {
    avoid: VarSet,
    counter: usize,
}

impl FreshNameSource {
    pub fn new(avoid: VarSet) -> Self {
        FreshNameSource { avoid, counter: 0 }
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let name = format!("v{}", self.counter);
            self.counter += 1;
            if self.avoid.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// `wp(C, Q)`.
pub fn wp(c: &Command, q: &Assertion) -> Assertion {
    match c {
        Command::Skip => q.clone(),
        Command::Assign(x, e) => q.subst(x, e),
        Command::Seq(c1, c2) => wp(c1, &wp(c2, q)),
        Command::If(e, c1, c2) => {
            let cond = Assertion::atom(e.clone());
            Assertion::or(
                Assertion::and(wp(c1, q), cond.clone()),
                Assertion::and(wp(c2, q), Assertion::not(cond)),
            )
        }
    }
}

/// `sp(P, C)`, inferring sorts from `P` and `C`.
pub fn sp(p: &Assertion, c: &Command) -> Result<Assertion, TypeError> {
    let env = typecheck(c, &[p])?;
    Ok(sp_in(p, c, &env))
}

/// `sp(P, C)` with assignment targets sorted by `env` (missing ones are
/// taken as `Int`). Fresh names avoid every name in `P` and `C`.
pub fn sp_in(p: &Assertion, c: &Command, env: &TypeEnv) -> Assertion {
    let mut avoid = p.all_vars();
    avoid.extend(c.vars());
    let mut names = FreshNameSource::new(avoid);
    sp_with(p, c, env, &mut names)
}

fn sp_with(p: &Assertion, c: &Command, env: &TypeEnv, names: &mut FreshNameSource) -> Assertion {
    match c {
        Command::Skip => p.clone(),
        Command::Assign(x, e) => {
            let v = names.fresh();
            let old = Expr::Var(v.clone());
            let eq = Assertion::atom(Expr::eq(Expr::Var(x.clone()), e.subst(x, &old)));
            let sort = env.get(x).copied().unwrap_or(Sort::Int);
            Assertion::exists(v, sort, Assertion::and(eq, p.subst(x, &old)))
        }
        Command::Seq(c1, c2) => {
            let mid = sp_with(p, c1, env, names);
            sp_with(&mid, c2, env, names)
        }
        Command::If(e, c1, c2) => {
            let cond = Assertion::atom(e.clone());
            let then = sp_with(&Assertion::and(p.clone(), cond.clone()), c1, env, names);
            let els = sp_with(
                &Assertion::and(p.clone(), Assertion::not(cond)),
                c2,
                env,
                names,
            );
            Assertion::or(then, els)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entail::equivalent;
    use crate::parse::{parse_assertion, parse_command};
    use crate::semantics::DomainConfig;
    use alloc::string::ToString;

    fn a(s: &str) -> Assertion {
        parse_assertion(s).unwrap()
    }

    fn c(s: &str) -> Command {
        parse_command(s).unwrap()
    }

    #[test]
    fn wp_examples() {
        assert_eq!(wp(&Command::Skip, &a("x > 0")), a("x > 0"));
        assert_eq!(wp(&c("x := x + 1"), &a("x > 0")), a("x + 1 > 0"));
        assert_eq!(
            wp(&c("if x < 0 then { x := 0 } else { skip }"), &a("x >= 0")),
            a("(0 >= 0 && x < 0) || (x >= 0 && !(x < 0))")
        );
    }

    #[test]
    fn sp_examples() {
        assert_eq!(sp(&a("x > 0"), &Command::Skip).unwrap(), a("x > 0"));
        let inc = c("x := x + 1");
        let post = sp(&Assertion::tt(), &inc).unwrap();
        assert_eq!(post, a("exists v0. x == v0 + 1 && true"));
        assert_eq!(post.to_string(), "exists v0. x == v0 + 1 && true");

        let p = sp(&a("x == 1"), &inc).unwrap();
        let env = TypeEnv::from([("x".into(), Sort::Int)]);
        let d = DomainConfig::new(3, 4).unwrap();
        assert!(equivalent(&p, &a("x == 2"), &env, d).unwrap().result);
    }

    #[test]
    fn fresh_names_avoid_program_and_formula() {
        let p = sp(&a("v0 == 1"), &c("x := v1")).unwrap();
        assert_eq!(p, a("exists v2. x == v1 && v0 == 1"));
        let q = sp(&Assertion::tt(), &c("x := 1 ; y := x")).unwrap();
        assert_eq!(q, a("exists v1. y == x && (exists v0. x == 1 && true)"));
    }

    #[test]
    fn sp_on_bool_targets_quantifies_bools() {
        let p = sp(&a("b"), &c("b := !b")).unwrap();
        assert_eq!(p, a("exists v0: bool. b == !v0 && v0"));
    }
}
