//! Interval analysis fixing the quantifier radius.
//!
//! Starting with every integer variable in `[-f, f]`, the command is run
//! over intervals. The resulting radius bounds every value any program
//! point or program subexpression can take, so the pre-state of any
//! reachable post-state (the witness an assignment's strongest
//! postcondition quantifies over) lies inside the quantifier range.

use alloc::collections::BTreeMap;
use alloc::string::String;

use crate::ast::{Assertion, Command, Expr, Sort};
use crate::typeck::TypeEnv;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Interval {
    lo: i128,
    hi: i128,
}

const LIMIT: i128 = i64::MAX as i128;

impl Interval {
    fn new(lo: i128, hi: i128) -> Self {
        Interval {
            lo: lo.clamp(-LIMIT, LIMIT),
            hi: hi.clamp(-LIMIT, LIMIT),
        }
    }

    fn point(n: i64) -> Self {
        Interval::new(n.into(), n.into())
    }

    fn join(self, o: Interval) -> Self {
        Interval::new(self.lo.min(o.lo), self.hi.max(o.hi))
    }

    fn magnitude(self) -> u128 {
        self.lo.unsigned_abs().max(self.hi.unsigned_abs())
    }
}

type Store = BTreeMap<String, Interval>;

struct Analysis {
    max: u128,
}

impl Analysis {
    fn note(&mut self, i: Interval) -> Interval {
        self.max = self.max.max(i.magnitude());
        i
    }

    /// Interval of an integer expression; `None` for booleans. Every
    /// integer subexpression is recorded.
    fn expr(&mut self, e: &Expr, store: &Store) -> Option<Interval> {
        let mut pair = |a: &Expr, b: &Expr| -> Option<(Interval, Interval)> {
            let x = self.expr(a, store);
            let y = self.expr(b, store);
            Some((x?, y?))
        };
        let i = match e {
            Expr::Int(n) => Interval::point(*n),
            Expr::Var(v) => *store.get(v)?,
            Expr::Bool(_) => return None,
            Expr::Not(a) => {
                self.expr(a, store);
                return None;
            }
            Expr::Or(a, b) | Expr::And(a, b) | Expr::Eq(a, b) | Expr::Lt(a, b) => {
                pair(a, b);
                return None;
            }
            Expr::Add(a, b) => {
                let (x, y) = pair(a, b)?;
                Interval::new(x.lo + y.lo, x.hi + y.hi)
            }
            Expr::Sub(a, b) => {
                let (x, y) = pair(a, b)?;
                Interval::new(x.lo - y.hi, x.hi - y.lo)
            }
            Expr::Mul(a, b) => {
                let (x, y) = pair(a, b)?;
                let ps = [x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi];
                Interval::new(*ps.iter().min()?, *ps.iter().max()?)
            }
        };
        Some(self.note(i))
    }

    fn command(&mut self, c: &Command, store: &mut Store) {
        match c {
            Command::Skip => {}
            Command::Assign(x, e) => {
                if let Some(i) = self.expr(e, store) {
                    store.insert(x.clone(), i);
                }
            }
            Command::Seq(a, b) => {
                self.command(a, store);
                self.command(b, store);
            }
            Command::If(cond, a, b) => {
                self.expr(cond, store);
                let mut other = store.clone();
                self.command(a, store);
                self.command(b, &mut other);
                for (v, i) in other {
                    let joined = match store.get(&v) {
                        Some(j) => j.join(i),
                        None => i,
                    };
                    store.insert(v, joined);
                }
            }
        }
    }
}

fn saturate(n: u128) -> u32 {
    u32::try_from(n).unwrap_or(u32::MAX)
}

/// Largest magnitude reached by any variable or subexpression of `c`
/// when each integer variable of `env` starts in `[-free_radius, free_radius]`.
/// Never below `free_radius`.
pub fn closure(env: &TypeEnv, free_radius: u32, c: &Command) -> u32 {
    let f = i128::from(free_radius);
    let mut store: Store = env
        .iter()
        .filter(|(_, s)| **s == Sort::Int)
        .map(|(v, _)| (v.clone(), Interval::new(-f, f)))
        .collect();
    let mut a = Analysis {
        max: free_radius.into(),
    };
    a.command(c, &mut store);
    saturate(a.max)
}

/// The quantifier radius for checking triples over `c` with free radius
/// `free_radius`: [`closure`] widened by the magnitude of every integer
/// literal in `asserts`.
pub fn quant_radius(env: &TypeEnv, free_radius: u32, c: &Command, asserts: &[&Assertion]) -> u32 {
    let mut q = closure(env, free_radius, c);
    for p in asserts {
        p.for_each_atom(&mut |e| {
            e.for_each_int_literal(&mut |n| q = q.max(saturate(n.unsigned_abs().into())));
        });
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_assertion, parse_command};
    use crate::typeck::typecheck;

    fn q_of(c: &str, ps: &[&str], f: u32) -> u32 {
        let c = parse_command(c).unwrap();
        let ps: alloc::vec::Vec<_> = ps.iter().map(|p| parse_assertion(p).unwrap()).collect();
        let refs: alloc::vec::Vec<_> = ps.iter().collect();
        let env = typecheck(&c, &refs).unwrap();
        quant_radius(&env, f, &c, &refs)
    }

    #[test]
    fn increments_widen_by_one() {
        assert_eq!(q_of("x := x + 1", &["x > 0"], 3), 4);
        assert_eq!(q_of("x := x + 1 ; x := x + 1", &[], 2), 4);
    }

    #[test]
    fn products_and_branches() {
        assert_eq!(q_of("x := x * y", &[], 2), 4);
        assert_eq!(q_of("if b then { x := 5 } else { x := 0 - x }", &[], 2), 5);
        assert_eq!(q_of("y := x - 2", &[], 1), 3);
    }

    #[test]
    fn assertion_literals_count() {
        assert_eq!(q_of("skip", &["x == 7"], 2), 7);
        assert_eq!(q_of("skip", &["x == -1"], 2), 2);
    }

    #[test]
    fn bool_commands_do_not_widen() {
        assert_eq!(q_of("b := !b", &[], 3), 3);
    }
}
