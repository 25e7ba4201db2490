//! Decision procedures for program-logic triples over a small loop-free
//! imperative language.
//!
//! Validity of Hoare (over-approximate), incorrectness (under-approximate),
//! exact, gradual exact and gradually verified triples is decided through
//! strongest-postcondition and weakest-precondition characterizations. Every
//! entailment is discharged by exhaustive enumeration of a bounded integer
//! universe; [`oracle`] provides an independent execution-based ground truth
//! for the same universe.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ast;
mod compile;
pub mod entail;
pub mod interval;
pub mod oracle;
pub mod parse;
mod print;
pub mod semantics;
pub mod smtlib;
pub mod transformers;
pub mod triples;
pub mod typeck;

pub use ast::{Assertion, Command, Expr, Sort, VarSet};
pub use entail::{equivalent, implies, is_satisfiable, Decision, EntailError, Query, QueryKind};
pub use parse::{parse_assertion, parse_command, parse_expr, parse_gradual, ParseError};
pub use semantics::{eval_expr, exec, holds, states, DomainConfig, EvalError, State, Value};
pub use transformers::{sp, wp};
pub use triples::{Checker, GradualFormula, Logic, Verdict};
pub use typeck::{typecheck, TypeEnv, TypeError};
