//! Pretty printing in the concrete syntax accepted by [`crate::parse`].

use core::fmt::{self, Display, Formatter};

use crate::ast::{Assertion, Command, Expr, Sort};
use crate::triples::GradualFormula;

const OR: u8 = 1;
const AND: u8 = 2;
const CMP: u8 = 3;
const ADD: u8 = 4;
const MUL: u8 = 5;
const UNARY: u8 = 6;
const ATOM: u8 = 7;

fn expr_prec(e: &Expr) -> u8 {
    match e {
        Expr::Or(..) => OR,
        Expr::And(..) => AND,
        Expr::Eq(..) | Expr::Lt(..) => CMP,
        Expr::Add(..) | Expr::Sub(..) => ADD,
        Expr::Mul(..) => MUL,
        Expr::Not(..) => UNARY,
        Expr::Int(..) | Expr::Bool(..) | Expr::Var(..) => ATOM,
    }
}

/// Operand of a binary operator. `!` operands are always parenthesised
/// because at assertion level a leading `!` scopes over the whole atom.
fn operand(f: &mut Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if expr_prec(e) < min || matches!(e, Expr::Not(_)) {
        write!(f, "(")?;
        expr(f, e)?;
        write!(f, ")")
    } else {
        expr(f, e)
    }
}

fn expr(f: &mut Formatter<'_>, e: &Expr) -> fmt::Result {
    let bin = |f: &mut Formatter<'_>, a: &Expr, op: &str, b: &Expr, l: u8, r: u8| {
        operand(f, a, l)?;
        write!(f, " {op} ")?;
        operand(f, b, r)
    };
    match e {
        Expr::Int(n) => write!(f, "{n}"),
        Expr::Bool(b) => write!(f, "{b}"),
        Expr::Var(v) => write!(f, "{v}"),
        Expr::Or(a, b) => bin(f, a, "||", b, OR, AND),
        Expr::And(a, b) => bin(f, a, "&&", b, AND, CMP),
        Expr::Eq(a, b) => bin(f, a, "==", b, ADD, ADD),
        Expr::Lt(a, b) => bin(f, a, "<", b, ADD, ADD),
        Expr::Add(a, b) => bin(f, a, "+", b, ADD, MUL),
        Expr::Sub(a, b) => bin(f, a, "-", b, ADD, MUL),
        Expr::Mul(a, b) => bin(f, a, "*", b, MUL, UNARY),
        Expr::Not(a) => {
            write!(f, "!")?;
            if expr_prec(a) < UNARY {
                write!(f, "(")?;
                expr(f, a)?;
                write!(f, ")")
            } else {
                expr(f, a)
            }
        }
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        expr(f, self)
    }
}

const A_EXISTS: u8 = 0;
const A_OR: u8 = 1;
const A_AND: u8 = 2;
const A_NOT: u8 = 3;
const A_ATOM: u8 = 4;

fn asrt_prec(p: &Assertion) -> u8 {
    match p {
        Assertion::Exists(..) => A_EXISTS,
        Assertion::Or(..) => A_OR,
        Assertion::And(..) => A_AND,
        Assertion::Not(..) => A_NOT,
        Assertion::Atom(..) => A_ATOM,
    }
}

fn asrt_operand(f: &mut Formatter<'_>, p: &Assertion, min: u8) -> fmt::Result {
    if asrt_prec(p) < min {
        write!(f, "(")?;
        asrt(f, p)?;
        write!(f, ")")
    } else {
        asrt(f, p)
    }
}

fn asrt(f: &mut Formatter<'_>, p: &Assertion) -> fmt::Result {
    match p {
        Assertion::Atom(e @ (Expr::Or(..) | Expr::And(..) | Expr::Not(..))) => {
            write!(f, "(")?;
            expr(f, e)?;
            write!(f, ")")
        }
        Assertion::Atom(e) => expr(f, e),
        Assertion::Not(a) => {
            write!(f, "!")?;
            match &**a {
                Assertion::Atom(Expr::Var(_) | Expr::Bool(_) | Expr::Int(_)) => asrt(f, a),
                Assertion::Not(_) => asrt(f, a),
                _ => {
                    write!(f, "(")?;
                    asrt(f, a)?;
                    write!(f, ")")
                }
            }
        }
        Assertion::And(a, b) => {
            asrt_operand(f, a, A_AND)?;
            write!(f, " && ")?;
            asrt_operand(f, b, A_NOT)
        }
        Assertion::Or(a, b) => {
            asrt_operand(f, a, A_OR)?;
            write!(f, " || ")?;
            asrt_operand(f, b, A_AND)
        }
        Assertion::Exists(v, sort, body) => {
            match sort {
                Sort::Int => write!(f, "exists {v}. ")?,
                Sort::Bool => write!(f, "exists {v}: bool. ")?,
            }
            asrt(f, body)
        }
    }
}

impl Display for Assertion {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        asrt(f, self)
    }
}

fn cmd(f: &mut Formatter<'_>, c: &Command) -> fmt::Result {
    match c {
        Command::Skip => write!(f, "skip"),
        Command::Assign(x, e) => write!(f, "{x} := {e}"),
        Command::Seq(a, b) => {
            cmd(f, a)?;
            write!(f, " ; ")?;
            if matches!(**b, Command::Seq(..)) {
                write!(f, "{{ ")?;
                cmd(f, b)?;
                write!(f, " }}")
            } else {
                cmd(f, b)
            }
        }
        Command::If(c, t, e) => {
            write!(f, "if {c} then {{ ")?;
            cmd(f, t)?;
            write!(f, " }} else {{ ")?;
            cmd(f, e)?;
            write!(f, " }}")
        }
    }
}

impl Display for Command {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        cmd(f, self)
    }
}

impl Display for Sort {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Int => "int",
            Sort::Bool => "bool",
        })
    }
}

impl Display for GradualFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            GradualFormula::Precise(p) => write!(f, "{p}"),
            GradualFormula::Imprecise(p) => {
                write!(f, "? && ")?;
                asrt_operand(f, p, A_NOT)
            }
        }
    }
}
