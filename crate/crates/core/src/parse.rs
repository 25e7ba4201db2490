//! Concrete syntax.
//!
//! ```text
//! cmd    ::= atom (';' atom)*
//! atom   ::= 'skip' | ident ':=' expr | '{' cmd '}'
//!          | 'if' expr 'then' '{' cmd '}' 'else' '{' cmd '}'
//! asrt   ::= 'exists' ident [':' ('int' | 'bool')] '.' asrt | or
//! or     ::= and ('||' and)*          and ::= not ('&&' not)*
//! not    ::= '!' not | '(' asrt ')' | expr-comparison
//! expr   ::= C-like precedence: || && (== != < <= > >=) (+ -) * (! unary-minus)
//! grad   ::= '?' ['&&' asrt] | asrt
//! ```
//!
//! `a > b`, `a >= b`, `a <= b` and `a != b` are sugar for `b < a`,
//! `!(a < b)`, `!(b < a)` and `!(a == b)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{Assertion, Command, Expr, Sort};
use crate::triples::GradualFormula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Assign,
    Semi,
    LParen,
    RParen,
    LBrace,
    RBrace,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
    Bang,
    Plus,
    Minus,
    Star,
    Question,
    Dot,
    Colon,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Int(n) => return write!(f, "`{n}`"),
            Tok::Assign => ":=",
            Tok::Semi => ";",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::EqEq => "==",
            Tok::NotEq => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::AndAnd => "&&",
            Tok::OrOr => "||",
            Tok::Bang => "!",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Question => "?",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (start_line, start_col) = (line, col);
        let two = |d: char| chars.get(i + 1) == Some(&d);
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[i..j].iter().collect();
            let n = digits.parse::<i64>().map_err(|_| {
                err(
                    line,
                    col,
                    format!("integer literal `{digits}` out of range"),
                )
            })?;
            (Tok::Int(n), j - i)
        } else {
            match c {
                ':' if two('=') => (Tok::Assign, 2),
                ':' => (Tok::Colon, 1),
                ';' => (Tok::Semi, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                '=' if two('=') => (Tok::EqEq, 2),
                '!' if two('=') => (Tok::NotEq, 2),
                '!' => (Tok::Bang, 1),
                '<' if two('=') => (Tok::Le, 2),
                '<' => (Tok::Lt, 1),
                '>' if two('=') => (Tok::Ge, 2),
                '>' => (Tok::Gt, 1),
                '&' if two('&') => (Tok::AndAnd, 2),
                '|' if two('|') => (Tok::OrOr, 2),
                '+' => (Tok::Plus, 1),
                '-' => (Tok::Minus, 1),
                '*' => (Tok::Star, 1),
                '?' => (Tok::Question, 1),
                '.' => (Tok::Dot, 1),
                _ => return Err(err(line, col, format!("unexpected character `{c}`"))),
            }
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
        i += len;
        col += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

const KEYWORDS: &[&str] = &["skip", "if", "then", "else", "true", "false", "exists"];

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        if *self.peek() == Tok::Question {
            return self.error("`?` may only appear as the leading conjunct `? && P`");
        }
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&t.to_string()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("a variable name")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    // ---- commands ----

    fn command(&mut self) -> Result<Command, ParseError> {
        let mut c = self.command_atom()?;
        while *self.peek() == Tok::Semi {
            self.bump();
            let rhs = self.command_atom()?;
            c = Command::seq(c, rhs);
        }
        Ok(c)
    }

    fn block(&mut self) -> Result<Command, ParseError> {
        self.expect(Tok::LBrace)?;
        let c = self.command()?;
        self.expect(Tok::RBrace)?;
        Ok(c)
    }

    fn command_atom(&mut self) -> Result<Command, ParseError> {
        if self.is_keyword("skip") {
            self.bump();
            return Ok(Command::Skip);
        }
        if self.is_keyword("if") {
            self.bump();
            let cond = self.expr()?;
            self.expect_keyword("then")?;
            let then = self.block()?;
            self.expect_keyword("else")?;
            let els = self.block()?;
            return Ok(Command::ite(cond, then, els));
        }
        if *self.peek() == Tok::LBrace {
            return self.block();
        }
        let x = self.ident().map_err(|_| self.unexpected("a command"))?;
        self.expect(Tok::Assign)?;
        let e = self.expr()?;
        Ok(Command::Assign(x, e))
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.expr_and()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            e = Expr::or(e, self.expr_and()?);
        }
        Ok(e)
    }

    fn expr_and(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.expr_cmp()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            e = Expr::and(e, self.expr_cmp()?);
        }
        Ok(e)
    }

    fn expr_cmp(&mut self) -> Result<Expr, ParseError> {
        let a = self.expr_add()?;
        let op = self.peek().clone();
        let build: fn(Expr, Expr) -> Expr = match op {
            Tok::EqEq => Expr::eq,
            Tok::NotEq => |a, b| Expr::not(Expr::eq(a, b)),
            Tok::Lt => Expr::lt,
            Tok::Gt => |a, b| Expr::lt(b, a),
            Tok::Le => |a, b| Expr::not(Expr::lt(b, a)),
            Tok::Ge => |a, b| Expr::not(Expr::lt(a, b)),
            _ => return Ok(a),
        };
        self.bump();
        let b = self.expr_add()?;
        if matches!(
            self.peek(),
            Tok::EqEq | Tok::NotEq | Tok::Lt | Tok::Gt | Tok::Le | Tok::Ge
        ) {
            return Err(self.error("comparisons do not chain; add parentheses"));
        }
        Ok(build(a, b))
    }

    fn expr_add(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.expr_mul()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    e = Expr::add(e, self.expr_mul()?);
                }
                Tok::Minus => {
                    self.bump();
                    e = Expr::sub(e, self.expr_mul()?);
                }
                _ => return Ok(e),
            }
        }
    }

    fn expr_mul(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.expr_unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            e = Expr::mul(e, self.expr_unary()?);
        }
        Ok(e)
    }

    fn expr_unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Expr::not(self.expr_unary()?))
            }
            Tok::Minus => {
                self.bump();
                if let Tok::Int(n) = *self.peek() {
                    self.bump();
                    Ok(Expr::Int(-n))
                } else {
                    Ok(Expr::sub(Expr::Int(0), self.expr_unary()?))
                }
            }
            _ => self.expr_primary(),
        }
    }

    fn expr_primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Expr::Bool(true))
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Expr::Bool(false))
            }
            Tok::Ident(_) => Ok(Expr::Var(self.ident()?)),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    // ---- assertions ----

    fn assertion(&mut self) -> Result<Assertion, ParseError> {
        if self.is_keyword("exists") {
            self.bump();
            let v = self.ident()?;
            let sort = if *self.peek() == Tok::Colon {
                self.bump();
                let sort = match self.peek() {
                    Tok::Ident(s) if s == "int" => Sort::Int,
                    Tok::Ident(s) if s == "bool" => Sort::Bool,
                    _ => return Err(self.unexpected("`int` or `bool`")),
                };
                self.bump();
                sort
            } else {
                Sort::Int
            };
            self.expect(Tok::Dot)?;
            let body = self.assertion()?;
            return Ok(Assertion::exists(v, sort, body));
        }
        self.asrt_or()
    }

    fn asrt_or(&mut self) -> Result<Assertion, ParseError> {
        let mut p = self.asrt_and()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            p = Assertion::or(p, self.asrt_and()?);
        }
        Ok(p)
    }

    fn asrt_and(&mut self) -> Result<Assertion, ParseError> {
        let mut p = self.asrt_not()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            p = Assertion::and(p, self.asrt_not()?);
        }
        Ok(p)
    }

    fn asrt_not(&mut self) -> Result<Assertion, ParseError> {
        // A quantifier operand extends as far right as possible.
        if self.is_keyword("exists") {
            return self.assertion();
        }
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Assertion::not(self.asrt_not()?))
            }
            Tok::LParen => {
                let save = self.pos;
                if let Ok(p) = self.paren_assertion() {
                    if !continues_expression(self.peek()) {
                        return Ok(p);
                    }
                }
                self.pos = save;
                Ok(Assertion::atom(self.expr_cmp()?))
            }
            _ => Ok(Assertion::atom(self.expr_cmp()?)),
        }
    }

    fn paren_assertion(&mut self) -> Result<Assertion, ParseError> {
        self.expect(Tok::LParen)?;
        let p = self.assertion()?;
        self.expect(Tok::RParen)?;
        Ok(p)
    }

    fn gradual(&mut self) -> Result<GradualFormula, ParseError> {
        if *self.peek() != Tok::Question {
            return Ok(GradualFormula::Precise(self.assertion()?));
        }
        self.bump();
        if *self.peek() == Tok::Eof {
            return Ok(GradualFormula::Imprecise(Assertion::tt()));
        }
        self.expect(Tok::AndAnd)?;
        Ok(GradualFormula::Imprecise(self.assertion()?))
    }
}

fn continues_expression(t: &Tok) -> bool {
    matches!(
        t,
        Tok::EqEq
            | Tok::NotEq
            | Tok::Lt
            | Tok::Le
            | Tok::Gt
            | Tok::Ge
            | Tok::Plus
            | Tok::Minus
            | Tok::Star
    )
}

pub fn parse_command(text: &str) -> Result<Command, ParseError> {
    let mut p = Parser::new(text)?;
    let c = p.command()?;
    p.finish()?;
    Ok(c)
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_assertion(text: &str) -> Result<Assertion, ParseError> {
    let mut p = Parser::new(text)?;
    let a = p.assertion()?;
    p.finish()?;
    Ok(a)
}

/// Parses `? && P`, a bare `?` (read as `? && true`), or a precise assertion.
pub fn parse_gradual(text: &str) -> Result<GradualFormula, ParseError> {
    let mut p = Parser::new(text)?;
    let g = p.gradual()?;
    p.finish()?;
    Ok(g)
}

/// Splits a triple line of the form `{ pre } cmd { post }`.
///
/// Assertions never contain braces, so the precondition ends at the first
/// `}` and the postcondition starts at the last `{`.
pub fn split_triple(text: &str) -> Result<(&str, &str, &str), ParseError> {
    let err = |column: usize, message: &str| ParseError {
        line: 1,
        column,
        message: String::from(message),
    };
    let t = text.trim();
    let offset = text.len() - text.trim_start().len();
    if !t.starts_with('{') {
        return Err(err(offset + 1, "expected `{` opening the precondition"));
    }
    let pre_end = t
        .find('}')
        .ok_or_else(|| err(offset + 1, "unterminated precondition"))?;
    if !t.ends_with('}') {
        return Err(err(
            offset + t.len(),
            "expected `}` closing the postcondition",
        ));
    }
    let post_start = t.rfind('{').unwrap_or(0);
    if post_start <= pre_end {
        return Err(err(offset + pre_end + 1, "missing postcondition"));
    }
    Ok((
        &t[1..pre_end],
        t[pre_end + 1..post_start].trim(),
        &t[post_start + 1..t.len() - 1],
    ))
}
