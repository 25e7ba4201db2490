//! Acceptance criteria A1 to A8, one line each.
//!
//! Runs without the libtest harness so that every criterion reports even
//! when an earlier one fails. Set `TRICHECK_BLESS=1` to rewrite the SMT-LIB
//! golden files.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command as Proc, ExitCode};
use std::time::{Duration, Instant};

use tricheck::fuzz::Harness;
use tricheck_core::oracle::gen::{Case, GenConfig};
use tricheck_core::oracle::properties::Outcome;
use tricheck_core::oracle::properties::Property;
use tricheck_core::oracle::rules::{check_rule, Rule};
use tricheck_core::smtlib::to_smtlib;
use tricheck_core::{equivalent, parse_assertion, DomainConfig, Query, Sort, TypeEnv};

type Check = Result<String, String>;

/// Id, description, check.
type Criterion = (&'static str, &'static str, fn() -> Check);

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_tricheck"))
}

fn within(t: Duration, limit: u64) -> Result<(), String> {
    if t > Duration::from_secs(limit) {
        Err(format!("took {:.1}s, limit {limit}s", t.as_secs_f64()))
    } else {
        Ok(())
    }
}

fn a1() -> Check {
    let start = Instant::now();
    let gv = bin()
        .args([
            "check",
            "--machine",
            "--logic",
            "gv",
            "? && true",
            "x := x + 1",
            "x > 0",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    if gv.status.code() != Some(0) {
        return Err(format!("gv exit {:?}", gv.status.code()));
    }
    let rec: serde_json::Value = serde_json::from_slice(&gv.stdout).map_err(|e| e.to_string())?;
    let w = rec["witness_pre"]
        .as_str()
        .ok_or("no witness precondition")?;
    let q = rec["domain"]["quant_radius"]
        .as_u64()
        .ok_or("no quant radius")? as u32;
    let w = parse_assertion(w).map_err(|e| e.to_string())?;
    let env = TypeEnv::from([("x".to_string(), Sort::Int)]);
    let d = DomainConfig::new(3, q).map_err(|e| e.to_string())?;
    let x_nonneg = parse_assertion("x >= 0").unwrap();
    if !equivalent(&w, &x_nonneg, &env, d)
        .map_err(|e| e.to_string())?
        .result
    {
        return Err(format!("witness {w} is not equivalent to x >= 0"));
    }
    let hl = bin()
        .args(["check", "--logic", "hl", "x >= 0", "x := x + 1", "x > 0"])
        .output();
    let hl = hl.map_err(|e| e.to_string())?;
    if hl.status.code() != Some(0) {
        return Err(format!("hl exit {:?}", hl.status.code()));
    }
    within(start.elapsed(), 1)?;
    Ok(format!("witness {w} == x >= 0 at radius 3"))
}

fn cfg() -> GenConfig {
    GenConfig {
        seed: 42,
        max_depth: 3,
        num_int_vars: 3,
        const_range: (-2, 2),
        free_radius: 2,
        ..GenConfig::default()
    }
}

fn fuzz(h: Harness, n: usize, limit: u64) -> Check {
    let r = h.run(n);
    if let Some(f) = r.failures.first() {
        return Err(format!("{} failures, first:\n{f}", r.failures.len()));
    }
    if r.cases_run != n {
        return Err(format!("only {} of {n} cases generated", r.cases_run));
    }
    within(r.wall_time, limit)?;
    Ok(r.summary())
}

fn sat_sides(c: &Case) -> bool {
    let k = c.checker();
    let sat = |p, d| {
        Query::sat(p, c.env.clone(), d)
            .decide()
            .is_ok_and(|r| r.result)
    };
    sat(c.pre.clone(), k.pre_domain()) && sat(c.post.clone(), k.post_domain())
}

fn a2() -> Check {
    fuzz(
        Harness::new(cfg()).properties(&Property::AGREEMENT),
        500,
        60,
    )
}

fn a3() -> Check {
    fuzz(
        Harness::new(cfg())
            .properties(&Property::GRADUAL)
            .filter(sat_sides),
        500,
        60,
    )
}

fn a4() -> Check {
    fuzz(Harness::new(cfg()).properties(&Property::LEMMAS), 300, 120)
}

fn a5() -> Check {
    fuzz(Harness::new(cfg()).properties(&Property::UNION), 300, 60)
}

fn a6() -> Check {
    let cfg = cfg();
    let mut tried = 0;
    for rule in Rule::ALL {
        let (mut passed, mut i) = (0, 0u64);
        while passed < 100 {
            if i == 5000 {
                return Err(format!(
                    "{}: only {passed} premise-valid instances in {i} samples",
                    rule.name()
                ));
            }
            match check_rule(rule, &cfg, i) {
                Ok(Outcome::Pass) => passed += 1,
                Ok(Outcome::Vacuous) => {}
                Ok(Outcome::Fail(f)) => return Err(f.detail),
                Err(e) => return Err(format!("{}: {e}", rule.name())),
            }
            i += 1;
        }
        tried += i;
    }
    Ok(format!(
        "{} rules x 100 premise-valid instances ({tried} sampled)",
        Rule::ALL.len()
    ))
}

fn a7() -> Check {
    fuzz(
        Harness::new(cfg())
            .properties(&[Property::WitnessSound])
            .filter(sat_sides),
        500,
        60,
    )
}

fn golden_queries() -> Vec<(&'static str, Query)> {
    let a = |s: &str| parse_assertion(s).unwrap();
    let env =
        |vs: &[(&str, Sort)]| -> TypeEnv { vs.iter().map(|(v, s)| (v.to_string(), *s)).collect() };
    let x = env(&[("x", Sort::Int)]);
    let xy = env(&[("x", Sort::Int), ("y", Sort::Int)]);
    let xb = env(&[("b", Sort::Bool), ("x", Sort::Int)]);
    let d = DomainConfig::new(3, 4).unwrap();
    vec![
        ("sat_positive", Query::sat(a("x > 0"), x.clone(), d)),
        (
            "implies_increment_wp",
            Query::implies(a("x >= 0"), a("x + 1 > 0"), x.clone(), d),
        ),
        (
            "equiv_sp_true",
            Query::equiv(a("exists v0. x == v0 + 1 && true"), a("true"), x.clone(), d),
        ),
        (
            "sat_bool_mix",
            Query::sat(a("b && !(x == 2)"), xb.clone(), d),
        ),
        (
            "implies_negative_literal",
            Query::implies(a("x < -2"), a("x < 0"), x.clone(), d),
        ),
        (
            "implies_product",
            Query::implies(a("x * 2 == y"), a("!(y == 1)"), xy.clone(), d),
        ),
        (
            "equiv_disjunction",
            Query::equiv(a("x < 0 || x > 0"), a("x != 0"), x.clone(), d),
        ),
        (
            "sat_bool_quantifier",
            Query::sat(a("exists v0: bool. b == !v0 && v0"), xb.clone(), d),
        ),
        (
            "implies_conditional_sp",
            Query::implies(
                a("(exists v0. x == v0 + 1 && v0 < 0) || (exists v1. x == v1 - 1 && !(v1 < 0))"),
                a("x <= 0 || x >= -1"),
                x.clone(),
                d,
            ),
        ),
        (
            "equiv_nested_exists",
            Query::equiv(
                a("exists u. exists w. x == u + w && y == u - w"),
                a("exists u. x + y == u + u"),
                xy,
                d,
            ),
        ),
    ]
}

/// Balanced s-expressions whose symbols are declared constants, binders
/// in scope, numerals or core/integer theory symbols.
fn well_formed(script: &str) -> Result<(), String> {
    const THEORY: [&str; 13] = [
        "and", "or", "not", "=", "<", "+", "-", "*", "exists", "Int", "Bool", "true", "false",
    ];
    const COMMANDS: [&str; 4] = ["set-logic", "declare-const", "assert", "check-sat"];
    let mut declared = BTreeSet::new();
    for line in script.lines() {
        let toks: Vec<String> = line
            .replace('(', " ( ")
            .replace(')', " ) ")
            .split_whitespace()
            .map(String::from)
            .collect();
        let mut depth = 0i32;
        for t in &toks {
            depth += match t.as_str() {
                "(" => 1,
                ")" => -1,
                _ => 0,
            };
            if depth < 0 {
                return Err(format!("unbalanced: {line}"));
            }
        }
        if depth != 0 {
            return Err(format!("unbalanced: {line}"));
        }
        let cmd = toks.get(1).map(String::as_str).unwrap_or("");
        if !COMMANDS.contains(&cmd) {
            return Err(format!("unknown command: {line}"));
        }
        match cmd {
            "declare-const" => {
                if !matches!(toks.get(3).map(String::as_str), Some("Int" | "Bool")) {
                    return Err(format!("undeclared sort: {line}"));
                }
                declared.insert(toks[2].clone());
            }
            "assert" => {
                let mut bound = BTreeSet::new();
                for (i, t) in toks.iter().enumerate() {
                    // `(exists ((v S)) ...`: the binder follows two opening parens.
                    if i >= 3 && toks[i - 1] == "(" && toks[i - 2] == "(" && toks[i - 3] == "exists"
                    {
                        bound.insert(t.clone());
                        continue;
                    }
                    let ok = t == "("
                        || t == ")"
                        || i == 1
                        || THEORY.contains(&t.as_str())
                        || t.chars().all(|c| c.is_ascii_digit())
                        || declared.contains(t)
                        || bound.contains(t);
                    if !ok {
                        return Err(format!("undeclared symbol `{t}` in {line}"));
                    }
                }
            }
            _ => {}
        }
    }
    if !script.ends_with("(check-sat)\n") {
        return Err("script does not end with (check-sat)".into());
    }
    Ok(())
}

fn a8() -> Check {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("TRICHECK_BLESS").is_some();
    let queries = golden_queries();
    for (name, q) in &queries {
        let script = to_smtlib(q);
        well_formed(&script).map_err(|e| format!("{name}: {e}"))?;
        let path = dir.join(format!("{name}.smt2"));
        if bless {
            std::fs::write(&path, &script).map_err(|e| e.to_string())?;
        }
        let golden =
            std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        if golden != script {
            return Err(format!("{name}: output differs from {}", path.display()));
        }
    }
    Ok(format!("{} scripts match", queries.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("A1", "worked gradual example", a1),
        ("A2", "checker/oracle agreement", a2),
        ("A3", "gradual characterizations", a3),
        ("A4", "transformer lemmas", a4),
        ("A5", "union claims", a5),
        ("A6", "rule admissibility", a6),
        ("A7", "witness soundness", a7),
        ("A8", "SMT-LIB golden files", a8),
    ];
    let mut failed = 0;
    for (id, what, run) in criteria {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("{id} PASS {what} ({secs:.2}s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("{id} FAIL {what} ({secs:.2}s): {msg}");
            }
        }
    }
    println!("acceptance: {} of 8 criteria pass", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
