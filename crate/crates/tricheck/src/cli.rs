//! The `tricheck` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use tricheck_core::oracle::gen::GenConfig;
use tricheck_core::oracle::properties::Property;
use tricheck_core::oracle::{exact_valid, ox_valid, reach_valid, ux_valid};
use tricheck_core::parse::split_triple;
use tricheck_core::smtlib::to_smtlib;
use tricheck_core::triples::{CheckError, Mutation};
use tricheck_core::{
    holds, parse_assertion, parse_command, parse_gradual, sp, states, wp, Checker, Command,
    GradualFormula, Logic, Verdict,
};

use crate::fuzz::Harness;
use crate::render::{verdict_json, verdict_text};

const GRAMMAR: &str = "\
grammar:
  command    ::= skip | x := expr | command ; command
               | if expr then { command } else { command } | { command }
  expr       ::= integers, true, false, variables, + - *, == != < <= > >=, ! && ||
  assertion  ::= expr | exists v. assertion | exists v: bool. assertion
  gradual    ::= assertion | ? && assertion | ?
  triple line::= [logic] { pre } command { post }
  logics: hl il el gel gv il-lifted
";

#[derive(Parser, Debug)]
#[command(
    name = "tricheck",
    version,
    about = "Decide program-logic triples over bounded integers"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Radii {
    /// Pre-states range over [-N, N].
    #[arg(long, default_value_t = 3)]
    free_radius: u32,
    /// Quantifier and post-state radius; interval analysis when omitted.
    #[arg(long)]
    quant_radius: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct TripleInput {
    #[arg(long, value_parser = parse_logic)]
    logic: Option<Logic>,
    /// One triple per line: `[logic] { pre } cmd { post }`.
    #[arg(long, conflicts_with_all = ["pre", "command", "post"])]
    file: Option<PathBuf>,
    pre: Option<String>,
    command: Option<String>,
    post: Option<String>,
    #[command(flatten)]
    radii: Radii,
    /// One JSON record per line.
    #[arg(long)]
    machine: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide a triple with the checker.
    Check {
        #[command(flatten)]
        input: TripleInput,
        /// Write SMT-LIB scripts for the decisive queries to this file.
        #[arg(long)]
        smt: Option<PathBuf>,
    },
    /// Decide a triple by running the command on every state.
    Oracle {
        #[command(flatten)]
        input: TripleInput,
    },
    /// Print SMT-LIB scripts for the decisive queries of a triple.
    Smt {
        #[command(flatten)]
        input: TripleInput,
    },
    /// Weakest precondition of a command.
    Wp { command: String, post: String },
    /// Strongest postcondition of a command.
    Sp { pre: String, command: String },
    /// Differential run of checkers against the oracle on generated cases.
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[arg(long, default_value_t = 2)]
        free_radius: u32,
        /// Restrict to these properties (repeatable).
        #[arg(long = "property", value_parser = parse_property)]
        properties: Vec<Property>,
        #[arg(long)]
        machine: bool,
        #[arg(long, hide = true)]
        mutate_gv: bool,
    },
}

fn parse_logic(s: &str) -> Result<Logic, String> {
    s.parse()
        .map_err(|e: tricheck_core::triples::UnknownLogic| e.to_string())
}

fn parse_property(s: &str) -> Result<Property, String> {
    Property::from_name(s).ok_or_else(|| {
        let names: Vec<_> = Property::ALL.iter().map(|p| p.name()).collect();
        format!(
            "unknown property `{s}`; expected one of {}",
            names.join(", ")
        )
    })
}

/// Failure that maps to exit status 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Res<T> = Result<T, UsageError>;

struct Triple {
    logic: Logic,
    pre: GradualFormula,
    cmd: Command,
    post: GradualFormula,
    label: String,
}

fn parse_triple(logic: Logic, pre: &str, cmd: &str, post: &str, label: String) -> Res<Triple> {
    let ctx = |what: &str, e: tricheck_core::ParseError| UsageError(format!("{label}{what}: {e}"));
    Ok(Triple {
        logic,
        pre: parse_gradual(pre).map_err(|e| ctx("precondition", e))?,
        cmd: parse_command(cmd).map_err(|e| ctx("command", e))?,
        post: parse_gradual(post).map_err(|e| ctx("postcondition", e))?,
        label,
    })
}

/// Splits an optional leading logic name (`gv` or `[gv]`) off a line.
fn line_logic(line: &str) -> Res<(Option<Logic>, &str)> {
    let t = line.trim_start();
    if t.starts_with('{') {
        return Ok((None, t));
    }
    let end = t.find('{').unwrap_or(t.len());
    let word = t[..end]
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(']');
    Ok((Some(parse_logic(word).map_err(UsageError)?), &t[end..]))
}

fn triples(input: &TripleInput) -> Res<Vec<Triple>> {
    if let Some(path) = &input.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        let mut out = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let label = format!("line {}: ", n + 1);
            let (logic, rest) =
                line_logic(line).map_err(|e| UsageError(format!("{label}{}", e.0)))?;
            let logic = logic.or(input.logic).ok_or_else(|| {
                UsageError(format!("{label}no logic given on the line or with --logic"))
            })?;
            let (p, c, q) = split_triple(rest).map_err(|e| UsageError(format!("{label}{e}")))?;
            out.push(parse_triple(logic, p, c, q, label)?);
        }
        return Ok(out);
    }
    let (Some(p), Some(c), Some(q)) = (&input.pre, &input.command, &input.post) else {
        return Err(UsageError("expected PRE COMMAND POST or --file".into()));
    };
    let logic = input
        .logic
        .ok_or_else(|| UsageError("--logic is required".into()))?;
    Ok(vec![parse_triple(logic, p, c, q, String::new())?])
}

fn checker(t: &Triple, r: &Radii) -> Res<Checker> {
    if let Some(q) = r.quant_radius {
        if q < r.free_radius {
            return Err(UsageError(format!(
                "--quant-radius {q} is below --free-radius {}",
                r.free_radius
            )));
        }
    }
    let asserts = [t.pre.assertion(), t.post.assertion()];
    Checker::for_triple(&t.cmd, &asserts, r.free_radius, r.quant_radius)
        .map_err(|e| UsageError(format!("{}{e}", t.label)))
}

fn decide(t: &Triple, r: &Radii) -> Res<Verdict> {
    let k = checker(t, r)?;
    k.check(t.logic, &t.pre, &t.cmd, &t.post)
        .map_err(|e| match e {
            CheckError::InternalInvariantViolation(_) => UsageError(format!("{}bug: {e}", t.label)),
            e => UsageError(format!("{}{e}", t.label)),
        })
}

fn smt_scripts(v: &Verdict) -> String {
    let mut s = String::new();
    for (i, r) in v.queries.iter().enumerate() {
        if i > 0 {
            s.push_str("(reset)\n");
        }
        s.push_str(&format!("; {}\n", r.purpose));
        s.push_str(&to_smtlib(&r.query));
    }
    s
}

fn cmd_check(input: &TripleInput, smt: Option<&PathBuf>, out: &mut dyn Write) -> Res<bool> {
    let mut all_valid = true;
    let mut scripts = String::new();
    for t in triples(input)? {
        let start = Instant::now();
        let v = decide(&t, &input.radii)?;
        all_valid &= v.valid;
        scripts.push_str(&smt_scripts(&v));
        if input.machine {
            writeln!(out, "{}", verdict_json(&v, start.elapsed()))?;
        } else {
            write!(out, "{}{}", t.label, verdict_text(&v))?;
        }
    }
    if let Some(path) = smt {
        std::fs::write(path, scripts)
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    }
    Ok(all_valid)
}

fn cmd_smt(input: &TripleInput, out: &mut dyn Write) -> Res<bool> {
    for t in triples(input)? {
        out.write_all(smt_scripts(&decide(&t, &input.radii)?).as_bytes())?;
    }
    Ok(true)
}

fn oracle_verdict(t: &Triple, r: &Radii) -> Res<bool> {
    let k = checker(t, r)?;
    let (env, d) = (k.env(), k.domain());
    let (p, q) = (t.pre.assertion(), t.post.assertion());
    let some_state = |a, radius| -> Res<bool> {
        for s in states(env, radius) {
            if holds(a, &s, &d)? {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let (pi, qi) = (!t.pre.is_precise(), !t.post.is_precise());
    let (pre_ok, post_ok) = t.logic.gradual_sides();
    if (pi && !pre_ok) || (qi && !post_ok) {
        return Err(UsageError(format!(
            "{}{} does not allow an imprecise side here",
            t.label, t.logic
        )));
    }
    Ok(match (t.logic, pi, qi) {
        (Logic::Hl, ..) | (Logic::Gv, false, _) => ox_valid(p, &t.cmd, q, env, &d)?,
        (Logic::Il, ..) | (Logic::IlLifted, _, false) => ux_valid(p, &t.cmd, q, env, &d)?,
        (Logic::El, ..) | (Logic::Gel, false, false) => exact_valid(p, &t.cmd, q, env, &d)?,
        (Logic::Gel, false, true) => {
            some_state(p, d.free_radius())? && ox_valid(p, &t.cmd, q, env, &d)?
        }
        (Logic::Gel, true, false) => {
            some_state(q, d.quant_radius())? && ux_valid(p, &t.cmd, q, env, &d)?
        }
        _ => reach_valid(p, &t.cmd, q, env, &d)?,
    })
}

fn cmd_oracle(input: &TripleInput, out: &mut dyn Write) -> Res<bool> {
    let mut all_valid = true;
    for t in triples(input)? {
        let start = Instant::now();
        let valid = oracle_verdict(&t, &input.radii)?;
        all_valid &= valid;
        if input.machine {
            let rec = serde_json::json!({
                "logic": t.logic.name(),
                "valid": valid,
                "time_ms": start.elapsed().as_secs_f64() * 1000.0,
            });
            writeln!(out, "{rec}")?;
        } else {
            writeln!(
                out,
                "{}{}: {}",
                t.label,
                t.logic,
                if valid { "valid" } else { "invalid" }
            )?;
        }
    }
    Ok(all_valid)
}

fn run_cmd(cmd: Cmd, out: &mut dyn Write, err: &mut dyn Write) -> Res<bool> {
    match cmd {
        Cmd::Check { input, smt } => cmd_check(&input, smt.as_ref(), out),
        Cmd::Oracle { input } => cmd_oracle(&input, out),
        Cmd::Smt { input } => cmd_smt(&input, out),
        Cmd::Wp { command, post } => {
            let c = parse_command(&command).map_err(|e| UsageError(format!("command: {e}")))?;
            let q =
                parse_assertion(&post).map_err(|e| UsageError(format!("postcondition: {e}")))?;
            tricheck_core::typecheck(&c, &[&q])?;
            writeln!(out, "{}", wp(&c, &q))?;
            Ok(true)
        }
        Cmd::Sp { pre, command } => {
            let p = parse_assertion(&pre).map_err(|e| UsageError(format!("precondition: {e}")))?;
            let c = parse_command(&command).map_err(|e| UsageError(format!("command: {e}")))?;
            writeln!(out, "{}", sp(&p, &c)?)?;
            Ok(true)
        }
        Cmd::Fuzz {
            seed,
            cases,
            max_depth,
            free_radius,
            properties,
            machine,
            mutate_gv,
        } => {
            let cfg = GenConfig {
                seed,
                max_depth,
                free_radius,
                ..GenConfig::default()
            };
            let mut h = Harness::new(cfg);
            if !properties.is_empty() {
                h = h.properties(&properties);
            }
            if mutate_gv {
                h = h.mutation(Mutation::GvSkipsSatisfiability);
            }
            let report = h.run(cases);
            if machine {
                out.write_all(report.json_lines().as_bytes())?;
                writeln!(err, "{}", report.summary())?;
            } else {
                for f in &report.failures {
                    writeln!(out, "{f}")?;
                }
                writeln!(out, "{}", report.summary())?;
            }
            Ok(report.is_success())
        }
    }
}

/// Runs the command line; the result is the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{e}\n{GRAMMAR}");
            return 2;
        }
    };
    match run_cmd(cli.cmd, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(UsageError(msg)) => {
            let _ = write!(err, "error: {msg}\n\n{GRAMMAR}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("tricheck").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn logic_prefix_forms() {
        let (l, rest) = line_logic("gv { ? } skip { true }").ok().unwrap();
        assert_eq!((l, rest), (Some(Logic::Gv), "{ ? } skip { true }"));
        let (l, _) = line_logic("[il-lifted] { true } skip { true }")
            .ok()
            .unwrap();
        assert_eq!(l, Some(Logic::IlLifted));
        assert_eq!(line_logic("{ true } skip { true }").ok().unwrap().0, None);
        assert!(line_logic("nope { true } skip { true }").is_err());
    }

    #[test]
    fn quant_below_free_is_usage_error() {
        let (code, _, err) = run_str(&[
            "check",
            "--logic",
            "hl",
            "--free-radius",
            "3",
            "--quant-radius",
            "2",
            "true",
            "skip",
            "true",
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("below"));
    }

    #[test]
    fn oracle_matches_checker_on_examples() {
        for (logic, p, c, q, want) in [
            ("hl", "x >= 0", "x := x + 1", "x > 0", 0),
            ("hl", "true", "x := x + 1", "x > 1", 1),
            ("il", "x > 0", "x := x + 1", "x == 1", 1),
            ("gv", "? && true", "x := x + 1", "x > 0", 0),
            ("gel", "? && true", "x := x + 1", "? && x > 3", 0),
            ("gel", "? && true", "x := x + 1", "? && x > 5", 1),
        ] {
            assert_eq!(
                run_str(&["oracle", "--logic", logic, p, c, q]).0,
                want,
                "{logic} {p} {c} {q}"
            );
            assert_eq!(
                run_str(&["check", "--logic", logic, p, c, q]).0,
                want,
                "{logic} {p} {c} {q}"
            );
        }
    }
}
