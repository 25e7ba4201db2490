//! Worked examples for every public operation, through the public API.
//!
//! Values that are not read off the definitions (counterexamples, reachable
//! states) are recomputed here by brute force over the same universe.

use tricheck_core::ast::{cmd_vars, free_vars, modified_vars, substitute};
use tricheck_core::oracle::gen::{gen_case, gen_case_at, GenConfig};
use tricheck_core::oracle::{exact_valid, ox_valid, reach_valid, ux_valid};
use tricheck_core::smtlib::to_smtlib;
use tricheck_core::triples::in_gamma;
use tricheck_core::*;

fn a(s: &str) -> Assertion {
    parse_assertion(s).unwrap()
}

fn c(s: &str) -> Command {
    parse_command(s).unwrap()
}

fn g(s: &str) -> GradualFormula {
    parse_gradual(s).unwrap()
}

fn x_env() -> TypeEnv {
    TypeEnv::from([("x".to_string(), Sort::Int)])
}

fn st(pairs: &[(&str, Value)]) -> State {
    pairs.iter().map(|(k, v)| (*k, *v)).collect()
}

fn vars(names: &[&str]) -> VarSet {
    names.iter().map(|s| s.to_string()).collect()
}

/// First state of least magnitude in `states(env, r)` satisfying `pred`.
fn brute_min(env: &TypeEnv, r: u32, mut pred: impl FnMut(&State) -> bool) -> Option<State> {
    let mut best: Option<State> = None;
    for s in states(env, r) {
        if pred(&s) && best.as_ref().is_none_or(|b| s.magnitude() < b.magnitude()) {
            best = Some(s);
        }
    }
    best
}

#[test]
fn parsing() {
    let inc = Command::assign("x", Expr::add(Expr::var("x"), Expr::Int(1)));
    assert_eq!(c("x := x + 1"), inc);
    assert_eq!(
        c("x := 1 ; y := x"),
        Command::seq(
            Command::assign("x", Expr::Int(1)),
            Command::assign("y", Expr::var("x"))
        )
    );
    assert_eq!(
        c("if x < 0 then { x := 0 } else { skip }"),
        Command::ite(
            Expr::lt(Expr::var("x"), Expr::Int(0)),
            Command::assign("x", Expr::Int(0)),
            Command::Skip
        )
    );
    assert!(parse_command("x :=").is_err());
    assert_eq!(
        a("exists v. x == v + 1"),
        Assertion::exists(
            "v",
            Sort::Int,
            Assertion::atom(Expr::eq(
                Expr::var("x"),
                Expr::add(Expr::var("v"), Expr::Int(1))
            ))
        )
    );
    assert_eq!(g("? && true"), GradualFormula::Imprecise(Assertion::tt()));
    assert!(parse_gradual("x > 0 && ?").is_err());
}

#[test]
fn substitution_and_variables() {
    assert_eq!(
        substitute(&a("x > 0"), "x", &Expr::Int(5)).unwrap(),
        a("5 > 0")
    );
    assert_eq!(
        substitute(&a("exists x. x == y"), "x", &Expr::Int(3)).unwrap(),
        a("exists x. x == y")
    );
    assert_eq!(
        substitute(&a("x == y && x < 2"), "x", &Expr::var("y")).unwrap(),
        a("y == y && y < 2")
    );
    assert_eq!(free_vars(&a("exists x. x == y")), vars(&["y"]));
    assert_eq!(free_vars(&a("x < y && z == 1")), vars(&["x", "y", "z"]));
    assert_eq!(cmd_vars(&c("x := y + 1")), vars(&["x", "y"]));
    assert_eq!(modified_vars(&Command::Skip), vars(&[]));
    assert_eq!(modified_vars(&c("x := 1 ; y := x")), vars(&["x", "y"]));
    assert_eq!(
        modified_vars(&c("if b then { x := 1 } else { skip }")),
        vars(&["x"])
    );
}

#[test]
fn typing() {
    let e = typecheck(&c("x := 1 ; x := x && true"), &[]).unwrap_err();
    assert_eq!(e.variable(), Some("x"));
    assert_eq!(
        typecheck(&c("x := x + 1"), &[&a("x > 0")]).unwrap(),
        x_env()
    );
    assert_eq!(
        typecheck(&c("if b then { skip } else { skip }"), &[]).unwrap(),
        TypeEnv::from([("b".to_string(), Sort::Bool)])
    );
}

#[test]
fn evaluation_and_execution() {
    let e = |s: &str| parse_expr(s).unwrap();
    let s12 = st(&[("x", Value::Int(1)), ("y", Value::Int(2))]);
    assert_eq!(
        eval_expr(&e("x + 1"), &st(&[("x", Value::Int(2))])).unwrap(),
        Value::Int(3)
    );
    assert_eq!(eval_expr(&e("x < y"), &s12).unwrap(), Value::Bool(true));
    assert_eq!(
        eval_expr(&e("!(1 == 2)"), &State::new()).unwrap(),
        Value::Bool(true)
    );
    assert_eq!(exec(&Command::Skip, &s12).unwrap(), s12);
    assert_eq!(
        exec(&c("x := x + 1"), &st(&[("x", Value::Int(0))])).unwrap(),
        st(&[("x", Value::Int(1))])
    );
    assert_eq!(
        exec(
            &c("if x < 0 then { x := 0 } else { skip }"),
            &st(&[("x", Value::Int(-2))])
        )
        .unwrap(),
        st(&[("x", Value::Int(0))])
    );
}

#[test]
fn bounded_satisfaction() {
    let d = DomainConfig::new(3, 3).unwrap();
    let x = |n| st(&[("x", Value::Int(n))]);
    assert!(!holds(&a("x > 0"), &x(0), &d).unwrap());
    let p = a("exists v. x == v + 1");
    // Witnesses are searched in [-3, 3]: recompute which x have one.
    for n in -3..=3 {
        let has_witness = (-3..=3).any(|v| n == v + 1);
        assert_eq!(holds(&p, &x(n), &d).unwrap(), has_witness, "x = {n}");
    }
    assert!(holds(&p, &x(1), &d).unwrap());
    assert!(!holds(&p, &x(-3), &d).unwrap());
}

#[test]
fn state_enumeration() {
    let ints: Vec<_> = states(&x_env(), 1).collect();
    assert_eq!(
        ints,
        vec![
            st(&[("x", Value::Int(-1))]),
            st(&[("x", Value::Int(0))]),
            st(&[("x", Value::Int(1))])
        ]
    );
    let b = TypeEnv::from([("b".to_string(), Sort::Bool)]);
    let bools: Vec<_> = states(&b, 5).collect();
    assert_eq!(
        bools,
        vec![
            st(&[("b", Value::Bool(false))]),
            st(&[("b", Value::Bool(true))])
        ]
    );
    let mut xb = x_env();
    xb.insert("b".into(), Sort::Bool);
    let mixed: Vec<_> = states(&xb, 0).collect();
    assert_eq!(
        mixed,
        vec![
            st(&[("x", Value::Int(0)), ("b", Value::Bool(false))]),
            st(&[("x", Value::Int(0)), ("b", Value::Bool(true))])
        ]
    );
}

#[test]
fn entailment() {
    let env = x_env();
    let d = DomainConfig::new(3, 4).unwrap();
    assert!(!is_satisfiable(&Assertion::ff(), &env, d).unwrap().result);
    assert!(is_satisfiable(&a("x > 0"), &env, d).unwrap().result);
    let loops = a("x == x + 1");
    assert!(!is_satisfiable(&loops, &env, d).unwrap().result);
    assert!(brute_min(&env, 3, |s| holds(&loops, s, &d).unwrap()).is_none());

    assert!(
        implies(&Assertion::ff(), &a("x == 7"), &env, d)
            .unwrap()
            .result
    );
    assert!(implies(&a("x >= 1"), &a("x > 0"), &env, d).unwrap().result);
    let r = implies(&a("x > 0"), &a("x > 1"), &env, d).unwrap();
    let want = brute_min(&env, 3, |s| {
        holds(&a("x > 0"), s, &d).unwrap() && !holds(&a("x > 1"), s, &d).unwrap()
    });
    assert!(!r.result);
    assert_eq!(r.model, want);
    assert_eq!(want, Some(st(&[("x", Value::Int(1))])));

    let p = a("x < 2 && exists v. x == v * 2");
    assert!(equivalent(&p, &p, &env, d).unwrap().result);
    assert!(
        equivalent(
            &a("(x < 2 && x == 0) || (x < 2 && !(x == 0))"),
            &a("x < 2"),
            &env,
            d
        )
        .unwrap()
        .result
    );
    let (l, r) = (a("exists v. x == v + 1"), a("x > 0"));
    let res = equivalent(&l, &r, &env, d).unwrap();
    let want = brute_min(&env, 3, |s| {
        holds(&l, s, &d).unwrap() != holds(&r, s, &d).unwrap()
    });
    assert!(!res.result);
    assert_eq!(res.model, want);
    assert_eq!(want, Some(st(&[("x", Value::Int(0))])));
}

#[test]
fn smtlib_templates() {
    let d = DomainConfig::uniform(2);
    let imp = to_smtlib(&Query::implies(
        Assertion::ff(),
        Assertion::tt(),
        TypeEnv::new(),
        d,
    ));
    assert!(imp.contains("(assert (and false (not true)))"));
    let sat = to_smtlib(&Query::sat(a("x > 0"), x_env(), d));
    assert!(sat.contains("(declare-const x Int)\n") && sat.contains("(assert (< 0 x))"));
    let eq = to_smtlib(&Query::equiv(a("x == 1"), a("1 == x"), x_env(), d));
    assert!(eq.contains("(assert (not (= (= x 1) (= 1 x))))"));
    assert!(eq.starts_with("(set-logic ALL)\n") && eq.ends_with("(check-sat)\n"));
}

#[test]
fn transformers() {
    assert_eq!(wp(&Command::Skip, &a("x > 0")), a("x > 0"));
    assert_eq!(wp(&c("x := x + 1"), &a("x > 0")), a("x + 1 > 0"));
    assert_eq!(
        wp(&c("if x < 0 then { x := 0 } else { skip }"), &a("x >= 0")),
        a("(0 >= 0 && x < 0) || (x >= 0 && !(x < 0))")
    );
    assert_eq!(sp(&a("x > 0"), &Command::Skip).unwrap(), a("x > 0"));
    assert_eq!(
        sp(&Assertion::tt(), &c("x := x + 1")).unwrap().to_string(),
        "exists v0. x == v0 + 1 && true"
    );
    let s = sp(&a("x == 1"), &c("x := x + 1")).unwrap();
    let d = DomainConfig::new(3, 4).unwrap();
    assert!(equivalent(&s, &a("x == 2"), &x_env(), d).unwrap().result);
    // The same set, from the interpreter.
    for t in states(&x_env(), 4) {
        let image = states(&x_env(), 3).any(|s0| {
            s0.get("x") == Some(Value::Int(1)) && exec(&c("x := x + 1"), &s0).unwrap() == t
        });
        assert_eq!(holds(&s, &t, &d).unwrap(), image);
    }
}

fn checker(p: &str, cmd: &str, q: &str) -> (Checker, GradualFormula, Command, GradualFormula) {
    let (p, cmd, q) = (g(p), c(cmd), g(q));
    let k = Checker::for_triple(&cmd, &[p.assertion(), q.assertion()], 3, None).unwrap();
    (k, p, cmd, q)
}

fn verdict(logic: Logic, p: &str, cmd: &str, q: &str) -> Verdict {
    let (k, p, cmd, q) = checker(p, cmd, q);
    k.check(logic, &p, &cmd, &q).unwrap()
}

#[test]
fn concretization() {
    let d = DomainConfig::new(3, 3).unwrap();
    assert!(in_gamma(&a("x >= 0"), &g("? && true"), &x_env(), d).unwrap());
    assert!(!in_gamma(&Assertion::ff(), &g("? && x > 0"), &x_env(), d).unwrap());
    assert!(in_gamma(&a("x > 0"), &g("x > 0"), &x_env(), d).unwrap());
}

#[test]
fn hoare() {
    assert!(verdict(Logic::Hl, "x >= 0", "x := x + 1", "x > 0").valid);
    assert!(verdict(Logic::Hl, "false", "x := x * 2 ; y := 1", "y == 5").valid);
    let v = verdict(Logic::Hl, "true", "x := x + 1", "x > 1");
    let (k, _, cmd, _) = checker("true", "x := x + 1", "x > 1");
    let want = brute_min(k.env(), 3, |s| {
        !holds(&a("x > 1"), &exec(&cmd, s).unwrap(), &k.domain()).unwrap()
    });
    assert!(!v.valid);
    assert_eq!(v.counterexample, want);
    assert_eq!(want, Some(st(&[("x", Value::Int(0))])));
}

#[test]
fn incorrectness() {
    assert!(verdict(Logic::Il, "true", "x := x + 1", "x == 2").valid);
    assert!(verdict(Logic::Il, "x == 3", "x := x - 1", "false").valid);
    assert!(!verdict(Logic::Il, "x > 0", "x := x + 1", "x == 1").valid);
    // Only x = 0 reaches x = 1.
    let pre: Vec<_> = states(&x_env(), 3)
        .filter(|s| exec(&c("x := x + 1"), s).unwrap().get("x") == Some(Value::Int(1)))
        .collect();
    assert_eq!(pre, vec![st(&[("x", Value::Int(0))])]);
}

#[test]
fn exact() {
    assert!(verdict(Logic::El, "x == 1", "x := x + 1", "x == 2").valid);
    assert!(verdict(Logic::El, "true", "skip", "true").valid);
    assert!(!verdict(Logic::El, "true", "x := x + 1", "x > 0").valid);
}

#[test]
fn gradual_exact() {
    let v = verdict(Logic::Gel, "? && true", "x := x + 1", "x > 0");
    assert!(v.valid);
    assert_eq!(v.witness_pre.unwrap().to_string(), "true && 0 < x + 1");
    assert!(!verdict(Logic::Gel, "? && x > 0", "x := 2 * x", "? && false").valid);
    assert!(!verdict(Logic::Gel, "true", "x := x + 1", "? && x > 0").valid);
}

#[test]
fn gradual_verification() {
    let v = verdict(Logic::Gv, "? && true", "x := x + 1", "x > 0");
    assert!(v.valid);
    let d = v.domain;
    let w = v.witness_pre.unwrap();
    assert!(
        equivalent(
            &w,
            &a("x >= 0"),
            &x_env(),
            DomainConfig::new(3, d.quant_radius()).unwrap()
        )
        .unwrap()
        .result
    );
    for (p, cmd, q) in [
        ("x >= 0", "x := x + 1", "x > 0"),
        ("true", "x := x + 1", "x > 1"),
    ] {
        assert_eq!(
            verdict(Logic::Gv, p, cmd, q).valid,
            verdict(Logic::Hl, p, cmd, q).valid
        );
    }
    assert!(!verdict(Logic::Gv, "? && x < 0", "x := x + 1", "x > 5").valid);
}

#[test]
fn lifted_incorrectness() {
    let v = verdict(Logic::IlLifted, "true", "x := x + 1", "? && x > 0");
    assert!(v.valid);
    let w = v.witness_post.unwrap();
    assert!(holds(&w, &st(&[("x", Value::Int(1))]), &v.domain).unwrap());
    for (p, cmd, q) in [
        ("true", "x := x + 1", "x == 2"),
        ("x > 0", "x := x + 1", "x == 1"),
    ] {
        assert_eq!(
            verdict(Logic::IlLifted, p, cmd, q).valid,
            verdict(Logic::Il, p, cmd, q).valid
        );
    }
    assert!(!verdict(Logic::IlLifted, "x < 0", "x := x + 1", "? && x > 5").valid);
}

#[test]
fn oracle_examples() {
    let env = x_env();
    let d = DomainConfig::new(3, 4).unwrap();
    let inc = c("x := x + 1");
    assert!(ox_valid(&Assertion::ff(), &inc, &a("x == 3"), &env, &d).unwrap());
    assert!(!ox_valid(&Assertion::tt(), &inc, &a("x > 0"), &env, &d).unwrap());
    assert!(ox_valid(&a("x >= 0"), &inc, &a("x > 0"), &env, &d).unwrap());
    assert!(ux_valid(&Assertion::tt(), &inc, &Assertion::ff(), &env, &d).unwrap());
    assert!(ux_valid(&Assertion::tt(), &inc, &a("x == 2"), &env, &d).unwrap());
    assert!(!ux_valid(&a("x > 0"), &inc, &a("x == 1"), &env, &d).unwrap());
    assert!(reach_valid(&Assertion::tt(), &inc, &a("x > 0"), &env, &d).unwrap());
    assert!(!reach_valid(&Assertion::ff(), &inc, &Assertion::tt(), &env, &d).unwrap());
    assert!(!reach_valid(&a("x < 0"), &inc, &a("x > 5"), &env, &d).unwrap());
    assert!(exact_valid(&a("x == 1"), &inc, &a("x == 2"), &env, &d).unwrap());
    assert!(exact_valid(
        &Assertion::tt(),
        &Command::Skip,
        &Assertion::tt(),
        &env,
        &DomainConfig::uniform(3)
    )
    .unwrap());
    assert!(!exact_valid(&Assertion::tt(), &inc, &a("x > 0"), &env, &d).unwrap());
}

#[test]
fn generation() {
    let cfg = GenConfig::default();
    assert_eq!(gen_case(&cfg).unwrap(), gen_case(&cfg).unwrap());
    let one = GenConfig {
        max_depth: 1,
        ..cfg.clone()
    };
    for i in 0..30 {
        assert!(matches!(
            gen_case_at(&one, i).unwrap().cmd,
            Command::Skip | Command::Assign(..)
        ));
        let k = gen_case_at(&cfg, i).unwrap();
        assert!(typecheck(&k.cmd, &[&k.pre, &k.post]).is_ok());
    }
}
