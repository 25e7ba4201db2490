use tricheck::fuzz::{differential_run, Harness};
use tricheck_core::oracle::gen::{gen_case_at, Case, GenConfig};
use tricheck_core::oracle::properties::{check_property, Outcome, Property};
use tricheck_core::parse::split_triple;
use tricheck_core::triples::Mutation;
use tricheck_core::{parse_assertion, parse_command, Assertion};

#[test]
fn no_cases_no_failures() {
    let r = differential_run(&GenConfig::default(), 0);
    assert_eq!(r.cases_run, 0);
    assert!(r.failures.is_empty() && r.is_success());
    assert_eq!(r.json_lines(), "");
}

#[test]
fn small_run_is_clean_and_deterministic() {
    let h = Harness::new(GenConfig {
        seed: 3,
        ..GenConfig::default()
    });
    let a = h.run(25);
    assert!(a.is_success(), "{:?}", a.failures.first());
    assert_eq!(a.cases_run, 25);
    let b = h.run(25);
    assert_eq!(a.failures, b.failures);
}

fn parse_case(triple: &str) -> Case {
    let (p, c, q) = split_triple(triple).unwrap();
    Case::new(
        parse_command(c).unwrap(),
        parse_assertion(p).unwrap(),
        parse_assertion(q).unwrap(),
        Assertion::tt(),
        2,
    )
    .unwrap()
}

#[test]
fn dropping_the_gv_satisfiability_test_is_caught_and_shrunk() {
    let m = Mutation::GvSkipsSatisfiability;
    let h = Harness::new(GenConfig::default())
        .properties(&[Property::ReachabilityChain])
        .mutation(m);
    let r = h.run(100);
    assert!(!r.is_success());
    for f in &r.failures {
        assert_eq!(f.property, Property::ReachabilityChain);
        // The shrunk case still fails the same property.
        let shrunk = parse_case(&f.shrunk);
        assert!(
            check_property(Property::ReachabilityChain, &shrunk, Some(m))
                .unwrap()
                .is_fail(),
            "{}",
            f.shrunk
        );
        // And the unmutated checker passes it.
        assert!(!check_property(Property::ReachabilityChain, &shrunk, None)
            .unwrap()
            .is_fail());
        let original = gen_case_at(&h.config, f.index).unwrap();
        assert!(
            tricheck_core::oracle::shrink::weight(&shrunk)
                <= tricheck_core::oracle::shrink::weight(&original)
        );
    }
    for line in r.json_lines().lines() {
        let rec: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(rec["property"], "reachability-chain");
        assert!(rec["case"].is_u64() && rec["shrunk"].is_string());
    }
}

#[test]
fn filter_selects_the_first_accepted_cases() {
    fn pre_true(c: &Case) -> bool {
        c.pre == Assertion::tt()
    }
    let h = Harness::new(GenConfig::default())
        .properties(&Property::UNION)
        .filter(pre_true);
    let (cases, _) = h.cases(3);
    assert_eq!(cases.len(), 3);
    assert!(cases.windows(2).all(|w| w[0].0 < w[1].0));
    assert!(cases.iter().all(|(_, c)| pre_true(c)));
    let r = h.run(3);
    assert_eq!(r.cases_run, 3);
    assert!(matches!(
        check_property(Property::HlInGv, &cases[0].1, None).unwrap(),
        Outcome::Pass | Outcome::Vacuous
    ));
}
