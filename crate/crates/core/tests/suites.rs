use qsets::corpus::builtin_corpus;
use qsets::harness::{equality_axiom_witness, Suite, SuiteConfig};
use qsets::parse;

#[test]
fn every_suite_passes_a_short_run() {
    for suite in Suite::ALL {
        let r = suite.run(&SuiteConfig::new(11, 12).dims(2, 3));
        assert!(r.passed(), "{r}");
        assert!(r.counter("checks") > 0, "{suite} ran no checks");
    }
}

#[test]
fn runs_are_deterministic() {
    for suite in [Suite::Demorgan, Suite::Transfer, Suite::Range] {
        let cfg = SuiteConfig::new(99, 16);
        let (a, b) = (suite.run(&cfg), suite.run(&cfg));
        assert_eq!(a.counters, b.counters, "{suite}");
    }
}

#[test]
fn exploratory_conditionals_never_fail_the_transfer_suite() {
    let mut cfg = SuiteConfig::new(5, 12);
    cfg.conditionals = true;
    let r = Suite::Transfer.run(&cfg);
    assert!(r.passed(), "{r}");
    assert!(r.replay.ends_with("--conditionals"));
}

#[test]
fn corpus_is_large_enough_and_delta0() {
    let corpus = builtin_corpus();
    assert!(corpus.len() >= 12);
    for e in &corpus {
        let f = parse(&e.source).unwrap();
        assert!(f.is_delta0(), "{}", e.name);
        assert!(!e.sketch.is_empty(), "{}", e.name);
    }
    assert!(corpus.iter().any(|e| e.is_equality_axiom()));
}

#[test]
fn equality_axiom_can_drop_below_one() {
    let (value, com) = equality_axiom_witness().unwrap();
    assert!(!value.is_one());
    assert!(com.leq(&value));
}

#[test]
fn summary_is_json() {
    let r = Suite::Eqv.run(&SuiteConfig::new(1, 5));
    let v = r.summary();
    assert_eq!(v["suite"], "eqv");
    assert_eq!(v["failures"], 0);
    assert!(v["counters"].is_object());
}
