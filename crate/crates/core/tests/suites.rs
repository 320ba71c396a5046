use std::time::Instant;

use hopfcalc_core::verify::{run_suite, VerifyOptions, SUITES};

fn run(name: &str) {
    let start = Instant::now();
    let r = run_suite(name, &VerifyOptions::default()).unwrap();
    eprintln!(
        "{name}: {} cases, {} failed ({:?})",
        r.cases,
        r.failed,
        start.elapsed()
    );
    assert!(r.passed(), "{name}: {:#?}", r.counterexamples);
    assert!(r.cases > 0);
}

#[test]
fn every_suite_is_named() {
    assert_eq!(SUITES.len(), 7);
}

#[test]
fn hopf_suite() {
    run("hopf");
}

#[test]
fn localization_suite() {
    run("localization");
}

#[test]
fn centrality_suite() {
    run("centrality");
}

#[test]
fn characterisation_suite() {
    run("characterisation");
}

#[test]
fn closure_suite() {
    run("closure");
}

#[test]
fn baer_suite() {
    run("baer");
}

#[test]
fn cube_suite() {
    run("cube");
}
