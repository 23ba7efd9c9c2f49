//! Acceptance criterion 12: determinism of the self-test report. The first
//! eleven criteria live in the core crate's acceptance suite.

use std::process::Command;

fn run_selftest(args: &[&str]) -> (Vec<u8>, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_mucoh"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.success())
}

/// Criterion 12: `selftest --seed 42` produces byte-identical JSON reports
/// across runs, and the report is independent of the worker count.
#[test]
fn a12_selftest_determinism() {
    let (first, ok1) = run_selftest(&["selftest", "--seed", "42", "--format", "json"]);
    let (second, ok2) = run_selftest(&["selftest", "--seed", "42", "--format", "json"]);
    let byte_identical = first == second;
    let (fanned, ok3) = run_selftest(&[
        "selftest", "--seed", "42", "--format", "json", "--jobs", "4",
    ]);
    let jobs_invariant = fanned == first;
    let pass = ok1 && ok2 && ok3 && byte_identical && jobs_invariant;
    let word = if pass { "PASS" } else { "FAIL" };
    println!(
        "[{word}] criterion 12: selftest --seed 42 is byte-identical across runs ({} bytes, jobs-invariant: {jobs_invariant})",
        first.len()
    );
    assert!(ok1 && ok2 && ok3, "selftest must pass");
    assert!(byte_identical, "reports differ between runs");
    assert!(jobs_invariant, "reports depend on --jobs");
}
