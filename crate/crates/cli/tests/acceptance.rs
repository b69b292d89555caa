//! Acceptance battery: every criterion runs at its stated tolerance and
//! prints one pass/fail line. Run with `--nocapture` to see the table even
//! when everything passes.

use mwlab::suite::{run_suite, SuiteMode};

#[test]
fn acceptance_criteria() {
    let outcomes = run_suite(SuiteMode::Full);
    let mut failures = Vec::new();
    for o in &outcomes {
        println!("{}", o.line());
        if !o.passed {
            failures.push(o.id);
        }
    }
    println!(
        "{}/{} criteria passed",
        outcomes.len() - failures.len(),
        outcomes.len()
    );
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
