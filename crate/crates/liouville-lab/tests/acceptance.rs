//! Runs every verification suite at its acceptance tolerance and prints one
//! PASS/FAIL line per criterion.

use liouville_lab::verify::{self, VerifyOptions};
use std::io::Write;

#[test]
fn acceptance() {
    let report = verify::run_all(&VerifyOptions::default());
    // Written to the stderr handle directly so the lines survive output capture.
    let mut err = std::io::stderr().lock();
    for c in &report.criteria {
        writeln!(err, "{}", c.line()).unwrap();
    }
    drop(err);
    let failed: Vec<String> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.line()).collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
