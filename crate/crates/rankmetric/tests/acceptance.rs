//! Runs the release checklist and requires every check to land on its
//! expected verdict: nine passes, plus the binary-base twisted check
//! which must prove its own impossibility rather than fail.

use rankmetric::acceptance::{run_all, CheckStatus};

#[test]
fn release_checklist() {
    let reports = run_all();
    assert_eq!(reports.len(), 10);
    let mut bad = Vec::new();
    for rep in &reports {
        let want = if rep.id == 3 { CheckStatus::Unattainable } else { CheckStatus::Pass };
        if rep.status != want {
            bad.push(format!("{rep}"));
        }
    }
    assert!(bad.is_empty(), "checks off expected verdict:\n{}", bad.join("\n"));
}
