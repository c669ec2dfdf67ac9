//! The acceptance suite: one status line per criterion on stdout.
//!
//! Sweeps with n = 5 run at m = 5 with a per-family cap and report PARTIAL;
//! set BASICLOCUS_FULL_SWEEP=1 to lift the cap.

use basiclocus_cli::verify::{
    run_check, Budget, CheckResult, Status, SweepCache, Target, VerifyPlan,
};
use std::io::Write;

fn full_sweep() -> bool {
    std::env::var("BASICLOCUS_FULL_SWEEP").is_ok_and(|v| v == "1")
}

fn emit(c: &CheckResult) -> Status {
    let budget = c.target.time_budget();
    let status = if c.elapsed > budget {
        Status::Fail
    } else {
        c.status
    };
    let mut counts: Vec<String> = c.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
    counts.sort();
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "criterion {:>2} {:<15} {:<12} {:>8.2}s (budget {}s) {} [{}]{}",
        c.criterion.expect("acceptance target"),
        c.target.name(),
        status.tag(),
        c.elapsed.as_secs_f64(),
        budget.as_secs(),
        c.detail,
        counts.join(" "),
        c.reproducer
            .as_ref()
            .map(|r| format!(" reproducer {r}"))
            .unwrap_or_default(),
    )
    .unwrap();
    status
}

#[test]
fn acceptance() {
    let mut budget = Budget::default();
    if full_sweep() {
        budget.cap = None;
    }
    let plan = VerifyPlan {
        targets: Target::all()[..11].to_vec(),
        budget,
        seed: 0,
        force: full_sweep(),
    };
    let mut cache = SweepCache::new(&plan.budget);
    let mut failed = Vec::new();
    for &t in &plan.targets {
        if emit(&run_check(t, &plan, &mut cache)) == Status::Fail {
            failed.push(t.name());
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
