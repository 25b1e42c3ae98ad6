//! Acceptance suite: one line per criterion across the three parameter sets.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! Exits nonzero when any criterion fails.

use std::process::ExitCode;

use saft::verify::{acceptance_params, cmd_verify, CheckResult, Status, VerifyOptions};

const SIZE: usize = 512;
const SEED: u64 = 42;

fn main() -> ExitCode {
    let sets = acceptance_params();
    let mut reports = Vec::new();
    for (i, (label, p)) in sets.iter().enumerate() {
        // Timing growth does not depend on the parameters; bench once.
        let opts = VerifyOptions { include_bench: i == 0 };
        match cmd_verify(p, SIZE, SEED, opts) {
            Ok(r) => reports.push(r),
            Err(e) => {
                println!("acceptance: could not run battery for {label}: {e}");
                return ExitCode::FAILURE;
            }
        }
    }

    println!("acceptance suite: N={SIZE}, seed={SEED}, sets: {}", sets.iter().map(|s| s.0).collect::<Vec<_>>().join(" | "));
    let n = reports[0].checks.len();
    let mut failures = 0;
    for k in 0..n {
        let row: Vec<&CheckResult> = reports.iter().map(|r| &r.checks[k]).collect();
        let ran: Vec<&&CheckResult> = row.iter().filter(|c| c.status != Status::Skipped).collect();
        let ok = !ran.is_empty() && ran.iter().all(|c| c.pass);
        if !ok {
            failures += 1;
        }
        let observed: Vec<String> = row
            .iter()
            .map(|c| match c.status {
                Status::Skipped => "-".to_string(),
                _ => format!("{:.3e}", c.observed),
            })
            .collect();
        println!(
            "{} {} tier{} tol={:.3e} observed=[{}] {}",
            row[0].check_id,
            if ok { "PASS" } else { "FAIL" },
            row[0].tier,
            row[0].tolerance,
            observed.join(", "),
            row[0].name
        );
    }
    println!("acceptance: {} of {n} criteria passed", n - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
