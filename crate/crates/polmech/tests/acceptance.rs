//! Acceptance criteria 1–11, one PASS/FAIL line each followed by the
//! individual checks. Exits nonzero if any criterion fails.

use std::process::ExitCode;

use polmech::acceptance::{run_all, AcceptanceConfig};

fn main() -> ExitCode {
    let outcomes = run_all(&AcceptanceConfig::default());
    for o in &outcomes {
        println!("{o}");
    }
    println!();
    for o in &outcomes {
        println!("{} criterion {}", if o.passed() { "PASS" } else { "FAIL" }, o.id);
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
