//! Runs every acceptance check and prints one PASS/FAIL line each; exits nonzero on any failure.

use std::process::ExitCode;

use bjcalc::verify::{run_all, VerifyConfig};

fn main() -> ExitCode {
    let reports = run_all(&VerifyConfig::default());
    for r in &reports {
        println!("{}", r.line());
    }
    let failed: Vec<u32> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("acceptance: {}/{} passed", reports.len() - failed.len(), reports.len());
    if reports.len() != 11 || !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
