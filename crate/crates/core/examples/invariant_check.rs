//! Runs the invariant suite that backs the `check` subcommand.
//!
//! ```text
//! cargo run --release --example invariant_check [alpha]
//! ```

use riccati_cascade::checks::{run_suite, CheckReport, CheckSettings};

pub fn run_example(settings: &CheckSettings) -> riccati_cascade::Result<CheckReport> {
    let report = run_suite(settings)?;
    for o in &report.outcomes {
        println!("{:<8} {:<26} {}", format!("{:?}", o.status), o.name, o.detail);
    }
    println!("all checks passed: {}", report.passed);
    Ok(report)
}

#[allow(dead_code)]
fn main() -> riccati_cascade::Result<()> {
    let alpha = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.5);
    let report = run_example(&CheckSettings::new(alpha, 1))?;
    std::process::exit(if report.passed { 0 } else { 1 });
}
