//! Monte Carlo `v_10(t)` at `α = 1.5` against the deterministic recursion,
//! both started from the Picard surrogate `U_5`.
//!
//! ```text
//! cargo run --release --example v_curve [samples]
//! ```

use riccati_cascade::io::time_points;
use riccati_cascade::montecarlo::{compare_series, estimate_v_curve, Acceptance, ComparisonReport, McConfig};
use riccati_cascade::numerics::{iterate_vn, picard_v0_settled, NumericsConfig, UniformGrid};

pub fn run_example(samples: u64) -> riccati_cascade::Result<ComparisonReport> {
    let alpha = 1.5;
    let cfg = NumericsConfig::default();
    let grid = UniformGrid::new(8.0, 0.01)?;
    let v0 = picard_v0_settled(alpha, &grid, 5, &cfg)?;
    let reference = iterate_vn(alpha, &grid, 10, &v0, &cfg)?;
    let t = time_points(8.0, 0.5)?;
    let mc = estimate_v_curve(alpha, &t, 10, &v0, &McConfig::new(7).with_samples(samples))?;
    let report = compare_series(&mc, &reference, Acceptance::default());
    println!("{:>5} {:>9} {:>9} {:>9} {:>7}", "t", "mc", "stderr", "grid", "z");
    for p in &report.points {
        println!(
            "{:>5} {:>9.5} {:>9.5} {:>9.5} {:>7.2}",
            p.t, p.mean, p.stderr, p.reference, p.z
        );
    }
    println!(
        "{:.0}% of points within |z| <= 4, median |z| {:.2}",
        100.0 * report.fraction_within,
        report.median_abs_z
    );
    Ok(report)
}

#[allow(dead_code)]
fn main() -> riccati_cascade::Result<()> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    run_example(samples).map(|_| ())
}
