//! Limiting `q(t) = P(G_t^c)` across `α`: positive exactly on `(1, 2)`.
//!
//! ```text
//! cargo run --release --example regime_sweep
//! ```

use riccati_cascade::numerics::{NumericsConfig, UniformGrid};
use riccati_cascade::regime::{sweep, RegimePoint, SweepSettings};

pub fn run_example(alphas: &[f64], h: f64) -> riccati_cascade::Result<Vec<RegimePoint>> {
    let grid = UniformGrid::new(8.0, h)?;
    let points = sweep(alphas, &grid, &SweepSettings::default(), &NumericsConfig::default())?;
    for p in &points {
        let bar = "*".repeat((60.0 * p.q_final).round() as usize);
        let note = if p.slow_convergence { " (boundary)" } else { "" };
        println!(
            "{:>5} {:>10.3e} {:<9} {bar}{note}",
            p.alpha,
            p.q_final,
            if p.positive { "positive" } else { "zero" }
        );
    }
    Ok(points)
}

#[allow(dead_code)]
fn main() -> riccati_cascade::Result<()> {
    let alphas: Vec<f64> = (2..=14).map(|i| i as f64 * 0.25).collect();
    run_example(&alphas, 0.01).map(|_| ())
}
