//! Picard iterates `U_k` approaching `v_0(t) = P(L < t)` from above, and the
//! kernel oracle `U_1 = 1 - e^{-t}`.
//!
//! ```text
//! cargo run --release --example picard_v0
//! ```

use riccati_cascade::numerics::{picard_iterates, GridFunction, NumericsConfig, UniformGrid};

pub fn run_example(h: f64) -> riccati_cascade::Result<Vec<GridFunction>> {
    let cfg = NumericsConfig::default();
    let grid = UniformGrid::new(8.0, h)?;
    let u = picard_iterates(3.0, &grid, 8, &cfg)?;
    let err = grid
        .nodes()
        .zip(u[1].values())
        .map(|(t, v)| (v - (1.0 - (-t).exp())).abs())
        .fold(0.0, f64::max);
    println!("max |U_1 - (1 - e^-t)| = {err:.2e} at h = {h}");
    println!("\nalpha = 3");
    print!("{:>4}", "k");
    for t in [0.5, 1.0, 2.0, 4.0, 8.0] {
        print!(" {:>9}", format!("U(t={t})"));
    }
    println!();
    for (k, uk) in u.iter().enumerate() {
        print!("{k:>4}");
        for t in [0.5, 1.0, 2.0, 4.0, 8.0] {
            print!(" {:>9.5}", uk.evaluate(t)?);
        }
        println!();
    }
    Ok(u)
}

#[allow(dead_code)]
fn main() -> riccati_cascade::Result<()> {
    run_example(0.01).map(|_| ())
}
