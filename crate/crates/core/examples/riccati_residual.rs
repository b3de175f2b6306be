//! Residual of `v' + v = v²(αt)` for `v_n` at `α = 1.5`. It shrinks as the
//! grid is refined and as `n` grows.
//!
//! ```text
//! cargo run --release --example riccati_residual
//! ```

use riccati_cascade::numerics::{iterate_vn, picard_v0_settled, riccati_residual, NumericsConfig, UniformGrid};

pub fn run_example(steps: &[f64], depths: &[u32]) -> riccati_cascade::Result<Vec<(f64, u32, f64)>> {
    let alpha = 1.5;
    let cfg = NumericsConfig::default();
    let mut out = Vec::new();
    for &h in steps {
        let grid = UniformGrid::new(8.0, h)?;
        let v0 = picard_v0_settled(alpha, &grid, 5, &cfg)?;
        for &n in depths {
            let r = riccati_residual(&iterate_vn(alpha, &grid, n, &v0, &cfg)?, alpha)?;
            println!(
                "h = {h:<6} n = {n:<3} max |r| = {:.3e} on [0, {:.2}]",
                r.max_abs_residual,
                r.interior_end()
            );
            out.push((h, n, r.max_abs_residual));
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> riccati_cascade::Result<()> {
    run_example(&[0.04, 0.02, 0.01], &[5, 10, 20]).map(|_| ())
}
