//! The decreasing sequence `q_n(t)` at `α = 1.5` and the integrability of
//! its starting point `q_0 = 1 - U_k`.
//!
//! ```text
//! cargo run --release --example q_iteration
//! ```

use riccati_cascade::numerics::{integrate_tail, iterate_qn_all, picard_v0, q0_surrogate, NumericsConfig, UniformGrid};

pub fn run_example(h: f64) -> riccati_cascade::Result<Vec<f64>> {
    let alpha = 1.5;
    let cfg = NumericsConfig::default();
    let grid = UniformGrid::new(8.0, h)?;
    let q0 = q0_surrogate(alpha, &grid, 40, &cfg)?;
    let chain = iterate_qn_all(alpha, &grid, 20, &q0, &cfg)?;
    let mut at_two = Vec::new();
    for (n, q) in chain.iter().enumerate().step_by(4) {
        let v = q.evaluate(2.0)?;
        println!("q_{n:<2}(2) = {v:.6}   q_{n:<2}(8) = {:.3e}", q.evaluate(8.0)?);
        at_two.push(v);
    }
    for t_max in [8.0, 16.0] {
        let g = UniformGrid::new(t_max, h)?;
        let q = picard_v0(alpha, &g, 8, &cfg)?.complement().with_tail(0.0)?;
        let i = integrate_tail(&q);
        println!(
            "integral of 1 - U_8 over [0, {t_max}] = {:.5} (tail value {})",
            i.finite_part, i.tail_value
        );
    }
    Ok(at_two)
}

#[allow(dead_code)]
fn main() -> riccati_cascade::Result<()> {
    run_example(0.01).map(|_| ())
}
