//! Shortest and longest path tails `P(S_30 > t)` and `P(L_30 > t)` at
//! `α = 1.5`, set against `v_10(t)`: the three solutions are ordered
//! `P(S > t) < v(t) < 1`.
//!
//! ```text
//! cargo run --release --example path_tails [samples]
//! ```

use riccati_cascade::montecarlo::{estimate_l_tail, estimate_s_tail, estimate_v_curve, EstimateSeries, McConfig};
use riccati_cascade::numerics::{picard_v0_settled, NumericsConfig, UniformGrid};

pub fn run_example(samples: u64) -> riccati_cascade::Result<(EstimateSeries, EstimateSeries)> {
    let alpha = 1.5;
    let t = [1.0, 2.0, 4.0, 6.0, 8.0];
    let mc = McConfig::new(11).with_samples(samples);
    let s = estimate_s_tail(alpha, &t, 30, &mc)?;
    let l = estimate_l_tail(alpha, &t, 30, &mc)?;
    let v0 = picard_v0_settled(alpha, &UniformGrid::new(8.0, 0.01)?, 5, &NumericsConfig::default())?;
    let v = estimate_v_curve(alpha, &t, 10, &v0, &mc)?;
    println!(
        "{:>4} {:>16} {:>16} {:>16}",
        "t", "P(S_30 > t)", "v_10(t)", "P(L_30 > t)"
    );
    for ((ps, pv), pl) in s.points.iter().zip(&v.points).zip(&l.points) {
        println!(
            "{:>4} {:>8.4} ±{:.4} {:>8.4} ±{:.4} {:>8.4} ±{:.4}",
            ps.t, ps.mean, ps.stderr, pv.mean, pv.stderr, pl.mean, pl.stderr
        );
    }
    Ok((s, l))
}

#[allow(dead_code)]
fn main() -> riccati_cascade::Result<()> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    run_example(samples).map(|_| ())
}
