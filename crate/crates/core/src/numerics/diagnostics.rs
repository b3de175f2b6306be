use serde::Serialize;

use super::grid::{GridFunction, UniformGrid};
use super::recursion::{iterate_qn, iterate_vn, NumericsConfig};
use crate::error::{Error, Result};

/// Pointwise residual of `v'(t) + v(t) - v²(αt)` on the nodes of `v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub step: f64,
    pub alpha: f64,
    pub residuals: Vec<f64>,
    /// Nodes `0..interior_len` have `α t_i` inside the grid; the rest read
    /// `v(αt)` from the tail value.
    pub interior_len: usize,
    pub max_abs_residual: f64,
}

impl ResidualReport {
    /// Largest `t` whose residual is counted in `max_abs_residual`.
    pub fn interior_end(&self) -> f64 {
        self.interior_len.saturating_sub(1) as f64 * self.step
    }
}

/// Residual of the α-Riccati equation for a grid function, with a
/// second-order central difference for `v'` (second-order one-sided
/// stencils at the two ends).
pub fn riccati_residual(v: &GridFunction, alpha: f64) -> Result<ResidualReport> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("{alpha} is out of range")));
    }
    let grid = v.grid();
    let n = grid.len();
    if n < 3 {
        return Err(Error::param("v", "residual needs at least three nodes"));
    }
    let h = grid.step();
    let y = v.values();
    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let dv = if i == 0 {
                (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h)
            } else if i == n - 1 {
                (3.0 * y[i] - 4.0 * y[i - 1] + y[i - 2]) / (2.0 * h)
            } else {
                (y[i + 1] - y[i - 1]) / (2.0 * h)
            };
            let advanced = v.value_at(alpha * grid.node(i));
            dv + y[i] - advanced * advanced
        })
        .collect();
    let t_max = grid.t_max();
    let interior_len = (0..n)
        .take_while(|&i| alpha * grid.node(i) <= t_max * (1.0 + 1e-12))
        .count();
    let max_abs_residual = residuals[..interior_len].iter().fold(0.0, |m: f64, r| m.max(r.abs()));
    Ok(ResidualReport {
        step: h,
        alpha,
        residuals,
        interior_len,
        max_abs_residual,
    })
}

/// Trapezoidal integral over the grid, with the flat tail reported apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailIntegral {
    /// `∫_0^{t_max} f`
    pub finite_part: f64,
    pub tail_value: f64,
    /// The flat tail is nonzero, so the integral over `(0, ∞)` diverges.
    pub tail_diverges: bool,
}

pub fn integrate_tail(f: &GridFunction) -> TailIntegral {
    let y = f.values();
    let h = f.grid().step();
    let n = y.len();
    let interior: f64 = y[1..n - 1].iter().sum();
    TailIntegral {
        finite_part: h * (interior + 0.5 * (y[0] + y[n - 1])),
        tail_value: f.tail_value(),
        tail_diverges: f.tail_value() != 0.0,
    }
}

/// `max_i |v_n(t_i) - (1 - q_n(t_i))|` with `q_0 = 1 - v_0`.
///
/// The discrete v- and q-steps are conjugate under `v = 1 - q`, so the
/// deviation only collects rounding and the clamping to `[0, 1]`.
pub fn check_identity_v_q(
    alpha: f64,
    grid: &UniformGrid,
    n: u32,
    v0: &GridFunction,
    cfg: &NumericsConfig,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "identity check needs n >= 1"));
    }
    let v = iterate_vn(alpha, grid, n, v0, cfg)?;
    let q = iterate_qn(alpha, grid, n, &v0.complement(), cfg)?;
    Ok(v.values()
        .iter()
        .zip(q.values())
        .map(|(a, b)| (a - (1.0 - b)).abs())
        .fold(0.0, f64::max))
}
