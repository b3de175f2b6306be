//! Integral recursions on uniform grids.
//!
//! All three recursions share one kernel,
//!
//! ```text
//! K[f](t) = ∫_0^t e^{-s} f(α (t - s)) ds,
//! ```
//!
//! applied to a pointwise transform of the previous iterate:
//!
//! | recursion | new iterate                 | start            |
//! |-----------|-----------------------------|------------------|
//! | Picard    | `U_j = K[U_{j-1}²]`         | `U_0 ≡ 1`        |
//! | v         | `v_j = 1 - K[1 - v_{j-1}²]` | given `v_0`      |
//! | q         | `q_j = K[2q_{j-1} - q_{j-1}²]` | given `q_0`    |
//!
//! The v-recursion `v_j = e^{-t} + K[v_{j-1}²]` is evaluated as
//! `1 - K[1 - v_{j-1}²]`: on the grid the free term becomes `1 - K_h[1]`,
//! which is within `h²/12` of `e^{-t}`. That keeps `v ≡ 1` an exact fixed
//! point and makes the discrete v- and q-maps conjugate under `v = 1 - q`.
//!
//! For `α > 1` the argument `α (t - s)` runs past the output grid, so
//! intermediate iterates live on a longer working grid that is cut where
//! they have settled to within `eps_tail` of their tail value.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{GridFunction, UniformGrid, DEFAULT_MAX_NODES};
use crate::error::{Error, Result};

/// Tuning shared by every recursion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericsConfig {
    /// Largest tolerated gap between an intermediate iterate and its tail
    /// value at the end of the working grid.
    pub eps_tail: f64,
    /// Node cap for working grids.
    pub max_nodes: usize,
    /// Cut the working grid once iterates have settled. When off, the full
    /// `α^{n-1} t_max` span is used or [`Error::GridTooLarge`] is returned.
    pub tail_capping: bool,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            eps_tail: 1e-6,
            max_nodes: DEFAULT_MAX_NODES,
            tail_capping: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Picard,
    V,
    Q,
}

impl Step {
    #[inline]
    fn transform(self, x: f64) -> f64 {
        match self {
            Step::Picard => x * x,
            Step::V => 1.0 - x * x,
            Step::Q => x * (2.0 - x),
        }
    }

    /// Limit of the new iterate as `t → ∞` given the old tail value.
    fn tail(self, tail: f64) -> f64 {
        let limit = match self {
            Step::Picard | Step::V => tail * tail,
            Step::Q => tail * (2.0 - tail),
        };
        limit.clamp(0.0, 1.0)
    }
}

/// `g(t_i) = ∫_0^{t_i} e^{-s} f(α (t_i - s)) ds` by the composite
/// trapezoidal rule on the nodes of `grid`.
///
/// The kernel `e^{-s}` is evaluated exactly at the nodes and `f` is read
/// through [`GridFunction::evaluate`], so values past its last node come
/// from its tail. The result has tail value `f.tail_value()` (the limit of
/// the integral as `t → ∞`) and is not range-bounded.
pub fn convolve_kernel(f: &GridFunction, alpha: f64, grid: &UniformGrid) -> Result<GridFunction> {
    check_alpha(alpha, false)?;
    let values = trapezoid_convolution(grid, |m| f.value_at(alpha * grid.node(m)));
    GridFunction::new(*grid, values, f.tail_value(), false)
}

fn trapezoid_convolution(grid: &UniformGrid, sample: impl Fn(usize) -> f64) -> Vec<f64> {
    let h = grid.step();
    let n = grid.len();
    let integrand: Vec<f64> = (0..n).map(&sample).collect();
    let kernel: Vec<f64> = (0..n).map(|j| (-grid.node(j)).exp()).collect();
    (0..n)
        .into_par_iter()
        .map(|i| {
            if i == 0 {
                return 0.0;
            }
            let interior: f64 = (1..i).map(|j| kernel[j] * integrand[i - j]).sum();
            h * (interior + 0.5 * (kernel[0] * integrand[i] + kernel[i] * integrand[0]))
        })
        .collect()
}

fn check_alpha(alpha: f64, strictly_positive: bool) -> Result<()> {
    let ok = alpha.is_finite() && if strictly_positive { alpha > 0.0 } else { alpha >= 0.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::param("alpha", format!("{alpha} is out of range")))
    }
}

/// Working grid for `n` iterations onto `grid`: the output grid itself when
/// `α <= 1`, else long enough to cover `[0, α^{n-1} t_max]` (or less when
/// capping).
fn full_working_len(alpha: f64, grid: &UniformGrid, n: u32) -> f64 {
    if alpha <= 1.0 || n <= 1 {
        return grid.len() as f64;
    }
    let span = grid.t_max() * alpha.powi(n as i32 - 1);
    (span / grid.step()).ceil() + 1.0
}

fn run_chain(
    step: Step,
    alpha: f64,
    grid: &UniformGrid,
    n: u32,
    init: &GridFunction,
    cfg: &NumericsConfig,
) -> Result<Vec<GridFunction>> {
    check_alpha(alpha, true)?;
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(init.clone());
    if n == 0 {
        return Ok(out);
    }
    let full = full_working_len(alpha, grid, n);
    let cap = cfg.max_nodes;
    if !cfg.tail_capping || full <= grid.len() as f64 {
        if full > cap as f64 {
            return Err(Error::GridTooLarge {
                needed: full.min(usize::MAX as f64) as usize,
                cap,
            });
        }
        let work = UniformGrid::from_len(grid.step(), full as usize)?;
        let chain = iterate_on(step, alpha, &work, n, init);
        out.extend(chain.iter().map(|f| f.truncate_to(grid)));
        return Ok(out);
    }

    // Double the working span until every intermediate iterate has settled
    // at its last node, or the full span / node cap is reached.
    let full = full.min(usize::MAX as f64) as usize;
    let mut len = (2 * grid.len()).min(full).min(cap.max(grid.len()));
    loop {
        let work = UniformGrid::from_len(grid.step(), len)?;
        let chain = iterate_on(step, alpha, &work, n, init);
        let settled = chain[..chain.len() - 1]
            .iter()
            .all(|f| (f.values()[len - 1] - f.tail_value()).abs() <= cfg.eps_tail);
        if settled || len >= full || len >= cap {
            out.extend(chain.iter().map(|f| f.truncate_to(grid)));
            return Ok(out);
        }
        len = (2 * len).min(full).min(cap);
    }
}

/// Iterates `1..=n` on `work`.
fn iterate_on(step: Step, alpha: f64, work: &UniformGrid, n: u32, init: &GridFunction) -> Vec<GridFunction> {
    let mut chain: Vec<GridFunction> = Vec::with_capacity(n as usize);
    for j in 0..n as usize {
        let prev = if j == 0 { init } else { &chain[j - 1] };
        let conv = trapezoid_convolution(work, |m| step.transform(prev.value_at(alpha * work.node(m))));
        let values = conv
            .into_iter()
            .map(|g| {
                let v = match step {
                    Step::V => 1.0 - g,
                    Step::Picard | Step::Q => g,
                };
                v.clamp(0.0, 1.0)
            })
            .collect();
        let next = GridFunction::new(*work, values, step.tail(prev.tail_value()), true)
            .expect("clamped iterate is range-bounded");
        chain.push(next);
    }
    chain
}

/// Picard iterates `U_0 ≡ 1, U_1, ..., U_k` on `grid`.
pub fn picard_iterates(alpha: f64, grid: &UniformGrid, k: u32, cfg: &NumericsConfig) -> Result<Vec<GridFunction>> {
    let one = GridFunction::constant(*grid, 1.0)?;
    run_chain(Step::Picard, alpha, grid, k, &one, cfg)
}

/// `U_k`, the Picard surrogate for `v_0(t) = P(L < t)`; nonincreasing in
/// `k` and approaching the maximal solution from above. Tail value 1.
pub fn picard_v0(alpha: f64, grid: &UniformGrid, k: u32, cfg: &NumericsConfig) -> Result<GridFunction> {
    Ok(picard_iterates(alpha, grid, k, cfg)?.pop().expect("chain holds U_0"))
}

fn require_bounded(f: &GridFunction, name: &'static str) -> Result<()> {
    if f.is_range_bounded() {
        Ok(())
    } else {
        Err(Error::param(name, "must be range-bounded in [0, 1]"))
    }
}

/// `v_0, ..., v_n` with `v_j(t) = e^{-t} + ∫_0^t e^{-s} v_{j-1}²(α(t-s)) ds`.
pub fn iterate_vn_all(
    alpha: f64,
    grid: &UniformGrid,
    n: u32,
    v0: &GridFunction,
    cfg: &NumericsConfig,
) -> Result<Vec<GridFunction>> {
    require_bounded(v0, "v0")?;
    run_chain(Step::V, alpha, grid, n, v0, cfg)
}

/// `v_n` from `v0`; `n = 0` returns `v0` unchanged.
pub fn iterate_vn(
    alpha: f64,
    grid: &UniformGrid,
    n: u32,
    v0: &GridFunction,
    cfg: &NumericsConfig,
) -> Result<GridFunction> {
    Ok(iterate_vn_all(alpha, grid, n, v0, cfg)?.pop().expect("chain holds v_0"))
}

/// `q_0, ..., q_n` with `q_j(t) = ∫_0^t e^{-(t-s)} (2q_{j-1} - q_{j-1}²)(αs) ds`.
pub fn iterate_qn_all(
    alpha: f64,
    grid: &UniformGrid,
    n: u32,
    q0: &GridFunction,
    cfg: &NumericsConfig,
) -> Result<Vec<GridFunction>> {
    require_bounded(q0, "q0")?;
    run_chain(Step::Q, alpha, grid, n, q0, cfg)
}

/// `q_n` from `q0`; `n = 0` returns `q0` unchanged.
pub fn iterate_qn(
    alpha: f64,
    grid: &UniformGrid,
    n: u32,
    q0: &GridFunction,
    cfg: &NumericsConfig,
) -> Result<GridFunction> {
    Ok(iterate_qn_all(alpha, grid, n, q0, cfg)?.pop().expect("chain holds q_0"))
}

/// `U_k` on `grid` extended past `t_max` to the first node where it is
/// within `eps_tail` of its tail value 1, so that iterating from it does
/// not lean on the flat tail while `1 - U_k` is still sizeable. For `α <= 1`
/// no extension is needed and the result equals [`picard_v0`].
pub fn picard_v0_settled(alpha: f64, grid: &UniformGrid, k: u32, cfg: &NumericsConfig) -> Result<GridFunction> {
    check_alpha(alpha, true)?;
    if alpha <= 1.0 || k == 0 {
        return picard_v0(alpha, grid, k, cfg);
    }
    let mut len = grid.len();
    loop {
        let span = UniformGrid::from_len(grid.step(), len)?;
        let u = picard_v0(alpha, &span, k, cfg)?;
        if let Some(cut) = u.values().iter().position(|&x| 1.0 - x <= cfg.eps_tail) {
            let keep = UniformGrid::from_len(grid.step(), (cut + 1).max(grid.len()))?;
            return Ok(u.truncate_to(&keep));
        }
        if len >= cfg.max_nodes {
            return Ok(u);
        }
        len = (2 * len).min(cfg.max_nodes);
    }
}

/// Surrogate for `q_0(t) = P(L > t)`: identically 1 when `α <= 1` (no
/// hyperexplosion), otherwise `1 - U_k` from [`picard_v0_settled`], tail 0.
pub fn q0_surrogate(alpha: f64, grid: &UniformGrid, k: u32, cfg: &NumericsConfig) -> Result<GridFunction> {
    check_alpha(alpha, true)?;
    if alpha <= 1.0 {
        GridFunction::constant(*grid, 1.0)
    } else {
        Ok(picard_v0_settled(alpha, grid, k, cfg)?.complement())
    }
}
