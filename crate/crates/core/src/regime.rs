//! Regime classification by stabilization of the deterministic `q_n`.
//!
//! `q_n` decreases to `q = P(G_t^c)`, which is positive only for `α` in
//! `(1, 2)`. After `n_final` iterations the value is compared with the gap
//! to iterate `n_compare`: a limit that dominates the remaining movement is
//! reported as positive, anything else as near zero.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{iterate_qn_all, q0_surrogate, NumericsConfig, UniformGrid};

/// A positive limit must exceed this multiple of the stabilization gap.
pub const GAP_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSettings {
    pub t: f64,
    pub n_final: u32,
    pub n_compare: u32,
    pub picard_k: u32,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            t: 2.0,
            n_final: 20,
            n_compare: 15,
            picard_k: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimePoint {
    pub alpha: f64,
    pub t: f64,
    pub q_final: f64,
    pub q_compare: f64,
    pub gap: f64,
    /// `q_final > GAP_FACTOR * gap`.
    pub positive: bool,
    /// `α` is one of the critical values 1 and 2, where `q_n` settles
    /// slowly and the classification is not trustworthy.
    pub slow_convergence: bool,
}

pub fn is_boundary(alpha: f64) -> bool {
    alpha == 1.0 || alpha == 2.0
}

/// Iterate `q_n` from the `q_0` surrogate and classify the limit at `t`.
pub fn classify(alpha: f64, grid: &UniformGrid, settings: &SweepSettings, cfg: &NumericsConfig) -> Result<RegimePoint> {
    if settings.n_compare >= settings.n_final {
        return Err(Error::param("n_compare", "must be below n_final"));
    }
    if !(settings.t >= 0.0 && settings.t <= grid.t_max()) {
        return Err(Error::param(
            "t",
            format!("{} is outside the grid [0, {}]", settings.t, grid.t_max()),
        ));
    }
    let q0 = q0_surrogate(alpha, grid, settings.picard_k, cfg)?;
    let chain = iterate_qn_all(alpha, grid, settings.n_final, &q0, cfg)?;
    let at = |j: u32| chain[j as usize].evaluate(settings.t);
    let q_final = at(settings.n_final)?;
    let q_compare = at(settings.n_compare)?;
    let gap = (q_final - q_compare).abs();
    Ok(RegimePoint {
        alpha,
        t: settings.t,
        q_final,
        q_compare,
        gap,
        positive: q_final > GAP_FACTOR * gap,
        slow_convergence: is_boundary(alpha),
    })
}

pub fn sweep(
    alphas: &[f64],
    grid: &UniformGrid,
    settings: &SweepSettings,
    cfg: &NumericsConfig,
) -> Result<Vec<RegimePoint>> {
    alphas.iter().map(|&a| classify(a, grid, settings, cfg)).collect()
}
