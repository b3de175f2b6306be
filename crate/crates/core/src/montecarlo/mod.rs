//! Parallel Monte Carlo estimators over the cascade samplers.
//!
//! Sample `i` always reads the substream `derive_stream(seed, i)` (offset by
//! the time-point index where points must be independent), and per-sample
//! results are reduced in index order. Outputs therefore do not depend on
//! the worker count.

mod compare;
mod histogram;
mod series;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use compare::{compare_series, Acceptance, ComparisonReport, PointComparison};
pub use histogram::{Histogram, HistogramBin, OVERFLOW_FROM};
pub use series::{summarize, EstimatePoint, EstimateSeries};

use crate::cascade::{
    sample_longest_exceeds, sample_product_indicator, sample_shortest_exceeds, sample_truncated_leaf_count,
    CascadeParams, LeafCountSample,
};
use crate::error::{Error, Result};
use crate::numerics::GridFunction;
use crate::stream::{derive_stream, ClockSource};

pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const DEFAULT_DEPTH: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: u64,
    pub depth: u32,
    pub seed: u64,
    /// Size of the worker pool. Never changes results.
    pub workers: usize,
}

impl McConfig {
    pub fn new(seed: u64) -> Self {
        McConfig {
            samples: DEFAULT_SAMPLES,
            depth: DEFAULT_DEPTH,
            seed,
            workers: 1,
        }
    }

    pub fn with_samples(self, samples: u64) -> Self {
        McConfig { samples, ..self }
    }

    pub fn with_depth(self, depth: u32) -> Self {
        McConfig { depth, ..self }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        McConfig { workers, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::param("samples", "must be positive"));
        }
        if self.workers == 0 {
            return Err(Error::param("workers", "must be positive"));
        }
        Ok(())
    }

    /// Run `f` inside a pool of `workers` threads.
    fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::param("workers", e.to_string()))?;
        Ok(pool.install(f))
    }
}

fn check_times(t_points: &[f64]) -> Result<()> {
    match t_points.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        Some(&t) => Err(Error::NegativeTime(t)),
        None => Ok(()),
    }
}

/// Monte Carlo `v_n(t)`: the mean of `X_n(t)` with `X_0 = v0`, at each `t`.
///
/// Each time point draws its own `samples` substreams.
pub fn estimate_v_curve(
    alpha: f64,
    t_points: &[f64],
    n: u32,
    v0: &GridFunction,
    cfg: &McConfig,
) -> Result<EstimateSeries> {
    cfg.validate()?;
    check_times(t_points)?;
    if !v0.is_range_bounded() {
        return Err(Error::param("v0", "must be range-bounded in [0, 1]"));
    }
    let params = CascadeParams::new(alpha, cfg.seed)?;
    let x0 = |h: f64| v0.value_at(h);
    let clocks = ClockSource::Exponential;
    let points = cfg.install(|| {
        t_points
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                let offset = k as u64 * cfg.samples;
                let draws = (0..cfg.samples)
                    .into_par_iter()
                    .map(|i| {
                        sample_product_indicator(&params, t, n, &x0, &clocks, &derive_stream(cfg.seed, offset + i))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Ok(summarize(t, &draws))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(EstimateSeries { points })
}

/// `samples` draws of `W_depth(t)` with `depth = cfg.depth`, in index order.
pub fn sample_leaf_counts(alpha: f64, t: f64, cfg: &McConfig) -> Result<Vec<LeafCountSample>> {
    cfg.validate()?;
    let params = CascadeParams::new(alpha, cfg.seed)?;
    let clocks = ClockSource::Exponential;
    cfg.install(|| {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| sample_truncated_leaf_count(&params, t, cfg.depth, &clocks, &derive_stream(cfg.seed, i)))
            .collect::<Result<Vec<_>>>()
    })?
}

/// Histogram of `samples` draws of `W_depth(t)`.
pub fn estimate_leaf_histogram(alpha: f64, t: f64, cfg: &McConfig) -> Result<Histogram> {
    Ok(Histogram::from_samples(&sample_leaf_counts(alpha, t, cfg)?))
}

/// Mean of `W_depth(t)` with its standard error.
pub fn estimate_leaf_mean(alpha: f64, t: f64, cfg: &McConfig) -> Result<EstimatePoint> {
    let counts: Vec<f64> = sample_leaf_counts(alpha, t, cfg)?
        .iter()
        .map(|s| s.count as f64)
        .collect();
    Ok(summarize(t, &counts))
}

fn indicator_series(
    alpha: f64,
    t_points: &[f64],
    depth: u32,
    cfg: &McConfig,
    event: fn(&CascadeParams, u32, f64, &ClockSource, &crate::stream::SampleStream) -> Result<bool>,
) -> Result<EstimateSeries> {
    cfg.validate()?;
    check_times(t_points)?;
    let params = CascadeParams::new(alpha, cfg.seed)?;
    if alpha <= 0.0 {
        return Err(Error::param("alpha", "path extrema need alpha > 0"));
    }
    let clocks = ClockSource::Exponential;
    // one tree per sample, shared by all time points
    let rows = cfg.install(|| {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| {
                let stream = derive_stream(cfg.seed, i);
                t_points
                    .iter()
                    .map(|&t| event(&params, depth, t, &clocks, &stream).map(|b| b as u8 as f64))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let points = t_points
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let column: Vec<f64> = rows.iter().map(|r| r[k]).collect();
            summarize(t, &column)
        })
        .collect();
    Ok(EstimateSeries { points })
}

/// Empirical `P(L_depth > t)`, a lower bound for `q_0(t) = P(L > t)`.
pub fn estimate_l_tail(alpha: f64, t_points: &[f64], depth: u32, cfg: &McConfig) -> Result<EstimateSeries> {
    indicator_series(alpha, t_points, depth, cfg, sample_longest_exceeds)
}

/// Empirical `P(S_depth > t)`, approaching the minimal solution `P(S > t)`.
pub fn estimate_s_tail(alpha: f64, t_points: &[f64], depth: u32, cfg: &McConfig) -> Result<EstimateSeries> {
    indicator_series(alpha, t_points, depth, cfg, sample_shortest_exceeds)
}
