use serde::Serialize;

use super::series::EstimateSeries;
use crate::numerics::GridFunction;

/// Agreement criterion for [`compare_series`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Acceptance {
    /// Largest tolerated `|z|`.
    pub z_threshold: f64,
    /// Smallest tolerated fraction of points with `|z| <= z_threshold`.
    pub min_fraction: f64,
}

impl Default for Acceptance {
    fn default() -> Self {
        Acceptance {
            z_threshold: 4.0,
            min_fraction: 0.95,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointComparison {
    pub t: f64,
    pub mean: f64,
    pub stderr: f64,
    pub reference: f64,
    /// `(mean - reference) / max(stderr, 1 / n_samples)`.
    pub z: f64,
    /// `t` lies beyond the last node of the reference grid.
    pub from_tail: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub points: Vec<PointComparison>,
    pub fraction_within: f64,
    pub median_abs_z: f64,
    pub max_abs_z: f64,
    pub criterion: Acceptance,
    pub passed: bool,
}

/// z-scores of a Monte Carlo series against a deterministic reference.
///
/// The standard error is floored at `1 / n_samples`: when the reference is
/// within about `1 / n` of 0 or 1, most runs see no sample off the bulk
/// value and the sample standard error collapses towards zero, although the
/// estimate cannot resolve differences that small.
pub fn compare_series(mc: &EstimateSeries, reference: &GridFunction, criterion: Acceptance) -> ComparisonReport {
    let t_max = reference.grid().t_max();
    let points: Vec<PointComparison> = mc
        .points
        .iter()
        .map(|p| {
            let r = reference.value_at(p.t.max(0.0));
            let resolution = 1.0 / p.n_samples as f64;
            let z = if p.mean == r {
                0.0
            } else {
                (p.mean - r) / p.stderr.max(resolution)
            };
            PointComparison {
                t: p.t,
                mean: p.mean,
                stderr: p.stderr,
                reference: r,
                z,
                from_tail: p.t > t_max,
            }
        })
        .collect();
    let mut abs_z: Vec<f64> = points.iter().map(|p| p.z.abs()).collect();
    abs_z.sort_by(f64::total_cmp);
    let within = abs_z.iter().filter(|&&z| z <= criterion.z_threshold).count();
    let fraction_within = if points.is_empty() {
        1.0
    } else {
        within as f64 / points.len() as f64
    };
    let median_abs_z = abs_z.get(abs_z.len() / 2).copied().unwrap_or(0.0);
    let max_abs_z = abs_z.last().copied().unwrap_or(0.0);
    ComparisonReport {
        passed: fraction_within >= criterion.min_fraction,
        points,
        fraction_within,
        median_abs_z,
        max_abs_z,
        criterion,
    }
}
