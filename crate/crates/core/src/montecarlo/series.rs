use serde::{Deserialize, Serialize};

/// Monte Carlo estimate at one time point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatePoint {
    pub t: f64,
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
}

/// Point estimates with standard errors over a list of times.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EstimateSeries {
    pub points: Vec<EstimatePoint>,
}

impl EstimateSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn means(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.mean)
    }
}

/// Neumaier-compensated sum in slice order.
fn compensated_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Mean and standard error (sample standard deviation over `√n`).
///
/// Samples are reduced in index order with compensated sums, so the result
/// does not depend on how the samples were scheduled.
pub fn summarize(t: f64, samples: &[f64]) -> EstimatePoint {
    let n = samples.len();
    if n == 0 {
        return EstimatePoint {
            t,
            mean: f64::NAN,
            stderr: f64::NAN,
            n_samples: 0,
        };
    }
    if samples.iter().all(|&x| x == samples[0]) {
        return EstimatePoint {
            t,
            mean: samples[0],
            stderr: 0.0,
            n_samples: n as u64,
        };
    }
    let mean = compensated_sum(samples.iter().copied()) / n as f64;
    let ss = compensated_sum(samples.iter().map(|x| (x - mean) * (x - mean)));
    let var = if n > 1 { ss / (n - 1) as f64 } else { 0.0 };
    EstimatePoint {
        t,
        mean,
        stderr: (var / n as f64).sqrt(),
        n_samples: n as u64,
    }
}
