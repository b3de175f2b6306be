use serde::{Deserialize, Serialize};

use crate::cascade::LeafCountSample;

/// Counts at or above this value share one overflow bin.
pub const OVERFLOW_FROM: u64 = 1 << 24;

/// Half-open integer bin `[lo, hi)`; `hi = None` is the overflow bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: u64,
    pub hi: Option<u64>,
    pub count: u64,
}

/// Histogram of truncated leaf counts.
///
/// Bins have unit width below [`OVERFLOW_FROM`]; only occupied bins are
/// stored, in increasing order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub bins: Vec<HistogramBin>,
    pub total: u64,
    /// Samples whose count hit the depth boundary (see
    /// [`LeafCountSample::truncated`]); they are binned at their value as well.
    pub truncated_count: u64,
    pub max_observed: u64,
}

impl Histogram {
    pub fn from_samples(samples: &[LeafCountSample]) -> Histogram {
        let mut values: Vec<u64> = samples.iter().map(|s| s.count.min(OVERFLOW_FROM)).collect();
        values.sort_unstable();
        let mut bins: Vec<HistogramBin> = Vec::new();
        for v in values {
            match bins.last_mut() {
                Some(b) if b.lo == v => b.count += 1,
                _ => bins.push(HistogramBin {
                    lo: v,
                    hi: (v < OVERFLOW_FROM).then_some(v + 1),
                    count: 1,
                }),
            }
        }
        Histogram {
            bins,
            total: samples.len() as u64,
            truncated_count: samples.iter().filter(|s| s.truncated).count() as u64,
            max_observed: samples.iter().map(|s| s.count).max().unwrap_or(0),
        }
    }

    /// Number of samples with value at least `x`. The overflow bin always
    /// counts once `x` reaches it.
    pub fn count_at_least(&self, x: u64) -> u64 {
        self.bins
            .iter()
            .filter(|b| b.lo >= x || b.hi.is_none())
            .map(|b| b.count)
            .sum()
    }

    pub fn occupied_bins(&self) -> usize {
        self.bins.len()
    }

    pub fn frequency(&self, value: u64) -> f64 {
        let c = self
            .bins
            .iter()
            .find(|b| b.lo == value && b.hi.is_some())
            .map_or(0, |b| b.count);
        c as f64 / self.total as f64
    }

    pub fn mean(&self) -> f64 {
        let s: f64 = self.bins.iter().map(|b| b.lo as f64 * b.count as f64).sum();
        s / self.total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(count: u64, truncated: bool) -> LeafCountSample {
        LeafCountSample { count, truncated }
    }

    #[test]
    fn bins_and_footer() {
        let h = Histogram::from_samples(&[s(2, false), s(1, false), s(2, true), s(7, false)]);
        assert_eq!(h.total, 4);
        assert_eq!(h.truncated_count, 1);
        assert_eq!(h.max_observed, 7);
        assert_eq!(h.occupied_bins(), 3);
        assert_eq!(h.bins.iter().map(|b| b.count).sum::<u64>(), h.total);
        assert_eq!(h.count_at_least(2), 3);
        assert_eq!(h.count_at_least(3), 1);
        assert_eq!(h.count_at_least(8), 0);
        assert_eq!(h.frequency(2), 0.5);
    }

    #[test]
    fn overflow_bin() {
        let h = Histogram::from_samples(&[s(OVERFLOW_FROM + 5, false), s(3, false)]);
        assert_eq!(
            h.bins[1],
            HistogramBin {
                lo: OVERFLOW_FROM,
                hi: None,
                count: 1
            }
        );
        assert_eq!(h.max_observed, OVERFLOW_FROM + 5);
        assert_eq!(h.count_at_least(OVERFLOW_FROM + 1), 1);
    }

    #[test]
    fn single_sample() {
        let h = Histogram::from_samples(&[s(1, false)]);
        assert_eq!(h.occupied_bins(), 1);
        assert_eq!(h.total, 1);
    }
}
