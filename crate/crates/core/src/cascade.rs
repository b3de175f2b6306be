//! Samplers for the α-Riccati cascade.
//!
//! The cascade is the infinite binary tree whose vertex `v` at depth `j`
//! carries the scaled clock `α^{-j} T_v`. Every sampler walks the tree
//! depth-first and reads clocks from a [`SampleStream`] by vertex label, so
//! nothing is materialised and memory stays proportional to the depth.

use crate::error::{Error, Result};
use crate::stream::{ClockSource, SampleStream, Vertex, MAX_DEPTH};

/// Branching scale and seed shared by all samplers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeParams {
    alpha: f64,
    seed: u64,
}

impl CascadeParams {
    pub fn new(alpha: f64, seed: u64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::param(
                "alpha",
                format!("{alpha} is not a finite nonnegative number"),
            ));
        }
        Ok(CascadeParams { alpha, seed })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// One draw of the truncated leaf count `W_n(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeafCountSample {
    pub count: u64,
    /// Some path reached depth `n` without crossing the horizon, so the
    /// untruncated `W(t)` may be larger than `count`.
    pub truncated: bool,
}

/// Generation-`depth` partial shortest and longest path sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathExtrema {
    pub s_partial: f64,
    pub l_partial: f64,
    pub depth: u32,
}

/// Whether the generation-`depth` path extrema exceed a horizon `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathCrossing {
    /// `S_depth > t`
    pub shortest_exceeds: bool,
    /// `L_depth > t`
    pub longest_exceeds: bool,
}

fn check_depth(depth: u32) -> Result<()> {
    if depth > MAX_DEPTH {
        Err(Error::DepthOverflow { depth, max: MAX_DEPTH })
    } else {
        Ok(())
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        Err(Error::NegativeTime(t))
    } else if t.is_infinite() {
        Err(Error::param("t", "must be finite"))
    } else {
        Ok(())
    }
}

/// Sample `W_depth(t)`, the number of `t`-leaves of height at most `depth`.
///
/// A vertex with horizon `h` is a leaf when its clock exceeds `h`; otherwise
/// both children inherit the horizon `α (h - T)`. A depth-`depth` vertex that
/// is not a leaf contributes nothing and sets the truncation flag.
pub fn sample_truncated_leaf_count(
    params: &CascadeParams,
    t: f64,
    depth: u32,
    clocks: &ClockSource,
    stream: &SampleStream,
) -> Result<LeafCountSample> {
    check_time(t)?;
    check_depth(depth)?;
    let walker = Walker {
        alpha: params.alpha,
        clocks,
        stream,
    };
    let (count, truncated) = walker.leaf_count(Vertex::ROOT, t, depth);
    Ok(LeafCountSample { count, truncated })
}

/// Sample the product-indicator variable `X_n(t)`.
///
/// `X_0 = x0`, and for `n >= 1`, `X_n(t)` is 1 when the root clock exceeds
/// `t` and otherwise the product of two independent copies of `X_{n-1}`
/// evaluated at `α (t - T)`. Its mean is `v_n(t)` when `x0 = v_0`.
pub fn sample_product_indicator(
    params: &CascadeParams,
    t: f64,
    n: u32,
    x0: &dyn Fn(f64) -> f64,
    clocks: &ClockSource,
    stream: &SampleStream,
) -> Result<f64> {
    check_time(t)?;
    check_depth(n)?;
    let walker = Walker {
        alpha: params.alpha,
        clocks,
        stream,
    };
    walker.product(Vertex::ROOT, t, n, x0)
}

/// Exact `(S_depth, L_depth)`: the minimum and maximum over all `2^depth`
/// root-to-generation-`depth` paths of `Σ_j α^{-j} T_{v|j}`.
///
/// Branch-and-bound over a depth-first walk. The minimum prunes subtrees
/// whose partial sum already reaches the best path found; the maximum prunes
/// with the deterministic clock bound [`ClockSource::max_clock`]. For
/// `α <= 1` that bound is weak and the maximum visits all `2^depth` paths.
pub fn sample_path_extrema(
    params: &CascadeParams,
    depth: u32,
    clocks: &ClockSource,
    stream: &SampleStream,
) -> Result<PathExtrema> {
    let search = PathSearch::new(params, depth, clocks, stream)?;
    let root = search.clock(Vertex::ROOT);
    let mut best_min = f64::INFINITY;
    search.min_dfs(Vertex::ROOT, 0, root, &mut best_min);
    let mut best_max = f64::NEG_INFINITY;
    search.max_dfs(Vertex::ROOT, 0, root, &mut best_max);
    Ok(PathExtrema {
        s_partial: best_min,
        l_partial: best_max,
        depth,
    })
}

/// `S_depth > t`, decided without computing `S_depth`.
pub fn sample_shortest_exceeds(
    params: &CascadeParams,
    depth: u32,
    t: f64,
    clocks: &ClockSource,
    stream: &SampleStream,
) -> Result<bool> {
    check_time(t)?;
    let search = PathSearch::new(params, depth, clocks, stream)?;
    let root = search.clock(Vertex::ROOT);
    Ok(!search.reaches_depth_within(Vertex::ROOT, 0, root, t))
}

/// `L_depth > t`, decided without computing `L_depth`.
pub fn sample_longest_exceeds(
    params: &CascadeParams,
    depth: u32,
    t: f64,
    clocks: &ClockSource,
    stream: &SampleStream,
) -> Result<bool> {
    check_time(t)?;
    let search = PathSearch::new(params, depth, clocks, stream)?;
    let root = search.clock(Vertex::ROOT);
    Ok(search.exceeds_somewhere(Vertex::ROOT, 0, root, t))
}

/// Decide `S_depth > t` and `L_depth > t` without computing the extrema.
///
/// Agrees exactly with comparing [`sample_path_extrema`] against `t`, but
/// stops as soon as a witness path is found, which keeps deep trees
/// (depth 30 and beyond) tractable.
pub fn sample_path_crossing(
    params: &CascadeParams,
    depth: u32,
    t: f64,
    clocks: &ClockSource,
    stream: &SampleStream,
) -> Result<PathCrossing> {
    check_time(t)?;
    let search = PathSearch::new(params, depth, clocks, stream)?;
    let root = search.clock(Vertex::ROOT);
    Ok(PathCrossing {
        shortest_exceeds: !search.reaches_depth_within(Vertex::ROOT, 0, root, t),
        longest_exceeds: search.exceeds_somewhere(Vertex::ROOT, 0, root, t),
    })
}

struct Walker<'a> {
    alpha: f64,
    clocks: &'a ClockSource,
    stream: &'a SampleStream,
}

impl Walker<'_> {
    fn leaf_count(&self, v: Vertex, horizon: f64, remaining: u32) -> (u64, bool) {
        // clocks are strictly positive, so an empty horizon is always crossed
        if horizon == 0.0 {
            return (1, false);
        }
        let clock = self.clocks.clock(self.stream, v);
        if clock > horizon {
            return (1, false);
        }
        if remaining == 0 {
            return (0, true);
        }
        let next = self.alpha * (horizon - clock);
        let [a, b] = v.children();
        let (ca, ta) = self.leaf_count(a, next, remaining - 1);
        let (cb, tb) = self.leaf_count(b, next, remaining - 1);
        (ca + cb, ta || tb)
    }

    fn product(&self, v: Vertex, horizon: f64, remaining: u32, x0: &dyn Fn(f64) -> f64) -> Result<f64> {
        if remaining == 0 {
            let x = x0(horizon);
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::RangeViolation { t: horizon, value: x });
            }
            return Ok(x);
        }
        if horizon == 0.0 {
            return Ok(1.0);
        }
        let clock = self.clocks.clock(self.stream, v);
        if clock > horizon {
            return Ok(1.0);
        }
        let next = self.alpha * (horizon - clock);
        let [a, b] = v.children();
        let left = self.product(a, next, remaining - 1, x0)?;
        if left == 0.0 {
            return Ok(0.0);
        }
        Ok(left * self.product(b, next, remaining - 1, x0)?)
    }
}

struct PathSearch<'a> {
    depth: u32,
    /// `α^{-j}` for `j = 0..=depth`
    scale: Vec<f64>,
    /// `max_clock * Σ_{j > d} α^{-j}` for `d = 0..=depth`
    rest_bound: Vec<f64>,
    clocks: &'a ClockSource,
    stream: &'a SampleStream,
}

impl<'a> PathSearch<'a> {
    fn new(params: &CascadeParams, depth: u32, clocks: &'a ClockSource, stream: &'a SampleStream) -> Result<Self> {
        check_depth(depth)?;
        if params.alpha <= 0.0 {
            return Err(Error::param("alpha", "path extrema need alpha > 0"));
        }
        let scale: Vec<f64> = (0..=depth as i32).map(|j| params.alpha.powi(-j)).collect();
        let mut rest_bound = vec![0.0; depth as usize + 1];
        for d in (0..depth as usize).rev() {
            rest_bound[d] = rest_bound[d + 1] + clocks.max_clock() * scale[d + 1];
        }
        Ok(PathSearch {
            depth,
            scale,
            rest_bound,
            clocks,
            stream,
        })
    }

    #[inline]
    fn clock(&self, v: Vertex) -> f64 {
        self.clocks.clock(self.stream, v)
    }

    /// Children with their partial sums, smaller sum first.
    #[inline]
    fn children(&self, v: Vertex, d: u32, partial: f64) -> [(Vertex, f64); 2] {
        let s = self.scale[d as usize + 1];
        let [a, b] = v.children();
        let pa = partial + s * self.clock(a);
        let pb = partial + s * self.clock(b);
        if pa <= pb {
            [(a, pa), (b, pb)]
        } else {
            [(b, pb), (a, pa)]
        }
    }

    fn min_dfs(&self, v: Vertex, d: u32, partial: f64, best: &mut f64) {
        if partial >= *best {
            return;
        }
        if d == self.depth {
            *best = partial;
            return;
        }
        for (c, p) in self.children(v, d, partial) {
            self.min_dfs(c, d + 1, p, best);
        }
    }

    fn max_dfs(&self, v: Vertex, d: u32, partial: f64, best: &mut f64) {
        if d == self.depth {
            if partial > *best {
                *best = partial;
            }
            return;
        }
        if partial + self.rest_bound[d as usize] <= *best {
            return;
        }
        let [lo, hi] = self.children(v, d, partial);
        self.max_dfs(hi.0, d + 1, hi.1, best);
        self.max_dfs(lo.0, d + 1, lo.1, best);
    }

    /// Is there a generation-`depth` descendant with path sum `<= t`?
    fn reaches_depth_within(&self, v: Vertex, d: u32, partial: f64, t: f64) -> bool {
        if partial > t {
            return false;
        }
        if d == self.depth {
            return true;
        }
        self.children(v, d, partial)
            .into_iter()
            .any(|(c, p)| self.reaches_depth_within(c, d + 1, p, t))
    }

    /// Is there a descendant (within `depth`) whose path sum exceeds `t`?
    fn exceeds_somewhere(&self, v: Vertex, d: u32, partial: f64, t: f64) -> bool {
        if partial > t {
            return true;
        }
        if d == self.depth || partial + self.rest_bound[d as usize] <= t {
            return false;
        }
        let [lo, hi] = self.children(v, d, partial);
        self.exceeds_somewhere(hi.0, d + 1, hi.1, t) || self.exceeds_somewhere(lo.0, d + 1, lo.1, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::derive_stream;

    fn params(alpha: f64) -> CascadeParams {
        CascadeParams::new(alpha, 7).unwrap()
    }

    /// Plain enumeration of every generation-`depth` path sum.
    fn all_path_sums(alpha: f64, depth: u32, clocks: &ClockSource, s: &SampleStream) -> Vec<f64> {
        let mut out = Vec::new();
        let mut stack = vec![(Vertex::ROOT, 0u32, clocks.clock(s, Vertex::ROOT))];
        while let Some((v, d, p)) = stack.pop() {
            if d == depth {
                out.push(p);
                continue;
            }
            // same association order as the search so sums compare exactly
            for c in v.children() {
                stack.push((c, d + 1, p + alpha.powi(-(d as i32 + 1)) * clocks.clock(s, c)));
            }
        }
        out
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(CascadeParams::new(-0.1, 0).is_err());
        assert!(CascadeParams::new(f64::NAN, 0).is_err());
        let s = derive_stream(0, 0);
        let c = ClockSource::Exponential;
        assert!(matches!(
            sample_truncated_leaf_count(&params(1.0), -1.0, 3, &c, &s),
            Err(Error::NegativeTime(_))
        ));
        assert!(matches!(
            sample_truncated_leaf_count(&params(1.0), 1.0, 64, &c, &s),
            Err(Error::DepthOverflow { .. })
        ));
        assert!(sample_path_extrema(&params(0.0), 3, &c, &s).is_err());
        assert!(sample_path_extrema(&params(2.0), 64, &c, &s).is_err());
    }

    #[test]
    fn zero_horizon_is_a_single_leaf() {
        for alpha in [0.0, 0.66, 1.5, 3.0] {
            for idx in 0..20 {
                let s = derive_stream(3, idx);
                let w = sample_truncated_leaf_count(&params(alpha), 0.0, 10, &ClockSource::Exponential, &s).unwrap();
                assert_eq!(
                    w,
                    LeafCountSample {
                        count: 1,
                        truncated: false
                    }
                );
            }
        }
    }

    #[test]
    fn constant_clock_tree_has_four_leaves() {
        let c = ClockSource::constant(1.0).unwrap();
        let s = derive_stream(0, 0);
        let w = sample_truncated_leaf_count(&params(1.5), 2.0, 10, &c, &s).unwrap();
        assert_eq!(
            w,
            LeafCountSample {
                count: 4,
                truncated: false
            }
        );
        // depth 1 cuts the tree before the grandchildren
        let w = sample_truncated_leaf_count(&params(1.5), 2.0, 1, &c, &s).unwrap();
        assert_eq!(
            w,
            LeafCountSample {
                count: 0,
                truncated: true
            }
        );
    }

    #[test]
    fn depth_zero_base_case() {
        let c = ClockSource::constant(1.0).unwrap();
        let s = derive_stream(0, 0);
        let below = sample_truncated_leaf_count(&params(2.0), 0.5, 0, &c, &s).unwrap();
        assert_eq!(
            below,
            LeafCountSample {
                count: 1,
                truncated: false
            }
        );
        let above = sample_truncated_leaf_count(&params(2.0), 1.5, 0, &c, &s).unwrap();
        assert_eq!(
            above,
            LeafCountSample {
                count: 0,
                truncated: true
            }
        );
    }

    #[test]
    fn alpha_zero_one_step_frequency() {
        let n = 10_000;
        let twos = (0..n)
            .map(|i| {
                let w =
                    sample_truncated_leaf_count(&params(0.0), 2.0, 10, &ClockSource::Exponential, &derive_stream(5, i))
                        .unwrap();
                assert!(w.count == 1 || w.count == 2);
                assert!(!w.truncated);
                (w.count == 2) as u32
            })
            .sum::<u32>();
        let p = 1.0 - (-2.0f64).exp();
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        let freq = twos as f64 / n as f64;
        assert!((freq - p).abs() < 3.0 * sigma, "freq {freq} vs {p}");
    }

    #[test]
    fn leaf_count_bounded_and_untruncated_nonempty() {
        for idx in 0..500 {
            let s = derive_stream(9, idx);
            for depth in [0, 3, 8] {
                let w = sample_truncated_leaf_count(&params(1.5), 2.0, depth, &ClockSource::Exponential, &s).unwrap();
                assert!(w.count <= 1 << depth);
                if !w.truncated {
                    assert!(w.count >= 1);
                }
            }
        }
    }

    #[test]
    fn extrema_single_path_and_geometric_sum() {
        let s = derive_stream(1, 2);
        let e = sample_path_extrema(&params(1.3), 0, &ClockSource::Exponential, &s).unwrap();
        let root = ClockSource::Exponential.clock(&s, Vertex::ROOT);
        assert_eq!((e.s_partial, e.l_partial), (root, root));

        let c = ClockSource::constant(1.0).unwrap();
        let e = sample_path_extrema(&params(2.0), 2, &c, &s).unwrap();
        assert_eq!(e.s_partial, 1.75);
        assert_eq!(e.l_partial, 1.75);
    }

    #[test]
    fn extrema_match_enumeration() {
        for alpha in [0.66, 1.0, 1.5, 3.0] {
            for idx in 0..40 {
                let s = derive_stream(21, idx);
                let depth = 9;
                let sums = all_path_sums(alpha, depth, &ClockSource::Exponential, &s);
                let lo = sums.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let e = sample_path_extrema(&params(alpha), depth, &ClockSource::Exponential, &s).unwrap();
                assert_eq!(e.s_partial, lo);
                assert_eq!(e.l_partial, hi);
            }
        }
    }

    #[test]
    fn crossing_agrees_with_extrema() {
        for alpha in [0.66, 1.5, 3.0] {
            for idx in 0..60 {
                let s = derive_stream(4, idx);
                let e = sample_path_extrema(&params(alpha), 10, &ClockSource::Exponential, &s).unwrap();
                for t in [0.5, 1.0, 2.0, 3.0, 5.0, e.s_partial, e.l_partial] {
                    let c = sample_path_crossing(&params(alpha), 10, t, &ClockSource::Exponential, &s).unwrap();
                    assert_eq!(c.shortest_exceeds, e.s_partial > t, "alpha {alpha} t {t}");
                    assert_eq!(c.longest_exceeds, e.l_partial > t, "alpha {alpha} t {t}");
                }
            }
        }
    }

    #[test]
    fn product_indicator_fixed_points() {
        let s = derive_stream(2, 0);
        let one = |_: f64| 1.0;
        for n in 0..6 {
            for t in [0.0, 0.5, 2.0, 7.0] {
                let x = sample_product_indicator(&params(1.5), t, n, &one, &ClockSource::Exponential, &s).unwrap();
                assert_eq!(x, 1.0);
            }
        }
        let zero = |_: f64| 0.0;
        for n in 1..6 {
            let x = sample_product_indicator(&params(1.5), 0.0, n, &zero, &ClockSource::Exponential, &s).unwrap();
            assert_eq!(x, 1.0);
        }
    }

    #[test]
    fn product_indicator_one_step_mean() {
        let n = 10_000;
        let zero = |_: f64| 0.0;
        let hits: f64 = (0..n)
            .map(|i| {
                sample_product_indicator(
                    &params(1.5),
                    2.0,
                    1,
                    &zero,
                    &ClockSource::Exponential,
                    &derive_stream(8, i),
                )
                .unwrap()
            })
            .sum();
        let p = (-2.0f64).exp();
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits / n as f64 - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn product_indicator_rejects_out_of_range_x0() {
        let bad = |_: f64| 1.5;
        let err = (0..50).find_map(|i| {
            sample_product_indicator(
                &params(1.5),
                2.0,
                1,
                &bad,
                &ClockSource::Exponential,
                &derive_stream(1, i),
            )
            .err()
        });
        assert!(matches!(err, Some(Error::RangeViolation { .. })));
    }
}
