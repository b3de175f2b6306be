use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of nodes in any grid, including the expanded
/// working grids of the recursions.
pub const DEFAULT_MAX_NODES: usize = 200_000;

/// Nodes `t_i = i * step` for `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    step: f64,
    len: usize,
}

impl UniformGrid {
    /// Grid covering `[0, t_max]` with `ceil(t_max / step) + 1` nodes.
    pub fn new(t_max: f64, step: f64) -> Result<Self> {
        Self::with_cap(t_max, step, DEFAULT_MAX_NODES)
    }

    pub fn with_cap(t_max: f64, step: f64, max_nodes: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::param("step", format!("{step} is not a positive finite number")));
        }
        if !(t_max.is_finite() && t_max >= step) {
            return Err(Error::param(
                "t_max",
                format!("{t_max} must be finite and at least the step {step}"),
            ));
        }
        // absorb the rounding in e.g. 8.0 / 0.01 = 799.9999999999999
        let ratio = t_max / step;
        let intervals = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) {
            ratio.round()
        } else {
            ratio.ceil()
        };
        let len = intervals as usize + 1;
        if len > max_nodes {
            return Err(Error::GridTooLarge {
                needed: len,
                cap: max_nodes,
            });
        }
        Ok(UniformGrid { step, len })
    }

    /// Grid with an explicit node count (at least 2).
    pub fn from_len(step: f64, len: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::param("step", format!("{step} is not a positive finite number")));
        }
        if len < 2 {
            return Err(Error::param("len", "a grid needs at least two nodes"));
        }
        Ok(UniformGrid { step, len })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Last node.
    pub fn t_max(&self) -> f64 {
        self.node(self.len - 1)
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.node(i))
    }
}

/// Sidecar metadata written next to a serialized [`GridFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub t_max: f64,
    pub step: f64,
    pub tail_value: f64,
    pub range_bounds: bool,
}

/// Piecewise-linear function on a [`UniformGrid`], constant `tail_value`
/// beyond the last node.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: UniformGrid,
    values: Vec<f64>,
    tail_value: f64,
    range_bounded: bool,
}

impl GridFunction {
    pub fn new(grid: UniformGrid, values: Vec<f64>, tail_value: f64, range_bounded: bool) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::param(
                "values",
                format!("{} values for a grid of {} nodes", values.len(), grid.len()),
            ));
        }
        if let Some(bad) = values.iter().chain([&tail_value]).find(|v| !v.is_finite()) {
            return Err(Error::param("values", format!("non-finite value {bad}")));
        }
        if range_bounded {
            if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
                return Err(Error::RangeViolation {
                    t: grid.node(i),
                    value: *v,
                });
            }
            if !(0.0..=1.0).contains(&tail_value) {
                return Err(Error::RangeViolation {
                    t: f64::INFINITY,
                    value: tail_value,
                });
            }
        }
        Ok(GridFunction {
            grid,
            values,
            tail_value,
            range_bounded,
        })
    }

    pub fn constant(grid: UniformGrid, value: f64) -> Result<Self> {
        let bounded = (0.0..=1.0).contains(&value);
        Self::new(grid, vec![value; grid.len()], value, bounded)
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64, tail_value: f64, range_bounded: bool) -> Result<Self> {
        let values = grid.nodes().map(f).collect();
        Self::new(grid, values, tail_value, range_bounded)
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail_value(&self) -> f64 {
        self.tail_value
    }

    pub fn is_range_bounded(&self) -> bool {
        self.range_bounded
    }

    pub fn meta(&self) -> GridMeta {
        GridMeta {
            t_max: self.grid.t_max(),
            step: self.grid.step(),
            tail_value: self.tail_value,
            range_bounds: self.range_bounded,
        }
    }

    /// Value at `t >= 0`: linear interpolation up to the last node, then the
    /// tail value.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        Ok(self.value_at(t))
    }

    /// [`evaluate`](Self::evaluate) without the domain check.
    #[inline]
    pub(crate) fn value_at(&self, t: f64) -> f64 {
        let x = t / self.grid.step;
        let last = self.values.len() - 1;
        if x > last as f64 {
            return self.tail_value;
        }
        let i = (x.floor() as usize).min(last - 1);
        let frac = x - i as f64;
        let v = (1.0 - frac) * self.values[i] + frac * self.values[i + 1];
        if self.range_bounded {
            v.clamp(0.0, 1.0)
        } else {
            v
        }
    }

    /// Same function restricted to the first `grid.len()` nodes.
    pub(crate) fn truncate_to(&self, grid: &UniformGrid) -> GridFunction {
        debug_assert!(grid.len() <= self.values.len() && grid.step() == self.grid.step());
        GridFunction {
            grid: *grid,
            values: self.values[..grid.len()].to_vec(),
            tail_value: self.tail_value,
            range_bounded: self.range_bounded,
        }
    }

    /// Pointwise `1 - f`, with the tail flipped as well.
    pub fn complement(&self) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| 1.0 - v).collect(),
            tail_value: 1.0 - self.tail_value,
            range_bounded: self.range_bounded,
        }
    }

    /// Replace the tail value (range bounds are re-checked).
    pub fn with_tail(self, tail_value: f64) -> Result<GridFunction> {
        GridFunction::new(self.grid, self.values, tail_value, self.range_bounded)
    }
}
