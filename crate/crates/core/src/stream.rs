//! Counter-based random streams over the vertices of the binary cascade.
//!
//! A [`SampleStream`] is a keyed pseudorandom function from vertex labels to
//! 64-bit words. The key is `(seed, sample_index)`, so a substream never
//! depends on which worker evaluates it or in what order, and the clock of a
//! vertex is the same whichever sampler (or truncation depth) asks for it.
//! That last property is what couples `W_n` across `n` and `S_n`, `L_n`
//! across depth pathwise.

use std::hash::Hasher;

use siphasher::sip::SipHasher13;

use crate::error::{Error, Result};

/// Deepest generation a [`Vertex`] label can address.
pub const MAX_DEPTH: u32 = 63;

/// Heap-style vertex label: the root is 1, the children of `v` are `2v`
/// and `2v + 1`. The depth of a label is the position of its leading bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(u64);

impl Vertex {
    pub const ROOT: Vertex = Vertex(1);

    pub fn depth(self) -> u32 {
        63 - self.0.leading_zeros()
    }

    /// The two children. Callers must not descend past [`MAX_DEPTH`].
    #[inline]
    pub fn children(self) -> [Vertex; 2] {
        debug_assert!(self.depth() < MAX_DEPTH);
        [Vertex(self.0 << 1), Vertex((self.0 << 1) | 1)]
    }

    pub fn label(self) -> u64 {
        self.0
    }
}

/// Independent random substream for one Monte Carlo sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleStream {
    seed: u64,
    index: u64,
}

/// Derive the substream of sample `sample_index` under `seed`.
pub fn derive_stream(seed: u64, sample_index: u64) -> SampleStream {
    SampleStream {
        seed,
        index: sample_index,
    }
}

impl SampleStream {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Raw 64-bit word attached to `vertex`.
    #[inline]
    pub fn word(&self, vertex: Vertex) -> u64 {
        let mut h = SipHasher13::new_with_keys(self.seed, self.index);
        h.write_u64(vertex.0);
        h.finish()
    }

    /// Uniform variate in the open interval (0, 1) attached to `vertex`.
    ///
    /// The top 53 bits are centred in their cell, so the result lies in
    /// `[2^-54, 1 - 2^-54]`.
    #[inline]
    pub fn uniform(&self, vertex: Vertex) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.word(vertex) >> 11) as f64 + 0.5) * SCALE
    }
}

/// Largest value the exponential clock can produce: `-ln(2^-54)`.
pub const EXP_CLOCK_MAX: f64 = 54.0 * std::f64::consts::LN_2;

/// Where the unscaled edge clocks `T_v` come from.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ClockSource {
    /// Mean-one exponential clocks by inversion of [`SampleStream::uniform`].
    #[default]
    Exponential,
    /// Every clock equals the given positive constant.
    Constant(f64),
}

impl ClockSource {
    pub fn constant(c: f64) -> Result<Self> {
        if c.is_finite() && c > 0.0 {
            Ok(ClockSource::Constant(c))
        } else {
            Err(Error::param(
                "clock constant",
                format!("{c} is not a positive finite number"),
            ))
        }
    }

    #[inline]
    pub fn clock(&self, stream: &SampleStream, vertex: Vertex) -> f64 {
        match *self {
            ClockSource::Exponential => -stream.uniform(vertex).ln(),
            ClockSource::Constant(c) => c,
        }
    }

    /// Deterministic upper bound on every clock this source can return.
    pub fn max_clock(&self) -> f64 {
        match *self {
            ClockSource::Exponential => EXP_CLOCK_MAX,
            ClockSource::Constant(c) => c,
        }
    }
}
