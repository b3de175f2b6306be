//! Random binary cascades and the α-Riccati equation
//! `u'(t) = -u(t) + u(αt)^2`, `u(0) = 1`.
//!
//! The crate pairs two views of the same objects:
//!
//! - [`cascade`] samples the cascade tree directly: truncated leaf counts
//!   `W_n(t)`, product indicators `X_n(t)`, and the shortest and longest
//!   path sums `S_n`, `L_n`. Randomness comes from [`stream`], keyed per
//!   sample and per vertex so that results do not depend on scheduling.
//! - [`numerics`] solves the integral recursions for `U_k`, `v_n` and `q_n`
//!   on a uniform grid.
//!
//! [`montecarlo`] turns samplers into estimates with standard errors and
//! compares them with grid solutions; [`regime`] classifies `α` by the limit
//! of `q_n`; [`checks`] bundles the invariant suite; [`io`] writes CSV tables
//! and content-addressed run manifests; [`cli`] backs the `riccati-cascade`
//! binary.
//!
//! ```
//! use riccati_cascade::numerics::{iterate_vn, picard_v0, NumericsConfig, UniformGrid};
//!
//! let grid = UniformGrid::new(8.0, 0.05)?;
//! let cfg = NumericsConfig::default();
//! let v0 = picard_v0(1.5, &grid, 5, &cfg)?;
//! let v10 = iterate_vn(1.5, &grid, 10, &v0, &cfg)?;
//! assert_eq!(v10.values()[0], 1.0);
//! # Ok::<(), riccati_cascade::Error>(())
//! ```

pub mod cascade;
pub mod checks;
pub mod cli;
pub mod error;
pub mod io;
pub mod montecarlo;
pub mod numerics;
pub mod regime;
pub mod stream;

pub use error::{Error, Result};
