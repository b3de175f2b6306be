//! Deterministic evaluation of the cascade's integral recursions on uniform
//! time grids, with residual and integrability diagnostics.

mod diagnostics;
mod grid;
mod recursion;

pub use diagnostics::{check_identity_v_q, integrate_tail, riccati_residual, ResidualReport, TailIntegral};
pub use grid::{GridFunction, GridMeta, UniformGrid, DEFAULT_MAX_NODES};
pub use recursion::{
    convolve_kernel, iterate_qn, iterate_qn_all, iterate_vn, iterate_vn_all, picard_iterates, picard_v0,
    picard_v0_settled, q0_surrogate, NumericsConfig,
};
