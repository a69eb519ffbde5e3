#![forbid(unsafe_code)]

//! Kinematics shared by the whole workspace: four-vectors, closed momentum
//! configurations with an exceptionality gauge, distinguished renormalization
//! points, and derivative multi-indices.

mod config;
mod multi_index;
mod points;
mod vec4;

pub use config::{eta, MomentumClass, MomentumConfig, MAX_MOMENTA};
pub use multi_index::{MultiIndex, MAX_DERIV_ORDER};
pub use points::{coplanar_point, plane_rank_is_two, seeded_rotation4, symmetric_point};
pub use vec4::Vec4;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MomentaError {
    #[error("momentum list must contain {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("supported range is 2..={max} momenta, got {0}", max = MAX_MOMENTA)]
    UnsupportedCount(usize),
    #[error("reference scale must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("margin must lie in [0, 1), got {0}")]
    BadMargin(f64),
    #[error("momenta must sum to zero, defect {0:e}")]
    NonConservation(f64),
    #[error("non-finite component in momentum {0}")]
    NonFinite(usize),
    #[error("symmetric points need 2..=5 momenta, got {0}")]
    SymmetricUnsupported(usize),
    #[error("coplanar points need 3..={max} momenta, got {0}", max = MAX_MOMENTA)]
    CoplanarUnsupported(usize),
    #[error("gave up after {tries} attempts to sample a point with margin {margin}")]
    RetriesExhausted { tries: usize, margin: f64 },
    #[error("derivative index may not act on the dependent momentum (w_0 = {0})")]
    DerivativeOnTotal(u8),
    #[error("a derivative index needs at least one slot")]
    EmptyMultiIndex,
    #[error("derivative order {got} exceeds cap {cap}")]
    OrderTooHigh { got: u32, cap: u8 },
}

/// `log max(1, x)`; vanishes on `x <= 1`.
pub fn log_plus(x: f64) -> f64 {
    x.max(1.0).ln()
}

/// `log_plus` with the argument floored at `m`.
pub fn log_plus_floored(m: f64, x: f64) -> f64 {
    log_plus(x.max(m))
}
