//! Smooth momentum-space regulator with scales `0 ≤ Λ ≤ Λ₀`: windowed
//! gauge/ghost propagators, their momentum and scale derivatives in closed
//! form, the full 7×7 two-point structure with inverse and eigenvalues, and
//! grid sweeps fitting the derivative-bound constants.

#![forbid(unsafe_code)]

mod covariance;
mod prop;
mod sweep;
mod window;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use covariance::{covariance, CovarianceReport, DIM};
pub use prop::{prop, prop_deriv, prop_dot, DerivIndex, PropKind, PropValue, MAX_PROP_DERIV};
pub use sweep::{derivative_bound_sweep, RegulatorFit, SweepRow};
pub use window::{sigma, sigma_window, window_over_power_deriv, SMALL_T_FRAC};

#[derive(Debug, Error, PartialEq)]
pub enum RegulatorError {
    #[error("scales must satisfy 0 ≤ Λ ≤ Λ₀ with Λ₀ > 0, got Λ={lambda}, Λ₀={lambda0}")]
    BadScales { lambda: f64, lambda0: f64 },
    #[error("gauge parameter must be positive, got {0}")]
    BadXi(f64),
    #[error("singular input: the requested quantity has no finite value here")]
    SingularPoint,
    #[error("derivative order {got} exceeds the supported maximum {cap}")]
    DerivOrderTooHigh { got: u8, cap: u8 },
    #[error("Λ = Λ₀ leaves an identically zero window with no inverse")]
    EmptyWindow,
}

/// Regulator scales and gauge parameter. The lower scale may sit at zero
/// (fully integrated flow); most inverse quantities additionally need
/// `Λ < Λ₀` so the window is not identically zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regulator {
    pub lambda: f64,
    pub lambda0: f64,
    pub xi: f64,
}

impl Regulator {
    pub fn new(lambda: f64, lambda0: f64, xi: f64) -> Result<Regulator, RegulatorError> {
        if !(lambda >= 0.0 && lambda <= lambda0 && lambda0 > 0.0)
            || !lambda.is_finite()
            || !lambda0.is_finite()
        {
            return Err(RegulatorError::BadScales { lambda, lambda0 });
        }
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(RegulatorError::BadXi(xi));
        }
        Ok(Regulator { lambda, lambda0, xi })
    }
}
