//! Numerical verification of the scale-integral and derivative inequalities
//! the tree bounds rest on: adaptive quadrature, truncated Taylor (jet)
//! arithmetic for high-order derivatives, and grid sweeps that either
//! enforce an explicit constant or fit the smallest one that works.

#![forbid(unsafe_code)]

mod cases;
mod grid;
mod jets;
mod profile;
mod quad;
mod report;

pub use cases::{CaseId, PointCheck, ALL_CASES};
pub use grid::{Axis, GridSpec};
pub use jets::{Jet, JetSpace};
pub use profile::{f_deriv, lambda0_deriv_jets, prop_jets, PropJets};
pub use quad::{quad, Domain, DEFAULT_QUAD_TOL};
pub use report::{verify, Failure, SweepReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EstimatesError {
    #[error("quadrature did not reach the tolerance within the segment budget")]
    QuadBudget,
    #[error("integrand produced a non-finite value at {0}")]
    BadIntegrand(f64),
    #[error("empty or inverted integration interval [{0}, {1}]")]
    BadInterval(f64, f64),
    #[error("unknown case id {0:?}")]
    UnknownCase(String),
    #[error("grid axis {axis} breaks the case's declared range: {detail}")]
    BadAxis { axis: String, detail: String },
    #[error("grid is missing axis {0}")]
    MissingAxis(&'static str),
    #[error("grid would evaluate {got} points, cap is {cap}")]
    GridTooLarge { got: u64, cap: u64 },
    #[error("derivative routes disagree at order {order}: {route_a} vs {route_b}")]
    RouteMismatch { route_a: f64, route_b: f64, order: u8 },
    #[error(transparent)]
    Regulator(#[from] fe_regulator::RegulatorError),
}
