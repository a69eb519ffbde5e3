#![forbid(unsafe_code)]

//! Trees with distinguishable leaves, trivalent internal vertices, per-edge
//! star counts, and a regular/hollow flag per internal vertex. On top of the
//! combinatorics sit the derivative-weight families (`theta_set`), the
//! inverse-power amplitudes built from them, the joint bound for sequences of
//! fragments glued along shared legs, and the two-leg reduction together with
//! its integral check.

mod amplitude;
mod enumerate;
mod junction;
mod momentum;
mod reduce;
mod tree;
mod weights;

pub use amplitude::{amplitude_pi, amplitude_q, bounding_log_poly, QAmplitude, QEvaluator};
pub use enumerate::enumerate_trees;
pub use junction::{junction_bound, JunctionOutcome};
pub use momentum::{momentum_map, EdgeMomenta};
pub use reduce::{reduce, verify_reduction, IntegrationSpec, Reduction, ReductionCheck};
pub use tree::{FieldLabel, VertexKind, WeightedTree, MAX_LEAVES, MAX_STAR_TOTAL};
pub use weights::{theta_set, total_theta, ThetaWeight};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TreesError {
    #[error(transparent)]
    Momenta(#[from] fe_momenta::MomentaError),
    #[error("supported leaf counts are 3..={}, got {0}", MAX_LEAVES)]
    UnsupportedLeafCount(usize),
    #[error("expected {expected} {what}, got {got}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("vertex {vertex} has valence {got}, expected {expected}")]
    BadValence {
        vertex: usize,
        got: usize,
        expected: usize,
    },
    #[error("edge list does not describe a single connected tree")]
    NotATree,
    #[error("a three-leaf tree has a single hollow vertex; got a regular flag")]
    ThreePointMustBeHollow,
    #[error("total star count {0} exceeds the cap {}", MAX_STAR_TOTAL)]
    TooManyStars(usize),
    #[error("operation needs a plain tree (regular vertices, no stars) -- {0}")]
    NotPlain(&'static str),
    #[error("fragment rule broken at vertex {0}: hollow vertices need at least two external edges, one of them starred")]
    NotAFragment(usize),
    #[error("fragment star total {stars} must equal the hollow count {hollow} or exceed it by one")]
    FragmentStarCount { stars: usize, hollow: usize },
    #[error("joint edge {edge} carries a star but its vertex is regular")]
    StarOnRegularJoint { edge: usize },
    #[error("derivative weight on slot {0} must vanish here")]
    WeightedSlot(usize),
    #[error("scale must be nonnegative and finite, got {0}")]
    BadScale(f64),
    #[error("scales must satisfy 0 < lower <= upper and be finite, got {lower}, {upper}")]
    BadScaleRange { lower: f64, upper: f64 },
    #[error("amplitude is singular: zero scale meets a weighted zero-momentum edge")]
    SingularAmplitude,
    #[error("reduction needs at least five leaves, got {0}")]
    TooFewLeaves(usize),
    #[error("reduction needs total weight above two, got {0}")]
    TotalWeightTooSmall(u32),
    #[error("weight total mismatch: expected {expected}, got {got}")]
    WeightSumMismatch { expected: u32, got: u32 },
    #[error("adaptive quadrature did not reach the requested tolerance")]
    QuadratureFailed,
}
