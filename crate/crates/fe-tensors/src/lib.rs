#![forbid(unsafe_code)]

//! Euclidean tensor monomials over momenta, Gram-matrix independence
//! analysis, decomposition of invariant fields, and the constants entering
//! the invariant-field coefficient bounds.

mod field;
mod gram;
mod monomial;

pub use field::{
    bound_check_73, covariance_defect, delta_from_frame, sample_invariant_field, Bound73Report,
    InvariantField,
};
pub use gram::{
    decompose, dot_matrix, independence, lemma_rn_constant, Decomposition, IndependenceReport,
    RnConstant, RANK_TOL,
};
pub use monomial::{enumerate_monomials, evaluate_monomial, monomial_dot, Tensor, TensorMonomial, MAX_RANK};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TensorsError {
    #[error("rank must lie in 1..={max}, got {0}", max = MAX_RANK)]
    BadRank(usize),
    #[error("vector count must lie in 1..=4, got {0}")]
    BadVectorCount(usize),
    #[error("monomial expects {expected} vectors, got {got}")]
    WrongVectorCount { expected: usize, got: usize },
    #[error("monomial slots do not form a disjoint cover")]
    MalformedMonomial,
    #[error("basis is numerically dependent (min eig {min_eig:e}, max eig {max_eig:e})")]
    DependentBasis { min_eig: f64, max_eig: f64 },
    #[error("constant is defined for ranks 2 and 4, got {0}")]
    RankNotCovered(usize),
    #[error("rank {r} with {m} frame vectors violates r + 1 <= 9 - 2m")]
    FrameThreshold { r: usize, m: usize },
}
