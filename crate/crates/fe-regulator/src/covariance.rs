use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use fe_momenta::Vec4;

use crate::window::{sigma_window, window_over_power_deriv};
use crate::{Regulator, RegulatorError};

/// Index layout of the 7×7 two-point block: four gauge components, the
/// auxiliary scalar, then the ghost pair.
pub const DIM: usize = 7;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub matrix: [[f64; DIM]; DIM],
    pub inverse: [[f64; DIM]; DIM],
    /// Eigenvalues of the bosonic block of the normalized inverse: a triple
    /// `1/σ_{ΛΛ₀}` from the transverse directions plus the two roots mixing
    /// the longitudinal and auxiliary directions (complex for small windows).
    pub q: [Complex64; 5],
}

/// Full regularized two-point structure at momentum `p`: gauge block
/// `C σ_w`, mixing column `S_w p`, auxiliary entry `(1−σ_w)/ξ`, antisymmetric
/// ghost block, together with the closed-form inverse and the eigenvalues
/// used in lower bounds. Requires `Λ < Λ₀` (otherwise the window vanishes
/// identically) and `p ≠ 0` (otherwise no inverse exists).
pub fn covariance(p: Vec4, reg: &Regulator) -> Result<CovarianceReport, RegulatorError> {
    if reg.lambda == reg.lambda0 {
        return Err(RegulatorError::EmptyWindow);
    }
    let t = p.norm_sq();
    if t == 0.0 {
        return Err(RegulatorError::SingularPoint);
    }
    let xi = reg.xi;
    let sw = sigma_window(reg, t);
    let win_over_t = window_over_power_deriv(reg, 1, 0, t);
    let win_over_t2 = window_over_power_deriv(reg, 2, 0, t);

    let mut matrix = [[0.0; DIM]; DIM];
    for mu in 0..4 {
        for nu in 0..4 {
            let mut v = (xi - 1.0) * p[mu] * p[nu] * win_over_t2;
            if mu == nu {
                v += win_over_t;
            }
            matrix[mu][nu] = v;
        }
        matrix[mu][4] = win_over_t * p[mu];
        matrix[4][mu] = -win_over_t * p[mu];
    }
    matrix[4][4] = (1.0 - sw) / xi;
    matrix[5][6] = -win_over_t;
    matrix[6][5] = win_over_t;

    let mut inverse = [[0.0; DIM]; DIM];
    let s_inv = 1.0 / sw;
    // (p²/σ_w)(δ − p p/p²) + (1/ξ)(1/σ_w − 1) p p
    let pp_coeff = -s_inv + (s_inv - 1.0) / xi;
    for mu in 0..4 {
        for nu in 0..4 {
            let mut v = pp_coeff * p[mu] * p[nu];
            if mu == nu {
                v += t * s_inv;
            }
            inverse[mu][nu] = v;
        }
        inverse[mu][4] = -p[mu];
        inverse[4][mu] = p[mu];
    }
    inverse[4][4] = xi;
    inverse[5][6] = 1.0 / win_over_t;
    inverse[6][5] = -1.0 / win_over_t;

    // Normalizing the gauge rows of the inverse by p² leaves a transverse
    // triple 1/σ_w and a 2×2 longitudinal–auxiliary block with trace
    // ξ + (1/σ_w − 1)/ξ and determinant 1/σ_w.
    let xi_w = xi + (s_inv - 1.0) / xi;
    let disc = xi_w * xi_w - 4.0 * s_inv;
    let (q4, q5) = if disc >= 0.0 {
        // subtracting the root from the trace cancels; recover the small
        // root from the product instead
        let big = (xi_w + disc.sqrt()) / 2.0;
        (Complex64::new(big, 0.0), Complex64::new(s_inv / big, 0.0))
    } else {
        let im = (-disc).sqrt() / 2.0;
        (
            Complex64::new(xi_w / 2.0, im),
            Complex64::new(xi_w / 2.0, -im),
        )
    };
    let q = [
        Complex64::new(s_inv, 0.0),
        Complex64::new(s_inv, 0.0),
        Complex64::new(s_inv, 0.0),
        q4,
        q5,
    ];

    Ok(CovarianceReport { matrix, inverse, q })
}
