use crate::{enumerate_monomials, monomial_dot, Tensor, TensorMonomial, TensorsError};
use fe_momenta::Vec4;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Numerical-rank threshold: an eigenvalue below this fraction of the largest
/// one counts as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Diagonal Gram entries below this are treated as vanishing monomials
/// (possible only for degenerate input vectors); normalization is skipped.
const NORM_FLOOR: f64 = 1e-280;

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceReport {
    pub independent: bool,
    pub gram_min_eig: f64,
    pub gram_max_eig: f64,
    /// Input vectors themselves were numerically dependent; the verdict is
    /// still the Gram one.
    pub degenerate_input: bool,
    pub monomial_count: usize,
}

pub fn dot_matrix(q: &[Vec4]) -> Vec<Vec<f64>> {
    q.iter()
        .map(|a| q.iter().map(|b| a.dot(*b)).collect())
        .collect()
}

/// Gram matrix of the normalized monomials `t / |t|` over the given vectors.
fn normalized_gram(monos: &[TensorMonomial], dots: &[Vec<f64>]) -> Option<DMatrix<f64>> {
    let n = monos.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = monomial_dot(&monos[i], &monos[j], dots);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        if g[(i, i)] < NORM_FLOOR {
            return None;
        }
        norms.push(g[(i, i)].sqrt());
    }
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] /= norms[i] * norms[j];
        }
    }
    Some(g)
}

fn eig_range(g: &DMatrix<f64>) -> (f64, f64) {
    let eig = g.clone().symmetric_eigen();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in eig.eigenvalues.iter() {
        min = min.min(v);
        max = max.max(v);
    }
    (min, max)
}

/// Tests linear independence of the full rank-`r` monomial family over the
/// vectors `q` by the smallest eigenvalue of the normalized Gram matrix.
pub fn independence(q: &[Vec4], r: usize) -> Result<IndependenceReport, TensorsError> {
    let monos = enumerate_monomials(q.len(), r)?;
    let dots = dot_matrix(q);
    let degenerate_input = {
        let m = q.len();
        let mut vg = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                vg[(i, j)] = dots[i][j];
            }
        }
        let norms: Vec<f64> = (0..m).map(|i| vg[(i, i)].sqrt()).collect();
        if norms.iter().any(|&x| x < 1e-140) {
            true
        } else {
            for i in 0..m {
                for j in 0..m {
                    vg[(i, j)] /= norms[i] * norms[j];
                }
            }
            let (min, max) = eig_range(&vg);
            min <= RANK_TOL * max
        }
    };
    match normalized_gram(&monos, &dots) {
        None => Ok(IndependenceReport {
            independent: false,
            gram_min_eig: 0.0,
            gram_max_eig: 0.0,
            degenerate_input: true,
            monomial_count: monos.len(),
        }),
        Some(g) => {
            let (min, max) = eig_range(&g);
            Ok(IndependenceReport {
                independent: min > RANK_TOL * max,
                gram_min_eig: min,
                gram_max_eig: max,
                degenerate_input,
                monomial_count: monos.len(),
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub coefficients: Vec<f64>,
    /// Frobenius norm of `target - Σ c_t t`, relative to `|target|` when the
    /// target is nonzero.
    pub residual: f64,
}

/// Expands `target` over the rank-`r` monomial basis in `q` by solving the
/// Gram system. Fails when the basis is numerically dependent.
pub fn decompose(target: &Tensor, q: &[Vec4], r: usize) -> Result<Decomposition, TensorsError> {
    if target.rank() != r {
        return Err(TensorsError::BadRank(target.rank()));
    }
    let monos = enumerate_monomials(q.len(), r)?;
    let dots = dot_matrix(q);
    let n = monos.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = monomial_dot(&monos[i], &monos[j], &dots);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    let report = independence(q, r)?;
    if !report.independent {
        return Err(TensorsError::DependentBasis {
            min_eig: report.gram_min_eig,
            max_eig: report.gram_max_eig,
        });
    }
    let dense: Vec<Tensor> = monos
        .iter()
        .map(|t| crate::evaluate_monomial(t, q))
        .collect::<Result<_, _>>()?;
    let b = DVector::from_iterator(n, dense.iter().map(|t| t.frobenius_dot(target)));
    let coeffs = g
        .clone()
        .cholesky()
        .ok_or(TensorsError::DependentBasis {
            min_eig: report.gram_min_eig,
            max_eig: report.gram_max_eig,
        })?
        .solve(&b);
    let mut recon = Tensor::zeros(r);
    for (c, t) in coeffs.iter().zip(&dense) {
        recon.add_scaled(*c, t);
    }
    recon.add_scaled(-1.0, target);
    let scale = target.frobenius_norm().max(f64::MIN_POSITIVE);
    Ok(Decomposition {
        coefficients: coeffs.iter().copied().collect(),
        residual: recon.frobenius_norm() / scale,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RnConstant {
    pub c: f64,
    /// Pure-delta monomial count at rank `r`.
    pub a0: usize,
    /// Monomials at rank `r` with at least one vector slot.
    pub a_plus: usize,
    /// Smallest eigenvalue of the normalized rank-(r+1) Gram at an orthogonal
    /// frame; scale-free, so computed with unit vectors.
    pub lambda1: f64,
}

/// Constant of the invariant-field bound: `max(2^(r/2)·|A_0|,
/// (n-1)·sqrt(|A_+| / (4λ₁)))`, with all three ingredients enumerated rather
/// than read off a closed formula.
pub fn lemma_rn_constant(r: usize, n: usize, m: usize) -> Result<RnConstant, TensorsError> {
    if r != 2 && r != 4 {
        return Err(TensorsError::RankNotCovered(r));
    }
    if n < 2 {
        return Err(TensorsError::BadVectorCount(n));
    }
    if m < 2 || r + 1 + 2 * m > 9 {
        return Err(TensorsError::FrameThreshold { r, m });
    }
    let monos = enumerate_monomials(m, r)?;
    let a0 = monos.iter().filter(|t| t.is_pure_delta()).count();
    let a_plus = monos.len() - a0;
    let frame: Vec<Vec4> = (0..m)
        .map(|i| {
            let mut v = [0.0; 4];
            v[i] = 1.0;
            Vec4(v)
        })
        .collect();
    let monos_up = enumerate_monomials(m, r + 1)?;
    let dots = dot_matrix(&frame);
    let g = normalized_gram(&monos_up, &dots).expect("orthogonal frame is nondegenerate");
    let (lambda1, _) = eig_range(&g);
    if lambda1 <= 0.0 {
        return Err(TensorsError::DependentBasis {
            min_eig: lambda1,
            max_eig: 1.0,
        });
    }
    let c = f64::max(
        2f64.powi(r as i32 / 2) * a0 as f64,
        (n - 1) as f64 * (a_plus as f64 / (4.0 * lambda1)).sqrt(),
    );
    Ok(RnConstant {
        c,
        a0,
        a_plus,
        lambda1,
    })
}
