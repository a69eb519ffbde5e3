use crate::{
    decompose, enumerate_monomials, evaluate_monomial, lemma_rn_constant, Tensor, TensorsError,
};
use fe_momenta::{MomentumConfig, Vec4};
use nalgebra::Matrix4;
use serde::Serialize;

/// A rotation-covariant tensor field of fixed rank on closed `n`-momentum
/// configurations. The callback receives the full momentum list (dependent
/// `p_0` first) and returns the dense component array.
pub struct InvariantField {
    pub rank: usize,
    pub n: usize,
    eval: Box<dyn Fn(&[Vec4]) -> Tensor + Send + Sync>,
}

impl InvariantField {
    pub fn new(
        rank: usize,
        n: usize,
        eval: impl Fn(&[Vec4]) -> Tensor + Send + Sync + 'static,
    ) -> Self {
        InvariantField {
            rank,
            n,
            eval: Box::new(eval),
        }
    }

    pub fn eval(&self, p: &[Vec4]) -> Tensor {
        assert_eq!(p.len(), self.n, "field expects {} momenta", self.n);
        let out = (self.eval)(p);
        assert_eq!(out.rank(), self.rank);
        out
    }
}

/// Test field: a span element over the rank-`r` monomials in the tail momenta
/// with scalar coefficients that are affine in the two basic invariants
/// `Σ p_i·p_i` and `Σ_{i<j} p_i·p_j`. Rotation covariance holds by
/// construction; the `coeffs` stream (cycled as needed, three weights per
/// monomial) fixes the field exactly, so callers control randomness.
pub fn sample_invariant_field(
    rank: usize,
    n: usize,
    coeffs: &[f64],
) -> Result<InvariantField, TensorsError> {
    if coeffs.is_empty() {
        return Err(TensorsError::MalformedMonomial);
    }
    let monos = enumerate_monomials(n - 1, rank)?;
    let weights: Vec<[f64; 3]> = (0..monos.len())
        .map(|a| {
            [
                coeffs[(3 * a) % coeffs.len()],
                coeffs[(3 * a + 1) % coeffs.len()],
                coeffs[(3 * a + 2) % coeffs.len()],
            ]
        })
        .collect();
    Ok(InvariantField::new(rank, n, move |p: &[Vec4]| {
        let tail = &p[1..];
        let mut s_diag = 0.0;
        let mut s_cross = 0.0;
        for (i, a) in tail.iter().enumerate() {
            s_diag += a.dot(*a);
            for b in &tail[i + 1..] {
                s_cross += a.dot(*b);
            }
        }
        let mut out = Tensor::zeros(rank);
        for (t, w) in monos.iter().zip(&weights) {
            let c = w[0] + w[1] * s_diag + w[2] * s_cross;
            let dense = evaluate_monomial(t, tail).expect("monomial built for this arity");
            out.add_scaled(c, &dense);
        }
        out
    }))
}

/// Rotation-covariance defect: `|F(Rp) - R·F(p)|` relative to `1 + |F(p)|`,
/// maximized over a handful of seeded rotations.
pub fn covariance_defect(field: &InvariantField, p: &[Vec4], seed: u64) -> f64 {
    let base = field.eval(p);
    let scale = 1.0 + base.frobenius_norm();
    let mut worst = 0.0f64;
    for k in 0..4 {
        let rot = fe_momenta::seeded_rotation4(seed.wrapping_add(k));
        let rotated_p: Vec<Vec4> = p
            .iter()
            .map(|v| {
                let mut out = [0.0; 4];
                for (mu, slot) in out.iter_mut().enumerate() {
                    *slot = (0..4).map(|nu| rot[mu][nu] * v[nu]).sum();
                }
                Vec4(out)
            })
            .collect();
        let lhs = field.eval(&rotated_p);
        let mut rhs = base.rotate(&rot);
        rhs.add_scaled(-1.0, &lhs);
        worst = worst.max(rhs.frobenius_norm() / scale);
    }
    worst
}

#[derive(Debug, Clone, Serialize)]
pub struct Bound73Report {
    pub c: f64,
    pub frame_dim: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// Same bound with the pure-delta part subtracted on the left and only
    /// the derivative term on the right.
    pub lhs_no_delta: f64,
    pub rhs_no_delta: f64,
    pub holds_no_delta: bool,
}

/// Orthogonal frame spanning the tail momenta, each vector scaled to length
/// `scale`; classical Gram-Schmidt with a relative rank cutoff.
fn spanning_frame(tail: &[Vec4], scale: f64) -> Vec<Vec4> {
    let mut frame: Vec<Vec4> = Vec::new();
    for &v in tail {
        let mut w = v;
        for e in &frame {
            w -= *e * (v.dot(*e) / e.norm_sq());
        }
        if w.norm() > 1e-10 * v.norm().max(scale) {
            frame.push(w * (scale / w.norm()));
        }
    }
    frame
}

/// Checks the invariant-field bound on a concrete configuration: the field
/// norm against the constant times the larger of the pure-delta coefficients
/// and the scaled momentum derivatives.
pub fn bound_check_73(
    field: &InvariantField,
    cfg: &MomentumConfig,
) -> Result<Bound73Report, TensorsError> {
    let r = field.rank;
    let target = field.eval(&cfg.p);
    let frame = spanning_frame(cfg.tail(), cfg.scale);
    let m = frame.len();
    let constant = lemma_rn_constant(r, cfg.n, m)?;
    let deco = decompose(&target, &frame, r)?;
    let monos = enumerate_monomials(m, r)?;
    let mut delta_part = Tensor::zeros(r);
    let mut max_delta_coeff = 0.0f64;
    for (c, t) in deco.coefficients.iter().zip(&monos) {
        if t.is_pure_delta() {
            max_delta_coeff = max_delta_coeff.max(c.abs());
            delta_part.add_scaled(*c, &evaluate_monomial(t, &frame)?);
        }
    }
    let mut max_deriv = 0.0f64;
    for k in 1..cfg.n {
        max_deriv = max_deriv.max(momentum_derivative_norm(field, cfg, k));
    }
    let lhs = target.frobenius_norm();
    let rhs = constant.c * f64::max(max_delta_coeff, cfg.scale * max_deriv);
    let mut rest = target.clone();
    rest.add_scaled(-1.0, &delta_part);
    let lhs_no_delta = rest.frobenius_norm();
    let rhs_no_delta = constant.c * cfg.scale * max_deriv;
    // one-sided FP slack: the inequality itself is exact
    let slack = 1.0 + 1e-9;
    Ok(Bound73Report {
        c: constant.c,
        frame_dim: m,
        lhs,
        rhs,
        holds: lhs <= rhs * slack,
        lhs_no_delta,
        rhs_no_delta,
        holds_no_delta: lhs_no_delta <= rhs_no_delta * slack,
    })
}

/// `|∂_k F|` with the dependent momentum co-varying: fourth-order central
/// differences in each component direction, Frobenius norm over the result.
fn momentum_derivative_norm(field: &InvariantField, cfg: &MomentumConfig, k: usize) -> f64 {
    let h = 1e-2 * cfg.scale;
    let mut total = 0.0;
    for mu in 0..4 {
        let shift = |steps: f64| -> Tensor {
            let mut tail = cfg.tail().to_vec();
            tail[k - 1].0[mu] += steps * h;
            let moved = MomentumConfig::from_tail(cfg.scale, tail).expect("shifted tail is valid");
            field.eval(&moved.p)
        };
        let mut d = shift(-2.0);
        d.add_scaled(-8.0, &shift(-1.0));
        d.add_scaled(8.0, &shift(1.0));
        d.add_scaled(-1.0, &shift(2.0));
        for x in d.data_mut() {
            *x /= 12.0 * h;
        }
        total += d.frobenius_dot(&d);
    }
    total.sqrt()
}

/// Rebuilds the Kronecker delta from any four independent vectors:
/// `δ_{μν} = Σ q_{i,μ} (g^{-1})_{ij} q_{j,ν}` with `g` the vector Gram matrix.
pub fn delta_from_frame(q: &[Vec4]) -> Result<Tensor, TensorsError> {
    if q.len() != 4 {
        return Err(TensorsError::BadVectorCount(q.len()));
    }
    let g = Matrix4::from_fn(|i, j| q[i].dot(q[j]));
    let ginv = g.try_inverse().ok_or(TensorsError::DependentBasis {
        min_eig: 0.0,
        max_eig: 1.0,
    })?;
    let mut out = Tensor::zeros(2);
    for mu in 0..4 {
        for nu in 0..4 {
            let mut v = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    v += q[i][mu] * ginv[(i, j)] * q[j][nu];
                }
            }
            out.set(&[mu, nu], v);
        }
    }
    Ok(out)
}
