use std::sync::Arc;

use fe_momenta::Vec4;
use fe_regulator::{PropKind, PropValue, Regulator};

use crate::jets::{Jet, JetSpace};
use crate::quad::{quad, Domain};
use crate::EstimatesError;

/// k-th derivative in `y` of `f(y) = (e^{−βy} − e^{−y})/y`, computed from the
/// representation `f(y) = ∫_β^1 e^{−γy} dγ`, which turns every derivative
/// into a plain weighted integral: `f⁽ᵏ⁾(y) = (−1)^k ∫_β^1 γ^k e^{−γy} dγ`.
pub fn f_deriv(beta: f64, y: f64, k: u32) -> Result<f64, EstimatesError> {
    if beta >= 1.0 {
        return Ok(0.0);
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    // For large y the difference of incomplete-gamma tails is exact and
    // cheap, as long as the two tails do not nearly cancel.  When they do
    // cancel, 1 - β ≲ 40/y, so the integrand's boundary layer (width 1/y)
    // spans a decent fraction of the interval and quadrature is reliable.
    if y > 30.0 {
        let tb = gamma_tail(beta, y, k);
        let t1 = gamma_tail(1.0, y, k);
        if t1 <= 0.9 * tb {
            return Ok(sign * (tb - t1));
        }
    }
    // The integrand's size swings over hundreds of orders of magnitude with
    // y, so aim the quadrature at a relative target built from its peak.
    let gamma_star = if y > 0.0 {
        (k as f64 / y).clamp(beta, 1.0)
    } else {
        1.0
    };
    let peak = gamma_star.powi(k as i32) * (-gamma_star * y).exp();
    let width = (1.0 - beta).min(if y > 0.0 { 1.0 / y } else { f64::INFINITY });
    let tol = (1e-12 * peak * width).max(1e-305);
    let v = quad(
        |g| g.powi(k as i32) * (-g * y).exp(),
        Domain::Finite(beta, 1.0),
        tol,
    )?;
    Ok(sign * v)
}

/// `∫_a^∞ γ^k e^{-γy} dγ = (k!/y^{k+1}) e^{-ay} Σ_{j≤k} (ay)^j / j!`
fn gamma_tail(a: f64, y: f64, k: u32) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut kfac = 1.0;
    for j in 1..=k {
        term *= a * y / j as f64;
        sum += term;
        kfac *= j as f64;
    }
    kfac / y.powi(k as i32 + 1) * (-a * y).exp() * sum
}

/// Momentum jets of a windowed propagator at a point: one component for the
/// ghost line, sixteen (row-major `μν`) for the gauge line.
pub struct PropJets {
    kind: PropKind,
    comps: Vec<Jet>,
}

impl PropJets {
    pub fn deriv(&self, alpha: &[u8; 4]) -> PropValue {
        match self.kind {
            PropKind::Ghost => PropValue::Scalar(self.comps[0].deriv(alpha)),
            PropKind::Gauge => {
                let mut m = [[0.0; 4]; 4];
                for mu in 0..4 {
                    for nu in 0..4 {
                        m[mu][nu] = self.comps[4 * mu + nu].deriv(alpha);
                    }
                }
                PropValue::Matrix(m)
            }
        }
    }
}

fn momentum_square(space: &Arc<JetSpace>, p: Vec4) -> Jet {
    let mut t = Jet::constant(space, 0.0);
    for i in 0..4 {
        let x = Jet::var(space, i, p[i]);
        t = t.add(&x.mul(&x));
    }
    t
}

fn assemble_jets(
    kind: PropKind,
    p: Vec4,
    lambda: f64,
    beta: f64,
    elong_coeff: f64,
    order: u8,
    magnitudes: bool,
) -> Result<Vec<Jet>, EstimatesError> {
    let space = JetSpace::get(4, order);
    let l4 = lambda.powi(4);
    let t = momentum_square(&space, p);
    let y = t.mul(&t).scale(1.0 / l4);
    let mut series = Vec::with_capacity(order as usize + 1);
    let mut kfact = 1.0;
    for k in 0..=order as u32 {
        if k > 0 {
            kfact *= k as f64;
        }
        let d = f_deriv(beta, y.value(), k)?;
        series.push(if magnitudes { d.abs() } else { d } / kfact);
    }
    let fy = y.compose_series(&series);
    let ghost = t.mul(&fy).scale(1.0 / l4);
    Ok(match kind {
        PropKind::Ghost => vec![ghost],
        PropKind::Gauge => {
            let elong = fy.scale(elong_coeff / l4);
            let mut m = Vec::with_capacity(16);
            for mu in 0..4 {
                let xmu = Jet::var(&space, mu, p[mu]);
                for nu in 0..4 {
                    let xnu = Jet::var(&space, nu, p[nu]);
                    let mut c = elong.mul(&xmu).mul(&xnu);
                    if mu == nu {
                        c = c.add(&ghost);
                    }
                    m.push(c);
                }
            }
            m
        }
    })
}

/// Propagator as a jet in the four momentum components, built from the
/// profile factorisation `S = (p²/Λ⁴)·f(p⁴/Λ⁴)` with `β = (Λ/Λ₀)⁴`; the
/// scalar profile enters through its integral-representation derivatives, so
/// this shares no code with the closed-form term tables.
pub fn prop_jets(
    kind: PropKind,
    p: Vec4,
    reg: &Regulator,
    order: u8,
) -> Result<PropJets, EstimatesError> {
    assert!(reg.lambda > 0.0, "profile parametrisation needs Λ > 0");
    let beta = (reg.lambda / reg.lambda0).powi(4);
    let comps = assemble_jets(kind, p, reg.lambda, beta, reg.xi - 1.0, order, false)?;
    Ok(PropJets { kind, comps })
}

/// Same assembly with every coefficient replaced by its magnitude. Its
/// derivatives bound the sum of |term| contributions behind the true value,
/// which is the scale roundoff must be judged against: high-order derivatives
/// in the power-law tail cancel at leading order, so two correct evaluation
/// routes can differ by many ulps of the *terms* while agreeing on nothing
/// finer than terms × machine noise.
pub(crate) fn prop_jets_majorant(
    kind: PropKind,
    p: Vec4,
    reg: &Regulator,
    order: u8,
) -> Result<PropJets, EstimatesError> {
    let beta = (reg.lambda / reg.lambda0).powi(4);
    let pa = Vec4([p[0].abs(), p[1].abs(), p[2].abs(), p[3].abs()]);
    let comps = assemble_jets(
        kind,
        pa,
        reg.lambda,
        beta,
        (reg.xi - 1.0).abs(),
        order,
        true,
    )?;
    Ok(PropJets { kind, comps })
}

/// Jets in momentum of `∂_{Λ₀}` of a propagator. Only the top-scale half of
/// the window depends on Λ₀, so the profile collapses to a single Gaussian:
/// `∂_{Λ₀}S = (4p²/Λ₀⁵)·e^{−p⁴/Λ₀⁴}`, and the gauge line adds the
/// longitudinal part `(4/Λ₀⁵)·e^{−p⁴/Λ₀⁴}·(ξ−1)p_μp_ν`.
pub fn lambda0_deriv_jets(kind: PropKind, p: Vec4, reg: &Regulator, order: u8) -> PropJets {
    let space = JetSpace::get(4, order);
    let l05 = reg.lambda0.powi(5);
    let t = momentum_square(&space, p);
    let damp = t.mul(&t).scale(-1.0 / reg.lambda0.powi(4)).exp();
    let ghost = t.mul(&damp).scale(4.0 / l05);
    let comps = match kind {
        PropKind::Ghost => vec![ghost],
        PropKind::Gauge => {
            let elong = damp.scale(4.0 * (reg.xi - 1.0) / l05);
            let mut m = Vec::with_capacity(16);
            for mu in 0..4 {
                let xmu = Jet::var(&space, mu, p[mu]);
                for nu in 0..4 {
                    let xnu = Jet::var(&space, nu, p[nu]);
                    let mut c = elong.mul(&xmu).mul(&xnu);
                    if mu == nu {
                        c = c.add(&ghost);
                    }
                    m.push(c);
                }
            }
            m
        }
    };
    PropJets { kind, comps }
}

pub(crate) fn components(v: &PropValue) -> Vec<f64> {
    match v {
        PropValue::Scalar(s) => vec![*s],
        PropValue::Matrix(m) => m.iter().flatten().copied().collect(),
    }
}

/// Relative step for the Richardson-extrapolated central differences below.
/// Small enough that the fourth-order truncation term stays under the route
/// tolerance wherever the window has not already decayed past the comparison
/// floor, large enough that subtractive roundoff does not.
pub(crate) const FD_STEP: f64 = 2e-5;

fn richardson<F>(h: f64, eval: F) -> Result<Vec<f64>, EstimatesError>
where
    F: Fn(f64) -> Result<Vec<f64>, EstimatesError>,
{
    let central = |h: f64| -> Result<Vec<f64>, EstimatesError> {
        let hi = eval(h)?;
        let lo = eval(-h)?;
        Ok(hi
            .iter()
            .zip(&lo)
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect())
    };
    let fine = central(h)?;
    let coarse = central(2.0 * h)?;
    Ok(fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| (4.0 * f - c) / 3.0)
        .collect())
}

/// `∂_Λ` of the propagator by finite differences of the window itself. The
/// top-scale half of the window is the same on both sides of the step and
/// drops out of the difference exactly, so the top scale can be pushed out
/// of the way when the step would not fit under it.
pub(crate) fn prop_dot_fd(
    kind: PropKind,
    p: Vec4,
    reg: &Regulator,
) -> Result<Vec<f64>, EstimatesError> {
    let l = reg.lambda;
    let h = FD_STEP * l;
    let l0 = reg.lambda0.max(4.0 * l);
    richardson(h, |dh| {
        let shifted = Regulator::new(l + dh, l0, reg.xi)?;
        Ok(components(&fe_regulator::prop(kind, p, &shifted)?))
    })
}

/// `∂_{Λ₀}` of a momentum derivative of the propagator, by finite
/// differences in the top scale; the Λ-half of the window cancels in the
/// central difference.
pub(crate) fn prop_deriv_l0_fd(
    kind: PropKind,
    p: Vec4,
    reg: &Regulator,
    idx: fe_regulator::DerivIndex,
) -> Result<Vec<f64>, EstimatesError> {
    let l0 = reg.lambda0;
    let h = FD_STEP * l0;
    richardson(h, |dh| {
        let shifted = Regulator::new(reg.lambda, l0 + dh, reg.xi)?;
        Ok(components(&fe_regulator::prop_deriv(kind, p, &shifted, idx)?))
    })
}
