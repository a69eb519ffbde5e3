use std::collections::HashMap;

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use fe_momenta::Vec4;

use crate::window::window_over_power_deriv;
use crate::{Regulator, RegulatorError};

pub const MAX_PROP_DERIV: u8 = 4;

/// Derivative multi-index in the four momentum components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DerivIndex(pub [u8; 4]);

impl DerivIndex {
    pub const ZERO: DerivIndex = DerivIndex([0; 4]);

    pub fn order(&self) -> u8 {
        self.0.iter().sum()
    }

    /// All indices with total order at most `cap`, lexicographic.
    pub fn all(cap: u8) -> Vec<DerivIndex> {
        let mut out = Vec::new();
        for a in 0..=cap {
            for b in 0..=cap - a {
                for c in 0..=cap - a - b {
                    for d in 0..=cap - a - b - c {
                        out.push(DerivIndex([a, b, c, d]));
                    }
                }
            }
        }
        out
    }

    /// Expand into the list of directions, e.g. `[1,0,2,0] → [0,2,2]`.
    fn directions(&self) -> Vec<u8> {
        let mut dirs = Vec::with_capacity(self.order() as usize);
        for (d, &m) in self.0.iter().enumerate() {
            dirs.extend(std::iter::repeat(d as u8).take(m as usize));
        }
        dirs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropKind {
    Gauge,
    Ghost,
}

/// A propagator or one of its derivatives: scalar for the ghost line, a
/// symmetric 4×4 matrix for the gauge line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PropValue {
    Scalar(f64),
    Matrix([[f64; 4]; 4]),
}

impl PropValue {
    pub fn norm(&self) -> f64 {
        match self {
            PropValue::Scalar(v) => v.abs(),
            PropValue::Matrix(m) => m
                .iter()
                .flatten()
                .map(|v| v * v)
                .sum::<f64>()
                .sqrt(),
        }
    }

    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            PropValue::Scalar(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&[[f64; 4]; 4]> {
        match self {
            PropValue::Matrix(m) => Some(m),
            _ => None,
        }
    }
}

/// Which scalar profile a term multiplies: `σ_w(t)/t` or `(ξ−1)·σ_w(t)/t²`
/// (the ξ−1 factor is applied at evaluation time so tables stay
/// parameter-free).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Base {
    WinOverT,
    WinOverT2,
}

/// One closed-form term `coeff · p_{d₁}···p_{dₘ} · f^(order)(p²)` of a
/// differentiated propagator entry.
#[derive(Debug, Clone)]
struct Term {
    coeff: f64,
    dirs: Vec<u8>,
    base: Base,
    order: u8,
}

/// Differentiate a term list in momentum component `m`: the chain rule on
/// `f(p²)` appends a factor `2 p_m` and raises the order, the product rule
/// removes one matching momentum factor per occurrence.
fn differentiate(terms: &[Term], m: u8) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::with_capacity(terms.len() * 2);
    for t in terms {
        let mut chained = t.clone();
        chained.coeff *= 2.0;
        chained.dirs.push(m);
        chained.dirs.sort_unstable();
        chained.order += 1;
        out.push(chained);
        for (i, &d) in t.dirs.iter().enumerate() {
            if d == m {
                let mut dropped = t.clone();
                dropped.dirs.remove(i);
                out.push(dropped);
            }
        }
    }
    merge(out)
}

fn merge(terms: Vec<Term>) -> Vec<Term> {
    let mut acc: HashMap<(Vec<u8>, Base, u8), f64> = HashMap::new();
    for t in terms {
        *acc.entry((t.dirs, t.base, t.order)).or_insert(0.0) += t.coeff;
    }
    let mut out: Vec<Term> = acc
        .into_iter()
        .filter(|&(_, c)| c != 0.0)
        .map(|((dirs, base, order), coeff)| Term { coeff, dirs, base, order })
        .collect();
    out.sort_by(|a, b| {
        (a.order, a.base as u8, &a.dirs).cmp(&(b.order, b.base as u8, &b.dirs))
    });
    out
}

fn derive_all(start: Vec<Term>, w: DerivIndex) -> Vec<Term> {
    w.directions()
        .into_iter()
        .fold(start, |acc, m| differentiate(&acc, m))
}

/// Fixed term tables for every derivative index up to order four, built once.
static GHOST_TABLE: Lazy<HashMap<DerivIndex, Vec<Term>>> = Lazy::new(|| {
    DerivIndex::all(MAX_PROP_DERIV)
        .into_iter()
        .map(|w| {
            let start = vec![Term { coeff: 1.0, dirs: vec![], base: Base::WinOverT, order: 0 }];
            (w, derive_all(start, w))
        })
        .collect()
});

static GAUGE_TABLE: Lazy<HashMap<(DerivIndex, u8, u8), Vec<Term>>> = Lazy::new(|| {
    let mut map = HashMap::new();
    for w in DerivIndex::all(MAX_PROP_DERIV) {
        for mu in 0..4u8 {
            for nu in mu..4u8 {
                let mut start = Vec::new();
                if mu == nu {
                    start.push(Term { coeff: 1.0, dirs: vec![], base: Base::WinOverT, order: 0 });
                }
                start.push(Term {
                    coeff: 1.0,
                    dirs: vec![mu, nu],
                    base: Base::WinOverT2,
                    order: 0,
                });
                map.insert((w, mu, nu), derive_all(start, w));
            }
        }
    }
    map
});

/// Values of `(d/dt)^k [σ_w/t]` and `(d/dt)^k [σ_w/t²]` for `k ≤ 4`,
/// shared by all sixteen matrix entries of one evaluation.
struct Profiles {
    over_t: [f64; 5],
    over_t2: [f64; 5],
    xi_m1: f64,
}

impl Profiles {
    fn at(reg: &Regulator, t: f64, need_t2: bool) -> Profiles {
        let mut over_t = [0.0; 5];
        let mut over_t2 = [0.0; 5];
        for k in 0..=4u32 {
            over_t[k as usize] = window_over_power_deriv(reg, 1, k, t);
            if need_t2 {
                over_t2[k as usize] = window_over_power_deriv(reg, 2, k, t);
            }
        }
        Profiles { over_t, over_t2, xi_m1: reg.xi - 1.0 }
    }

    fn eval(&self, terms: &[Term], p: Vec4) -> f64 {
        terms
            .iter()
            .map(|t| {
                let mom: f64 = t.dirs.iter().map(|&d| p[d as usize]).product();
                let f = match t.base {
                    Base::WinOverT => self.over_t[t.order as usize],
                    Base::WinOverT2 => self.xi_m1 * self.over_t2[t.order as usize],
                };
                t.coeff * mom * f
            })
            .sum()
    }
}

fn check_input(p: Vec4, reg: &Regulator) -> Result<(), RegulatorError> {
    if reg.lambda == 0.0 && p.norm_sq() == 0.0 {
        return Err(RegulatorError::SingularPoint);
    }
    Ok(())
}

/// Regularized propagator: `σ_{ΛΛ₀}(p²)/p²` on the ghost line,
/// `σ_{ΛΛ₀}(p²)/p² · (δ_{μν} + (ξ−1) p_μ p_ν / p²)` on the gauge line.
/// Both extend smoothly to `p = 0` as long as `Λ > 0`.
pub fn prop(kind: PropKind, p: Vec4, reg: &Regulator) -> Result<PropValue, RegulatorError> {
    prop_deriv(kind, p, reg, DerivIndex::ZERO)
}

/// Momentum derivative `∂^w` of the propagator, from the fixed term tables.
pub fn prop_deriv(
    kind: PropKind,
    p: Vec4,
    reg: &Regulator,
    w: DerivIndex,
) -> Result<PropValue, RegulatorError> {
    if w.order() > MAX_PROP_DERIV {
        return Err(RegulatorError::DerivOrderTooHigh {
            got: w.order(),
            cap: MAX_PROP_DERIV,
        });
    }
    check_input(p, reg)?;
    let t = p.norm_sq();
    match kind {
        PropKind::Ghost => {
            let profiles = Profiles::at(reg, t, false);
            Ok(PropValue::Scalar(profiles.eval(&GHOST_TABLE[&w], p)))
        }
        PropKind::Gauge => {
            let profiles = Profiles::at(reg, t, true);
            let mut m = [[0.0; 4]; 4];
            for mu in 0..4u8 {
                for nu in mu..4u8 {
                    let v = profiles.eval(&GAUGE_TABLE[&(w, mu, nu)], p);
                    m[mu as usize][nu as usize] = v;
                    m[nu as usize][mu as usize] = v;
                }
            }
            Ok(PropValue::Matrix(m))
        }
    }
}

/// `∂_Λ` of the propagator. The Λ₀ part of the window drops out, leaving
/// `−(4p²/Λ⁵) e^{−p⁴/Λ⁴}` on the ghost line and
/// `−(4/Λ⁵) e^{−p⁴/Λ⁴} (p² δ_{μν} + (ξ−1) p_μ p_ν)` on the gauge line;
/// both vanish at `p = 0`.
pub fn prop_dot(kind: PropKind, p: Vec4, reg: &Regulator) -> Result<PropValue, RegulatorError> {
    if reg.lambda == 0.0 {
        return Err(RegulatorError::SingularPoint);
    }
    let t = p.norm_sq();
    let l = reg.lambda;
    let damp = (-(t * t) / (l * l * l * l)).exp();
    let front = -4.0 / (l * l * l * l * l) * damp;
    match kind {
        PropKind::Ghost => Ok(PropValue::Scalar(front * t)),
        PropKind::Gauge => {
            let mut m = [[0.0; 4]; 4];
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut v = (reg.xi - 1.0) * p[mu] * p[nu];
                    if mu == nu {
                        v += t;
                    }
                    m[mu][nu] = front * v;
                }
            }
            Ok(PropValue::Matrix(m))
        }
    }
}
