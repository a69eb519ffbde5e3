//! The case catalog: every inequality the sweep driver knows how to check.
//!
//! Each case turns one grid point into a [`PointCheck`]: a measured left-hand
//! side together with the right-hand side split as `rhs_base + C * rhs_shape`.
//! Cases whose statement names an explicit constant record it in `paper`, and
//! the sweep enforces it; the rest only exist up to *some* constant, so the
//! sweep just reports the smallest one that works on the grid.

use std::f64::consts::{E, LN_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use fe_momenta::{log_plus, Vec4};
use fe_regulator::{prop_deriv, prop_dot, DerivIndex, PropKind, Regulator};

use crate::grid::GridSpec;
use crate::jets::{Jet, JetSpace};
use crate::profile::{
    components, f_deriv, lambda0_deriv_jets, prop_deriv_l0_fd, prop_dot_fd, prop_jets,
    prop_jets_majorant,
};
use crate::quad::{quad, Domain, DEFAULT_QUAD_TOL};
use crate::EstimatesError;

/// Relative tolerance for the two independent evaluation routes of the
/// propagator-derivative cases.
const ROUTE_TOL: f64 = 1e-8;

/// Fraction of the case's natural magnitude below which a component is
/// treated as numerically zero when comparing routes.
const ROUTE_FLOOR: f64 = 1e-9;

/// Absolute route slack per unit of term magnitude: the profile derivatives
/// are good to ~1e-12 relative, so after summing terms that largely cancel
/// the surviving value is reliable only to ~1e-11 of the term scale.
const ABS_SLACK: f64 = 1e-11;

/// Geometric growth rate frozen into the combined propagator bound: any value
/// above `16 e^{3/2} ~ 17.93` works, so we pin a round number just past it.
const C16_GROWTH: f64 = 18.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "twin")]
    Twin,
    #[serde(rename = "twin2")]
    Twin2,
    #[serde(rename = "int3")]
    Int3,
    #[serde(rename = "int4")]
    Int4,
    #[serde(rename = "int4b")]
    Int4b,
    #[serde(rename = "int4a")]
    Int4a,
    #[serde(rename = "int5")]
    Int5,
    #[serde(rename = "int7")]
    Int7,
    #[serde(rename = "frac")]
    Frac,
    #[serde(rename = "plog")]
    Plog,
    #[serde(rename = "logsplit")]
    LogSplit,
    #[serde(rename = "d402t")]
    D402t,
    #[serde(rename = "d331b")]
    D331b,
    #[serde(rename = "d402s")]
    D402s,
    #[serde(rename = "f_lemma")]
    FLemma,
    #[serde(rename = "h_lemma")]
    HLemma,
    #[serde(rename = "df_lemma")]
    DfLemma,
    #[serde(rename = "dS")]
    DS,
    #[serde(rename = "dC")]
    DC,
    #[serde(rename = "dS2")]
    DS2,
    #[serde(rename = "dS3")]
    DS3,
    #[serde(rename = "c16")]
    C16,
}

pub const ALL_CASES: [CaseId; 22] = [
    CaseId::Twin,
    CaseId::Twin2,
    CaseId::Int3,
    CaseId::Int4,
    CaseId::Int4b,
    CaseId::Int4a,
    CaseId::Int5,
    CaseId::Int7,
    CaseId::Frac,
    CaseId::Plog,
    CaseId::LogSplit,
    CaseId::D402t,
    CaseId::D331b,
    CaseId::D402s,
    CaseId::FLemma,
    CaseId::HLemma,
    CaseId::DfLemma,
    CaseId::DS,
    CaseId::DC,
    CaseId::DS2,
    CaseId::DS3,
    CaseId::C16,
];

const NAMES: [(CaseId, &str); 22] = [
    (CaseId::Twin, "twin"),
    (CaseId::Twin2, "twin2"),
    (CaseId::Int3, "int3"),
    (CaseId::Int4, "int4"),
    (CaseId::Int4b, "int4b"),
    (CaseId::Int4a, "int4a"),
    (CaseId::Int5, "int5"),
    (CaseId::Int7, "int7"),
    (CaseId::Frac, "frac"),
    (CaseId::Plog, "plog"),
    (CaseId::LogSplit, "logsplit"),
    (CaseId::D402t, "d402t"),
    (CaseId::D331b, "d331b"),
    (CaseId::D402s, "d402s"),
    (CaseId::FLemma, "f_lemma"),
    (CaseId::HLemma, "h_lemma"),
    (CaseId::DfLemma, "df_lemma"),
    (CaseId::DS, "dS"),
    (CaseId::DC, "dC"),
    (CaseId::DS2, "dS2"),
    (CaseId::DS3, "dS3"),
    (CaseId::C16, "c16"),
];

impl CaseId {
    pub fn name(self) -> &'static str {
        NAMES.iter().find(|(c, _)| *c == self).unwrap().1
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = EstimatesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(c, _)| *c)
            .ok_or_else(|| EstimatesError::UnknownCase(s.to_string()))
    }
}

/// One grid point's verdict material.  The claim under test is
/// `lhs <= rhs_base + C * rhs_shape`; `paper` carries the constant when the
/// statement fixes one.
#[derive(Debug, Clone, Copy)]
pub struct PointCheck {
    pub lhs: f64,
    pub rhs_base: f64,
    pub rhs_shape: f64,
    pub paper: Option<f64>,
}

/// Admissible values for one named grid axis.
#[derive(Debug, Clone, Copy)]
pub(crate) enum AxisKind {
    /// Integer-valued, inclusive bounds.
    Int(u8, u8),
    /// Strictly positive.
    Pos,
    /// Zero or positive.
    NonNeg,
    /// Inclusive real interval.
    Range(f64, f64),
    /// At least the given value.
    AtLeast(f64),
    /// Any finite value.
    Any,
}

impl AxisKind {
    pub(crate) fn admits(self, v: f64) -> bool {
        if !v.is_finite() {
            return false;
        }
        match self {
            AxisKind::Int(lo, hi) => v.fract() == 0.0 && v >= lo as f64 && v <= hi as f64,
            AxisKind::Pos => v > 0.0,
            AxisKind::NonNeg => v >= 0.0,
            AxisKind::Range(lo, hi) => v >= lo && v <= hi,
            AxisKind::AtLeast(m) => v >= m,
            AxisKind::Any => true,
        }
    }

    pub(crate) fn describe(self) -> String {
        match self {
            AxisKind::Int(lo, hi) => format!("an integer in {lo}..={hi}"),
            AxisKind::Pos => "a positive value".to_string(),
            AxisKind::NonNeg => "a non-negative value".to_string(),
            AxisKind::Range(lo, hi) => format!("a value in [{lo}, {hi}]"),
            AxisKind::AtLeast(m) => format!("a value >= {m}"),
            AxisKind::Any => "a finite value".to_string(),
        }
    }
}

impl CaseId {
    /// Required axes, in the order `eval` reads them.
    pub(crate) fn axes(self) -> &'static [(&'static str, AxisKind)] {
        use AxisKind::*;
        match self {
            CaseId::Twin => &[
                ("lambda", Pos),
                ("q", NonNeg),
                ("p", NonNeg),
                ("P", Pos),
                ("k", Int(0, 4)),
            ],
            CaseId::Twin2 => &[
                ("lambda", Pos),
                ("M", Pos),
                ("q", NonNeg),
                ("p", NonNeg),
                ("k", Int(0, 4)),
            ],
            CaseId::Int3 => &[
                ("lambda", Pos),
                ("eta", Pos),
                ("M", Pos),
                ("k", Int(0, 4)),
            ],
            CaseId::Int4 => &[
                ("lambda", Pos),
                ("eta", Pos),
                ("P", Pos),
                ("k", Int(0, 4)),
            ],
            CaseId::Int4b => &[
                ("lambda", Pos),
                ("M", Pos),
                ("P", Pos),
                ("eta", NonNeg),
                ("k", Int(0, 4)),
            ],
            CaseId::Int4a => &[
                ("lambda", Pos),
                ("lambda0", Pos),
                ("q", NonNeg),
                ("P", Pos),
                ("k", Int(0, 4)),
            ],
            CaseId::Int5 => &[
                ("a", Pos),
                ("d", Pos),
                ("b", NonNeg),
                ("m", Int(0, 4)),
                ("k", Int(0, 4)),
            ],
            CaseId::Int7 => &[
                ("p", Pos),
                ("lambda", Pos),
                ("eta_frac", Range(0.0, 1.0)),
                ("qfac", NonNeg),
                ("cos", Range(-1.0, 1.0)),
            ],
            CaseId::Frac => &[
                ("r", Pos),
                ("w", Int(0, 4)),
                ("xpar", Any),
                ("xperp", NonNeg),
                ("y", NonNeg),
            ],
            CaseId::Plog => &[
                ("r", Pos),
                ("s", NonNeg),
                ("p", NonNeg),
                ("M", NonNeg),
                ("lambda", Pos),
            ],
            CaseId::LogSplit => &[
                ("m", NonNeg),
                ("x", NonNeg),
                ("y", NonNeg),
                ("poly", Int(0, 3)),
            ],
            CaseId::D402t => &[
                ("s", Int(0, 4)),
                ("u", Int(0, 4)),
                ("dir", Int(0, 2)),
                ("x", Pos),
            ],
            CaseId::D331b => &[
                ("s", Int(1, 4)),
                ("u", Int(0, 4)),
                ("v", Int(0, 4)),
                ("dir", Int(0, 2)),
                ("x1", Pos),
                ("x2", NonNeg),
            ],
            CaseId::D402s => &[
                ("s", Int(0, 1)),
                ("u", Int(0, 4)),
                ("v", Int(0, 4)),
                ("x1", Pos),
                ("x2", NonNeg),
                ("cos", Range(-1.0, 1.0)),
            ],
            CaseId::FLemma => &[
                ("beta", Range(0.0, 1.0)),
                ("x", NonNeg),
                ("w", Int(0, 4)),
            ],
            CaseId::HLemma => &[
                ("beta", Range(0.0, 1.0)),
                ("x", NonNeg),
                ("w", Int(0, 4)),
            ],
            CaseId::DfLemma => &[
                ("func", Int(0, 1)),
                ("p", NonNeg),
                ("dir", Int(0, 2)),
                ("w", Int(0, 4)),
            ],
            CaseId::DS => &[
                ("lambda", Pos),
                ("l0fac", AtLeast(1.0)),
                ("pfac", NonNeg),
                ("dir", Int(0, 2)),
                ("w", Int(0, 4)),
            ],
            CaseId::DC => &[
                ("lambda", Pos),
                ("l0fac", AtLeast(1.0)),
                ("pfac", NonNeg),
                ("dir", Int(0, 2)),
                ("w", Int(0, 4)),
                ("xi", Pos),
            ],
            CaseId::DS2 => &[
                ("kind", Int(0, 1)),
                ("lambda", Pos),
                ("l0fac", AtLeast(1.0)),
                ("pfac", NonNeg),
                ("dir", Int(0, 2)),
                ("xi", Pos),
            ],
            CaseId::DS3 => &[
                ("kind", Int(0, 1)),
                ("lambda0", Pos),
                ("pfac", NonNeg),
                ("dir", Int(0, 2)),
                ("w", Int(0, 4)),
                ("xi", Pos),
            ],
            CaseId::C16 => &[
                ("part", Int(0, 3)),
                ("w", Int(0, 4)),
                ("lambda", Pos),
                ("l0fac", AtLeast(1.0)),
                ("pfac", NonNeg),
                ("dir", Int(0, 2)),
                ("xi", Pos),
            ],
        }
    }

    /// Evaluate the case at one point, values in the order of [`Self::axes`].
    /// `Ok(None)` means the point misses the case's preconditions.
    pub(crate) fn eval(self, v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
        match self {
            CaseId::Twin => twin(v),
            CaseId::Twin2 => twin2(v),
            CaseId::Int3 => int3(v),
            CaseId::Int4 => int4(v),
            CaseId::Int4b => int4b(v),
            CaseId::Int4a => int4a(v),
            CaseId::Int5 => int5(v),
            CaseId::Int7 => int7(v),
            CaseId::Frac => frac(v),
            CaseId::Plog => plog(v),
            CaseId::LogSplit => logsplit(v),
            CaseId::D402t => d402t(v),
            CaseId::D331b => d331b(v),
            CaseId::D402s => d402s(v),
            CaseId::FLemma => f_lemma(v),
            CaseId::HLemma => h_lemma(v),
            CaseId::DfLemma => df_lemma(v),
            CaseId::DS => d_s(v),
            CaseId::DC => d_c(v),
            CaseId::DS2 => d_s2(v),
            CaseId::DS3 => d_s3(v),
            CaseId::C16 => c16(v),
        }
    }

    /// A grid that exercises the case across several decades of every scale.
    pub fn default_grid(self) -> GridSpec {
        use crate::grid::Axis;
        let k = Axis::ints("k", 0, 4);
        let dir = Axis::ints("dir", 0, 2);
        let with_zero = |name: &str, min: f64, max: f64, n: usize| {
            let mut pts = vec![0.0];
            pts.extend(Axis::log(name, min, max, n).points);
            Axis::list(name, &pts)
        };
        let axes = match self {
            CaseId::Twin => vec![
                Axis::log("lambda", 1e-2, 1e2, 8),
                with_zero("q", 1e-2, 1e2, 6),
                Axis::log("p", 1e-2, 1e2, 8),
                Axis::log("P", 1e-2, 1e2, 8),
                k,
            ],
            CaseId::Twin2 => vec![
                Axis::log("lambda", 1e-2, 1e2, 8),
                Axis::log("M", 1e-2, 1e2, 6),
                with_zero("q", 1e-2, 1e2, 6),
                Axis::log("p", 1e-2, 1e2, 8),
                k,
            ],
            CaseId::Int3 => vec![
                Axis::log("lambda", 1e-2, 1e2, 8),
                Axis::log("eta", 1e-2, 1e2, 8),
                Axis::log("M", 1e-2, 1e2, 8),
                k,
            ],
            CaseId::Int4 => vec![
                Axis::log("lambda", 1e-2, 1e2, 8),
                Axis::log("eta", 1e-2, 1e2, 8),
                Axis::log("P", 1e-2, 1e2, 8),
                k,
            ],
            CaseId::Int4b => vec![
                Axis::log("lambda", 1e-2, 1e2, 8),
                Axis::log("M", 1e-2, 1e2, 8),
                Axis::log("P", 1e-2, 1e2, 8),
                with_zero("eta", 1e-2, 1e2, 6),
                k,
            ],
            CaseId::Int4a => vec![
                Axis::log("lambda", 1e-2, 1e2, 8),
                Axis::log("lambda0", 1e-2, 1e2, 8),
                with_zero("q", 1e-2, 1e2, 6),
                Axis::log("P", 1e-2, 1e2, 8),
                k,
            ],
            CaseId::Int5 => vec![
                Axis::log("a", 1e-2, 1e2, 8),
                Axis::log("d", 1e-2, 1e2, 8),
                with_zero("b", 1e-2, 1e2, 6),
                Axis::ints("m", 0, 3),
                k,
            ],
            CaseId::Int7 => vec![
                Axis::log("p", 1e-2, 1e2, 8),
                Axis::log("lambda", 1e-2, 1e2, 8),
                Axis::list("eta_frac", &[0.0, 0.5, 1.0]),
                Axis::list("qfac", &[0.0, 0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0]),
                Axis::list("cos", &[-1.0, -0.5, 0.0, 0.5, 1.0]),
            ],
            CaseId::Frac => vec![
                Axis::log("r", 1e-2, 1e2, 9),
                Axis::ints("w", 0, 4),
                Axis::list("xpar", &[-30.0, -3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0, 10.0, 30.0]),
                Axis::list("xperp", &[0.0, 0.5, 2.0, 10.0]),
                Axis::list("y", &[0.0, 0.1, 1.0, 3.0, 20.0]),
            ],
            CaseId::Plog => vec![
                Axis::log("r", 1e-3, 1e3, 13),
                Axis::log("s", 1e-2, 1e2, 8),
                Axis::log("p", 1e-2, 1e2, 8),
                Axis::log("M", 1e-2, 1e2, 8),
                Axis::log("lambda", 1e-2, 1e2, 8),
            ],
            CaseId::LogSplit => vec![
                with_zero("m", 1e-3, 1e3, 7),
                Axis::log("x", 1e-3, 1e3, 12),
                Axis::log("y", 1e-3, 1e3, 12),
                Axis::ints("poly", 0, 3),
            ],
            CaseId::D402t => vec![
                Axis::ints("s", 0, 4),
                Axis::ints("u", 0, 4),
                dir,
                Axis::log("x", 1e-2, 10.0, 12),
            ],
            CaseId::D331b => vec![
                Axis::ints("s", 1, 4),
                Axis::ints("u", 0, 4),
                Axis::ints("v", 0, 2),
                dir,
                Axis::log("x1", 1e-2, 10.0, 8),
                Axis::list("x2", &[0.0, 0.3, 2.0, 10.0]),
            ],
            CaseId::D402s => vec![
                Axis::ints("s", 0, 1),
                Axis::ints("u", 0, 4),
                Axis::ints("v", 0, 4),
                Axis::log("x1", 1e-2, 10.0, 6),
                Axis::log("x2", 1e-2, 10.0, 6),
                Axis::list("cos", &[-1.0, -0.3, 0.3, 1.0]),
            ],
            CaseId::FLemma | CaseId::HLemma => vec![
                Axis::list("beta", &[0.0, 0.25, 0.5, 0.9, 1.0]),
                with_zero("x", 1e-3, 1e3, 16),
                Axis::ints("w", 0, 4),
            ],
            CaseId::DfLemma => vec![
                Axis::ints("func", 0, 1),
                Axis::log("p", 1e-2, 1e2, 10),
                dir,
                Axis::ints("w", 0, 4),
            ],
            CaseId::DS => vec![
                Axis::log("lambda", 1e-2, 1e2, 8),
                Axis::list("l0fac", &[1.0, 1.5, 4.0, 100.0]),
                with_zero("pfac", 1e-2, 15.0, 9),
                dir,
                Axis::ints("w", 0, 4),
            ],
            CaseId::DC => vec![
                Axis::log("lambda", 1e-2, 1e2, 8),
                Axis::list("l0fac", &[1.0, 1.5, 4.0, 100.0]),
                with_zero("pfac", 1e-2, 15.0, 9),
                dir,
                Axis::ints("w", 0, 4),
                Axis::list("xi", &[0.3, 1.0, 2.5]),
            ],
            CaseId::DS2 => vec![
                Axis::ints("kind", 0, 1),
                Axis::log("lambda", 1e-2, 1e2, 8),
                Axis::list("l0fac", &[1.5, 100.0]),
                with_zero("pfac", 1e-2, 15.0, 9),
                dir,
                Axis::list("xi", &[0.3, 1.0, 2.5]),
            ],
            CaseId::DS3 => vec![
                Axis::ints("kind", 0, 1),
                Axis::log("lambda0", 1e-2, 1e2, 8),
                with_zero("pfac", 1e-2, 15.0, 9),
                dir,
                Axis::ints("w", 0, 4),
                Axis::list("xi", &[0.3, 1.0, 2.5]),
            ],
            CaseId::C16 => vec![
                Axis::ints("part", 0, 3),
                Axis::ints("w", 0, 4),
                Axis::log("lambda", 1e-2, 1e2, 6),
                Axis::list("l0fac", &[1.5, 4.0, 100.0]),
                with_zero("pfac", 1e-2, 15.0, 7),
                dir,
                Axis::list("xi", &[0.3, 1.0, 2.5]),
            ],
        };
        GridSpec::new(axes)
    }
}

fn fact(n: i32) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

const DIRS: [[f64; 4]; 3] = [
    [1.0, 0.0, 0.0, 0.0],
    [0.5, 0.5, 0.5, 0.5],
    [0.6, 0.0, -0.8, 0.0],
];

fn scaled(dir: u8, r: f64) -> Vec4 {
    let d = DIRS[dir as usize];
    Vec4([r * d[0], r * d[1], r * d[2], r * d[3]])
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn check_routes(a: &[f64], b: &[f64], floor: f64, order: u8) -> Result<(), EstimatesError> {
    for (&x, &y) in a.iter().zip(b) {
        if x.abs() <= floor && y.abs() <= floor {
            continue;
        }
        if (x - y).abs() > ROUTE_TOL * x.abs().max(y.abs()) {
            return Err(EstimatesError::RouteMismatch {
                route_a: x,
                route_b: y,
                order,
            });
        }
    }
    Ok(())
}

/// Route agreement judged against the term-magnitude scale `m`: a deep
/// leading-order cancellation leaves a value many orders below the terms that
/// produced it, and there neither route carries more than terms × roundoff of
/// accuracy.  A genuinely wrong coefficient shifts the result by a fixed
/// fraction of `m`, far above the slack.
fn check_routes_scaled(
    a: &[f64],
    b: &[f64],
    m: &[f64],
    floor: f64,
    order: u8,
) -> Result<(), EstimatesError> {
    for ((&x, &y), &mag) in a.iter().zip(b).zip(m) {
        if x.abs() <= floor && y.abs() <= floor {
            continue;
        }
        let tol = (ROUTE_TOL * x.abs().max(y.abs())).max(ABS_SLACK * mag);
        if (x - y).abs() > tol {
            return Err(EstimatesError::RouteMismatch {
                route_a: x,
                route_b: y,
                order,
            });
        }
    }
    Ok(())
}

fn twin(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (la, q, p, big) = (v[0], v[1], v[2], v[3]);
    let k = v[4] as i32;
    if !(q <= p && p <= big) {
        return Ok(None);
    }
    let lhs = quad(
        |l| log_plus(big / l).powi(k) / ((l + p) * (l + q)),
        Domain::SemiInfinite(la),
        DEFAULT_QUAD_TOL,
    )?;
    let shape = (1.0 + log_plus(big / (la + q)).powi(k + 1)) / (la + p + q);
    // The constant is explicit on two branches: k = 0 globally, and k >= 1
    // once the lower scale clears q.  Elsewhere it is existence-only.
    let paper = if k == 0 {
        Some(3.0 + 2.0 * LN_2)
    } else if q <= la {
        Some(2.0 * (LN_2 + 1.0).powi(k + 1) / (k as f64 + 1.0))
    } else {
        None
    };
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper,
    }))
}

fn twin2(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (la, m, q, p) = (v[0], v[1], v[2], v[3]);
    let k = v[4] as i32;
    if !(q <= p) {
        return Ok(None);
    }
    let eta = q.min(m);
    let lhs = quad(
        |l| log_plus(l / m).powi(k) / ((l + p) * (l + q)),
        Domain::SemiInfinite(la),
        DEFAULT_QUAD_TOL,
    )?;
    let shape = (1.0 + log_plus(p / (la + eta)).powi(k + 1) + log_plus(la / m).powi(k + 1))
        / (la + p + q);
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: None,
    }))
}

fn int3(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (la, eta, m) = (v[0], v[1], v[2]);
    let k = v[3] as i32;
    if !(la < eta && eta <= m) {
        return Ok(None);
    }
    let lhs = quad(
        |l| log_plus(l / m).powi(k) / (l + eta),
        Domain::Finite(la, eta),
        DEFAULT_QUAD_TOL,
    )?;
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: 1.0,
        paper: Some(1.0),
    }))
}

fn int4(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (la, eta, big) = (v[0], v[1], v[2]);
    let k = v[3] as i32;
    if !(la < eta && eta <= big) {
        return Ok(None);
    }
    let lhs = quad(
        |l| log_plus(big / l).powi(k) / (l + eta),
        Domain::Finite(la, eta),
        DEFAULT_QUAD_TOL,
    )?;
    // Log power stays at k here, unlike the running-upper-limit variants.
    let shape = 1.0 + log_plus(big / (la + eta)).powi(k);
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: None,
    }))
}

fn int4b(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (la, m, big, eta) = (v[0], v[1], v[2], v[3]);
    let k = v[4] as i32;
    if !(la < m && m <= big && eta <= m) {
        return Ok(None);
    }
    let lhs = quad(
        |l| log_plus(big / l).powi(k) / (l + eta),
        Domain::Finite(la, m),
        DEFAULT_QUAD_TOL,
    )?;
    let shape = 1.0 + log_plus(big / (la + eta)).powi(k + 1);
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: None,
    }))
}

fn int4a(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (la, l0, q, big) = (v[0], v[1], v[2], v[3]);
    let k = v[4] as i32;
    if !(la < l0) {
        return Ok(None);
    }
    let lhs = quad(
        |l| log_plus(big / l).powi(k) / (l + q),
        Domain::Finite(la, l0),
        DEFAULT_QUAD_TOL,
    )?;
    let shape = 1.0 + log_plus(big / (la + q)).powi(k + 1) + log_plus(l0 / (la + q));
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: None,
    }))
}

fn int5(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (a, d, b) = (v[0], v[1], v[2]);
    let m = v[3] as i32;
    let k = v[4] as i32;
    let lhs = quad(
        |x| x.powi(m) * log_plus(d / (b + x)).powi(k),
        Domain::Finite(0.0, a),
        DEFAULT_QUAD_TOL,
    )?;
    let shape = a.powi(m + 1) * (1.0 + log_plus(d / (a + b)).powi(k));
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: None,
    }))
}

fn int7(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (pn, la, ef, qf, cs) = (v[0], v[1], v[2], v[3], v[4]);
    let eta = ef * la;
    let (qx, qy) = (qf * pn * cs, qf * pn * (1.0 - cs * cs).max(0.0).sqrt());
    let lhs = quad(
        |t| pn / (la + ((t * pn + qx).powi(2) + qy * qy).sqrt()),
        Domain::Finite(0.0, 1.0),
        DEFAULT_QUAD_TOL,
    )?;
    let shape = 4.0f64.ln() + log_plus(pn / (la + eta));
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: Some(2.0),
    }))
}

fn frac(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (r, xp, xt, y) = (v[0], v[2], v[3], v[4]);
    let w = v[1] as i32;
    let x_sq = xp * xp + xt * xt;
    let dist = ((xp - y) * (xp - y) + xt * xt).sqrt();
    let lhs = (-r * x_sq).exp() / (1.0 + dist).powi(w);
    let shape = fact(w) * 2.0f64.max(1.0 + 1.0 / (2.0 * r)).powi(w) / (1.0 + y).powi(w);
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: Some(1.0),
    }))
}

fn plog(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (r, s, p, m, la) = (v[0], v[1], v[2], v[3], v[4]);
    let lhs = (-r * s * s / (la * la)).exp() * log_plus(m.max((p * p + s * s).sqrt()) / la);
    let base = 0.5 * log_plus(1.0 / r) + log_plus(m.max(p) / la);
    Ok(Some(PointCheck {
        lhs,
        rhs_base: base,
        rhs_shape: 1.0,
        paper: None,
    }))
}

const POLYS: [&[f64]; 4] = [
    &[1.0, 1.0],
    &[0.5, 0.0, 2.0],
    &[1.0, 2.0, 0.0, 3.0],
    &[0.0, 1.0, 0.0, 0.0, 1.5],
];

fn logsplit(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (m, x, y) = (v[0], v[1], v[2]);
    let coeffs = POLYS[v[3] as usize];
    let logm = |z: f64| log_plus(z.max(m));
    let u = logm((x * x + y * y).sqrt());
    let mut lhs = 0.0;
    let mut shape = 0.0;
    for (k, &c) in coeffs.iter().enumerate() {
        let k = k as i32;
        lhs += c * u.powi(k);
        shape += c * 3.0f64.powi(k) * (logm(y).powi(k) + logm(x).powi(k) + 1.0);
    }
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: None,
    }))
}

fn multi_degrees(s: u8) -> Vec<[u8; 4]> {
    let mut out = Vec::new();
    for a in 0..=s {
        for b in 0..=s - a {
            for c in 0..=s - a - b {
                out.push([a, b, c, s - a - b - c]);
            }
        }
    }
    out
}

/// Frobenius norm of the order-`u` derivative tensor of
/// `x^{⊗s} (1 - e^{-(x²)²})`, the tensor factor carried by reduced vertices.
fn tensor_window_frob(s: u8, u: u8, x: Vec4) -> f64 {
    let space = JetSpace::get(4, u);
    let vars: Vec<Jet> = (0..4).map(|i| Jet::var(&space, i, x.0[i])).collect();
    let mut t = vars[0].mul(&vars[0]);
    for xi in &vars[1..] {
        t = t.add(&xi.mul(xi));
    }
    let window = Jet::constant(&space, 1.0).sub(&t.mul(&t).scale(-1.0).exp());
    let mut sum = 0.0;
    for m in multi_degrees(s) {
        let mut comp = window.clone();
        for (i, &mi) in m.iter().enumerate() {
            for _ in 0..mi {
                comp = comp.mul(&vars[i]);
            }
        }
        let mult = fact(s as i32) / m.iter().map(|&mi| fact(mi as i32)).product::<f64>();
        sum += mult * comp.frob_sq(u);
    }
    sum.sqrt()
}

fn d402t(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (s, u, dir) = (v[0] as u8, v[1] as u8, v[2] as u8);
    let r = v[3];
    let lhs = tensor_window_frob(s, u, scaled(dir, r));
    let shape = if u <= s {
        r.powi((s + 1 - u) as i32)
    } else {
        1.0
    };
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: None,
    }))
}

fn d331b(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (s, u, vv, dir) = (v[0] as u8, v[1] as u8, v[2] as u8, v[3] as u8);
    let (r1, r2) = (v[4], v[5]);
    // The second slot enters linearly, so its derivatives close in v <= 1:
    // v = 0 keeps the factor |x₂|, v = 1 contracts the Kronecker block
    // (Frobenius weight 2 over the four paired entries), higher v vanishes.
    let dnorm = tensor_window_frob(s - 1, u, scaled(dir, r1));
    let lhs = match vv {
        0 => r2 * dnorm,
        1 => 2.0 * dnorm,
        _ => 0.0,
    };
    let xn = (r1 * r1 + r2 * r2).sqrt();
    let shape = if u + vv <= s {
        xn.powi((s + 1 - u - vv) as i32)
    } else {
        xn + 1.0
    };
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: None,
    }))
}

fn d402s(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (s, u, vv) = (v[0] as u8, v[1] as u8, v[2] as u8);
    let (r1, r2, cs) = (v[3], v[4], v[5]);
    let space = JetSpace::get(8, u + vv);
    let sn = (1.0 - cs * cs).max(0.0).sqrt();
    let x1 = [r1, 0.0, 0.0, 0.0];
    let x2 = [r2 * cs, r2 * sn, 0.0, 0.0];
    let a: Vec<Jet> = (0..4).map(|i| Jet::var(&space, i, x1[i])).collect();
    let b: Vec<Jet> = (0..4).map(|i| Jet::var(&space, 4 + i, x2[i])).collect();
    let mut t1 = a[0].mul(&a[0]);
    let mut ty = a[0].add(&b[0]).mul(&a[0].add(&b[0]));
    for i in 1..4 {
        t1 = t1.add(&a[i].mul(&a[i]));
        let yi = a[i].add(&b[i]);
        ty = ty.add(&yi.mul(&yi));
    }
    let window = t1
        .mul(&t1)
        .scale(-1.0)
        .exp()
        .sub(&ty.mul(&ty).scale(-1.0).exp());
    let mut sum = 0.0;
    if s == 0 {
        sum = window.frob_sq_split(u, vv, 4);
    } else {
        for mu in 0..4 {
            sum += a[mu].mul(&window).frob_sq_split(u, vv, 4);
        }
    }
    let lhs = sum.sqrt();
    let xn = (r1 * r1 + r2 * r2).sqrt();
    let shape = if u + vv <= s {
        xn.powi((s + 1 - u - vv) as i32)
    } else {
        xn + 1.0
    };
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: None,
    }))
}

fn f_lemma(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (beta, x) = (v[0], v[1]);
    let w = v[2] as i32;
    let lhs = f_deriv(beta, x, w as u32)?.abs();
    let shape = fact(w) / (1.0 + x).powi(w + 1);
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: Some(E),
    }))
}

fn h_lemma(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (beta, x) = (v[0], v[1]);
    let w = v[2] as u8;
    let space = JetSpace::get(1, w);
    let xj = Jet::var(&space, 0, x);
    let t = xj.mul(&xj);
    let mut series = Vec::with_capacity(w as usize + 1);
    for j in 0..=w as u32 {
        series.push(f_deriv(beta, t.value(), j)? / fact(j as i32));
    }
    let h = xj.mul(&t.compose_series(&series));
    let lhs = h.deriv(&[w]).abs();
    // Constant evaluated at the free parameter's reference choice C = 2.
    let shape = fact(w as i32) * (4.0 * E.sqrt()).powi(w as i32) / (1.0 + x).powi(w as i32 + 1);
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: Some(3.0 * E),
    }))
}

fn df_lemma(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let func = v[0] as u8;
    let pn = v[1];
    let dir = v[2] as u8;
    let w = v[3] as u8;
    let p = scaled(dir, pn);
    let t0 = p.norm_sq();
    let outer = |j: i32| -> f64 {
        match func {
            0 => (-t0).exp(),
            _ => fact(j) / (1.0 + t0).powi(j + 1),
        }
    };
    let space = JetSpace::get(4, w);
    let vars: Vec<Jet> = (0..4).map(|i| Jet::var(&space, i, p.0[i])).collect();
    let mut t = vars[0].mul(&vars[0]);
    for xi in &vars[1..] {
        t = t.add(&xi.mul(xi));
    }
    let mut series = Vec::with_capacity(w as usize + 1);
    for j in 0..=w as i32 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        series.push(sign * outer(j) / fact(j));
    }
    let lhs = t.compose_series(&series).max_abs_deriv(w);
    let wi = w as i32;
    let mut sum = 0.0;
    let mut k = 0;
    while 2 * k <= wi {
        sum += fact(wi) / (fact(wi - 2 * k) * fact(k)) * pn.powi(wi - 2 * k) * outer(wi - k);
        k += 1;
    }
    let shape = 2.0f64.powi(wi) * sum;
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: Some(1.0),
    }))
}

fn d_s(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (la, fac, pf) = (v[0], v[1], v[2]);
    let dir = v[3] as u8;
    let w = v[4] as u8;
    let reg = Regulator::new(la, la * fac, 1.0)?;
    let p = scaled(dir, pf * la);
    let pn = p.norm();
    let denom = (la + pn).powi(w as i32 + 2);
    let shape = fact(w as i32) * (16.0 * 1.5f64.exp()).powi(w as i32) / denom;
    let floor = (ROUTE_FLOOR * fact(w as i32) / denom).max(1e-280);
    let jets = prop_jets(PropKind::Ghost, p, &reg, w)?;
    let maj = prop_jets_majorant(PropKind::Ghost, p, &reg, w)?;
    let mut lhs = 0.0f64;
    for di in DerivIndex::all(w) {
        if di.order() != w {
            continue;
        }
        let a = components(&prop_deriv(PropKind::Ghost, p, &reg, di)?);
        let b = components(&jets.deriv(&di.0));
        let m = components(&maj.deriv(&di.0));
        check_routes_scaled(&a, &b, &m, floor, w)?;
        lhs = lhs.max(max_abs(&a));
    }
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: Some(6.0 * E),
    }))
}

fn d_c(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let (la, fac, pf) = (v[0], v[1], v[2]);
    let dir = v[3] as u8;
    let w = v[4] as u8;
    let xi = v[5];
    let reg = Regulator::new(la, la * fac, xi)?;
    let p = scaled(dir, pf * la);
    let pn = p.norm();
    let denom = (la + pn).powi(w as i32 + 2);
    let shape = fact(w as i32) * (16.0 * 1.5f64.exp()).powi(w as i32) / denom;
    let floor = (ROUTE_FLOOR * fact(w as i32) / denom).max(1e-280);
    let jets = prop_jets(PropKind::Gauge, p, &reg, w)?;
    let maj = prop_jets_majorant(PropKind::Gauge, p, &reg, w)?;
    let mut lhs = 0.0f64;
    for di in DerivIndex::all(w) {
        if di.order() != w {
            continue;
        }
        let a = components(&prop_deriv(PropKind::Gauge, p, &reg, di)?);
        let b = components(&jets.deriv(&di.0));
        let m = components(&maj.deriv(&di.0));
        check_routes_scaled(&a, &b, &m, floor, w)?;
        lhs = lhs.max(max_abs(&a));
    }
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: Some(8.0 * E * (7.0 * xi + 10.0)),
    }))
}

fn d_s2(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let kind = if v[0] as u8 == 0 {
        PropKind::Ghost
    } else {
        PropKind::Gauge
    };
    let (la, fac, pf) = (v[1], v[2], v[3]);
    let dir = v[4] as u8;
    let xi = v[5];
    let reg = Regulator::new(la, la * fac, xi)?;
    let p = scaled(dir, pf * la);
    let shape = (-p.norm_sq() / (la * la)).exp() / la.powi(3);
    let floor = (ROUTE_FLOOR * shape).max(1e-280);
    let a = prop_dot(kind, p, &reg)?;
    let a = components(&a);
    let b = prop_dot_fd(kind, p, &reg)?;
    check_routes(&a, &b, floor, 0)?;
    let paper = match kind {
        PropKind::Ghost => 4.0,
        PropKind::Gauge => 4.0 * (1.0 + (xi - 1.0).abs()),
    };
    Ok(Some(PointCheck {
        lhs: max_abs(&a),
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: Some(paper),
    }))
}

fn d_s3(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let kind = if v[0] as u8 == 0 {
        PropKind::Ghost
    } else {
        PropKind::Gauge
    };
    let (l0, pf) = (v[1], v[2]);
    let dir = v[3] as u8;
    let w = v[4] as u8;
    let xi = v[5];
    // The claim is uniform in the lower scale; probe it at half the upper one.
    let reg = Regulator::new(l0 / 2.0, l0, xi)?;
    let p = scaled(dir, pf * l0);
    let shape = 1.0 / (l0 * (l0 + p.norm()).powi(w as i32 + 2));
    let floor = (ROUTE_FLOOR * shape).max(1e-280);
    let jets = lambda0_deriv_jets(kind, p, &reg, w);
    let maj = prop_jets_majorant(kind, p, &reg, w)?;
    // The difference quotient divides closed-form values by the step, so its
    // roundoff lives at the differenced values' term scale over the step.
    let h = crate::profile::FD_STEP * l0;
    let mut lhs = 0.0f64;
    for di in DerivIndex::all(w) {
        if di.order() != w {
            continue;
        }
        let a = components(&jets.deriv(&di.0));
        let b = prop_deriv_l0_fd(kind, p, &reg, di)?;
        let m: Vec<f64> = components(&maj.deriv(&di.0))
            .iter()
            .map(|x| x / h)
            .collect();
        check_routes_scaled(&a, &b, &m, floor, w)?;
        lhs = lhs.max(max_abs(&a));
    }
    Ok(Some(PointCheck {
        lhs,
        rhs_base: 0.0,
        rhs_shape: shape,
        paper: None,
    }))
}

fn c16(v: &[f64]) -> Result<Option<PointCheck>, EstimatesError> {
    let part = v[0] as u8;
    let w = v[1] as u8;
    let (la, fac, pf) = (v[2], v[3], v[4]);
    let dir = v[5] as u8;
    let xi = v[6];
    // Parts 0/1 bound momentum derivatives of the ghost/gauge propagator,
    // parts 2/3 their scale derivative, which carries no momentum order.
    if part >= 2 && w > 0 {
        return Ok(None);
    }
    let kind = if part % 2 == 0 {
        PropKind::Ghost
    } else {
        PropKind::Gauge
    };
    let reg = Regulator::new(la, la * fac, xi)?;
    let p = scaled(dir, pf * la);
    let pn = p.norm();
    if part < 2 {
        let denom = (pn + la).powi(w as i32 + 2);
        let shape = (1.0 + xi) * fact(w as i32) * C16_GROWTH.powi(w as i32) / denom;
        let floor = (ROUTE_FLOOR * fact(w as i32) / denom).max(1e-280);
        let jets = prop_jets(kind, p, &reg, w)?;
        let maj = prop_jets_majorant(kind, p, &reg, w)?;
        let mut lhs = 0.0f64;
        for di in DerivIndex::all(w) {
            if di.order() != w {
                continue;
            }
            let a = components(&prop_deriv(kind, p, &reg, di)?);
            let b = components(&jets.deriv(&di.0));
            let m = components(&maj.deriv(&di.0));
            check_routes_scaled(&a, &b, &m, floor, w)?;
            lhs = lhs.max(max_abs(&a));
        }
        Ok(Some(PointCheck {
            lhs,
            rhs_base: 0.0,
            rhs_shape: shape,
            paper: None,
        }))
    } else {
        let shape = (1.0 + xi) * (-p.norm_sq() / (la * la)).exp() / la.powi(3);
        let floor = (ROUTE_FLOOR * shape).max(1e-280);
        let a = prop_dot(kind, p, &reg)?;
        let a = components(&a);
        let b = prop_dot_fd(kind, p, &reg)?;
        check_routes(&a, &b, floor, 0)?;
        Ok(Some(PointCheck {
            lhs: max_abs(&a),
            rhs_base: 0.0,
            rhs_shape: shape,
            paper: None,
        }))
    }
}
