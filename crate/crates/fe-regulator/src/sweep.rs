use serde::{Deserialize, Serialize};

use fe_momenta::Vec4;

use crate::prop::{prop_deriv, prop_dot, DerivIndex, PropKind};
use crate::Regulator;

/// One grid point of the derivative-bound sweep, ready for CSV export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub kind: String,
    pub lambda: f64,
    pub lambda0: f64,
    pub xi: f64,
    pub p_norm: f64,
    pub w_norm: u8,
    pub value_norm: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Constants fitted so that every momentum derivative obeys
/// `|∂^w prop| ≤ (c₀ + c₁ξ) · w! d^|w| / (|p| + Λ)^{|w|+2}` and every Λ
/// derivative obeys `|∂_Λ prop| ≤ (c₀ + c₁ξ) e^{−p²/Λ²} / Λ³` on the grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegulatorFit {
    pub c0: f64,
    pub c1: f64,
    pub d: f64,
    pub max_ratio: f64,
}

const D_CANDIDATES: [f64; 7] = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0];

const LAMBDA_FRACS: [f64; 8] = [0.05, 0.1, 0.2, 0.35, 0.5, 0.7, 0.85, 0.95];
const XIS: [f64; 5] = [0.2, 0.5, 1.0, 2.0, 5.0];
const P_POINTS: usize = 18;

const ALPHAS: [[u8; 4]; 7] = [
    [0, 0, 0, 0],
    [1, 0, 0, 0],
    [0, 0, 1, 1],
    [2, 0, 0, 0],
    [1, 1, 1, 0],
    [0, 2, 1, 1],
    [4, 0, 0, 0],
];

fn unit_directions() -> [Vec4; 3] {
    let raw = [
        Vec4::new(0.53, -0.81, 0.24, 0.11),
        Vec4::new(-0.12, 0.44, 0.88, -0.10),
        Vec4::new(0.70, 0.10, -0.50, 0.50),
    ];
    raw.map(|v| v * (1.0 / v.norm()))
}

fn factorial(n: u8) -> f64 {
    (1..=n as u64).product::<u64>() as f64
}

struct Record {
    kind: &'static str,
    lambda: f64,
    xi: f64,
    p_norm: f64,
    w_norm: u8,
    value: f64,
    /// constant required at `d = 1` for derivative rows; exact required
    /// constant for Λ-derivative rows (those are d-independent)
    req_at_unit_d: f64,
    dotted: bool,
}

/// Sweep both propagator kinds over a ~10⁴-point grid in `(Λ, ξ, |p|, w)`
/// at fixed `Λ₀`, fit `(c₀, c₁, d)`, and return the annotated rows.
pub fn derivative_bound_sweep(lambda0: f64) -> (RegulatorFit, Vec<SweepRow>) {
    assert!(lambda0 > 0.0);
    let dirs = unit_directions();
    let log_lo = (1e-3f64).ln();
    let log_hi = 3f64.ln();
    let mut records = Vec::new();
    let mut idx = 0usize;
    for &lf in &LAMBDA_FRACS {
        let lambda = lf * lambda0;
        for &xi in &XIS {
            let reg = Regulator::new(lambda, lambda0, xi).unwrap();
            for ip in 0..P_POINTS {
                let frac = ip as f64 / (P_POINTS - 1) as f64;
                let p_norm = (log_lo + frac * (log_hi - log_lo)).exp() * lambda0;
                let p = dirs[idx % dirs.len()] * p_norm;
                idx += 1;
                for alpha in ALPHAS {
                    let w = DerivIndex(alpha);
                    let w_norm = w.order();
                    for kind in [PropKind::Gauge, PropKind::Ghost] {
                        let value = prop_deriv(kind, p, &reg, w).unwrap().norm();
                        let req = value * (p_norm + lambda).powi(w_norm as i32 + 2)
                            / factorial(w_norm);
                        records.push(Record {
                            kind: kind_name(kind),
                            lambda,
                            xi,
                            p_norm,
                            w_norm,
                            value,
                            req_at_unit_d: req,
                            dotted: false,
                        });
                    }
                }
                for kind in [PropKind::Gauge, PropKind::Ghost] {
                    let value = prop_dot(kind, p, &reg).unwrap().norm();
                    // value · Λ³ · e^{p²/Λ²} without overflow: the exponent
                    // x − x² + log(...) is bounded above
                    let x = p_norm * p_norm / (lambda * lambda);
                    let aniso = match kind {
                        PropKind::Gauge => (3.0 + xi * xi).sqrt(),
                        PropKind::Ghost => 1.0,
                    };
                    let log_value =
                        (4.0 * p_norm * p_norm * aniso).ln() - 5.0 * lambda.ln() - x * x;
                    let req = (log_value + x + 3.0 * lambda.ln()).exp();
                    records.push(Record {
                        kind: kind_name(kind),
                        lambda,
                        xi,
                        p_norm,
                        w_norm: 0,
                        value,
                        req_at_unit_d: req,
                        dotted: true,
                    });
                }
            }
        }
    }

    let fit = fit_constants(&records);
    let rows = records
        .iter()
        .map(|r| {
            let c_xi = fit.c0 + fit.c1 * r.xi;
            let (bound, ratio) = if r.dotted {
                let x = r.p_norm * r.p_norm / (r.lambda * r.lambda);
                let b = c_xi * (-x).exp() / r.lambda.powi(3);
                (b, r.req_at_unit_d / c_xi)
            } else {
                let b = c_xi * factorial(r.w_norm) * fit.d.powi(r.w_norm as i32)
                    / (r.p_norm + r.lambda).powi(r.w_norm as i32 + 2);
                (b, r.req_at_unit_d / (c_xi * fit.d.powi(r.w_norm as i32)))
            };
            SweepRow {
                kind: r.kind.to_string(),
                lambda: r.lambda,
                lambda0,
                xi: r.xi,
                p_norm: r.p_norm,
                w_norm: r.w_norm,
                value_norm: r.value,
                bound,
                ratio,
            }
        })
        .collect();
    (fit, rows)
}

fn kind_name(kind: PropKind) -> &'static str {
    match kind {
        PropKind::Gauge => "gauge",
        PropKind::Ghost => "ghost",
    }
}

/// For each candidate geometric factor `d`, reduce the grid to the required
/// constant per ξ, fit the affine envelope `c₀ + c₁ξ`, and keep the candidate
/// with the smallest envelope at the largest ξ.
fn fit_constants(records: &[Record]) -> RegulatorFit {
    let mut best: Option<RegulatorFit> = None;
    for &d in &D_CANDIDATES {
        let mut per_xi: Vec<(f64, f64)> = Vec::new();
        for r in records {
            let req = if r.dotted {
                r.req_at_unit_d
            } else {
                r.req_at_unit_d / d.powi(r.w_norm as i32)
            };
            match per_xi.iter_mut().find(|(xi, _)| *xi == r.xi) {
                Some((_, m)) => *m = m.max(req),
                None => per_xi.push((r.xi, req)),
            }
        }
        per_xi.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut c1: f64 = 0.0;
        for pair in per_xi.windows(2) {
            let slope = (pair[1].1 - pair[0].1) / (pair[1].0 - pair[0].0);
            c1 = c1.max(slope);
        }
        let mut c0: f64 = 0.0;
        for &(xi, m) in &per_xi {
            c0 = c0.max(m - c1 * xi);
        }
        let xi_max = per_xi.last().unwrap().0;
        let score = c0 + c1 * xi_max;
        if best
            .as_ref()
            .map(|b| score < b.c0 + b.c1 * xi_max)
            .unwrap_or(true)
        {
            best = Some(RegulatorFit { c0, c1, d, max_ratio: 0.0 });
        }
    }
    let mut fit = best.unwrap();
    let mut max_ratio: f64 = 0.0;
    for r in records {
        let c_xi = fit.c0 + fit.c1 * r.xi;
        let ratio = if r.dotted {
            r.req_at_unit_d / c_xi
        } else {
            r.req_at_unit_d / (c_xi * fit.d.powi(r.w_norm as i32))
        };
        max_ratio = max_ratio.max(ratio);
    }
    fit.max_ratio = max_ratio;
    fit
}
