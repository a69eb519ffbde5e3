//! Grid sweeps: run one case over a grid, fit the constant, and collect any
//! points where an explicitly known constant fails.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cases::{CaseId, PointCheck};
use crate::grid::GridSpec;
use crate::EstimatesError;

/// Hard cap on grid size, to keep a typo from turning into an hour-long run.
pub const EVAL_CAP: u64 = 1_000_000;

/// Slack granted when enforcing an explicit constant, so that a bound sitting
/// exactly on its edge does not flicker with rounding.
const PAPER_SLACK: f64 = 1e-12;

/// A grid point where the explicitly known constant was exceeded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Failure {
    pub point: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub case: CaseId,
    /// Human-readable description of each grid axis.
    pub grid: Vec<String>,
    /// Points that met the case's preconditions.
    pub points: u64,
    /// Largest `lhs / (rhs_base + C * rhs_shape)` over the grid, with `C` the
    /// explicit constant where there is one and 1 otherwise.
    pub max_ratio: f64,
    /// Smallest constant that would make the bound hold on this grid.
    pub fitted_constant: f64,
    /// The explicit constant, when the whole grid shares one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub paper_constant: Option<f64>,
    pub failures: Vec<Failure>,
}

/// Sweep `case` over `grid` and summarize how the inequality fared.
pub fn verify(case: CaseId, grid: &GridSpec) -> Result<SweepReport, EstimatesError> {
    let spec = case.axes();
    let mut order = Vec::with_capacity(spec.len());
    for (name, kind) in spec {
        let pos = grid
            .axes
            .iter()
            .position(|a| a.name == *name)
            .ok_or(EstimatesError::MissingAxis(name))?;
        let axis = &grid.axes[pos];
        if axis.points.is_empty() {
            return Err(EstimatesError::BadAxis {
                axis: axis.name.clone(),
                detail: "axis has no points".to_string(),
            });
        }
        for &value in &axis.points {
            if !kind.admits(value) {
                return Err(EstimatesError::BadAxis {
                    axis: axis.name.clone(),
                    detail: format!("{value} is not {}", kind.describe()),
                });
            }
        }
        order.push(pos);
    }
    for axis in &grid.axes {
        if !spec.iter().any(|(name, _)| *name == axis.name) {
            return Err(EstimatesError::BadAxis {
                axis: axis.name.clone(),
                detail: format!("not an axis of case {case}"),
            });
        }
    }
    let n = grid.len();
    if n > EVAL_CAP {
        return Err(EstimatesError::GridTooLarge {
            got: n,
            cap: EVAL_CAP,
        });
    }

    let checks: Vec<Option<PointCheck>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let raw = grid.point(i);
            let vals: Vec<f64> = order.iter().map(|&j| raw[j]).collect();
            case.eval(&vals)
        })
        .collect::<Result<_, _>>()?;

    let mut points = 0u64;
    let mut max_ratio = 0.0f64;
    let mut fitted = 0.0f64;
    let mut paper_seen: Option<Option<f64>> = None;
    let mut failures = Vec::new();
    for (i, check) in checks.into_iter().enumerate() {
        let Some(c) = check else { continue };
        points += 1;
        let cref = c.paper.unwrap_or(1.0);
        if c.lhs > 0.0 {
            max_ratio = max_ratio.max(c.lhs / (c.rhs_base + cref * c.rhs_shape));
        }
        if c.lhs > c.rhs_base {
            fitted = fitted.max((c.lhs - c.rhs_base) / c.rhs_shape);
        }
        paper_seen = match paper_seen {
            None => Some(c.paper),
            Some(prev) if prev == c.paper => Some(prev),
            Some(_) => Some(None),
        };
        if let Some(pc) = c.paper {
            let rhs = c.rhs_base + pc * c.rhs_shape;
            if c.lhs > rhs * (1.0 + PAPER_SLACK) {
                let raw = grid.point(i as u64);
                let point = grid
                    .axes
                    .iter()
                    .zip(raw)
                    .map(|(a, value)| (a.name.clone(), value))
                    .collect();
                failures.push(Failure {
                    point,
                    lhs: c.lhs,
                    rhs,
                });
            }
        }
    }

    Ok(SweepReport {
        case,
        grid: grid.describe(),
        points,
        max_ratio,
        fitted_constant: fitted,
        paper_constant: paper_seen.flatten(),
        failures,
    })
}
