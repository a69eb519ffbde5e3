use crate::{momentum_map, theta_set, ThetaWeight, TreesError, WeightedTree};
use fe_momenta::{log_plus, MomentumConfig, MultiIndex};

/// Product of inverse powers `(lambda + |p_e|)^(-theta(e))` over all edges.
/// `lambda = 0` is allowed as long as every weighted edge carries nonzero
/// momentum; otherwise the amplitude is singular.
pub fn amplitude_pi(
    tree: &WeightedTree,
    theta: &ThetaWeight,
    cfg: &MomentumConfig,
    lambda: f64,
) -> Result<f64, TreesError> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(TreesError::BadScale(lambda));
    }
    if theta.theta.len() != tree.edge_count() {
        return Err(TreesError::CountMismatch {
            what: "edge weights",
            expected: tree.edge_count(),
            got: theta.theta.len(),
        });
    }
    let em = momentum_map(tree, cfg)?;
    let mut out = 1.0;
    for (e, &t) in theta.theta.iter().enumerate() {
        if t == 0 {
            continue;
        }
        let base = lambda + em.p[e].norm();
        if base == 0.0 {
            return Err(TreesError::SingularAmplitude);
        }
        out *= base.powi(-i32::from(t));
    }
    Ok(out)
}

/// Tree amplitude value plus the flag for the undetermined three-leaf case.
#[derive(Debug, Clone, Copy)]
pub struct QAmplitude {
    pub value: f64,
    /// Set when a three-leaf tree met `w = 0`: the decrement rule has no slot
    /// to act on, so the plain weight sum was used and callers should report
    /// the case rather than trust a convention.
    pub three_point_zero_weight: bool,
}

/// Prepared evaluator for the tree amplitude as a function of the scale:
/// edge norms, star and source-leg powers, and the weight families are all
/// fixed once, so scanning many scales (quadrature) stays cheap.
#[derive(Debug, Clone)]
pub struct QEvaluator {
    edge_norms: Vec<f64>,
    star_pows: Vec<(usize, i32)>,
    source_edges: Vec<usize>,
    /// Weight vectors per branch; several branches only for three-leaf trees
    /// with `w != 0`, where the value is the smallest branch sum (one branch
    /// per slot whose count was decremented).
    branches: Vec<Vec<Vec<u8>>>,
    flagged: bool,
}

impl QEvaluator {
    pub fn new(
        tree: &WeightedTree,
        w: &MultiIndex,
        cfg: &MomentumConfig,
    ) -> Result<Self, TreesError> {
        let em = momentum_map(tree, cfg)?;
        if w.len() != tree.leaf_count() {
            return Err(TreesError::CountMismatch {
                what: "weight slots",
                expected: tree.leaf_count(),
                got: w.len(),
            });
        }
        let (branches, flagged) = if tree.leaf_count() == 3 && w.order() > 0 {
            let mut branches = Vec::new();
            for (slot, &count) in w.counts().iter().enumerate() {
                if count == 0 {
                    continue;
                }
                let mut decremented = w.counts().to_vec();
                decremented[slot] -= 1;
                let dw = MultiIndex::new(decremented)?;
                branches.push(
                    theta_set(tree, &dw)?
                        .into_iter()
                        .map(|t| t.theta)
                        .collect(),
                );
            }
            (branches, false)
        } else {
            let single = theta_set(tree, w)?
                .into_iter()
                .map(|t| t.theta)
                .collect();
            (vec![single], tree.leaf_count() == 3)
        };
        Ok(QEvaluator {
            edge_norms: em.p.iter().map(|q| q.norm()).collect(),
            star_pows: (0..tree.edge_count())
                .filter(|&e| tree.stars(e) > 0)
                .map(|e| (e, i32::from(tree.stars(e))))
                .collect(),
            source_edges: tree.source_edges(),
            branches,
            flagged,
        })
    }

    pub fn three_point_zero_weight(&self) -> bool {
        self.flagged
    }

    pub fn eval(&self, lambda: f64) -> Result<f64, TreesError> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(TreesError::BadScale(lambda));
        }
        let shifted = |e: usize| lambda + self.edge_norms[e];
        let mut prefactor = 1.0;
        for &(e, pow) in &self.star_pows {
            prefactor *= shifted(e).powi(pow);
        }
        for &e in &self.source_edges {
            let base = shifted(e);
            if base == 0.0 {
                return Err(TreesError::SingularAmplitude);
            }
            prefactor /= base;
        }
        let mut best = f64::INFINITY;
        for branch in &self.branches {
            let mut sum = 0.0;
            for theta in branch {
                let mut term = 1.0;
                for (e, &t) in theta.iter().enumerate() {
                    if t == 0 {
                        continue;
                    }
                    let base = shifted(e);
                    if base == 0.0 {
                        return Err(TreesError::SingularAmplitude);
                    }
                    term *= base.powi(-i32::from(t));
                }
                sum += term;
            }
            best = best.min(sum);
        }
        Ok(prefactor * best)
    }
}

/// One-shot tree amplitude: stars over source powers times the weight sum,
/// with the three-leaf decrement rule (smallest branch) where it applies.
pub fn amplitude_q(
    tree: &WeightedTree,
    w: &MultiIndex,
    cfg: &MomentumConfig,
    lambda: f64,
) -> Result<QAmplitude, TreesError> {
    let ev = QEvaluator::new(tree, w, cfg)?;
    Ok(QAmplitude {
        value: ev.eval(lambda)?,
        three_point_zero_weight: ev.flagged,
    })
}

/// Two-block logarithm polynomial with unit coefficients,
/// `sum_i x^i + sum_i y^i` for `x = log_+(max(|p|, m) / (lambda_ir + eta))`
/// and `y = log_+(lambda_uv / m)`: the concrete stand-in wherever a bound
/// allows "some polynomial with nonnegative coefficients" in these logs.
pub fn bounding_log_poly(
    p_norm: f64,
    m: f64,
    eta: f64,
    lambda_ir: f64,
    lambda_uv: f64,
    degree: u32,
) -> f64 {
    let x = log_plus(p_norm.max(m) / (lambda_ir + eta));
    let y = log_plus(lambda_uv / m);
    (0..=degree).map(|i| x.powi(i as i32)).sum::<f64>()
        + (0..=degree).map(|i| y.powi(i as i32)).sum::<f64>()
}
