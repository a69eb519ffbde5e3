use crate::{MomentaError, Vec4};
use serde::{Deserialize, Serialize};

/// Largest number of momenta we accept: the small-momentum gauge `eta` scans
/// all nonempty subsets of the tail, so the cost is `2^(n-1) - 1` vector sums.
pub const MAX_MOMENTA: usize = 20;

/// Below this fraction of the reference scale a subset sum counts as zero.
const ETA_ZERO_REL: f64 = 1e-12;

/// Relative slack on the `|p_i| <= M` ball test, so points constructed to sit
/// exactly on the sphere classify stably.
const BALL_SLACK: f64 = 1e-12;

/// A closed kinematic configuration: `n` four-momenta summing to zero, plus
/// the reference scale `M` that all smallness notions refer to. Index 0 is
/// the dependent momentum, `p_0 = -(p_1 + ... + p_{n-1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumConfig {
    pub n: usize,
    #[serde(rename = "M")]
    pub scale: f64,
    pub p: Vec<Vec4>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MomentumClass {
    #[serde(rename = "exceptional")]
    Exceptional,
    #[serde(rename = "nonexceptional")]
    Nonexceptional,
    #[serde(rename = "in_M_n")]
    InMn,
}

impl MomentumConfig {
    /// Builds the closed configuration from the independent tail momenta.
    /// `p_0` is the negated left-fold of the tail, and `momentum_sum` folds
    /// in the same order, so conservation holds exactly in floating point.
    pub fn from_tail(scale: f64, tail: Vec<Vec4>) -> Result<Self, MomentaError> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(MomentaError::BadScale(scale));
        }
        let n = tail.len() + 1;
        if !(2..=MAX_MOMENTA).contains(&n) {
            return Err(MomentaError::UnsupportedCount(n));
        }
        for (i, q) in tail.iter().enumerate() {
            if !q.is_finite() {
                return Err(MomentaError::NonFinite(i + 1));
            }
        }
        let mut p = Vec::with_capacity(n);
        p.push(-Vec4::fold_sum(&tail));
        p.extend(tail);
        Ok(MomentumConfig { n, scale, p })
    }

    /// Checks a config that came from outside (JSON etc.): count consistency,
    /// finiteness, and momentum conservation up to rounding.
    pub fn validate(&self) -> Result<(), MomentaError> {
        if !(2..=MAX_MOMENTA).contains(&self.n) {
            return Err(MomentaError::UnsupportedCount(self.n));
        }
        if self.p.len() != self.n {
            return Err(MomentaError::LengthMismatch {
                expected: self.n,
                got: self.p.len(),
            });
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(MomentaError::BadScale(self.scale));
        }
        for (i, q) in self.p.iter().enumerate() {
            if !q.is_finite() {
                return Err(MomentaError::NonFinite(i));
            }
        }
        let reference = self
            .p
            .iter()
            .map(|q| q.norm())
            .fold(self.scale, f64::max);
        let defect = self.momentum_sum().norm();
        if defect > 1e-9 * reference {
            return Err(MomentaError::NonConservation(defect));
        }
        Ok(())
    }

    pub fn tail(&self) -> &[Vec4] {
        &self.p[1..]
    }

    /// `p_0 + ((p_1 + p_2) + ...)`: the tail is folded first, so configs made
    /// by `from_tail` return an exact zero.
    pub fn momentum_sum(&self) -> Vec4 {
        self.p[0] + Vec4::fold_sum(self.tail())
    }

    pub fn eta(&self) -> Result<f64, MomentaError> {
        eta(&self.p, self.scale)
    }

    /// Three-way split: a vanishing subset sum is exceptional; otherwise the
    /// config lands in the good set when `eta > margin * M` and every tail
    /// momentum stays in the ball of radius `M` (the dependent `p_0` is free).
    pub fn classify(&self, margin: f64) -> Result<MomentumClass, MomentaError> {
        let eta = self.eta()?;
        if eta <= ETA_ZERO_REL * self.scale {
            return Ok(MomentumClass::Exceptional);
        }
        let m_sq = self.scale * self.scale;
        let in_ball = self
            .tail()
            .iter()
            .all(|q| q.norm_sq() <= m_sq * (1.0 + BALL_SLACK));
        if eta > margin * self.scale && in_ball {
            Ok(MomentumClass::InMn)
        } else {
            Ok(MomentumClass::Nonexceptional)
        }
    }
}

/// Smallest subset-sum magnitude of the tail momenta, clamped at `m`:
/// `min over nonempty S of min(|sum_{i in S} p_i|, m)` with `S` ranging over
/// the independent indices `1..n`. Exhaustive over all `2^(n-1) - 1` subsets.
pub fn eta(p: &[Vec4], m: f64) -> Result<f64, MomentaError> {
    let n = p.len();
    if !(2..=MAX_MOMENTA).contains(&n) {
        return Err(MomentaError::UnsupportedCount(n));
    }
    let tail = &p[1..];
    let mut best = m;
    for mask in 1u32..(1u32 << tail.len()) {
        let mut s = Vec4::ZERO;
        for (i, q) in tail.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s += *q;
            }
        }
        best = best.min(s.norm());
    }
    Ok(best)
}
