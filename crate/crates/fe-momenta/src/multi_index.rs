use crate::MomentaError;
use serde::{Deserialize, Serialize};

/// Cap on the total derivative order handled anywhere in the workspace.
pub const MAX_DERIV_ORDER: u8 = 4;

/// Per-momentum derivative counts `(w_0, ..., w_{n-1})`. Momentum 0 is the
/// dependent one, so `w_0 = 0` always; the total order is capped at
/// [`MAX_DERIV_ORDER`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn new(w: Vec<u8>) -> Result<Self, MomentaError> {
        match w.first() {
            None => return Err(MomentaError::EmptyMultiIndex),
            Some(&w0) if w0 != 0 => return Err(MomentaError::DerivativeOnTotal(w0)),
            _ => {}
        }
        let order: u32 = w.iter().map(|&x| u32::from(x)).sum();
        if order > u32::from(MAX_DERIV_ORDER) {
            return Err(MomentaError::OrderTooHigh {
                got: order,
                cap: MAX_DERIV_ORDER,
            });
        }
        Ok(MultiIndex(w))
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n.max(1)])
    }

    pub fn order(&self) -> u8 {
        self.0.iter().sum()
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every admissible index for `n` momenta with total order at most `cap`,
    /// in a fixed lexicographic order.
    pub fn all(n: usize, cap: u8) -> Vec<MultiIndex> {
        fn rec(cur: &mut Vec<u8>, i: usize, left: u8, out: &mut Vec<MultiIndex>) {
            if i == cur.len() {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for v in 0..=left {
                cur[i] = v;
                rec(cur, i + 1, left - v, out);
            }
            cur[i] = 0;
        }
        let cap = cap.min(MAX_DERIV_ORDER);
        let mut out = Vec::new();
        let mut cur = vec![0u8; n.max(1)];
        rec(&mut cur, 1, cap, &mut out);
        out
    }
}
