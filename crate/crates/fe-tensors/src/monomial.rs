use crate::TensorsError;
use fe_momenta::Vec4;
use serde::{Deserialize, Serialize};

/// Largest tensor rank we enumerate. Dense arrays stay at 4^8 = 65536 entries
/// and the dependence threshold for a single vector sits at rank 8, so this is
/// both affordable and necessary.
pub const MAX_RANK: usize = 8;

/// A tensor monomial of rank `r` over `m` vectors: the index slots `0..r` are
/// divided into per-vector groups (slot carries that vector's component) and
/// delta pairs (the two slots are contracted with a Kronecker delta).
/// Canonical form: group slots ascending, pairs `(a, b)` with `a < b`, pairs
/// sorted by their minima.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorMonomial {
    pub rank: usize,
    /// `groups[j]` lists the slots carrying vector `j`; may be empty.
    pub groups: Vec<Vec<usize>>,
    /// Delta-contracted slot pairs.
    pub pairs: Vec<(usize, usize)>,
}

impl TensorMonomial {
    /// Number of vector slots, `k = Σ_j |groups[j]|`.
    pub fn vector_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// Number of delta factors, `s`.
    pub fn delta_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_pure_delta(&self) -> bool {
        self.vector_count() == 0
    }

    fn check(&self) -> Result<(), TensorsError> {
        let mut seen = vec![false; self.rank];
        let mut mark = |slot: usize| -> Result<(), TensorsError> {
            if slot >= self.rank || seen[slot] {
                return Err(TensorsError::MalformedMonomial);
            }
            seen[slot] = true;
            Ok(())
        };
        for g in &self.groups {
            for &slot in g {
                mark(slot)?;
            }
        }
        for &(a, b) in &self.pairs {
            if a >= b {
                return Err(TensorsError::MalformedMonomial);
            }
            mark(a)?;
            mark(b)?;
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(TensorsError::MalformedMonomial)
        }
    }
}

/// All monomials of rank exactly `r` over `m` vectors, pure-delta ones first,
/// then by ascending vector count with lexicographic tie-breaks. Every slot
/// division is produced exactly once.
pub fn enumerate_monomials(m: usize, r: usize) -> Result<Vec<TensorMonomial>, TensorsError> {
    if m == 0 || m > 4 {
        return Err(TensorsError::BadVectorCount(m));
    }
    if r == 0 || r > MAX_RANK {
        return Err(TensorsError::BadRank(r));
    }
    let mut out = Vec::new();
    let mut assign: Vec<Option<usize>> = vec![None; r]; // Some(j) = vector j
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; r];
    // Always extend from the lowest unused slot: pairs come out ordered by
    // their minima and nothing is generated twice.
    fn rec(
        m: usize,
        assign: &mut Vec<Option<usize>>,
        pairs: &mut Vec<(usize, usize)>,
        used: &mut Vec<bool>,
        out: &mut Vec<TensorMonomial>,
    ) {
        let a = match used.iter().position(|&u| !u) {
            None => {
                let r = used.len();
                let mut groups = vec![Vec::new(); m];
                for (slot, ass) in assign.iter().enumerate() {
                    if let Some(j) = ass {
                        groups[*j].push(slot);
                    }
                }
                out.push(TensorMonomial {
                    rank: r,
                    groups,
                    pairs: pairs.clone(),
                });
                return;
            }
            Some(a) => a,
        };
        used[a] = true;
        for j in 0..m {
            assign[a] = Some(j);
            rec(m, assign, pairs, used, out);
        }
        assign[a] = None;
        for b in a + 1..used.len() {
            if used[b] {
                continue;
            }
            used[b] = true;
            pairs.push((a, b));
            rec(m, assign, pairs, used, out);
            pairs.pop();
            used[b] = false;
        }
        used[a] = false;
    }
    rec(m, &mut assign, &mut pairs, &mut used, &mut out);
    for t in &out {
        debug_assert!(t.check().is_ok());
    }
    // delta-heavy monomials first; ties broken by pair layout, then by the
    // per-slot vector assignment read left to right
    let slot_assignment = |t: &TensorMonomial| -> Vec<usize> {
        let mut a = vec![usize::MAX; t.rank];
        for (j, group) in t.groups.iter().enumerate() {
            for &s in group {
                a[s] = j;
            }
        }
        a
    };
    out.sort_by(|a, b| {
        (a.vector_count(), &a.pairs, slot_assignment(a)).cmp(&(
            b.vector_count(),
            &b.pairs,
            slot_assignment(b),
        ))
    });
    Ok(out)
}

/// Dense rank-`r` tensor over four dimensions, row-major: the flat index of
/// `(i_0, ..., i_{r-1})` is `Σ i_k · 4^(r-1-k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    rank: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(rank: usize) -> Tensor {
        Tensor {
            rank,
            data: vec![0.0; 1 << (2 * rank)],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        self.data[flat_index(idx)] = value;
    }

    pub fn frobenius_dot(&self, other: &Tensor) -> f64 {
        assert_eq!(self.rank, other.rank);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_dot(self).sqrt()
    }

    pub fn add_scaled(&mut self, c: f64, other: &Tensor) {
        assert_eq!(self.rank, other.rank);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    /// Applies the rotation to every index: `T'_{i...} = R_{ij}...T_{j...}`,
    /// one index at a time.
    pub fn rotate(&self, rot: &[[f64; 4]; 4]) -> Tensor {
        let mut cur = self.clone();
        for axis in 0..self.rank {
            let stride = 1usize << (2 * (self.rank - 1 - axis));
            let mut next = Tensor::zeros(self.rank);
            for (flat, out) in next.data.iter_mut().enumerate() {
                let j_axis = (flat / stride) % 4;
                // sum over the source value of this index with the rest fixed
                let base = flat - j_axis * stride;
                *out = (0..4).map(|j| rot[j_axis][j] * cur.data[base + j * stride]).sum();
            }
            cur = next;
        }
        cur
    }
}

fn flat_index(idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| {
        debug_assert!(i < 4);
        acc * 4 + i
    })
}

/// Dense evaluation: every component is the product of delta factors and
/// vector components dictated by the slot division.
pub fn evaluate_monomial(t: &TensorMonomial, q: &[Vec4]) -> Result<Tensor, TensorsError> {
    if q.len() != t.groups.len() {
        return Err(TensorsError::WrongVectorCount {
            expected: t.groups.len(),
            got: q.len(),
        });
    }
    t.check()?;
    let r = t.rank;
    let mut out = Tensor::zeros(r);
    let mut idx = vec![0usize; r];
    for (flat, slot) in out.data.iter_mut().enumerate() {
        let mut f = flat;
        for k in (0..r).rev() {
            idx[k] = f % 4;
            f /= 4;
        }
        if t.pairs.iter().any(|&(a, b)| idx[a] != idx[b]) {
            continue;
        }
        let mut val = 1.0;
        for (j, group) in t.groups.iter().enumerate() {
            for &s in group {
                val *= q[j][idx[s]];
            }
        }
        *slot = val;
    }
    Ok(out)
}

/// Frobenius inner product of two monomials over the same vector family,
/// computed from the contraction graph instead of dense arrays: the slots of
/// both monomials are joined by their delta pairs; a closed loop traces the
/// identity (factor 4) and an open path terminates on two vectors (factor
/// `q_a · q_b`). `dots[i][j]` must hold `q_i · q_j`.
pub fn monomial_dot(a: &TensorMonomial, b: &TensorMonomial, dots: &[Vec<f64>]) -> f64 {
    debug_assert_eq!(a.rank, b.rank);
    let r = a.rank;
    // per-slot attachments: Some(partner) for a delta leg, None for a vector
    let attach = |t: &TensorMonomial| {
        let mut partner: Vec<Option<usize>> = vec![None; r];
        let mut vector: Vec<Option<usize>> = vec![None; r];
        for &(x, y) in &t.pairs {
            partner[x] = Some(y);
            partner[y] = Some(x);
        }
        for (j, group) in t.groups.iter().enumerate() {
            for &s in group {
                vector[s] = Some(j);
            }
        }
        (partner, vector)
    };
    let (ap, av) = attach(a);
    let (bp, bv) = attach(b);
    let mut seen = vec![false; r];
    let mut acc = 1.0;
    for start in 0..r {
        if seen[start] {
            continue;
        }
        // walk the component, collecting vector endpoints
        let mut stack = vec![start];
        let mut ends: Vec<usize> = Vec::new();
        while let Some(s) = stack.pop() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            match ap[s] {
                Some(t) => stack.push(t),
                None => ends.push(av[s].expect("slot covered on side a")),
            }
            match bp[s] {
                Some(t) => stack.push(t),
                None => ends.push(bv[s].expect("slot covered on side b")),
            }
        }
        acc *= match ends.as_slice() {
            [] => 4.0, // closed delta loop traces the identity
            [i, j] => dots[*i][*j],
            _ => unreachable!("components are paths or cycles"),
        };
    }
    acc
}
