use crate::{amplitude_q, TreesError, WeightedTree};
use fe_momenta::{MomentumConfig, MultiIndex, Vec4};

/// Result of gluing a fragment sequence along shared legs: the merged tree,
/// its combined derivative weights, the weight each fresh joint edge gets
/// (two minus the stars consumed there), and both sides of the bound
/// `product of fragment amplitudes over squared joint propagators <= merged
/// amplitude`, checked as an exact inequality.
#[derive(Debug, Clone)]
pub struct JunctionOutcome {
    pub merged: WeightedTree,
    pub merged_w: MultiIndex,
    pub joint_thetas: Vec<u8>,
    pub lhs: f64,
    pub rhs: f64,
    pub verified: bool,
}

/// Glues fragments left to right: each step deletes the left tree's last
/// leaf and the right tree's leaf 0, joining their vertices by a fresh
/// starless internal edge. A star sitting on a joint edge must belong to a
/// hollow vertex; it is consumed and the vertex turns regular. Joint momenta
/// follow from conservation (everything left of the cut flows through), and
/// `cfg` describes the merged leaf sequence.
///
/// Weights: `ws[j]` aligns with fragment `j`'s leaves and must vanish on its
/// joint slots; three-leaf fragments take zero weight only, since their
/// decrement rule does not compose with gluing.
pub fn junction_bound(
    fragments: &[WeightedTree],
    ws: &[MultiIndex],
    cfg: &MomentumConfig,
    lambda: f64,
) -> Result<JunctionOutcome, TreesError> {
    if fragments.is_empty() || ws.len() != fragments.len() {
        return Err(TreesError::CountMismatch {
            what: "weight lists",
            expected: fragments.len().max(1),
            got: ws.len(),
        });
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(TreesError::BadScale(lambda));
    }
    let m = fragments.len();
    for (j, frag) in fragments.iter().enumerate() {
        frag.fragment_check()?;
        let n_j = frag.leaf_count();
        if ws[j].len() != n_j {
            return Err(TreesError::CountMismatch {
                what: "weight slots",
                expected: n_j,
                got: ws[j].len(),
            });
        }
        if j + 1 < m && ws[j].counts()[n_j - 1] != 0 {
            return Err(TreesError::WeightedSlot(n_j - 1));
        }
        if n_j == 3 && ws[j].order() > 0 {
            return Err(TreesError::WeightedSlot(
                ws[j].counts().iter().position(|&c| c > 0).unwrap(),
            ));
        }
    }
    let total: usize = fragments.iter().map(|f| f.leaf_count()).sum();
    let merged_n = total - 2 * (m - 1);
    if cfg.n != merged_n {
        return Err(TreesError::CountMismatch {
            what: "momenta",
            expected: merged_n,
            got: cfg.n,
        });
    }
    cfg.validate()?;

    // Per-fragment configs: interior leaves take their global momentum, a
    // left joint takes the running sum of everything before the cut, a right
    // joint its negative.
    let mut merged_w_counts = vec![0u8; merged_n];
    let mut joint_sums: Vec<Vec4> = Vec::with_capacity(m - 1);
    let mut lhs = 1.0;
    let mut cursor = 0usize;
    let mut running = Vec4::ZERO;
    for (j, frag) in fragments.iter().enumerate() {
        let n_j = frag.leaf_count();
        let first_interior = usize::from(j > 0);
        let last_interior = if j + 1 < m { n_j - 1 } else { n_j };
        let mut p = Vec::with_capacity(n_j);
        if j > 0 {
            p.push(joint_sums[j - 1]);
        }
        for i in first_interior..last_interior {
            let g = cursor + (i - first_interior);
            p.push(cfg.p[g]);
            merged_w_counts[g] = ws[j].counts()[i];
            running += cfg.p[g];
        }
        cursor += last_interior - first_interior;
        if j + 1 < m {
            joint_sums.push(running);
            p.push(-running);
        }
        let frag_cfg = MomentumConfig {
            n: n_j,
            scale: cfg.scale,
            p,
        };
        frag_cfg.validate()?;
        let q = amplitude_q(frag, &ws[j], &frag_cfg, lambda)?.value;
        if j > 0 {
            let base = lambda + joint_sums[j - 1].norm();
            if base == 0.0 {
                return Err(TreesError::SingularAmplitude);
            }
            lhs *= q / (base * base);
        } else {
            lhs = q;
        }
    }

    let mut merged = fragments[0].clone();
    let mut joint_thetas = Vec::with_capacity(m - 1);
    for frag in &fragments[1..] {
        let (next, joint_theta) = merge_pair(&merged, frag)?;
        merged = next;
        joint_thetas.push(joint_theta);
    }
    merged.fragment_check()?;
    let merged_w = MultiIndex::new(merged_w_counts)?;
    let rhs = amplitude_q(&merged, &merged_w, cfg, lambda)?.value;

    Ok(JunctionOutcome {
        verified: lhs <= rhs,
        merged,
        merged_w,
        joint_thetas,
        lhs,
        rhs,
    })
}

/// One gluing step. Returns the merged tree and the weight assigned to the
/// fresh joint edge: two, minus one per star consumed. A consumed star is
/// one sitting on a joint edge; its hollow vertex turns regular.
fn merge_pair(left: &WeightedTree, right: &WeightedTree) -> Result<(WeightedTree, u8), TreesError> {
    let n_l = left.leaf_count();
    let n_r = right.leaf_count();
    let el = n_l - 1;
    let er = 0;
    let mut consumed = 0u8;
    for (tree, e) in [(left, el), (right, er)] {
        let s = tree.stars(e);
        if s > 1 {
            return Err(TreesError::TooManyStars(s as usize));
        }
        if s == 1 {
            if !tree.is_hollow(tree.leaf_neighbor(e)) {
                return Err(TreesError::StarOnRegularJoint { edge: e });
            }
            consumed += 1;
        }
    }

    let n = n_l + n_r - 2;
    // New ids: left leaves keep 0..n_l-2, right leaf i>0 becomes n_l+i-2;
    // internal vertices pack behind the leaves, left block first.
    let map_left = |v: usize| if v < n_l { v } else { n + (v - n_l) };
    let map_right = |v: usize| {
        if v < n_r {
            n_l + v - 2
        } else {
            n + (n_l - 2) + (v - n_r)
        }
    };

    let mut labels = Vec::with_capacity(n);
    labels.extend_from_slice(&left.labels()[..n_l - 1]);
    labels.extend_from_slice(&right.labels()[1..]);

    let mut edges = Vec::with_capacity(2 * n - 3);
    let mut stars = Vec::new();
    for e in 0..left.edge_count() {
        if e == el {
            continue;
        }
        let (a, b) = left.endpoints(e);
        edges.push((map_left(a), map_left(b)));
        stars.push(left.stars(e));
    }
    for e in 0..right.edge_count() {
        if e == er {
            continue;
        }
        let (a, b) = right.endpoints(e);
        edges.push((map_right(a), map_right(b)));
        stars.push(right.stars(e));
    }
    edges.push((
        map_left(left.leaf_neighbor(el)),
        map_right(right.leaf_neighbor(er)),
    ));
    stars.push(0);

    let mut hollow = Vec::with_capacity(n - 2);
    for v in left.internal_vertices() {
        let joins = v == left.leaf_neighbor(el) && left.stars(el) == 1;
        hollow.push(left.is_hollow(v) && !joins);
    }
    for v in right.internal_vertices() {
        let joins = v == right.leaf_neighbor(er) && right.stars(er) == 1;
        hollow.push(right.is_hollow(v) && !joins);
    }

    let merged = WeightedTree::new(labels, edges, hollow, stars)?;
    Ok((merged, 2 - consumed))
}
