use crate::{TreesError, WeightedTree};
use fe_momenta::MultiIndex;
use std::collections::BTreeMap;

/// One admissible edge weight `theta = rho + sigma`, with the split and the
/// selector map behind `rho` kept for audit. `chi` pairs each regular
/// internal vertex with the internal edge it marked; an internal edge's `rho`
/// is two minus the number of vertices marking it. `sigma` spreads each
/// leaf's derivative count over the edges whose momentum depends on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaWeight {
    pub theta: Vec<u8>,
    pub rho: Vec<u8>,
    pub sigma: Vec<u8>,
    pub chi: Vec<(usize, usize)>,
}

impl ThetaWeight {
    pub fn total(&self) -> u32 {
        self.theta.iter().map(|&t| u32::from(t)).sum()
    }
}

/// Every distinct edge weight the tree admits for the derivative counts `w`:
/// all selector maps crossed with all spreads, deduplicated on the resulting
/// `theta` vector (first witness kept), sorted by that vector.
pub fn theta_set(tree: &WeightedTree, w: &MultiIndex) -> Result<Vec<ThetaWeight>, TreesError> {
    let n = tree.leaf_count();
    if w.len() != n {
        return Err(TreesError::CountMismatch {
            what: "weight slots",
            expected: n,
            got: w.len(),
        });
    }
    let ne = tree.edge_count();
    let k_sets = tree.far_leaf_sets();

    // Selector choices: each regular internal vertex marks one incident
    // internal edge. A regular vertex always has one (three external edges
    // would make the whole tree three-leaf, which is hollow-only).
    let markers: Vec<usize> = tree.internal_vertices().filter(|&v| !tree.is_hollow(v)).collect();
    let marker_choices: Vec<Vec<usize>> = markers
        .iter()
        .map(|&v| {
            tree.incident_edges(v)
                .into_iter()
                .filter(|&e| !tree.is_external_edge(e))
                .collect()
        })
        .collect();
    debug_assert!(marker_choices.iter().all(|c| !c.is_empty()));

    // Spread choices per weighted leaf, over the edges depending on it.
    let weighted: Vec<(usize, u8)> = w
        .counts()
        .iter()
        .enumerate()
        .filter(|&(_, &k)| k > 0)
        .map(|(i, &k)| (i, k))
        .collect();
    let spread_choices: Vec<Vec<Vec<u8>>> = weighted
        .iter()
        .map(|&(leaf, k)| {
            let support: Vec<usize> = (0..ne)
                .filter(|&e| k_sets[e].binary_search(&leaf).is_ok())
                .collect();
            compositions(k, support.len())
                .into_iter()
                .map(|parts| {
                    let mut sigma = vec![0u8; ne];
                    for (slot, &part) in parts.iter().enumerate() {
                        sigma[support[slot]] = part;
                    }
                    sigma
                })
                .collect()
        })
        .collect();

    let chi_maps = cartesian(&marker_choices);
    let sigma_maps = cartesian(&spread_choices);

    let internal_count = tree.internal_edges().len();
    let hollow = tree.hollow_count();
    let rho_total = (2 * internal_count - (tree.internal_vertex_count() - hollow)) as u32;

    let mut seen: BTreeMap<Vec<u8>, ThetaWeight> = BTreeMap::new();
    for chi in &chi_maps {
        let mut rho = vec![0u8; ne];
        for e in tree.internal_edges() {
            rho[e] = 2;
        }
        for &e in chi {
            rho[e] -= 1;
        }
        for sigma_parts in &sigma_maps {
            let mut sigma = vec![0u8; ne];
            for part in sigma_parts {
                for (e, s) in sigma.iter_mut().zip(part.iter()) {
                    *e += s;
                }
            }
            let theta: Vec<u8> = rho.iter().zip(&sigma).map(|(r, s)| r + s).collect();
            debug_assert_eq!(
                theta.iter().map(|&t| u32::from(t)).sum::<u32>(),
                u32::from(w.order()) + rho_total
            );
            seen.entry(theta.clone()).or_insert_with(|| ThetaWeight {
                theta,
                rho: rho.clone(),
                sigma,
                chi: markers.iter().copied().zip(chi.iter().copied()).collect(),
            });
        }
    }
    Ok(seen.into_values().collect())
}

/// Sum of the weight over all edges. For plain trees with at least four
/// leaves the sum is pinned to `n + |w| - 4`, and a mismatch reports a bug in
/// the weight assignment.
pub fn total_theta(
    tree: &WeightedTree,
    theta: &ThetaWeight,
    w: &MultiIndex,
) -> Result<u32, TreesError> {
    let total = theta.total();
    if tree.leaf_count() >= 4 && tree.is_plain() {
        let expected = (tree.leaf_count() as u32 + u32::from(w.order())).saturating_sub(4);
        if total != expected {
            return Err(TreesError::WeightSumMismatch {
                expected,
                got: total,
            });
        }
    }
    Ok(total)
}

/// Weak compositions of `total` into `slots` parts (one empty composition
/// when there is nothing to place).
fn compositions(total: u8, slots: usize) -> Vec<Vec<u8>> {
    if slots == 0 {
        return if total == 0 { vec![vec![]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut current = vec![0u8; slots];
    fn rec(out: &mut Vec<Vec<u8>>, current: &mut Vec<u8>, slot: usize, left: u8) {
        if slot + 1 == current.len() {
            current[slot] = left;
            out.push(current.clone());
            current[slot] = 0;
            return;
        }
        for here in 0..=left {
            current[slot] = here;
            rec(out, current, slot + 1, left - here);
        }
        current[slot] = 0;
    }
    rec(&mut out, &mut current, 0, total);
    out
}

/// Cartesian product over a list of choice sets; one empty pick when the
/// list itself is empty.
fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for set in choices {
        let mut next = Vec::with_capacity(out.len() * set.len());
        for prefix in &out {
            for item in set {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}
