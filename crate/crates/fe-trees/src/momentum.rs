use crate::{TreesError, WeightedTree};
use fe_momenta::{MomentumConfig, Vec4};

/// Edge momenta oriented toward leaf 0, together with the dependency sets:
/// `k_sets[e]` lists the leaves whose momentum enters `p[e]`, which is the
/// far side of `e` seen from leaf 0 (never containing leaf 0 itself).
#[derive(Debug, Clone)]
pub struct EdgeMomenta {
    pub p: Vec<Vec4>,
    pub k_sets: Vec<Vec<usize>>,
}

/// Routes the external momenta through the tree. Leaf `i` injects `cfg.p[i]`;
/// conservation fixes every edge momentum as the sum over its far-side
/// leaves, so edge 0 carries `-p_0` exactly.
pub fn momentum_map(tree: &WeightedTree, cfg: &MomentumConfig) -> Result<EdgeMomenta, TreesError> {
    if cfg.n != tree.leaf_count() {
        return Err(TreesError::CountMismatch {
            what: "momenta",
            expected: tree.leaf_count(),
            got: cfg.n,
        });
    }
    cfg.validate()?;
    let k_sets = tree.far_leaf_sets();
    let p = k_sets
        .iter()
        .map(|ks| Vec4::fold_sum(ks.iter().map(|&i| &cfg.p[i])))
        .collect();
    Ok(EdgeMomenta { p, k_sets })
}
