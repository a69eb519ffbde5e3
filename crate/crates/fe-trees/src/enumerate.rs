use crate::{FieldLabel, TreesError, WeightedTree, MAX_LEAVES, MAX_STAR_TOTAL};

/// All trees over the given leaf labels carrying exactly `star_total` stars.
/// Topologies come from leaf insertion (each of the `(2n-5)!!` shapes exactly
/// once), stars from every spread over the `2n-3` edges; three-leaf trees get
/// the hollow vertex, larger ones regular vertices. Output is sorted and
/// duplicate-free.
pub fn enumerate_trees(
    labels: &[FieldLabel],
    star_total: usize,
) -> Result<Vec<WeightedTree>, TreesError> {
    let n = labels.len();
    if !(3..=MAX_LEAVES).contains(&n) {
        return Err(TreesError::UnsupportedLeafCount(n));
    }
    if star_total > MAX_STAR_TOTAL {
        return Err(TreesError::TooManyStars(star_total));
    }

    // Scratch internal ids start above any final id so inserting leaf k never
    // collides; remapped into n..2n-3 before construction.
    const SCRATCH: usize = 64;
    let mut topologies: Vec<Vec<(usize, usize)>> =
        vec![vec![(0, SCRATCH), (1, SCRATCH), (2, SCRATCH)]];
    for k in 3..n {
        let fresh = SCRATCH + k - 2;
        topologies = topologies
            .iter()
            .flat_map(|edges| {
                (0..edges.len()).map(move |split| {
                    let mut next = edges.clone();
                    let (a, b) = next[split];
                    next[split] = (a, fresh);
                    next.push((fresh, b));
                    next.push((fresh, k));
                    next
                })
            })
            .collect();
    }

    let ne = 2 * n - 3;
    let spreads = star_spreads(ne, star_total);
    let hollow = vec![n == 3; n - 2];
    let remap = |v: usize| if v >= SCRATCH { v - SCRATCH + n } else { v };

    let mut out = Vec::with_capacity(topologies.len() * spreads.len());
    for topology in &topologies {
        let edges: Vec<(usize, usize)> = topology.iter().map(|&(a, b)| (remap(a), remap(b))).collect();
        for spread in &spreads {
            out.push(WeightedTree::new(
                labels.to_vec(),
                edges.clone(),
                hollow.clone(),
                spread.clone(),
            )?);
        }
    }
    out.sort();
    Ok(out)
}

/// Weak compositions of `total` into `slots` parts.
fn star_spreads(slots: usize, total: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = vec![0u8; slots];
    fn rec(out: &mut Vec<Vec<u8>>, current: &mut Vec<u8>, slot: usize, left: usize) {
        if slot + 1 == current.len() {
            current[slot] = left as u8;
            out.push(current.clone());
            current[slot] = 0;
            return;
        }
        for here in 0..=left {
            current[slot] = here as u8;
            rec(out, current, slot + 1, left - here);
        }
        current[slot] = 0;
    }
    rec(&mut out, &mut current, 0, total);
    out
}
