use fe_momenta::{MomentumConfig, MultiIndex, Vec4};
use fe_trees::{enumerate_trees, momentum_map, theta_set, total_theta, FieldLabel, WeightedTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pairing_tree(partner: usize) -> WeightedTree {
    // Four leaves; `partner` shares a vertex with leaf 0.
    let others: Vec<usize> = (1..4).filter(|&l| l != partner).collect();
    WeightedTree::new(
        vec![FieldLabel::A; 4],
        vec![
            (0, 4),
            (partner, 4),
            (others[0], 5),
            (others[1], 5),
            (4, 5),
        ],
        vec![false, false],
        vec![0; 5],
    )
    .unwrap()
}

fn random_tail(rng: &mut ChaCha8Rng, len: usize) -> Vec<Vec4> {
    (0..len)
        .map(|_| {
            Vec4::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
        })
        .collect()
}

#[test]
fn edge_momenta_and_dependence_sets() {
    let t = WeightedTree::new(
        vec![
            FieldLabel::C,
            FieldLabel::A,
            FieldLabel::A,
            FieldLabel::CBar,
        ],
        vec![(0, 4), (3, 4), (1, 5), (2, 5), (4, 5)],
        vec![false, false],
        vec![0; 5],
    )
    .unwrap();
    assert_eq!(t.far_leaves(0), vec![1, 2, 3]);
    assert_eq!(t.far_leaves(1), vec![1]);
    assert_eq!(t.far_leaves(2), vec![2]);
    assert_eq!(t.far_leaves(3), vec![3]);
    let internal = t.internal_edges().next().unwrap();
    assert_eq!(t.far_leaves(internal), vec![1, 2]);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = MomentumConfig::from_tail(1.0, random_tail(&mut rng, 3)).unwrap();
    let em = momentum_map(&t, &cfg).unwrap();
    let mut want = cfg.p[1];
    want += cfg.p[2];
    for c in 0..4 {
        assert!((em.p[internal][c] - want[c]).abs() < 1e-12);
        // Edge 0 carries everything flowing toward leaf 0.
        assert!((em.p[0][c] + cfg.p[0][c]).abs() < 1e-12);
    }
    assert_eq!(em.k_sets[internal], vec![1, 2]);
}

#[test]
fn flow_is_conserved_at_internal_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for tree in enumerate_trees(&[FieldLabel::A; 6], 0).unwrap().iter().step_by(9) {
        let cfg = MomentumConfig::from_tail(1.0, random_tail(&mut rng, 5)).unwrap();
        let em = momentum_map(tree, &cfg).unwrap();
        for v in tree.internal_vertices() {
            // Signed sum over incident edges vanishes: an edge whose stored
            // head is v flows in, one whose tail is v flows out.
            let mut acc = Vec4::ZERO;
            for e in tree.incident_edges(v) {
                let (toward, _) = tree.endpoints(e);
                let sign = if toward == v { 1.0 } else { -1.0 };
                for c in 0..4 {
                    acc[c] += sign * em.p[e][c];
                }
            }
            assert!(acc.norm() < 1e-12, "defect {} at vertex {v}", acc.norm());
        }
    }
}

#[test]
fn single_derivative_weight_tables() {
    let w = MultiIndex::new(vec![0, 1, 0, 0]).unwrap();
    // Leaf 1 away from leaf 0's vertex: its momentum crosses edge 0, its own
    // leg, and the internal edge, so three spreads.
    for partner in [2, 3] {
        let t = pairing_tree(partner);
        let internal = t.internal_edges().next().unwrap();
        let thetas = theta_set(&t, &w).unwrap();
        let vecs: Vec<&[u8]> = thetas.iter().map(|tw| tw.theta.as_slice()).collect();
        let mut want = vec![vec![0u8; 5]; 3];
        want[0][0] = 1;
        want[1][1] = 1;
        want[2][internal] = 1;
        let mut want: Vec<&[u8]> = want.iter().map(|v| v.as_slice()).collect();
        want.sort();
        assert_eq!(vecs, want, "partner {partner}");
    }
    // Leaf 1 adjacent to leaf 0's vertex: only two edges see it.
    let t = pairing_tree(1);
    let thetas = theta_set(&t, &w).unwrap();
    assert_eq!(thetas.len(), 2);
    for tw in &thetas {
        assert_eq!(tw.total(), 1);
        assert_eq!(tw.theta[4], 0);
    }
}

#[test]
fn zero_weight_four_leaf_table_is_trivial() {
    // One internal edge marked by both of its end vertices: weight zero.
    let t = pairing_tree(1);
    let thetas = theta_set(&t, &MultiIndex::zero(4)).unwrap();
    assert_eq!(thetas.len(), 1);
    assert!(thetas[0].theta.iter().all(|&x| x == 0));
    assert_eq!(thetas[0].chi.len(), 2);
}

#[test]
fn three_leaf_spreads() {
    let t = WeightedTree::new(
        vec![FieldLabel::C, FieldLabel::A, FieldLabel::CBar],
        vec![(0, 3), (1, 3), (2, 3)],
        vec![true],
        vec![0; 3],
    )
    .unwrap();
    let w = MultiIndex::new(vec![0, 1, 1]).unwrap();
    let thetas = theta_set(&t, &w).unwrap();
    let vecs: Vec<Vec<u8>> = thetas.iter().map(|tw| tw.theta.clone()).collect();
    assert_eq!(
        vecs,
        vec![
            vec![0, 1, 1],
            vec![1, 0, 1],
            vec![1, 1, 0],
            vec![2, 0, 0],
        ]
    );
}

#[test]
fn totals_follow_leaf_and_weight_count() {
    let cases = [
        (4usize, vec![0u8, 0, 0, 0], 0u32),
        (4, vec![0, 1, 0, 0], 1),
        (5, vec![0, 0, 1, 1, 0], 3),
    ];
    for (n, counts, want) in cases {
        let w = MultiIndex::new(counts).unwrap();
        for t in enumerate_trees(&vec![FieldLabel::A; n], 0).unwrap() {
            for tw in theta_set(&t, &w).unwrap() {
                assert_eq!(total_theta(&t, &tw, &w).unwrap(), want);
            }
        }
    }
}

#[test]
fn split_bookkeeping_sums() {
    // Exhaustive over five-leaf shapes and all weights of order up to two.
    let trees = enumerate_trees(&[FieldLabel::A; 5], 0).unwrap();
    for t in &trees {
        let internal_edges: Vec<usize> = t.internal_edges().collect();
        for w in MultiIndex::all(5, 2) {
            let rho_budget = 2 * internal_edges.len() - t.internal_vertex_count();
            for tw in theta_set(&t, &w).unwrap() {
                let rho_sum: u32 = tw.rho.iter().map(|&x| u32::from(x)).sum();
                let sigma_sum: u32 = tw.sigma.iter().map(|&x| u32::from(x)).sum();
                assert_eq!(rho_sum as usize, rho_budget);
                assert_eq!(sigma_sum, u32::from(w.order()));
                assert_eq!(tw.total(), rho_sum + sigma_sum);
                for e in 0..t.edge_count() {
                    assert!(tw.rho[e] <= 2);
                    if t.is_external_edge(e) {
                        assert_eq!(tw.rho[e], 0);
                    }
                }
                // Every regular vertex marks exactly one incident internal
                // edge.
                assert_eq!(tw.chi.len(), t.internal_vertex_count());
                for &(v, e) in &tw.chi {
                    assert!(t.incident_edges(v).contains(&e));
                    assert!(internal_edges.contains(&e));
                }
            }
        }
    }
}

#[test]
fn larger_trees_keep_the_total() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in [6usize, 7] {
        let trees = enumerate_trees(&vec![FieldLabel::A; n], 0).unwrap();
        let step = if n == 6 { 11 } else { 97 };
        for t in trees.iter().step_by(step) {
            let mut counts = vec![0u8; n];
            counts[rng.gen_range(1..n)] = 1;
            counts[rng.gen_range(1..n)] += 1;
            let w = MultiIndex::new(counts).unwrap();
            let want = n as u32 + u32::from(w.order()) - 4;
            for tw in theta_set(t, &w).unwrap() {
                assert_eq!(total_theta(t, &tw, &w).unwrap(), want);
            }
        }
    }
}

#[test]
fn weight_table_deduplicates() {
    // Two regular vertices sharing their only internal edge produce one
    // selector pattern, not four.
    let t = pairing_tree(2);
    let w = MultiIndex::new(vec![0, 0, 2, 0]).unwrap();
    let thetas = theta_set(&t, &w).unwrap();
    let mut seen = std::collections::HashSet::new();
    for tw in &thetas {
        assert!(seen.insert(tw.theta.clone()), "duplicate {:?}", tw.theta);
    }
}
