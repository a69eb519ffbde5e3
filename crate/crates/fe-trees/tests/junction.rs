use fe_momenta::{MomentumConfig, MultiIndex, Vec4};
use fe_trees::{junction_bound, FieldLabel, TreesError, WeightedTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn plain4(partner: usize) -> WeightedTree {
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

fn three_point(star_edge: usize) -> WeightedTree {
    let mut stars = vec![0u8; 3];
    stars[star_edge] = 1;
    WeightedTree::new(
        vec![FieldLabel::A; 3],
        vec![(0, 3), (1, 3), (2, 3)],
        vec![true],
        stars,
    )
    .unwrap()
}

fn random_cfg(rng: &mut ChaCha8Rng, n: usize) -> MomentumConfig {
    let tail = (0..n - 1)
        .map(|_| {
            Vec4::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
        })
        .collect();
    MomentumConfig::from_tail(1.0, tail).unwrap()
}

fn zeros(n: usize) -> MultiIndex {
    MultiIndex::zero(n)
}

#[test]
fn regular_joint_keeps_full_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cfg = random_cfg(&mut rng, 6);
    let out = junction_bound(
        &[plain4(1), plain4(2)],
        &[zeros(4), zeros(4)],
        &cfg,
        0.3,
    )
    .unwrap();
    assert_eq!(out.joint_thetas, vec![2]);
    assert_eq!(out.merged.leaf_count(), 6);
    assert!(out.merged.is_plain());
    assert!(out.verified, "lhs {} rhs {}", out.lhs, out.rhs);
    assert!(out.lhs < out.rhs);

    // The surviving side of the bound: everything left of the cut flows
    // through the joint, so the weight-two factor is the squared propagator
    // of the left block's total momentum.
    let s0 = {
        let mut s = cfg.p[0];
        s += cfg.p[1];
        s += cfg.p[2];
        s.norm()
    };
    assert!((out.lhs - 1.0 / (0.3 + s0).powi(2)).abs() <= 1e-12 * out.lhs);
}

#[test]
fn consumed_star_lowers_joint_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = random_cfg(&mut rng, 5);
    let out = junction_bound(
        &[three_point(2), plain4(1)],
        &[zeros(3), zeros(4)],
        &cfg,
        0.7,
    )
    .unwrap();
    assert_eq!(out.joint_thetas, vec![1]);
    assert_eq!(out.merged.leaf_count(), 5);
    // The star was spent and its hollow vertex turned regular.
    assert_eq!(out.merged.hollow_count(), 0);
    assert_eq!(out.merged.star_total(), 0);
    assert!(out.verified);
}

#[test]
fn doubly_starred_joint_carries_no_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = random_cfg(&mut rng, 4);
    let out = junction_bound(
        &[three_point(2), three_point(0)],
        &[zeros(3), zeros(3)],
        &cfg,
        0.2,
    )
    .unwrap();
    assert_eq!(out.joint_thetas, vec![0]);
    assert_eq!(out.merged.leaf_count(), 4);
    assert!(out.merged.is_plain());
    assert!(out.verified);
}

#[test]
fn untouched_hollow_vertex_survives_the_merge() {
    let left = WeightedTree::new(
        vec![FieldLabel::A; 4],
        vec![(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)],
        vec![true, false],
        vec![1, 0, 0, 0, 0],
    )
    .unwrap();
    assert!(left.is_fragment());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = random_cfg(&mut rng, 6);
    let out = junction_bound(&[left, plain4(3)], &[zeros(4), zeros(4)], &cfg, 0.5).unwrap();
    assert_eq!(out.joint_thetas, vec![2]);
    assert_eq!(out.merged.hollow_count(), 1);
    assert_eq!(out.merged.star_total(), 1);
    assert!(out.merged.is_fragment());
    assert!(out.verified);
}

#[test]
fn three_fragment_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = random_cfg(&mut rng, 5);
    let lambda = 0.4;
    let out = junction_bound(
        &[three_point(2), three_point(0), three_point(0)],
        &[zeros(3), zeros(3), zeros(3)],
        &cfg,
        lambda,
    )
    .unwrap();
    assert_eq!(out.joint_thetas, vec![0, 1]);
    assert_eq!(out.merged.leaf_count(), 5);
    assert!(out.merged.is_plain());
    assert!(out.verified);

    // Closed form: the two stars cancel one squared joint, the third star
    // cancels half of the other, leaving a single propagator of the second
    // cut momentum; the merged sum adds more positive terms on top.
    let s1 = {
        let mut s = cfg.p[0];
        s += cfg.p[1];
        s += cfg.p[2];
        s.norm()
    };
    assert!((out.lhs - 1.0 / (lambda + s1)).abs() <= 1e-12 * out.lhs);
    assert!(out.rhs > out.lhs);
}

#[test]
fn weighted_interior_slots_pass_through() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = random_cfg(&mut rng, 6);
    let w_left = MultiIndex::new(vec![0, 2, 0, 0]).unwrap();
    let w_right = MultiIndex::new(vec![0, 1, 0, 0]).unwrap();
    let out = junction_bound(
        &[plain4(1), plain4(1)],
        &[w_left, w_right],
        &cfg,
        0.15,
    )
    .unwrap();
    // Global slots: left leaves 0..2 keep their index, right leaf i > 0
    // lands at 2 + i.
    assert_eq!(out.merged_w.counts(), &[0, 2, 0, 1, 0, 0]);
    assert!(out.verified, "lhs {} rhs {}", out.lhs, out.rhs);
}

#[test]
fn random_chains_satisfy_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 100 {
        // Shapes: position 0 may star its right joint, the last its left
        // joint; middles either consume at the left joint or stay plain.
        let m = if rng.gen_bool(0.5) { 2 } else { 3 };
        let mut frags = Vec::new();
        let mut ws = Vec::new();
        let mut budget = 3u8;
        for j in 0..m {
            let first = j == 0;
            let last = j + 1 == m;
            let pick = rng.gen_range(0..4u8);
            let frag = match pick {
                0 if first => three_point(2),
                0 => three_point(0),
                1 => plain4(rng.gen_range(1..4)),
                // A kept hollow vertex needs two leaves of its own after the
                // merge, so this shape only fits at the ends of the chain.
                2 if first || last => WeightedTree::new(
                    vec![FieldLabel::A; 4],
                    vec![(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)],
                    if first {
                        vec![true, false]
                    } else {
                        vec![false, true]
                    },
                    if first {
                        vec![0, 1, 0, 0, 0]
                    } else {
                        vec![0, 0, 1, 0, 0]
                    },
                )
                .unwrap(),
                _ => plain4(1),
            };
            let n_j = frag.leaf_count();
            let mut counts = vec![0u8; n_j];
            if n_j > 3 {
                // Interior slots only: never the dependent slot 0, never a
                // joint slot.
                let hi = if last { n_j } else { n_j - 1 };
                for slot in 1..hi {
                    if budget > 0 && rng.gen_bool(0.3) {
                        let add = rng.gen_range(1..=budget.min(2));
                        counts[slot] += add;
                        budget -= add;
                    }
                }
            }
            ws.push(MultiIndex::new(counts).unwrap());
            frags.push(frag);
        }
        let merged_n: usize =
            frags.iter().map(|f| f.leaf_count()).sum::<usize>() - 2 * (m - 1);
        if merged_n > 7 {
            continue;
        }
        // At most one unconsumed star in the merged tree; the hollow pieces
        // here all consume theirs, so only budget-free shapes can clash.
        let cfg = random_cfg(&mut rng, merged_n);
        let lambda = rng.gen_range(0.02..2.0);
        let out = junction_bound(&frags, &ws, &cfg, lambda).unwrap();
        assert!(
            out.verified && out.lhs <= out.rhs,
            "lhs {} rhs {} shapes {:?}",
            out.lhs,
            out.rhs,
            frags.iter().map(|f| f.leaf_count()).collect::<Vec<_>>()
        );
        assert!(out.joint_thetas.iter().all(|&t| t <= 2));
        checked += 1;
    }
}

#[test]
fn rejects_bad_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    // A bare three-leaf tree is not a fragment: its hollow vertex has no
    // star to spend.
    let bare = WeightedTree::new(
        vec![FieldLabel::A; 3],
        vec![(0, 3), (1, 3), (2, 3)],
        vec![true],
        vec![0; 3],
    )
    .unwrap();
    assert!(!bare.is_fragment());
    let cfg5 = random_cfg(&mut rng, 5);
    assert!(matches!(
        junction_bound(&[bare, plain4(1)], &[zeros(3), zeros(4)], &cfg5, 0.1),
        Err(TreesError::FragmentStarCount { .. })
    ));

    // A starred joint edge must sit on a hollow vertex.
    let starred_joint = WeightedTree::new(
        vec![FieldLabel::A; 4],
        vec![(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)],
        vec![false, false],
        vec![0, 0, 0, 1, 0],
    )
    .unwrap();
    assert!(starred_joint.is_fragment());
    let cfg6 = random_cfg(&mut rng, 6);
    assert!(matches!(
        junction_bound(
            &[starred_joint, plain4(1)],
            &[zeros(4), zeros(4)],
            &cfg6,
            0.1
        ),
        Err(TreesError::StarOnRegularJoint { .. })
    ));

    // No derivatives on joint slots.
    let w_joint = MultiIndex::new(vec![0, 0, 0, 1]).unwrap();
    assert!(matches!(
        junction_bound(&[plain4(1), plain4(1)], &[w_joint, zeros(4)], &cfg6, 0.1),
        Err(TreesError::WeightedSlot(3))
    ));

    // No derivatives on three-leaf fragments at all.
    let w3 = MultiIndex::new(vec![0, 1, 0]).unwrap();
    let cfg5b = random_cfg(&mut rng, 5);
    assert!(matches!(
        junction_bound(
            &[three_point(2), plain4(1)],
            &[w3, zeros(4)],
            &cfg5b,
            0.1
        ),
        Err(TreesError::WeightedSlot(_))
    ));

    // Momentum list must match the merged leaf count.
    assert!(matches!(
        junction_bound(&[plain4(1), plain4(1)], &[zeros(4), zeros(4)], &cfg5, 0.1),
        Err(TreesError::CountMismatch { .. })
    ));

    assert!(matches!(
        junction_bound(
            &[plain4(1), plain4(1)],
            &[zeros(4), zeros(4)],
            &cfg6,
            -1.0
        ),
        Err(TreesError::BadScale(_))
    ));
}
