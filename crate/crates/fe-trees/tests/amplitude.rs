use fe_momenta::{MomentumConfig, MultiIndex, Vec4};
use fe_trees::{
    amplitude_pi, amplitude_q, bounding_log_poly, theta_set, FieldLabel, QEvaluator, TreesError,
    WeightedTree,
};
use proptest::prelude::*;

fn four_leaf(stars: Vec<u8>, labels: Vec<FieldLabel>) -> WeightedTree {
    WeightedTree::new(
        labels,
        vec![(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)],
        vec![false, false],
        stars,
    )
    .unwrap()
}

fn three_leaf(stars: Vec<u8>) -> WeightedTree {
    WeightedTree::new(
        vec![FieldLabel::C, FieldLabel::A, FieldLabel::CBar],
        vec![(0, 3), (1, 3), (2, 3)],
        vec![true],
        stars,
    )
    .unwrap()
}

fn cfg_from(tail: Vec<Vec4>) -> MomentumConfig {
    MomentumConfig::from_tail(1.0, tail).unwrap()
}

fn sample_tail(n: usize, seed: u64) -> Vec<Vec4> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n - 1)
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
fn propagator_product_is_one_at_zero_weight() {
    let t = four_leaf(vec![0; 5], vec![FieldLabel::A; 4]);
    let cfg = cfg_from(sample_tail(4, 1));
    let tw = &theta_set(&t, &MultiIndex::zero(4)).unwrap()[0];
    assert_eq!(amplitude_pi(&t, tw, &cfg, 0.7).unwrap(), 1.0);
}

#[test]
fn propagator_product_scales_homogeneously() {
    let t = enumerate_tree_five();
    let w = MultiIndex::new(vec![0, 0, 1, 0, 1]).unwrap();
    let tail = sample_tail(5, 2);
    let cfg = cfg_from(tail.clone());
    let s = 2.5;
    let scaled = cfg_from(tail.iter().map(|p| scale_vec(p, s)).collect());
    for tw in theta_set(&t, &w).unwrap() {
        let base = amplitude_pi(&t, &tw, &cfg, 0.6).unwrap();
        let big = amplitude_pi(&t, &tw, &scaled, 0.6 * s).unwrap();
        let predicted = base * s.powi(-(tw.total() as i32));
        assert!(
            (big - predicted).abs() <= 1e-12 * predicted.abs(),
            "{big} vs {predicted}"
        );
    }
}

fn enumerate_tree_five() -> WeightedTree {
    WeightedTree::new(
        vec![FieldLabel::A; 5],
        vec![(0, 5), (1, 5), (5, 6), (2, 6), (6, 7), (3, 7), (4, 7)],
        vec![false; 3],
        vec![0; 7],
    )
    .unwrap()
}

fn scale_vec(p: &Vec4, s: f64) -> Vec4 {
    Vec4::new(s * p[0], s * p[1], s * p[2], s * p[3])
}

#[test]
fn vanishing_edge_momentum_at_zero_scale_is_singular() {
    // Opposite momenta on the paired leaves kill the internal edge.
    let t = four_leaf(vec![0; 5], vec![FieldLabel::A; 4]);
    let q = Vec4::new(0.3, -0.1, 0.4, 0.2);
    let r = Vec4::new(-0.2, 0.5, 0.1, -0.4);
    // Leaves 1 and 2 sit on opposite sides here, so route the cancellation
    // through the internal edge of the partner-1 pairing: K = {2, 3}.
    let cfg = cfg_from(vec![q, r, -r]);
    let w = MultiIndex::new(vec![0, 0, 1, 0]).unwrap();
    let thetas = theta_set(&t, &w).unwrap();
    let internal = t.internal_edges().next().unwrap();
    let tw = thetas.iter().find(|tw| tw.theta[internal] == 1).unwrap();
    assert!(matches!(
        amplitude_pi(&t, tw, &cfg, 0.0),
        Err(TreesError::SingularAmplitude)
    ));
    assert!(amplitude_pi(&t, tw, &cfg, 0.4).is_ok());
}

#[test]
fn plain_zero_weight_amplitude_is_one() {
    let t = four_leaf(vec![0; 5], vec![FieldLabel::A; 4]);
    let cfg = cfg_from(sample_tail(4, 3));
    let q = amplitude_q(&t, &MultiIndex::zero(4), &cfg, 1.1).unwrap();
    assert_eq!(q.value, 1.0);
    assert!(!q.three_point_zero_weight);
}

#[test]
fn amplitude_scales_by_star_source_and_weight_counts() {
    // One star, one source leg, one derivative: degree 1 - 1 - 1 = -1.
    let t = four_leaf(
        vec![0, 0, 0, 0, 1],
        vec![FieldLabel::A, FieldLabel::A, FieldLabel::Gamma, FieldLabel::A],
    );
    let w = MultiIndex::new(vec![0, 1, 0, 0]).unwrap();
    let tail = sample_tail(4, 4);
    let cfg = cfg_from(tail.clone());
    let s = 3.0;
    let scaled = cfg_from(tail.iter().map(|p| scale_vec(p, s)).collect());
    let base = amplitude_q(&t, &w, &cfg, 0.8).unwrap().value;
    let big = amplitude_q(&t, &w, &scaled, 0.8 * s).unwrap().value;
    let predicted = base / s;
    assert!((big - predicted).abs() <= 1e-12 * predicted.abs());
}

#[test]
fn three_leaf_weight_takes_the_smaller_branch() {
    let t = three_leaf(vec![0; 3]);
    let tail = sample_tail(3, 5);
    let cfg = cfg_from(tail.clone());
    let lambda = 0.45;
    let d = |e: usize| {
        let p = match e {
            0 => {
                let mut s = tail[0];
                s += tail[1];
                s
            }
            other => tail[other - 1],
        };
        lambda + p.norm()
    };
    // Both leaves weighted: one branch per decremented slot, each branch
    // spreading the remaining unit.
    let w = MultiIndex::new(vec![0, 1, 1]).unwrap();
    let got = amplitude_q(&t, &w, &cfg, lambda).unwrap();
    let branch_drop_1 = 1.0 / d(0) + 1.0 / d(2);
    let branch_drop_2 = 1.0 / d(0) + 1.0 / d(1);
    let want = branch_drop_1.min(branch_drop_2);
    assert!((got.value - want).abs() <= 1e-14 * want);
    assert!(!got.three_point_zero_weight);

    // One weighted leaf: a single branch, whose decrement empties the
    // weight, leaving the bare product.
    let w = MultiIndex::new(vec![0, 1, 0]).unwrap();
    let got = amplitude_q(&t, &w, &cfg, lambda).unwrap();
    assert_eq!(got.value, 1.0);
}

#[test]
fn three_leaf_zero_weight_is_flagged() {
    let t = three_leaf(vec![1, 0, 0]);
    let cfg = cfg_from(sample_tail(3, 6));
    let got = amplitude_q(&t, &MultiIndex::zero(3), &cfg, 0.2).unwrap();
    assert!(got.three_point_zero_weight);
    // Plain weight sum with the star prefactor.
    let want = 0.2 + cfg.p[0].norm();
    assert!((got.value - want).abs() <= 1e-14 * want);
}

#[test]
fn prepared_evaluator_matches_one_shot() {
    let t = enumerate_tree_five();
    let w = MultiIndex::new(vec![0, 1, 0, 1, 0]).unwrap();
    let cfg = cfg_from(sample_tail(5, 7));
    let ev = QEvaluator::new(&t, &w, &cfg).unwrap();
    for lambda in [0.05, 0.3, 2.0, 40.0] {
        let one_shot = amplitude_q(&t, &w, &cfg, lambda).unwrap().value;
        assert_eq!(ev.eval(lambda).unwrap(), one_shot);
    }
}

#[test]
fn rejects_bad_scales() {
    let t = four_leaf(vec![0; 5], vec![FieldLabel::A; 4]);
    let cfg = cfg_from(sample_tail(4, 8));
    assert!(matches!(
        amplitude_q(&t, &MultiIndex::zero(4), &cfg, -0.1),
        Err(TreesError::BadScale(_))
    ));
    assert!(matches!(
        amplitude_q(&t, &MultiIndex::zero(4), &cfg, f64::NAN),
        Err(TreesError::BadScale(_))
    ));
}

#[test]
fn unit_log_polynomial_values() {
    // Both logs clip to zero: only the constant term of each block remains.
    assert_eq!(bounding_log_poly(0.5, 1.0, 0.0, 2.0, 0.5, 3), 2.0);
    // x = ln 4 with degree 1: (1 + ln 4) + (1 + ln 2).
    let got = bounding_log_poly(4.0, 1.0, 0.0, 1.0, 2.0, 1);
    let want = 1.0 + 4.0f64.ln() + 1.0 + 2.0f64.ln();
    assert!((got - want).abs() < 1e-14);
    // Monotone in degree.
    for k in 0..4 {
        assert!(
            bounding_log_poly(9.0, 1.0, 0.1, 0.5, 3.0, k)
                < bounding_log_poly(9.0, 1.0, 0.1, 0.5, 3.0, k + 1)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn starless_amplitude_never_increases_with_scale(
        seed in 0u64..1_000_000,
        l1 in 0.01f64..10.0,
        step in 0.0f64..10.0,
        slot in 1usize..5,
    ) {
        let t = enumerate_tree_five();
        let mut counts = vec![0u8; 5];
        counts[slot] = 2;
        let w = MultiIndex::new(counts).unwrap();
        let cfg = cfg_from(sample_tail(5, seed));
        let ev = QEvaluator::new(&t, &w, &cfg).unwrap();
        let lo = ev.eval(l1).unwrap();
        let hi = ev.eval(l1 + step).unwrap();
        prop_assert!(hi <= lo * (1.0 + 1e-12));
    }

    #[test]
    fn amplitude_is_positive_and_finite(
        seed in 0u64..1_000_000,
        lambda in 0.0f64..20.0,
        partner in 1usize..4,
    ) {
        let others: Vec<usize> = (1..4).filter(|&l| l != partner).collect();
        let t = WeightedTree::new(
            vec![FieldLabel::A; 4],
            vec![(0, 4), (partner, 4), (others[0], 5), (others[1], 5), (4, 5)],
            vec![false, false],
            vec![0, 0, 0, 1, 1],
        ).unwrap();
        let w = MultiIndex::new(vec![0, 0, 2, 0]).unwrap();
        let cfg = cfg_from(sample_tail(4, seed));
        let v = amplitude_q(&t, &w, &cfg, lambda);
        // Generic momenta keep every edge away from zero.
        if let Ok(q) = v {
            prop_assert!(q.value.is_finite());
            prop_assert!(q.value > 0.0);
        }
    }
}
