use fe_momenta::{coplanar_point, symmetric_point, Vec4};
use fe_tensors::{
    bound_check_73, covariance_defect, delta_from_frame, enumerate_monomials, evaluate_monomial,
    lemma_rn_constant, sample_invariant_field, InvariantField, Tensor, TensorsError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const M: f64 = 1.1;

#[test]
fn constant_ingredients_and_frozen_values() {
    let c232 = lemma_rn_constant(2, 3, 2).unwrap();
    assert_eq!((c232.a0, c232.a_plus), (1, 4));
    assert!((c232.lambda1 - 2.192235935955850e-1).abs() <= 1e-9);
    assert!((c232.c - 4.271558410139713).abs() <= 1e-9);

    let c432 = lemma_rn_constant(4, 3, 2).unwrap();
    assert_eq!((c432.a0, c432.a_plus), (3, 40));
    assert!((c432.lambda1 - 4.118754301130900e-2).abs() <= 1e-9);
    assert!((c432.c - 3.116355921351821e1).abs() <= 1e-8);

    let c233 = lemma_rn_constant(2, 3, 3).unwrap();
    assert_eq!((c233.a0, c233.a_plus), (1, 9));
    assert!((c233.lambda1 - 1.043560762610399e-1).abs() <= 1e-9);

    // the constant scales linearly in n - 1 once the derivative branch wins
    let c252 = lemma_rn_constant(2, 5, 2).unwrap();
    assert!((c252.c - 2.0 * c232.c).abs() <= 1e-9 * c252.c);
}

#[test]
fn lambda1_matches_a_dense_route() {
    // independent oracle: dense tensors at the explicit orthogonal frame
    use nalgebra::DMatrix;
    let frame = vec![Vec4::new(1.0, 0.0, 0.0, 0.0), Vec4::new(0.0, 1.0, 0.0, 0.0)];
    let monos = enumerate_monomials(2, 3).unwrap();
    let dense: Vec<Tensor> = monos
        .iter()
        .map(|t| evaluate_monomial(t, &frame).unwrap())
        .collect();
    let n = dense.len();
    let g = DMatrix::from_fn(n, n, |i, j| {
        dense[i].frobenius_dot(&dense[j])
            / (dense[i].frobenius_norm() * dense[j].frobenius_norm())
    });
    let min = g
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let c = lemma_rn_constant(2, 3, 2).unwrap();
    assert!((min - c.lambda1).abs() <= 1e-9, "{min} vs {}", c.lambda1);
}

#[test]
fn constant_threshold_violations_are_rejected() {
    assert!(matches!(
        lemma_rn_constant(4, 3, 3),
        Err(TensorsError::FrameThreshold { .. })
    ));
    assert!(matches!(
        lemma_rn_constant(2, 3, 4),
        Err(TensorsError::FrameThreshold { .. })
    ));
    assert!(matches!(
        lemma_rn_constant(2, 3, 1),
        Err(TensorsError::FrameThreshold { .. })
    ));
    assert!(matches!(
        lemma_rn_constant(3, 3, 2),
        Err(TensorsError::RankNotCovered(3))
    ));
}

#[test]
fn delta_reconstructed_from_any_full_frame() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let q: Vec<Vec4> = (0..4)
            .map(|_| Vec4([(); 4].map(|_| rng.gen_range(-1.0f64..1.0))))
            .collect();
        let g = nalgebra::Matrix4::from_fn(|i, j| q[i].dot(q[j]));
        if g.determinant().abs() < 1e-3 {
            continue; // keep the frame well conditioned
        }
        let rec = delta_from_frame(&q).unwrap();
        for mu in 0..4 {
            for nu in 0..4 {
                let want = if mu == nu { 1.0 } else { 0.0 };
                assert!(
                    (rec.get(&[mu, nu]) - want).abs() <= 1e-10,
                    "({mu},{nu}): {}",
                    rec.get(&[mu, nu])
                );
            }
        }
    }
}

#[test]
fn sample_fields_are_rotation_covariant() {
    let cfg = symmetric_point(4, M, 3).unwrap();
    for rank in [2usize, 4] {
        let coeffs: Vec<f64> = (0..30).map(|i| ((i * 37 + 11) % 17) as f64 / 7.0 - 1.0).collect();
        let field = sample_invariant_field(rank, 4, &coeffs).unwrap();
        let defect = covariance_defect(&field, &cfg.p, 99);
        assert!(defect <= 1e-9, "rank {rank}: defect {defect}");
    }
}

#[test]
fn constant_field_bound_rests_on_the_delta_coefficient() {
    let cfg = symmetric_point(3, M, 21).unwrap();
    let delta = enumerate_monomials(1, 2).unwrap().into_iter().next().unwrap();
    assert!(delta.is_pure_delta());
    let field = InvariantField::new(2, 3, move |_p: &[Vec4]| {
        let mut out = Tensor::zeros(2);
        out.add_scaled(
            0.7,
            &evaluate_monomial(&delta, &[Vec4::new(1.0, 0.0, 0.0, 0.0)]).unwrap(),
        );
        out
    });
    let report = bound_check_73(&field, &cfg).unwrap();
    assert!(report.holds, "{report:?}");
    // |F| = 2 * 0.7, delta coefficient 0.7, derivatives vanish
    assert!((report.lhs - 1.4).abs() <= 1e-12);
    assert!((report.rhs - report.c * 0.7).abs() <= 1e-9);
    assert!(report.lhs_no_delta <= 1e-9);
}

#[test]
fn vector_field_bound_rests_on_the_derivative_term() {
    let cfg = symmetric_point(3, M, 5).unwrap();
    let field = InvariantField::new(2, 3, |p: &[Vec4]| {
        let mut out = Tensor::zeros(2);
        for mu in 0..4 {
            for nu in 0..4 {
                out.set(&[mu, nu], p[1][mu] * p[1][nu]);
            }
        }
        out
    });
    let report = bound_check_73(&field, &cfg).unwrap();
    assert!(report.holds && report.holds_no_delta, "{report:?}");
    // no pure-delta content: both sides of the reduced bound match the full one
    assert!((report.lhs_no_delta - report.lhs).abs() <= 1e-9 * report.lhs);
    assert!(report.rhs_no_delta > 0.0);
}

#[test]
fn random_polynomial_fields_satisfy_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..100u64 {
        let rank = if trial % 2 == 0 { 2 } else { 4 };
        let n = 4;
        let cfg = coplanar_point(n, M, 0.5, 500 + trial).unwrap();
        let coeffs: Vec<f64> = (0..60).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let field = sample_invariant_field(rank, n, &coeffs).unwrap();
        let report = bound_check_73(&field, &cfg).unwrap();
        assert_eq!(report.frame_dim, 2);
        assert!(report.holds, "trial {trial}: {report:?}");
        assert!(report.holds_no_delta, "trial {trial}: {report:?}");
    }
}
