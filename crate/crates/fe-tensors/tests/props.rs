use fe_momenta::Vec4;
use fe_tensors::{
    dot_matrix, enumerate_monomials, evaluate_monomial, independence, monomial_dot,
};
use proptest::prelude::*;

fn vectors(m: usize) -> impl Strategy<Value = Vec<Vec4>> {
    prop::collection::vec(prop::array::uniform4(-1.5f64..1.5).prop_map(Vec4), m..=m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn contraction_dot_is_symmetric_and_matches_dense(q in vectors(2), r in 2usize..=4) {
        let monos = enumerate_monomials(2, r).unwrap();
        let dots = dot_matrix(&q);
        for a in monos.iter().step_by(3) {
            for b in monos.iter().step_by(5) {
                let ab = monomial_dot(a, b, &dots);
                let ba = monomial_dot(b, a, &dots);
                prop_assert!((ab - ba).abs() <= 1e-12 * (1.0 + ab.abs()));
                let dense = evaluate_monomial(a, &q).unwrap()
                    .frobenius_dot(&evaluate_monomial(b, &q).unwrap());
                prop_assert!((ab - dense).abs() <= 1e-11 * (1.0 + ab.abs().max(dense.abs())));
            }
        }
    }

    #[test]
    fn rescaling_preserves_the_verdict(q in vectors(2), t in 0.2f64..5.0) {
        let base = independence(&q, 3).unwrap();
        let scaled: Vec<Vec4> = q.iter().map(|v| *v * t).collect();
        let after = independence(&scaled, 3).unwrap();
        prop_assert_eq!(base.independent, after.independent);
    }
}
