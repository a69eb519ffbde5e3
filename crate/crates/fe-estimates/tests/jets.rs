use std::sync::Arc;

use approx::assert_relative_eq;
use fe_estimates::{f_deriv, Jet, JetSpace};

#[test]
fn space_cache_returns_shared_tables() {
    let a = JetSpace::get(4, 3);
    let b = JetSpace::get(4, 3);
    assert!(Arc::ptr_eq(&a, &b));
    assert_ne!(a.len(), JetSpace::get(4, 2).len());
}

#[test]
fn mixed_partials_of_exp_product() {
    let space = JetSpace::get(2, 3);
    let (x, y) = (0.3, 0.7);
    let f = Jet::var(&space, 0, x).mul(&Jet::var(&space, 1, y)).exp();
    let e = (x * y).exp();
    assert_relative_eq!(f.value(), e, max_relative = 1e-13);
    assert_relative_eq!(f.deriv(&[1, 1]), e * (1.0 + x * y), max_relative = 1e-13);
    assert_relative_eq!(
        f.deriv(&[2, 1]),
        e * (2.0 * y + x * y * y),
        max_relative = 1e-13
    );
}

#[test]
fn quartic_monomial_derivatives() {
    let space = JetSpace::get(1, 4);
    let x = Jet::var(&space, 0, 1.3);
    let q = x.mul(&x).mul(&x).mul(&x);
    assert_relative_eq!(q.deriv(&[4]), 24.0, max_relative = 1e-13);
    assert_relative_eq!(q.deriv(&[1]), 4.0 * 1.3f64.powi(3), max_relative = 1e-13);
}

#[test]
fn square_of_sum_cross_derivative() {
    let space = JetSpace::get(2, 2);
    let s = Jet::var(&space, 0, 1.1).add(&Jet::var(&space, 1, -0.4));
    assert_relative_eq!(s.mul(&s).deriv(&[1, 1]), 2.0, max_relative = 1e-14);
}

#[test]
fn series_composition_agrees_with_exp() {
    let space = JetSpace::get(3, 4);
    let vars: Vec<Jet> = (0..3).map(|i| Jet::var(&space, i, 0.2 * (i as f64 + 1.0))).collect();
    let mut t = vars[0].mul(&vars[0]);
    for v in &vars[1..] {
        t = t.add(&v.mul(v));
    }
    let t0 = t.value();
    let mut fac = 1.0;
    let series: Vec<f64> = (0..=4)
        .map(|k| {
            if k > 0 {
                fac *= k as f64;
            }
            t0.exp() / fac
        })
        .collect();
    let composed = t.compose_series(&series);
    let direct = t.exp();
    for alpha in [[0, 0, 0], [1, 0, 0], [2, 1, 0], [1, 1, 2], [0, 4, 0]] {
        assert_relative_eq!(
            composed.deriv(&alpha),
            direct.deriv(&alpha),
            max_relative = 1e-12
        );
    }
}

#[test]
fn gradient_frobenius_of_norm_square() {
    let space = JetSpace::get(4, 1);
    let xs = [1.0, 2.0, 3.0, 4.0];
    let vars: Vec<Jet> = (0..4).map(|i| Jet::var(&space, i, xs[i])).collect();
    let mut t = vars[0].mul(&vars[0]);
    for v in &vars[1..] {
        t = t.add(&v.mul(v));
    }
    let nsq: f64 = xs.iter().map(|x| x * x).sum();
    assert_relative_eq!(t.frob_sq(0), nsq * nsq, max_relative = 1e-13);
    // gradient components 2 x_i
    assert_relative_eq!(t.frob_sq(1), 4.0 * nsq, max_relative = 1e-13);
}

#[test]
fn split_frobenius_counts_each_block() {
    let space = JetSpace::get(8, 2);
    let f = Jet::var(&space, 0, 0.9).mul(&Jet::var(&space, 4, -1.7));
    // d/dx0 = x4, counted in the (1, 0) block
    assert_relative_eq!(f.frob_sq_split(1, 0, 4), 1.7 * 1.7, max_relative = 1e-13);
    // d2/dx0 dx4 = 1
    assert_relative_eq!(f.frob_sq_split(1, 1, 4), 1.0, max_relative = 1e-13);
    assert_relative_eq!(f.frob_sq_split(2, 0, 4), 0.0, max_relative = 1e-13);
}

#[test]
fn max_abs_deriv_scans_one_order() {
    let space = JetSpace::get(4, 2);
    let xs = [0.5, -2.0, 1.0, 0.0];
    let vars: Vec<Jet> = (0..4).map(|i| Jet::var(&space, i, xs[i])).collect();
    let mut t = vars[0].mul(&vars[0]);
    for v in &vars[1..] {
        t = t.add(&v.mul(v));
    }
    assert_relative_eq!(t.max_abs_deriv(1), 4.0, max_relative = 1e-13);
    assert_relative_eq!(t.max_abs_deriv(2), 2.0, max_relative = 1e-13);
}

#[test]
fn window_ratio_derivative_matches_stable_form() {
    let (beta, y): (f64, f64) = (0.3, 2.0);
    // k = 0 is the function itself, computed here via expm1 for stability
    let want = ((-beta * y).exp_m1() - (-y).exp_m1()) / y;
    assert_relative_eq!(f_deriv(beta, y, 0).unwrap(), want, max_relative = 1e-11);

    // first derivative from integrating the exponential by parts
    let by_parts = (beta * (-beta * y).exp() - (-y).exp()) / y
        + ((-beta * y).exp() - (-y).exp()) / (y * y);
    assert_relative_eq!(f_deriv(beta, y, 1).unwrap(), -by_parts, max_relative = 1e-10);
}

#[test]
fn window_ratio_derivatives_at_zero_argument() {
    for k in 0..=4u32 {
        let beta = 0.2f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let want = sign * (1.0 - beta.powi(k as i32 + 1)) / (k as f64 + 1.0);
        assert_relative_eq!(f_deriv(beta, 0.0, k).unwrap(), want, max_relative = 1e-11);
    }
}
