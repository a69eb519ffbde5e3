use nalgebra::{DMatrix, Matrix4};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fe_momenta::Vec4;
use fe_regulator::{covariance, prop, sigma_window, PropKind, Regulator, RegulatorError, DIM};

fn product_defect(a: &[[f64; DIM]; DIM], b: &[[f64; DIM]; DIM]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..DIM {
        for j in 0..DIM {
            let mut acc = 0.0;
            for k in 0..DIM {
                acc += a[i][k] * b[k][j];
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - expect).abs());
        }
    }
    worst
}

fn grid() -> Vec<(Regulator, Vec4)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2_024);
    let lambda0 = 1.0;
    let mut out = Vec::new();
    for lf in [0.05, 0.2, 0.5, 0.8, 0.95] {
        for xi in [0.2, 0.7, 1.0, 2.0, 5.0] {
            for ip in 0..40 {
                let p_norm = lambda0 * 1e-3 * (3e3f64).powf(ip as f64 / 39.0);
                let dir = Vec4::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                );
                let p = dir * (p_norm / dir.norm());
                out.push((Regulator::new(lf * lambda0, lambda0, xi).unwrap(), p));
            }
        }
    }
    out
}

#[test]
fn inverse_holds_on_a_thousand_point_grid() {
    let points = grid();
    assert_eq!(points.len(), 1000);
    for (reg, p) in points {
        let rep = covariance(p, &reg).unwrap();
        let defect = product_defect(&rep.matrix, &rep.inverse);
        assert!(
            defect < 1e-10,
            "Λ={} ξ={} |p|={}: defect {defect}",
            reg.lambda,
            reg.xi,
            p.norm()
        );
    }
}

#[test]
fn eigenvalue_triples_and_pair_products() {
    for (reg, p) in grid() {
        let rep = covariance(p, &reg).unwrap();
        let s_inv = 1.0 / sigma_window(&reg, p.norm_sq());
        for i in 0..3 {
            assert!((rep.q[i].re - s_inv).abs() <= 1e-12 * s_inv);
            assert_eq!(rep.q[i].im, 0.0);
        }
        let (q4, q5) = (rep.q[3], rep.q[4]);
        assert!(q4.re > 0.0 && q5.re > 0.0, "Λ={} ξ={}", reg.lambda, reg.xi);
        let prod = q4 * q5;
        assert!((prod.re - s_inv).abs() <= 1e-10 * s_inv, "{} vs {s_inv}", prod.re);
        assert!(prod.im.abs() <= 1e-10 * s_inv);
        // conjugate or real pair, so the sum is always real
        assert!((q4.im + q5.im).abs() <= 1e-12 * q4.norm().max(1.0));
    }
}

#[test]
fn eigenvalues_match_a_dense_numeric_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let lambda0 = rng.gen_range(0.5..4.0);
        let reg = Regulator::new(
            rng.gen_range(0.05..0.9) * lambda0,
            lambda0,
            rng.gen_range(0.2..5.0),
        )
        .unwrap();
        let p_norm = lambda0 * rng.gen_range(0.01..2.0);
        let dir = Vec4::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let p = dir * (p_norm / dir.norm());
        let rep = covariance(p, &reg).unwrap();
        // bosonic block of the inverse with gauge rows and columns divided
        // by |p|, so all five eigenvalues become dimensionless
        let mut block = DMatrix::zeros(5, 5);
        for i in 0..5 {
            for j in 0..5 {
                let mut v = rep.inverse[i][j];
                if i < 4 {
                    v /= p_norm;
                }
                if j < 4 {
                    v /= p_norm;
                }
                block[(i, j)] = v;
            }
        }
        let mut numeric: Vec<_> = block.complex_eigenvalues().iter().copied().collect();
        let mut closed: Vec<_> = rep.q.to_vec();
        let key = |c: &nalgebra::Complex<f64>| (c.re, c.im);
        numeric.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        closed.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        let scale = closed.iter().map(|c| c.norm()).fold(1.0f64, f64::max);
        for (n, c) in numeric.iter().zip(&closed) {
            assert!(
                (n - c).norm() <= 1e-8 * scale,
                "numeric {n} vs closed {c} (Λ={}, ξ={}, |p|={p_norm})",
                reg.lambda,
                reg.xi
            );
        }
    }
}

#[test]
fn gauge_block_is_symmetric_and_matches_the_propagator() {
    let reg = Regulator::new(0.35, 1.0, 2.2).unwrap();
    let p = Vec4::new(0.4, -0.2, 0.55, 0.1);
    let rep = covariance(p, &reg).unwrap();
    let m = *prop(PropKind::Gauge, p, &reg).unwrap().as_matrix().unwrap();
    for mu in 0..4 {
        for nu in 0..4 {
            assert_eq!(rep.matrix[mu][nu], rep.matrix[nu][mu]);
            assert_eq!(rep.matrix[mu][nu], m[mu][nu]);
        }
    }
    // ghost corner is antisymmetric and matches the scalar propagator
    let s = prop(PropKind::Ghost, p, &reg).unwrap().as_scalar().unwrap();
    assert_eq!(rep.matrix[5][6], -s);
    assert_eq!(rep.matrix[6][5], s);
    assert_eq!(rep.matrix[5][5], 0.0);
    assert_eq!(rep.matrix[6][6], 0.0);
}

#[test]
fn auxiliary_row_ties_to_the_window() {
    let reg = Regulator::new(0.6, 3.0, 0.8).unwrap();
    let p = Vec4::new(1.1, 0.3, -0.7, 0.2);
    let t = p.norm_sq();
    let rep = covariance(p, &reg).unwrap();
    let sw = sigma_window(&reg, t);
    assert!((rep.matrix[4][4] - (1.0 - sw) / reg.xi).abs() < 1e-15);
    for mu in 0..4 {
        let mix = sw / t * p[mu];
        assert!((rep.matrix[mu][4] - mix).abs() < 1e-14 * mix.abs().max(1.0));
        assert!((rep.matrix[4][mu] + mix).abs() < 1e-14 * mix.abs().max(1.0));
    }
}

#[test]
fn projector_decomposition_of_the_gauge_block() {
    let reg = Regulator::new(0.5, 2.5, 3.7).unwrap();
    let p = Vec4::new(0.9, -1.3, 0.2, 0.6);
    let t = p.norm_sq();
    let sw = sigma_window(&reg, t);
    let rep = covariance(p, &reg).unwrap();
    let mut gauge = Matrix4::zeros();
    let mut expect = Matrix4::zeros();
    for mu in 0..4 {
        for nu in 0..4 {
            gauge[(mu, nu)] = rep.matrix[mu][nu];
            let delta = if mu == nu { 1.0 } else { 0.0 };
            let trans = (delta - p[mu] * p[nu] / t) / t;
            let long = reg.xi * p[mu] * p[nu] / (t * t);
            expect[(mu, nu)] = sw * (trans + long);
        }
    }
    assert!((gauge - expect).norm() <= 1e-13 * expect.norm());
}

#[test]
fn degenerate_inputs_are_rejected() {
    let p = Vec4::new(1.0, 0.0, 0.0, 0.0);
    let equal = Regulator::new(2.0, 2.0, 1.0).unwrap();
    assert_eq!(covariance(p, &equal).unwrap_err(), RegulatorError::EmptyWindow);
    let reg = Regulator::new(1.0, 2.0, 1.0).unwrap();
    assert_eq!(
        covariance(Vec4::ZERO, &reg).unwrap_err(),
        RegulatorError::SingularPoint
    );
}
