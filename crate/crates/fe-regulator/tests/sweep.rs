use fe_regulator::derivative_bound_sweep;

#[test]
fn fitted_constants_cover_the_whole_grid() {
    let (fit, rows) = derivative_bound_sweep(1.0);
    assert!(fit.c0.is_finite() && fit.c0 > 0.0, "c0 = {}", fit.c0);
    assert!(fit.c1.is_finite() && fit.c1 >= 0.0, "c1 = {}", fit.c1);
    assert!(fit.d >= 1.0, "d = {}", fit.d);
    assert!(fit.max_ratio <= 1.0 + 1e-9, "max ratio {}", fit.max_ratio);
    // the envelope is tight somewhere, not vacuous
    assert!(fit.max_ratio > 0.5, "max ratio {}", fit.max_ratio);
    assert!(rows.len() > 9_000, "grid has {} rows", rows.len());
    for row in &rows {
        assert!(row.value_norm.is_finite());
        assert!(row.ratio.is_finite());
        assert!(row.ratio <= 1.0 + 1e-9, "row ratio {}", row.ratio);
        assert!(row.lambda > 0.0 && row.lambda < row.lambda0);
    }
    // both propagator kinds and all derivative orders show up
    assert!(rows.iter().any(|r| r.kind == "gauge" && r.w_norm == 4));
    assert!(rows.iter().any(|r| r.kind == "ghost" && r.w_norm == 0));
}

#[test]
fn sweep_is_deterministic() {
    let (fit_a, rows_a) = derivative_bound_sweep(2.0);
    let (fit_b, rows_b) = derivative_bound_sweep(2.0);
    assert_eq!(fit_a.c0, fit_b.c0);
    assert_eq!(fit_a.c1, fit_b.c1);
    assert_eq!(fit_a.d, fit_b.d);
    assert_eq!(rows_a.len(), rows_b.len());
    for (a, b) in rows_a.iter().zip(&rows_b) {
        assert_eq!(a.value_norm, b.value_norm);
        assert_eq!(a.ratio, b.ratio);
    }
}
