use crate::Regulator;

/// Below this fraction of Λ² (in the variable `t = p²`) the windowed
/// propagator functions switch to their Taylor series. The split has to sit
/// well away from zero: after dividing by `t^j` and differentiating k times
/// the leading series terms cancel in the direct evaluation, with severity
/// growing like `(Λ²/t)^4` for the highest orders.
pub const SMALL_T_FRAC: f64 = 0.1;

const SERIES_TERMS: u32 = 12;

/// `σ_λ(s) = exp(−s²/λ⁴)`, extended by continuity to `λ = 0` (sharp limit).
pub fn sigma(lambda: f64, s: f64) -> f64 {
    if lambda == 0.0 {
        return if s == 0.0 { 1.0 } else { 0.0 };
    }
    let x = s / (lambda * lambda);
    (-x * x).exp()
}

fn inv4(x: f64) -> f64 {
    let x2 = x * x;
    1.0 / (x2 * x2)
}

/// `σ_{Λ₀}(s) − σ_Λ(s)`, evaluated as
/// `−σ_{Λ₀}(s)·expm1(−s²(Λ⁻⁴ − Λ₀⁻⁴))` so the difference of two numbers near
/// one never appears.
pub fn sigma_window(reg: &Regulator, s: f64) -> f64 {
    if s == 0.0 || reg.lambda == reg.lambda0 {
        return 0.0;
    }
    if reg.lambda == 0.0 {
        return sigma(reg.lambda0, s);
    }
    let d = -inv4(reg.lambda) * (4.0 * (reg.lambda / reg.lambda0).ln()).exp_m1();
    -sigma(reg.lambda0, s) * (-(s * s) * d).exp_m1()
}

/// Polynomials `R_k` with `(d/dt)^k e^{−t²/λ⁴} = R_k(t)·e^{−t²/λ⁴}`,
/// as coefficient vectors in `t`; `R_{k+1} = R_k' − (2t/λ⁴) R_k`.
fn exp_deriv_polys(lambda: f64, k_max: u32) -> Vec<Vec<f64>> {
    let a = 2.0 * inv4(lambda);
    let mut polys = vec![vec![1.0]];
    for _ in 0..k_max {
        let last = polys.last().unwrap();
        let mut next = vec![0.0; last.len() + 1];
        for (i, &c) in last.iter().enumerate() {
            if i > 0 {
                next[i - 1] += c * i as f64;
            }
            next[i + 1] -= a * c;
        }
        polys.push(next);
    }
    polys
}

fn poly_eval(p: &[f64], t: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

/// `(d/dt)^i σ_{ΛΛ₀}(t)` for `i ≥ 1` (no cancellation: the two exponential
/// pieces no longer sit near a common constant once differentiated).
fn window_deriv(reg: &Regulator, i: u32, t: f64) -> f64 {
    let hi = poly_eval(&exp_deriv_polys(reg.lambda0, i)[i as usize], t) * sigma(reg.lambda0, t);
    let lo = if reg.lambda == 0.0 {
        0.0
    } else {
        poly_eval(&exp_deriv_polys(reg.lambda, i)[i as usize], t) * sigma(reg.lambda, t)
    };
    hi - lo
}

/// `(d/dt)^k [σ_{ΛΛ₀}(t)/t^j]` for `j ≤ 2`, `k ≤ 6`. Small `t` uses the
/// series of the window, `σ_{ΛΛ₀}(t) = Σ_{m≥1} (−1)^{m+1}(Λ^{−4m} −
/// Λ₀^{−4m}) t^{2m}/m!`, which starts at `t²`, so all exponents `2m − j`
/// stay nonnegative.
pub fn window_over_power_deriv(reg: &Regulator, j: u32, k: u32, t: f64) -> f64 {
    debug_assert!(j <= 2 && k <= 6);
    if reg.lambda == reg.lambda0 {
        return 0.0;
    }
    let small = reg.lambda > 0.0 && t.abs() < SMALL_T_FRAC * reg.lambda * reg.lambda;
    if small || t == 0.0 {
        if reg.lambda == 0.0 {
            // only reachable at t = 0 exactly: the sharp window is σ_{Λ₀} − 1
            // there, and every 1/t^j power is singular
            return f64::NAN;
        }
        let mut acc = 0.0;
        let mut inv_l = 1.0;
        let mut fact = 1.0;
        // Λ^{−4m} − Λ₀^{−4m} = −Λ^{−4m}·expm1(4m·ln(Λ/Λ₀)), stable even
        // when the two scales nearly coincide
        let log_ratio = 4.0 * (reg.lambda / reg.lambda0).ln();
        for m in 1..=SERIES_TERMS {
            inv_l *= inv4(reg.lambda);
            fact *= m as f64;
            let diff = -inv_l * (m as f64 * log_ratio).exp_m1();
            let a = if m % 2 == 1 { 1.0 } else { -1.0 } * diff / fact;
            let e = 2 * m - j;
            if e < k {
                continue; // falling factorial vanished
            }
            let mut c = 1.0;
            for l in 0..k {
                c *= (e - l) as f64;
            }
            acc += a * c * t.powi((e - k) as i32);
        }
        return acc;
    }
    let mut acc = 0.0;
    let mut binom = 1.0;
    for i in 0..=k {
        let win = if i == 0 {
            sigma_window(reg, t)
        } else {
            window_deriv(reg, i, t)
        };
        let pow = if j == 0 {
            if i == k {
                1.0
            } else {
                0.0
            }
        } else {
            // (d/dt)^(k−i) t^(−j)
            let l = k - i;
            let mut c = 1.0;
            for q in 0..l {
                c *= -((j + q) as f64);
            }
            c * t.powi(-((j + l) as i32))
        };
        acc += binom * win * pow;
        binom *= (k - i) as f64 / (i + 1) as f64;
    }
    acc
}
