//! Standard normal and related distribution functions.

use std::f64::consts::{PI, SQRT_2};

/// Standard normal cdf `Φ`.
pub fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

fn density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

// Rational starting point for the quantile (relative error about 1e-9).
fn quantile_guess(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e1, 2.209460984245205e2, -2.759285104469687e2,
        1.383577518672690e2, -3.066479806614716e1, 2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1, 1.615858368580409e2, -1.556989798598866e2,
        6.680131188771972e1, -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3, -3.223964580411365e-1, -2.400758277161838,
        -2.549732539343734, 4.374664141464968, 2.938163982698783,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996, 3.754408661907416,
    ];
    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < 0.02425 {
        tail((-2.0 * p.ln()).sqrt())
    } else if p > 1.0 - 0.02425 {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Standard normal quantile `Φ⁻¹(p)` for `0 < p < 1`: a rational guess
/// polished by Halley steps on `Φ`.
pub fn phi_inv(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let mut x = quantile_guess(p);
    for _ in 0..2 {
        let f = density(x);
        if f < 1e-300 {
            break;
        }
        let u = (phi(x) - p) / f;
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

/// Upper `alpha` quantile of χ² with one degree of freedom.
pub fn chi2_1_upper(alpha: f64) -> f64 {
    let z = phi_inv(1.0 - alpha / 2.0);
    z * z
}

/// Upper `alpha` quantile of χ² with two degrees of freedom.
pub fn chi2_2_upper(alpha: f64) -> f64 {
    -2.0 * alpha.ln()
}

/// Survival function of χ² with two degrees of freedom.
pub fn chi2_2_sf(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        (-x / 2.0).exp()
    }
}

/// Cdf of Student's t with 3 degrees of freedom, closed form.
pub fn t3_cdf(t: f64) -> f64 {
    let s = t / 3f64.sqrt();
    0.5 + (s / (1.0 + s * s) + s.atan()) / PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((phi(0.0) - 0.5).abs() < 1e-16);
        assert!((phi(1.959963984540054) - 0.975).abs() < 1e-14);
        assert!((phi(-1.6448536269514722) - 0.05).abs() < 1e-14);
        assert!((phi_inv(0.05) + 1.6448536269514722).abs() < 1e-12);
        assert!((phi_inv(0.975) - 1.959963984540054).abs() < 1e-12);
        assert!((phi_inv(1e-10) + 6.361340902404056).abs() < 1e-9);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for i in 1..1000 {
            let p = i as f64 / 1000.0;
            assert!((phi(phi_inv(p)) - p).abs() < 1e-14, "p = {p}");
        }
    }

    #[test]
    fn chi_square_quantiles() {
        assert!((chi2_1_upper(0.05) - 3.841458820694124).abs() < 1e-10);
        assert!((chi2_2_upper(0.05) - 5.991464547107979).abs() < 1e-12);
        assert!((chi2_2_sf(chi2_2_upper(0.01)) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn t3_against_numerical_integration() {
        // density of t_3 is 6√3 / (π (3 + t²)²)
        let dens = |t: f64| 6.0 * 3f64.sqrt() / (PI * (3.0 + t * t).powi(2));
        let mut acc = 0.5;
        let h = 1e-4;
        let mut t = 0.0;
        for _ in 0..20_000 {
            acc += h / 6.0 * (dens(t) + 4.0 * dens(t + h / 2.0) + dens(t + h));
            t += h;
        }
        assert!((t3_cdf(2.0) - acc).abs() < 1e-12);
        assert!((t3_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((t3_cdf(-2.0) + t3_cdf(2.0) - 1.0).abs() < 1e-15);
    }
}
