use crate::error::{Error, Result};
use crate::estimators::{tyler_shape, TylerOptions};
use crate::geom::Point2;
use crate::normal::{chi2_2_sf, chi2_2_upper};
use crate::report::{check_alpha, TestReport};

fn signed_square(v: f64) -> f64 {
    v * v.abs()
}

/// `8 / (3 n m₄) · ‖Σ_i d_i² S_{Û_i}‖²` with Tyler-standardized directions
/// `Û_i`, Mahalanobis-type radii `d_i` and `S_u = (u₁|u₁|, u₂|u₂|)`.
pub fn cassart_statistic(sample: &[Point2]) -> Result<f64> {
    let shape = tyler_shape(sample, TylerOptions::default())?;
    let inv = shape
        .matrix()
        .inverse()
        .ok_or_else(|| Error::Degenerate("singular shape estimate".into()))?;
    let root = shape.matrix().inv_sqrt()?;
    let mut sum = Point2::ORIGIN;
    let mut m4 = 0.0;
    let mut n = 0usize;
    for &x in sample.iter().filter(|x| !x.is_origin()) {
        let d2 = inv.quad_form(x);
        let u = root.apply(x) * (1.0 / d2.sqrt());
        sum = sum + Point2::new(signed_square(u.x), signed_square(u.y)) * d2;
        m4 += d2 * d2;
        n += 1;
    }
    let nf = n as f64;
    m4 /= nf;
    Ok(8.0 / (3.0 * nf * m4) * sum.norm_sq())
}

/// Rejects when the statistic exceeds the upper `alpha` quantile of χ²₂.
pub fn cassart_test(sample: &[Point2], alpha: f64) -> Result<TestReport> {
    check_alpha(alpha)?;
    let q = cassart_statistic(sample)?;
    Ok(TestReport {
        method: "cassart".into(),
        n: sample.len(),
        statistic: q,
        standardized: q,
        p_value: chi2_2_sf(q),
        alpha,
        reject: q > chi2_2_upper(alpha),
    })
}
