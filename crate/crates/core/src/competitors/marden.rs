use crate::error::{Error, Result};
use crate::estimators::{spatial_signs_and_norm_ranks, standardize, tyler_shape, TylerOptions};
use crate::geom::Point2;
use crate::normal::{chi2_1_upper, phi, phi_inv};
use crate::report::{check_alpha, TestReport};

// The statistics are affine invariant only up to the error in the shape
// estimate, so the fixed point is solved well past the default tolerance.
const SHAPE_OPTS: TylerOptions = TylerOptions { tol: 1e-12, max_iter: 5000 };

/// Tyler-standardized copy of the sample, or the sample itself.
pub(crate) fn maybe_standardize(sample: &[Point2], standardize_shape: bool) -> Result<Vec<Point2>> {
    if standardize_shape {
        let shape = tyler_shape(sample, SHAPE_OPTS)?;
        standardize(sample, &shape)
    } else {
        crate::geom::ensure_finite(sample)?;
        Ok(sample.to_vec())
    }
}

/// `√(2/n) Σ U'_{A_i} U_{A_{i-1}}` with the spatial signs taken in order of
/// increasing norm.
pub fn marden_statistic(sample: &[Point2], standardize_shape: bool) -> Result<f64> {
    let x = maybe_standardize(sample, standardize_shape)?;
    let ss = spatial_signs_and_norm_ranks(&x);
    let n = ss.signs.len();
    if n < 2 {
        return Err(Error::invalid("the runs test needs at least 2 nonzero observations"));
    }
    let mut by_rank = vec![Point2::ORIGIN; n];
    for (u, &r) in ss.signs.iter().zip(&ss.ranks) {
        by_rank[r - 1] = *u;
    }
    let sum: f64 = by_rank.windows(2).map(|w| w[1].dot(w[0])).sum();
    Ok((2.0 / n as f64).sqrt() * sum)
}

/// One-sided (`T > Φ⁻¹(1-α)`) or two-sided (`T² > χ²₁,1-α`) version.
pub fn marden_test(sample: &[Point2], two_sided: bool, elliptical: bool, alpha: f64) -> Result<TestReport> {
    check_alpha(alpha)?;
    let t = marden_statistic(sample, elliptical)?;
    let (reject, p_value) = if two_sided {
        (t * t > chi2_1_upper(alpha), (2.0 * phi(-t.abs())).min(1.0))
    } else {
        (t > phi_inv(1.0 - alpha), phi(-t))
    };
    let method = match (two_sided, elliptical) {
        (false, false) => "marden1",
        (true, false) => "marden2",
        (false, true) => "marden1e",
        (true, true) => "marden2e",
    };
    Ok(TestReport {
        method: method.into(),
        n: sample.len(),
        statistic: t,
        standardized: t,
        p_value,
        alpha,
        reject,
    })
}
