use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::mcwilliams::{mcwilliams_test, skewness_test};
use crate::error::{Error, Result};
use crate::geom::{ensure_finite, Point2};
use crate::report::{check_alpha, TestReport};

pub const DEFAULT_ANGLES: usize = 720;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Backend {
    /// Self-normalized third moment about zero, two-sided normal approximation.
    Skewness,
    /// Univariate runs test on the projections.
    McWilliamsRuns,
}

/// Spread of the symmetrized midranges `((u'X)_(i) + (u'X)_(n-i+1)) / 2` of
/// the projections on `u`: zero for a sample symmetric about the origin.
pub fn midrange_spread(sample: &[Point2], u: Point2, buf: &mut Vec<f64>) -> f64 {
    buf.clear();
    buf.extend(sample.iter().map(|x| u.dot(*x)));
    buf.sort_unstable_by(f64::total_cmp);
    let n = buf.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n.div_ceil(2) {
        let m = 0.5 * (buf[i] + buf[n - 1 - i]);
        lo = lo.min(m);
        hi = hi.max(m);
    }
    hi - lo
}

/// Grid minimizer of [`midrange_spread`] over the angles `π t / n_angles`;
/// ties go to the smallest angle.
pub fn pursuit_angle(sample: &[Point2], n_angles: usize) -> Result<f64> {
    if n_angles < 2 {
        return Err(Error::invalid("need at least 2 grid angles"));
    }
    if sample.is_empty() {
        return Err(Error::invalid("sample is empty"));
    }
    ensure_finite(sample)?;
    let mut buf = Vec::with_capacity(sample.len());
    let mut best = (f64::INFINITY, 0.0);
    for t in 0..n_angles {
        let theta = PI * t as f64 / n_angles as f64;
        let g = midrange_spread(sample, Point2::new(theta.cos(), theta.sin()), &mut buf);
        if g < best.0 {
            best = (g, theta);
        }
    }
    Ok(best.1)
}

fn backend_test(data: &[f64], backend: Backend, level: f64) -> Result<TestReport> {
    match backend {
        Backend::Skewness => skewness_test(data, level),
        Backend::McWilliamsRuns => mcwilliams_test(data, level),
    }
}

/// Projection pursuit test along a given direction angle and its normal,
/// each at level `alpha / 2`.
///
/// `statistic` and `standardized` hold the backend z-values along the
/// direction and its normal; the p-value is the Bonferroni bound.
pub fn projection_pursuit_test_at(
    sample: &[Point2],
    backend: Backend,
    alpha: f64,
    angle: f64,
) -> Result<TestReport> {
    check_alpha(alpha)?;
    if sample.len() < 3 {
        return Err(Error::invalid("projection pursuit needs at least 3 observations"));
    }
    let u = Point2::new(angle.cos(), angle.sin());
    let v = Point2::new(-u.y, u.x);
    let along: Vec<f64> = sample.iter().map(|x| u.dot(*x)).collect();
    let across: Vec<f64> = sample.iter().map(|x| v.dot(*x)).collect();
    let a = backend_test(&along, backend, alpha / 2.0)?;
    let b = backend_test(&across, backend, alpha / 2.0)?;
    Ok(TestReport {
        method: match backend {
            Backend::Skewness => "ppg",
            Backend::McWilliamsRuns => "ppr",
        }
        .into(),
        n: sample.len(),
        statistic: a.standardized,
        standardized: b.standardized,
        p_value: (2.0 * a.p_value.min(b.p_value)).min(1.0),
        alpha,
        reject: a.reject || b.reject,
    })
}

pub fn projection_pursuit_test(
    sample: &[Point2],
    backend: Backend,
    alpha: f64,
    n_angles: usize,
) -> Result<TestReport> {
    let angle = pursuit_angle(sample, n_angles)?;
    projection_pursuit_test_at(sample, backend, alpha, angle)
}
