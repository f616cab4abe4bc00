use log::warn;

use crate::error::{Error, Result};
use crate::normal::{phi, phi_inv};
use crate::report::{check_alpha, TestReport};

/// Number of sign runs after ordering by absolute value, and the number of
/// nonzero observations used.
pub fn mcwilliams_runs(data: &[f64]) -> Result<(u64, usize)> {
    if let Some(v) = data.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite value {v}")));
    }
    let kept: Vec<f64> = data.iter().copied().filter(|&v| v != 0.0).collect();
    if kept.len() < data.len() {
        warn!("runs test: dropped {} zero value(s)", data.len() - kept.len());
    }
    if kept.is_empty() {
        return Err(Error::invalid("all values are zero"));
    }
    let mut idx: Vec<usize> = (0..kept.len()).collect();
    idx.sort_by(|&a, &b| kept[a].abs().total_cmp(&kept[b].abs()).then(a.cmp(&b)));
    let changes = idx
        .windows(2)
        .filter(|w| (kept[w[0]] > 0.0) != (kept[w[1]] > 0.0))
        .count();
    Ok((1 + changes as u64, kept.len()))
}

/// Univariate runs test of symmetry about zero: `z = (2R - n) / √n`,
/// rejecting for small `z`.
pub fn mcwilliams_test(data: &[f64], alpha: f64) -> Result<TestReport> {
    check_alpha(alpha)?;
    let (r, n) = mcwilliams_runs(data)?;
    if n < 2 {
        return Err(Error::invalid("the runs test needs at least 2 nonzero values"));
    }
    let z = (2.0 * r as f64 - n as f64) / (n as f64).sqrt();
    Ok(TestReport {
        method: "mcwilliams".into(),
        n,
        statistic: r as f64,
        standardized: z,
        p_value: phi(z),
        alpha,
        reject: z < phi_inv(alpha),
    })
}

/// Two-sided test of `E X³ = 0` about the known center 0, using the
/// self-normalized third moment `z = Σ x³ / √(Σ x⁶)`.
///
/// Given the moduli, the signs are fair coin flips under symmetry, so `z` is
/// never anti-conservative in heavy tails (where one extreme value makes
/// `|z|` close to 1). `statistic` is the sample skewness about zero,
/// `m₃ / m₂^{3/2}`.
pub fn skewness_test(data: &[f64], alpha: f64) -> Result<TestReport> {
    check_alpha(alpha)?;
    let n = data.len();
    if n < 3 {
        return Err(Error::invalid("the skewness test needs at least 3 values"));
    }
    if let Some(v) = data.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite value {v}")));
    }
    let (s2, s3, s6) = data.iter().fold((0.0, 0.0, 0.0), |(a, b, c), &v| {
        let v3 = v * v * v;
        (a + v * v, b + v3, c + v3 * v3)
    });
    if !(s6 > 0.0) {
        return Err(Error::invalid("all values are zero"));
    }
    let nf = n as f64;
    let b1 = (s3 / nf) / (s2 / nf).powf(1.5);
    let z = s3 / s6.sqrt();
    Ok(TestReport {
        method: "skewness".into(),
        n,
        statistic: b1,
        standardized: z,
        p_value: (2.0 * phi(-z.abs())).min(1.0),
        alpha,
        reject: z.abs() > phi_inv(1.0 - alpha / 2.0),
    })
}
