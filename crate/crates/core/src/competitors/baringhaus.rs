use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::marden::maybe_standardize;
use crate::datagen::{stream_rng, Stream};
use crate::error::{Error, Result};
use crate::estimators::spatial_signs_and_norm_ranks;
use crate::geom::Point2;
use crate::report::{check_alpha, TestReport};

/// `h(t) = (t - 1/4) / (17/8 - t)`.
pub fn baringhaus_h(t: f64) -> f64 {
    (t - 0.25) / (17.0 / 8.0 - t)
}

/// `(1/n) Σ_{i,j} h(U_i'U_j) min(1 - (R_i-1)/n, 1 - (R_j-1)/n)`, summed
/// over all ordered pairs including `i = j`.
pub fn baringhaus_statistic(sample: &[Point2], standardize_shape: bool) -> Result<f64> {
    let x = maybe_standardize(sample, standardize_shape)?;
    let ss = spatial_signs_and_norm_ranks(&x);
    let n = ss.signs.len();
    if n == 0 {
        return Err(Error::invalid("no nonzero observations"));
    }
    let nf = n as f64;
    let w: Vec<f64> = ss.ranks.iter().map(|&r| 1.0 - (r - 1) as f64 / nf).collect();
    let mut total = 0.0;
    for i in 0..n {
        total += baringhaus_h(1.0) * w[i];
        for j in i + 1..n {
            total += 2.0 * baringhaus_h(ss.signs[i].dot(ss.signs[j])) * w[i].min(w[j]);
        }
    }
    Ok(total / nf)
}

/// Simulated null distribution of the statistic under the spherical
/// standard normal law, kept sorted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaringhausNull {
    pub n: usize,
    pub elliptical: bool,
    pub seed: u64,
    draws: Vec<f64>,
}

impl BaringhausNull {
    /// `reps` statistics on independent samples; replication `r` draws from
    /// its own stream, so the result does not depend on the thread count.
    pub fn simulate(n: usize, reps: usize, seed: u64, elliptical: bool) -> Result<Self> {
        if reps == 0 || n == 0 {
            return Err(Error::invalid("calibration needs n >= 1 and reps >= 1"));
        }
        let draws: Result<Vec<f64>> = (0..reps as u64)
            .into_par_iter()
            .map(|r| {
                let mut rng = stream_rng(seed, Stream::Calibration, r);
                let s: Vec<Point2> = (0..n)
                    .map(|_| {
                        let x: f64 = StandardNormal.sample(&mut rng);
                        let y: f64 = StandardNormal.sample(&mut rng);
                        Point2::new(x, y)
                    })
                    .collect();
                baringhaus_statistic(&s, elliptical)
            })
            .collect();
        let mut draws = draws?;
        draws.sort_by(f64::total_cmp);
        Ok(BaringhausNull { n, elliptical, seed, draws })
    }

    pub fn reps(&self) -> usize {
        self.draws.len()
    }

    /// Empirical `1 - alpha` quantile: the `⌈(1-α)N⌉`-th smallest draw.
    pub fn critical_value(&self, alpha: f64) -> f64 {
        let n = self.draws.len();
        let k = ((1.0 - alpha) * n as f64).ceil() as usize;
        self.draws[k.clamp(1, n) - 1]
    }

    /// Fraction of null draws at least as large as `b`.
    pub fn p_value(&self, b: f64) -> f64 {
        let below = self.draws.partition_point(|&d| d < b);
        (self.draws.len() - below) as f64 / self.draws.len() as f64
    }
}

/// Monte Carlo `1 - alpha` critical value of the spherical statistic.
pub fn calibrate_baringhaus(n: usize, reps: usize, alpha: f64, seed: u64) -> Result<f64> {
    check_alpha(alpha)?;
    if reps < 1000 {
        return Err(Error::invalid(format!("calibration needs at least 1000 replications, got {reps}")));
    }
    Ok(BaringhausNull::simulate(n, reps, seed, false)?.critical_value(alpha))
}

/// Rejects for large values, beyond the simulated critical value.
pub fn baringhaus_test(sample: &[Point2], null: &BaringhausNull, alpha: f64) -> Result<TestReport> {
    check_alpha(alpha)?;
    if null.n != sample.len() {
        return Err(Error::invalid(format!(
            "null distribution simulated for n = {}, sample has n = {}",
            null.n,
            sample.len()
        )));
    }
    let b = baringhaus_statistic(sample, null.elliptical)?;
    Ok(TestReport {
        method: if null.elliptical { "bare" } else { "bar" }.into(),
        n: sample.len(),
        statistic: b,
        standardized: b,
        p_value: null.p_value(b),
        alpha,
        reject: b > null.critical_value(alpha),
    })
}
