//! The simplicial runs statistic and the depth-based runs test.
//!
//! Observations are ranked from deepest to shallowest in the symmetrized
//! sample; a run ends whenever three consecutively ranked observations span
//! a closed triangle containing the origin. Under central symmetry the
//! standardized count `(4R - n - 2) / √(11n/3)` is asymptotically standard
//! normal, and small values of `R` indicate asymmetry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::depth::DepthKind;
use crate::error::{Error, Result};
use crate::geom::{simplex_contains_origin, simplex_contains_origin_k, Point2, PointK};
use crate::normal::{phi, phi_inv};
use crate::ordering::{anti_ranks, AntiRanks};
use crate::report::{check_alpha, TestReport};

/// Asymptotic variance of `(4R - n - 2) / √n` under the null.
pub const NULL_VARIANCE: f64 = 11.0 / 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunsStatistic {
    /// `R`: one plus the number of origin-containing consecutive triangles.
    pub count: u64,
    pub n: usize,
    pub kind: DepthKind,
    /// Set when `n < 3`, where no triangle can be formed and `R = 1`.
    pub degenerate: bool,
}

/// Indicator `i` (for `i = 0..n-2`) says whether the observations ranked
/// `i`, `i+1`, `i+2` span a triangle that contains the origin.
pub fn runs_indicators(sample: &[Point2], order: &AntiRanks) -> Vec<bool> {
    order
        .order
        .windows(3)
        .map(|w| simplex_contains_origin(sample[w[2]], sample[w[1]], sample[w[0]]))
        .collect()
}

/// `R` for a given ordering.
pub fn runs_count(sample: &[Point2], order: &AntiRanks) -> u64 {
    1 + runs_indicators(sample, order).iter().filter(|&&b| b).count() as u64
}

pub fn runs_statistic(sample: &[Point2], kind: DepthKind) -> Result<RunsStatistic> {
    let n = sample.len();
    if n < 3 {
        crate::geom::ensure_finite(sample)?;
        return Ok(RunsStatistic { count: 1, n, kind, degenerate: true });
    }
    let order = anti_ranks(sample, kind)?;
    Ok(RunsStatistic {
        count: runs_count(sample, &order),
        n,
        kind,
        degenerate: false,
    })
}

/// `1 + Σ ω_i I_i`, one weight per indicator, from the first triangle (the
/// three deepest observations) to the last.
pub fn weighted_runs_statistic(sample: &[Point2], kind: DepthKind, weights: &[f64]) -> Result<f64> {
    let terms = sample.len().saturating_sub(2);
    if weights.len() != terms {
        return Err(Error::invalid(format!(
            "expected {terms} weights for n = {}, got {}",
            sample.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(Error::invalid(format!("weights must be positive and finite, got {w}")));
    }
    if terms == 0 {
        crate::geom::ensure_finite(sample)?;
        return Ok(1.0);
    }
    let order = anti_ranks(sample, kind)?;
    let ind = runs_indicators(sample, &order);
    Ok(1.0 + ind.iter().zip(weights).filter(|(b, _)| **b).map(|(_, w)| w).sum::<f64>())
}

/// `(4R - n - 2) / √(11n/3)`.
pub fn standardize_count(count: u64, n: usize) -> f64 {
    let n = n as f64;
    (4.0 * count as f64 - n - 2.0) / (NULL_VARIANCE * n).sqrt()
}

pub fn standardize(rs: &RunsStatistic) -> f64 {
    standardize_count(rs.count, rs.n)
}

pub fn method_name(kind: DepthKind) -> &'static str {
    match kind {
        DepthKind::Halfspace => "depth-runs-h",
        DepthKind::Simplicial => "depth-runs-s",
        DepthKind::SimplicialVolume => "depth-runs-sv",
        DepthKind::SimplicialVolumeModified => "depth-runs-svmod",
    }
}

/// One-sided test: rejects when `z < Φ⁻¹(alpha)`, with `p = Φ(z)`.
pub fn depth_runs_test(sample: &[Point2], kind: DepthKind, alpha: f64) -> Result<TestReport> {
    check_alpha(alpha)?;
    if sample.len() < 3 {
        return Err(Error::invalid(format!(
            "the runs test needs at least 3 observations, got {}",
            sample.len()
        )));
    }
    let rs = runs_statistic(sample, kind)?;
    Ok(report_from_count(&rs, alpha))
}

pub fn report_from_count(rs: &RunsStatistic, alpha: f64) -> TestReport {
    let z = standardize(rs);
    TestReport {
        method: method_name(rs.kind).to_string(),
        n: rs.n,
        statistic: rs.count as f64,
        standardized: z,
        p_value: phi(z),
        alpha,
        reject: z < phi_inv(alpha),
    }
}

/// How observations are ranked for the k-variate statistic.
#[derive(Clone, Debug, PartialEq)]
pub enum KOrdering {
    /// Symmetrized depth in the plane (k = 2), or absolute value (k = 1).
    Depth(DepthKind),
    /// A caller-supplied permutation, deepest first.
    Supplied(Vec<usize>),
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::invalid(format!("ordering has length {}, expected {n}", order.len())));
    }
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::invalid("ordering is not a permutation"));
        }
    }
    Ok(())
}

fn k_order(sample: &[PointK], k: usize, ordering: &KOrdering) -> Result<Vec<usize>> {
    match ordering {
        KOrdering::Supplied(order) => {
            check_permutation(order, sample.len())?;
            Ok(order.clone())
        }
        KOrdering::Depth(kind) => match k {
            1 => {
                let mut idx: Vec<usize> = (0..sample.len()).collect();
                idx.sort_by(|&a, &b| {
                    sample[a].coords()[0]
                        .abs()
                        .total_cmp(&sample[b].coords()[0].abs())
                        .then(a.cmp(&b))
                });
                Ok(idx)
            }
            2 => {
                let pts: Vec<Point2> = sample
                    .iter()
                    .map(|p| Point2::new(p.coords()[0], p.coords()[1]))
                    .collect();
                Ok(anti_ranks(&pts, *kind)?.order)
            }
            _ => Err(Error::invalid(format!(
                "no depth ordering is available in dimension {k}; supply an ordering"
            ))),
        },
    }
}

/// `1 + Σ_{i>k} I[0 ∈ S(X_{A_i}, ..., X_{A_{i-k}})]` for points in `R^k`.
pub fn runs_statistic_k(sample: &[PointK], k: usize, ordering: &KOrdering) -> Result<u64> {
    if k == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if let Some(p) = sample.iter().find(|p| p.dim() != k) {
        return Err(Error::invalid(format!("point of dimension {} in a {k}-variate sample", p.dim())));
    }
    let order = k_order(sample, k, ordering)?;
    let mut r = 1;
    for w in order.windows(k + 1) {
        let verts: Vec<PointK> = w.iter().rev().map(|&i| sample[i].clone()).collect();
        if simplex_contains_origin_k(&verts)? {
            r += 1;
        }
    }
    Ok(r)
}

/// Sign-flip calibration of the k-variate statistic.
///
/// The ordering must not depend on the signs of the observations (as is the
/// case for any ordering by symmetrized depth), so that flipping signs gives
/// draws from the conditional null law. Small counts reject; the p-value is
/// `(1 + #{R* ≤ R}) / (reps + 1)`.
pub fn sign_flip_test_k(
    sample: &[PointK],
    k: usize,
    order: &[usize],
    alpha: f64,
    reps: usize,
    seed: u64,
) -> Result<TestReport> {
    check_alpha(alpha)?;
    if reps == 0 {
        return Err(Error::invalid("at least one resample is needed"));
    }
    let supplied = KOrdering::Supplied(order.to_vec());
    let observed = runs_statistic_k(sample, k, &supplied)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flipped = sample.to_vec();
    let mut at_most = 0usize;
    for _ in 0..reps {
        for (f, p) in flipped.iter_mut().zip(sample) {
            *f = if rng.random::<bool>() { p.negated() } else { p.clone() };
        }
        if runs_statistic_k(&flipped, k, &supplied)? <= observed {
            at_most += 1;
        }
    }
    let p_value = (1 + at_most) as f64 / (reps + 1) as f64;
    Ok(TestReport {
        method: format!("sign-flip-runs-k{k}"),
        n: sample.len(),
        statistic: observed as f64,
        standardized: observed as f64,
        p_value,
        alpha,
        reject: p_value <= alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn pk(c: &[f64]) -> PointK {
        PointK::new(c.to_vec()).unwrap()
    }

    #[test]
    fn forced_order_example() {
        let s = [p(1., 0.), p(-1., 1.), p(-1., -1.), p(0., 1.)];
        let order = AntiRanks { order: vec![0, 1, 2, 3] };
        assert_eq!(runs_indicators(&s, &order), vec![true, false]);
        assert_eq!(runs_count(&s, &order), 2);
    }

    #[test]
    fn upper_halfplane_gives_one_run() {
        let s = [p(1., 1.), p(-2., 0.5), p(0.3, 2.), p(-0.1, 0.2), p(4., 0.01)];
        for kind in [DepthKind::Halfspace, DepthKind::Simplicial, DepthKind::SimplicialVolume] {
            assert_eq!(runs_statistic(&s, kind).unwrap().count, 1);
        }
    }

    #[test]
    fn three_points_around_origin() {
        let s = [p(1., 0.), p(-1., 1.), p(-1., -1.)];
        let rs = runs_statistic(&s, DepthKind::Halfspace).unwrap();
        assert_eq!(rs.count, 2);
        assert!(!rs.degenerate);
        let small = runs_statistic(&s[..2], DepthKind::Halfspace).unwrap();
        assert_eq!(small.count, 1);
        assert!(small.degenerate);
    }

    #[test]
    fn standardization_arithmetic() {
        assert!((standardize_count(20, 100) + 1.148_912_529_307_606).abs() < 1e-12);
        assert!((standardize_count(1, 3) + 0.301_511_344_577_763_6).abs() < 1e-12);
        assert!((standardize_count(10, 100) + 3.237_844_400_775_98).abs() < 1e-12);
    }

    #[test]
    fn weighted_reductions() {
        let s = [p(1., 0.), p(-1., 1.), p(-1., -1.), p(0.3, 0.2), p(2., -3.)];
        let r = runs_statistic(&s, DepthKind::Halfspace).unwrap().count as f64;
        let ones = weighted_runs_statistic(&s, DepthKind::Halfspace, &[1.0; 3]).unwrap();
        assert_eq!(ones, r);
        let halves = weighted_runs_statistic(&s, DepthKind::Halfspace, &[0.5; 3]).unwrap();
        assert_eq!(halves, 1.0 + 0.5 * (r - 1.0));
        assert!(weighted_runs_statistic(&s, DepthKind::Halfspace, &[1.0; 2]).is_err());
        assert!(weighted_runs_statistic(&s, DepthKind::Halfspace, &[1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn univariate_construction() {
        let s: Vec<PointK> = [1., -2., 3.].iter().map(|&v| pk(&[v])).collect();
        assert_eq!(runs_statistic_k(&s, 1, &KOrdering::Depth(DepthKind::Halfspace)).unwrap(), 3);
        let s: Vec<PointK> = [1., 2., 3.].iter().map(|&v| pk(&[v])).collect();
        assert_eq!(runs_statistic_k(&s, 1, &KOrdering::Depth(DepthKind::Halfspace)).unwrap(), 1);
    }

    #[test]
    fn planar_k_matches_runs_statistic() {
        let s = [p(1., 0.2), p(-1., 1.), p(-1., -1.3), p(0.3, 0.2), p(2., -3.), p(-0.7, 0.1)];
        let sk: Vec<PointK> = s.iter().map(|&q| PointK::from(q)).collect();
        for kind in [DepthKind::Halfspace, DepthKind::Simplicial] {
            let want = runs_statistic(&s, kind).unwrap().count;
            assert_eq!(runs_statistic_k(&sk, 2, &KOrdering::Depth(kind)).unwrap(), want);
        }
    }

    #[test]
    fn higher_dimensions_need_an_ordering() {
        let s: Vec<PointK> = (0..5).map(|i| pk(&[i as f64, 1.0, -1.0])).collect();
        assert!(runs_statistic_k(&s, 3, &KOrdering::Depth(DepthKind::Halfspace)).is_err());
        let r = runs_statistic_k(&s, 3, &KOrdering::Supplied(vec![4, 3, 2, 1, 0])).unwrap();
        assert!(r >= 1);
        assert!(runs_statistic_k(&s, 3, &KOrdering::Supplied(vec![0, 0, 1, 2, 3])).is_err());
    }

    #[test]
    fn sign_flip_test_is_reproducible() {
        let s: Vec<PointK> = (0..12)
            .map(|i| {
                let t = i as f64;
                pk(&[t.sin() + 0.1, (1.3 * t).cos(), (0.7 * t).sin() - 0.2])
            })
            .collect();
        let order: Vec<usize> = (0..12).collect();
        let a = sign_flip_test_k(&s, 3, &order, 0.05, 199, 7).unwrap();
        let b = sign_flip_test_k(&s, 3, &order, 0.05, 199, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.p_value > 0.0 && a.p_value <= 1.0);
    }
}
