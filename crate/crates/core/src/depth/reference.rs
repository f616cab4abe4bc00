//! Brute-force depth computations, used to cross-check the sweeps.

use crate::geom::{simplex_contains_origin, Point2};

/// Quadratic-time halfspace count: every direction `p - x` is tried as the
/// start of a half-open arc of length π.
pub fn halfspace_count(x: Point2, points: &[Point2]) -> usize {
    let dirs: Vec<Point2> = points.iter().map(|&p| p - x).filter(|d| !d.is_origin()).collect();
    let zeros = points.len() - dirs.len();
    let best = dirs
        .iter()
        .map(|&g| {
            dirs.iter()
                .filter(|&&d| {
                    let c = g.cross(d);
                    c > 0.0 || (c == 0.0 && g.dot(d) > 0.0)
                })
                .count()
        })
        .max()
        .unwrap_or(0);
    zeros + dirs.len() - best
}

/// Cubic-time count of distinct-index triples whose closed triangle
/// contains `x`.
pub fn simplicial_count(x: Point2, points: &[Point2]) -> u64 {
    let d: Vec<Point2> = points.iter().map(|&p| p - x).collect();
    let m = d.len();
    let mut count = 0;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                if simplex_contains_origin(d[i], d[j], d[k]) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Quadratic-time mean triangle area over all pairs.
pub fn oja_mean_area(x: Point2, points: &[Point2]) -> f64 {
    let m = points.len();
    let mut total = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            total += (points[i] - x).cross(points[j] - x).abs();
        }
    }
    0.5 * total / (m * (m - 1) / 2) as f64
}
