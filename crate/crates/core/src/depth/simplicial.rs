use super::{choose2, choose3, EmpiricalSet, Sweep};
use crate::error::{Error, Result};
use crate::geom::Point2;

/// Number of distinct-index triples of `points` whose closed triangle
/// contains `x`.
///
/// A triangle misses `x` exactly when its three directions from `x` fit in
/// an open arc shorter than π. Each such triple is charged to its first
/// vertex in counterclockwise order, so the misses add up to
/// `Σ C(k_i, 2)` with `k_i` the number of directions following `i` within
/// that arc. Triples with a vertex at `x` always contain it.
pub fn simplicial_count(x: Point2, points: &[Point2]) -> u64 {
    let total = choose3(points.len() as u64);
    let Sweep { dirs, .. } = Sweep::new(x, points);
    let m = dirs.len();
    let mut missing = 0u64;
    let mut end = 0;
    for i in 0..m {
        let g = dirs[i];
        end = end.max(i + 1);
        while end < i + m {
            let d = dirs[end % m];
            let c = g.cross(d);
            // equal directions count only before the wrap, so that the
            // charged vertex is the first of its run
            let inside = c > 0.0 || (c == 0.0 && g.dot(d) > 0.0 && end < m);
            if !inside {
                break;
            }
            end += 1;
        }
        missing += choose2((end - i - 1) as u64);
    }
    total - missing
}

/// Liu simplicial depth of `x` over the `C(m, 3)` distinct-index triples.
pub fn simplicial_depth(x: Point2, set: &EmpiricalSet) -> Result<f64> {
    let m = set.len() as u64;
    if m < 3 {
        return Err(Error::invalid(format!(
            "simplicial depth needs at least 3 points, got {m}"
        )));
    }
    Ok(simplicial_count(x, set.points()) as f64 / choose3(m) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::reference;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn examples() {
        let s = EmpiricalSet::new(vec![p(1., 0.), p(0., 1.), p(-1., 0.), p(0., -1.)]).unwrap();
        assert_eq!(simplicial_depth(Point2::ORIGIN, &s).unwrap(), 1.0);
        assert_eq!(simplicial_depth(p(10., 10.), &s).unwrap(), 0.0);
        let two = EmpiricalSet::new(vec![p(1., 0.), p(0., 1.)]).unwrap();
        assert!(simplicial_depth(Point2::ORIGIN, &two).is_err());
    }

    #[test]
    fn degenerate_configurations_match_reference() {
        let sets = [
            vec![p(1., 0.), p(2., 0.), p(-1., 0.), p(0., 0.), p(1., 0.)],
            vec![p(1., 1.), p(2., 2.), p(3., 3.), p(-1., -1.)],
            vec![p(0., 0.), p(0., 0.), p(0., 0.), p(1., 2.)],
            vec![p(1., 0.), p(0., 1.), p(-1., 0.), p(0., -1.), p(1., 1.), p(-1., -1.)],
        ];
        for pts in &sets {
            for q in [p(0., 0.), p(1., 0.), p(0.5, 0.5), p(-1., 0.), p(2., 1.)] {
                assert_eq!(
                    simplicial_count(q, pts),
                    reference::simplicial_count(q, pts),
                    "{q:?} in {pts:?}"
                );
            }
        }
    }
}
