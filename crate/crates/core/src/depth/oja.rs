use super::{EmpiricalSet, Sweep};
use crate::error::{Error, Result};
use crate::estimators::Sym2;
use crate::geom::Point2;

/// Mean area of the triangles `(x, p_i, p_j)` over all `C(m, 2)` pairs.
///
/// With the directions `d = p - x` in angular order, `|d_i × d_j|` equals
/// `d_i × d_j` whenever `d_j` follows `d_i` by less than π, so the pair sum
/// is `Σ_i d_i × W_i` with `W_i` the sum of the directions in that window.
pub fn oja_mean_area(x: Point2, points: &[Point2]) -> Result<f64> {
    let m = points.len();
    if m < 2 {
        return Err(Error::invalid(format!(
            "simplicial volume depth needs at least 2 points, got {m}"
        )));
    }
    let Sweep { dirs, .. } = Sweep::new(x, points);
    let k = dirs.len();
    let mut total = 0.0;
    let mut window = Point2::ORIGIN;
    let mut end = 0;
    for i in 0..k {
        let g = dirs[i];
        if end <= i {
            end = i + 1;
            window = Point2::ORIGIN;
        } else {
            window = window - g;
        }
        while end < i + k {
            let d = dirs[end % k];
            let c = g.cross(d);
            // equal directions add nothing but must not stop the scan
            if !(c > 0.0 || (c == 0.0 && g.dot(d) > 0.0 && end < k)) {
                break;
            }
            window = window + d;
            end += 1;
        }
        total += g.cross(window);
    }
    let pairs = (m * (m - 1) / 2) as f64;
    Ok(0.5 * total / pairs)
}

/// Oja (simplicial volume) depth `1 / (1 + A)`.
///
/// With a scatter matrix `Σ` the mean area is divided by `√det Σ`.
pub fn oja_depth(x: Point2, set: &EmpiricalSet, scatter: Option<&Sym2>) -> Result<f64> {
    let factor = match scatter {
        None => 1.0,
        Some(s) => {
            if !s.is_spd() {
                return Err(Error::invalid("scatter matrix must be positive definite"));
            }
            1.0 / s.det().sqrt()
        }
    };
    let area = oja_mean_area(x, set.points())?;
    Ok(1.0 / (1.0 + area * factor))
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
        let s = EmpiricalSet::new(vec![p(1., 0.), p(0., 1.)]).unwrap();
        assert!((oja_depth(Point2::ORIGIN, &s, None).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let line = EmpiricalSet::new(vec![p(1., 0.), p(2., 0.)]).unwrap();
        assert_eq!(oja_depth(Point2::ORIGIN, &line, None).unwrap(), 1.0);
        let four = Sym2::diag(4.0, 4.0);
        assert!((oja_depth(Point2::ORIGIN, &s, Some(&four)).unwrap() - 8.0 / 9.0).abs() < 1e-15);
        let bad = Sym2::new(1.0, 2.0, 1.0);
        assert!(oja_depth(Point2::ORIGIN, &s, Some(&bad)).is_err());
        let one = EmpiricalSet::new(vec![p(1., 0.)]).unwrap();
        assert!(oja_depth(Point2::ORIGIN, &one, None).is_err());
    }

    #[test]
    fn sweep_matches_pair_sum() {
        let pts = vec![
            p(1., 0.), p(0., 1.), p(-1., 0.), p(0., -1.), p(2., 2.), p(1., 1.),
            p(-3., 0.5), p(0., 0.), p(0.25, -4.),
        ];
        for q in [p(0., 0.), p(1., 0.), p(0.3, -0.2), p(5., 5.)] {
            let fast = oja_mean_area(q, &pts).unwrap();
            let slow = reference::oja_mean_area(q, &pts);
            assert!((fast - slow).abs() <= 1e-13 * slow.abs().max(1.0), "{q:?}: {fast} vs {slow}");
        }
    }

    #[test]
    fn larger_area_means_lower_depth() {
        let s = EmpiricalSet::new(vec![p(1., 0.), p(0., 1.), p(-1., -1.)]).unwrap();
        let t = EmpiricalSet::new(vec![p(1., 0.), p(0., 2.), p(-1., -1.)]).unwrap();
        let q = p(0.1, 0.1);
        assert!(oja_depth(q, &t, None).unwrap() < oja_depth(q, &s, None).unwrap());
    }
}
