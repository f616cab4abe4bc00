use super::{EmpiricalSet, Sweep};
use crate::geom::Point2;

// `d` lies in the half-open arc [angle(g), angle(g) + π).
#[inline]
fn in_forward_arc(g: Point2, d: Point2) -> bool {
    let c = g.cross(d);
    c > 0.0 || (c == 0.0 && g.dot(d) > 0.0)
}

/// Smallest number of points of `points` in a closed halfplane whose
/// boundary passes through `x`.
///
/// The complement of a closed halfplane is an open one, so the answer is
/// `m` minus the largest number of directions that fit in an open arc of
/// length π. Such an arc can always be rotated to start exactly at one of
/// the directions, which the sweep below tries in turn.
pub fn halfspace_count(x: Point2, points: &[Point2]) -> usize {
    let Sweep { dirs, zeros } = Sweep::new(x, points);
    let m = dirs.len();
    if m == 0 {
        return zeros;
    }
    let mut best = 0;
    let mut end = 0;
    for i in 0..m {
        // only the first member of a run of equal directions starts a window
        if i > 0 && dirs[i - 1].cross(dirs[i]) == 0.0 && dirs[i - 1].dot(dirs[i]) > 0.0 {
            continue;
        }
        let g = dirs[i];
        end = end.max(i + 1);
        while end < i + m && in_forward_arc(g, dirs[end % m]) {
            end += 1;
        }
        best = best.max(end - i);
    }
    zeros + m - best
}

/// Tukey halfspace depth of `x` in the empirical distribution on `set`.
pub fn halfspace_depth(x: Point2, set: &EmpiricalSet) -> f64 {
    halfspace_count(x, set.points()) as f64 / set.len() as f64
}
