//! Depth functions on finite point sets.
//!
//! Every depth is taken with respect to an [`EmpiricalSet`], i.e. the
//! empirical distribution that puts mass `1/m` on each listed point.
//! Halfspace and simplicial depth are integer counts over a fixed
//! denominator; both have an `O(m log m)` angular sweep and a brute-force
//! counterpart in [`reference`].

mod halfspace;
mod oja;
pub mod reference;
mod simplicial;

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::Sym2;
use crate::geom::{ensure_finite, Point2};

pub use halfspace::{halfspace_count, halfspace_depth};
pub use oja::{oja_depth, oja_mean_area};
pub use simplicial::{simplicial_count, simplicial_depth};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DepthKind {
    Halfspace,
    Simplicial,
    SimplicialVolume,
    SimplicialVolumeModified,
}

/// Support of an empirical distribution. Duplicates are kept and count with
/// their multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSet {
    points: Vec<Point2>,
}

impl EmpiricalSet {
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("empirical set must not be empty"));
        }
        ensure_finite(&points)?;
        Ok(EmpiricalSet { points })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DepthValues {
    pub values: Vec<f64>,
    pub kind: DepthKind,
}

/// Depth of one point. The modified simplicial-volume depth needs `scatter`.
pub fn depth(x: Point2, set: &EmpiricalSet, kind: DepthKind, scatter: Option<&Sym2>) -> Result<f64> {
    match kind {
        DepthKind::Halfspace => Ok(halfspace_depth(x, set)),
        DepthKind::Simplicial => simplicial_depth(x, set),
        DepthKind::SimplicialVolume => oja_depth(x, set, None),
        DepthKind::SimplicialVolumeModified => {
            let s = scatter.ok_or_else(|| {
                Error::invalid("modified simplicial volume depth needs a scatter matrix")
            })?;
            oja_depth(x, set, Some(s))
        }
    }
}

// below this many queries the thread hand-off costs more than it saves
const PAR_MIN_QUERIES: usize = 64;

/// Depth of every query point, in query order.
pub fn depth_profile(
    query: &[Point2],
    set: &EmpiricalSet,
    kind: DepthKind,
    scatter: Option<&Sym2>,
) -> Result<DepthValues> {
    ensure_finite(query)?;
    let values: Result<Vec<f64>> = if query.len() >= PAR_MIN_QUERIES {
        query
            .par_iter()
            .map(|&x| depth(x, set, kind, scatter))
            .collect()
    } else {
        query.iter().map(|&x| depth(x, set, kind, scatter)).collect()
    };
    Ok(DepthValues {
        values: values?,
        kind,
    })
}

/// Nonzero directions `p - x` in counterclockwise order starting at the
/// positive x-axis, plus the number of points equal to `x`.
pub(crate) struct Sweep {
    pub dirs: Vec<Point2>,
    pub zeros: usize,
}

fn half(d: Point2) -> u8 {
    if d.y > 0.0 || (d.y == 0.0 && d.x > 0.0) {
        0
    } else {
        1
    }
}

// Monotone in the angle within [0, 4); cheaper than atan2 and exact for
// directions with equal coordinate ratios.
fn pseudo_angle(d: Point2) -> f64 {
    let r = d.x / (d.x.abs() + d.y.abs());
    if half(d) == 0 {
        1.0 - r
    } else {
        3.0 + r
    }
}

/// Exact angular comparison: half-plane first, then the sign of the cross
/// product.
pub(crate) fn angle_cmp(a: Point2, b: Point2) -> Ordering {
    match half(a).cmp(&half(b)) {
        Ordering::Equal => {
            let c = a.cross(b);
            if c > 0.0 {
                Ordering::Less
            } else if c < 0.0 {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
        o => o,
    }
}

impl Sweep {
    pub fn new(x: Point2, points: &[Point2]) -> Self {
        // keys are non-negative, so their bit patterns sort like the values
        let mut keyed: Vec<(u64, Point2)> = Vec::with_capacity(points.len());
        let mut zeros = 0;
        for &p in points {
            let d = p - x;
            if d.is_origin() {
                zeros += 1;
            } else {
                keyed.push((pseudo_angle(d).to_bits(), d));
            }
        }
        keyed.sort_unstable_by_key(|k| k.0);
        let mut dirs: Vec<Point2> = keyed.into_iter().map(|(_, d)| d).collect();
        // The key can misorder nearly parallel directions by a rounding
        // error; one insertion pass makes the order agree with the exact
        // predicate that the window scans rely on.
        for i in 1..dirs.len() {
            let mut j = i;
            while j > 0 && angle_cmp(dirs[j], dirs[j - 1]) == Ordering::Less {
                dirs.swap(j, j - 1);
                j -= 1;
            }
        }
        Sweep { dirs, zeros }
    }
}

/// `C(m, 3)` as an exact integer.
pub(crate) fn choose3(m: u64) -> u64 {
    if m < 3 {
        0
    } else {
        m * (m - 1) * (m - 2) / 6
    }
}

pub(crate) fn choose2(m: u64) -> u64 {
    if m < 2 {
        0
    } else {
        m * (m - 1) / 2
    }
}
