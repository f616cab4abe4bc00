//! Anti-ranks: observations ordered from deepest to shallowest in the
//! symmetrized sample.

use serde::{Deserialize, Serialize};

use crate::depth::{depth_profile, DepthKind, EmpiricalSet};
use crate::error::{Error, Result};
use crate::estimators::{tyler_shape, TylerOptions};
use crate::geom::Point2;

/// `order[i]` is the (0-based) index of the `i`-th deepest observation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiRanks {
    pub order: Vec<usize>,
}

impl AntiRanks {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The order with 1-based indices, as printed to users.
    pub fn one_based(&self) -> Vec<usize> {
        self.order.iter().map(|i| i + 1).collect()
    }
}

/// Which distribution the depths are computed against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Reference {
    /// The 2n points `±X_i`. This is what every test uses.
    #[default]
    Symmetrized,
    /// The sample itself; for inspection only.
    Plain,
}

/// `(X_1, ..., X_n, -X_1, ..., -X_n)`.
pub fn symmetrize(sample: &[Point2]) -> Result<EmpiricalSet> {
    let mut pts = Vec::with_capacity(2 * sample.len());
    pts.extend_from_slice(sample);
    pts.extend(sample.iter().map(|&p| -p));
    EmpiricalSet::new(pts)
}

/// Sorts indices by depth, largest first; exactly equal depths keep
/// ascending index order.
pub fn anti_ranks_from_depths(depths: &[f64]) -> AntiRanks {
    let mut order: Vec<usize> = (0..depths.len()).collect();
    order.sort_by(|&a, &b| depths[b].total_cmp(&depths[a]).then(a.cmp(&b)));
    AntiRanks { order }
}

/// Depth of each observation against the chosen reference distribution.
pub fn observation_depths(sample: &[Point2], kind: DepthKind, reference: Reference) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return Err(Error::invalid("sample is empty"));
    }
    let set = match reference {
        Reference::Symmetrized => symmetrize(sample)?,
        Reference::Plain => EmpiricalSet::new(sample.to_vec())?,
    };
    let scatter = match kind {
        DepthKind::SimplicialVolumeModified => {
            Some(tyler_shape(sample, TylerOptions::default())?.matrix())
        }
        _ => None,
    };
    let query: Vec<Point2> = match reference {
        // Against a set closed under negation, x and -x have the same depth.
        // Evaluating both at one representative makes that hold bit for bit
        // for the volume depths too, whose sums would otherwise round
        // differently.
        Reference::Symmetrized => sample
            .iter()
            .map(|&p| if p.y < 0.0 || (p.y == 0.0 && p.x < 0.0) { -p } else { p })
            .collect(),
        Reference::Plain => sample.to_vec(),
    };
    Ok(depth_profile(&query, &set, kind, scatter.as_ref())?.values)
}

/// Anti-ranks against the symmetrized sample.
pub fn anti_ranks(sample: &[Point2], kind: DepthKind) -> Result<AntiRanks> {
    anti_ranks_with(sample, kind, Reference::Symmetrized)
}

pub fn anti_ranks_with(sample: &[Point2], kind: DepthKind, reference: Reference) -> Result<AntiRanks> {
    let depths = observation_depths(sample, kind, reference)?;
    Ok(anti_ranks_from_depths(&depths))
}
