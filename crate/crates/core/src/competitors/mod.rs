//! Competing tests of symmetry: Marden-type and Baringhaus-type sphericity
//! tests, the Cassart pseudo-Gaussian test, projection pursuit tests and the
//! univariate runs test they build on.

mod baringhaus;
mod cassart;
mod marden;
mod mcwilliams;
mod pursuit;

use serde::{Deserialize, Serialize};

pub use baringhaus::{baringhaus_h, baringhaus_statistic, baringhaus_test, calibrate_baringhaus, BaringhausNull};
pub use cassart::{cassart_statistic, cassart_test};
pub use marden::{marden_statistic, marden_test};
pub use mcwilliams::{mcwilliams_runs, mcwilliams_test, skewness_test};
pub use pursuit::{
    midrange_spread, projection_pursuit_test, projection_pursuit_test_at, pursuit_angle, Backend,
    DEFAULT_ANGLES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CompetitorKind {
    Marden1Spher,
    Marden2Spher,
    Marden1Ellipt,
    Marden2Ellipt,
    BarSpher,
    BarEllipt,
    Cassart,
    PPG,
    PPR,
    McWilliamsUniv,
}
