//! Depth-based simplicial runs tests for central symmetry of bivariate
//! distributions about the origin, with competitor tests, data generators and
//! a Monte Carlo harness.

pub mod competitors;
pub mod datagen;
pub mod depth;
pub mod error;
pub mod estimators;
pub mod geom;
pub mod harness;
pub mod normal;
pub mod ordering;
pub mod report;
pub mod runs;

pub use depth::DepthKind;
pub use error::{Error, Result};
pub use geom::Point2;
pub use report::TestReport;
