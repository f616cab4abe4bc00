use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of one hypothesis test at level `alpha`.
///
/// `standardized` is the value compared with the null law; for tests that
/// are calibrated by simulation it equals `statistic`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub method: String,
    pub n: usize,
    pub statistic: f64,
    pub standardized: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}
