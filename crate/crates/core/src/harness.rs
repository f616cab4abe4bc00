//! Monte Carlo experiments: rejection frequencies of a set of tests over a
//! grid of skewing intensities.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::competitors::{
    baringhaus_test, cassart_test, marden_test, projection_pursuit_test_at, pursuit_angle, Backend,
    BaringhausNull, DEFAULT_ANGLES,
};
use crate::datagen::{
    apply_contamination, apply_skew_with, sample_kernel_with, stream_rng, ContaminationSpec, KernelSpec,
    Mechanism, SkewSpec, Stream,
};
use crate::depth::DepthKind;
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::report::{check_alpha, TestReport};
use crate::runs::depth_runs_test;

/// Bivariate tests the harness can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestId {
    DepthRunsH,
    DepthRunsS,
    DepthRunsSv,
    DepthRunsSvmod,
    Marden1,
    Marden2,
    Marden1e,
    Marden2e,
    Bar,
    Bare,
    Cassart,
    Ppg,
    Ppr,
}

impl TestId {
    pub const ALL: [TestId; 13] = [
        TestId::DepthRunsH,
        TestId::DepthRunsS,
        TestId::DepthRunsSv,
        TestId::DepthRunsSvmod,
        TestId::Marden1,
        TestId::Marden2,
        TestId::Marden1e,
        TestId::Marden2e,
        TestId::Bar,
        TestId::Bare,
        TestId::Cassart,
        TestId::Ppg,
        TestId::Ppr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestId::DepthRunsH => "depth-runs-h",
            TestId::DepthRunsS => "depth-runs-s",
            TestId::DepthRunsSv => "depth-runs-sv",
            TestId::DepthRunsSvmod => "depth-runs-svmod",
            TestId::Marden1 => "marden1",
            TestId::Marden2 => "marden2",
            TestId::Marden1e => "marden1e",
            TestId::Marden2e => "marden2e",
            TestId::Bar => "bar",
            TestId::Bare => "bare",
            TestId::Cassart => "cassart",
            TestId::Ppg => "ppg",
            TestId::Ppr => "ppr",
        }
    }

    pub fn parse(s: &str) -> Option<TestId> {
        TestId::ALL.into_iter().find(|t| t.name() == s)
    }

    fn depth_kind(self) -> Option<DepthKind> {
        match self {
            TestId::DepthRunsH => Some(DepthKind::Halfspace),
            TestId::DepthRunsS => Some(DepthKind::Simplicial),
            TestId::DepthRunsSv => Some(DepthKind::SimplicialVolume),
            TestId::DepthRunsSvmod => Some(DepthKind::SimplicialVolumeModified),
            _ => None,
        }
    }
}

/// Skewing mechanism and the intensities to sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewGrid {
    pub mechanism: Mechanism,
    #[serde(default)]
    pub delta: [f64; 2],
    pub j_grid: Vec<u32>,
}

fn default_calibration_reps() -> usize {
    4000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kernel: KernelSpec,
    pub skew: SkewGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contamination: Option<ContaminationSpec>,
    pub n: usize,
    pub reps: usize,
    pub alpha: f64,
    pub tests: Vec<TestId>,
    pub seed: u64,
    /// Null replications used to calibrate the Baringhaus tests.
    #[serde(default = "default_calibration_reps")]
    pub calibration_reps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_angles: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::invalid("reps must be at least 1"));
        }
        check_alpha(self.alpha)?;
        if self.n < 3 {
            return Err(Error::invalid("n must be at least 3"));
        }
        if self.tests.is_empty() {
            return Err(Error::invalid("no tests configured"));
        }
        if self.skew.j_grid.is_empty() {
            return Err(Error::invalid("j_grid is empty"));
        }
        if self.tests.iter().any(|t| matches!(t, TestId::Bar | TestId::Bare)) && self.calibration_reps < 1000 {
            return Err(Error::invalid("calibration_reps must be at least 1000"));
        }
        if let Some(a) = self.n_angles {
            if a < 2 {
                return Err(Error::invalid("n_angles must be at least 2"));
            }
        }
        self.kernel.validate()?;
        if let Some(c) = &self.contamination {
            c.validate(self.n)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub test: TestId,
    pub j: u32,
    pub reps: usize,
    pub rejections: usize,
    pub frequency: f64,
    /// Replications on which the test could not be computed; these count as
    /// non-rejections.
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub test: TestId,
    pub n: usize,
    pub alpha: f64,
    pub reps: usize,
    pub seed: u64,
    pub critical_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RejectionTable {
    pub rows: Vec<TableRow>,
    #[serde(default)]
    pub calibrations: Vec<Calibration>,
}

/// Everything the tests need besides the sample.
pub struct TestContext {
    pub alpha: f64,
    pub n_angles: usize,
    pub bar: Option<BaringhausNull>,
    pub bare: Option<BaringhausNull>,
}

impl TestContext {
    /// Calibrates whichever Baringhaus variants `tests` contains.
    pub fn prepare(tests: &[TestId], n: usize, alpha: f64, calibration_reps: usize, seed: u64) -> Result<Self> {
        let calibrate = |want: TestId, elliptical: bool| -> Result<Option<BaringhausNull>> {
            if tests.contains(&want) {
                info!("calibrating {} (n = {n}, {calibration_reps} replications)", want.name());
                BaringhausNull::simulate(n, calibration_reps, seed, elliptical).map(Some)
            } else {
                Ok(None)
            }
        };
        Ok(TestContext {
            alpha,
            n_angles: DEFAULT_ANGLES,
            bar: calibrate(TestId::Bar, false)?,
            bare: calibrate(TestId::Bare, true)?,
        })
    }

    /// Runs every test on one sample. The projection pursuit direction is
    /// computed once and shared by both pursuit tests.
    pub fn run_all(&self, sample: &[Point2], tests: &[TestId]) -> Vec<Result<TestReport>> {
        let mut angle: Option<Result<f64>> = None;
        tests
            .iter()
            .map(|&t| {
                if let Some(kind) = t.depth_kind() {
                    return depth_runs_test(sample, kind, self.alpha);
                }
                match t {
                    TestId::Marden1 => marden_test(sample, false, false, self.alpha),
                    TestId::Marden2 => marden_test(sample, true, false, self.alpha),
                    TestId::Marden1e => marden_test(sample, false, true, self.alpha),
                    TestId::Marden2e => marden_test(sample, true, true, self.alpha),
                    TestId::Bar | TestId::Bare => {
                        let null = if t == TestId::Bar { &self.bar } else { &self.bare };
                        let null = null
                            .as_ref()
                            .ok_or_else(|| Error::invalid("missing Baringhaus calibration"))?;
                        baringhaus_test(sample, null, self.alpha)
                    }
                    TestId::Cassart => cassart_test(sample, self.alpha),
                    TestId::Ppg | TestId::Ppr => {
                        let a = angle
                            .get_or_insert_with(|| pursuit_angle(sample, self.n_angles))
                            .as_ref()
                            .map_err(|e| Error::invalid(e.to_string()))?;
                        let backend = if t == TestId::Ppg { Backend::Skewness } else { Backend::McWilliamsRuns };
                        projection_pursuit_test_at(sample, backend, self.alpha, *a)
                    }
                    _ => unreachable!("depth tests handled above"),
                }
            })
            .collect()
    }
}

// Per replication: for every j, one outcome per test.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Accept,
    Reject,
    Failed,
}

/// The observations of replication `rep` at intensity `j`.
pub fn replication_sample(cfg: &ExperimentConfig, rep: u64, j: u32) -> Result<Vec<Point2>> {
    let z = sample_kernel_with(&cfg.kernel, cfg.n, &mut stream_rng(cfg.seed, Stream::Kernel, rep))?;
    skewed_sample(cfg, &z, rep, j)
}

// The same kernel draw and the same uniforms are reused across the j grid.
fn skewed_sample(cfg: &ExperimentConfig, z: &[Point2], rep: u64, j: u32) -> Result<Vec<Point2>> {
    let spec = SkewSpec { mechanism: cfg.skew.mechanism, delta: cfg.skew.delta, j };
    let x = apply_skew_with(z, &spec, &mut stream_rng(cfg.seed, Stream::Skew, rep));
    match &cfg.contamination {
        Some(c) => apply_contamination(&x, c),
        None => Ok(x),
    }
}

fn run_replication(cfg: &ExperimentConfig, ctx: &TestContext, rep: u64) -> Result<Vec<Outcome>> {
    let z = sample_kernel_with(&cfg.kernel, cfg.n, &mut stream_rng(cfg.seed, Stream::Kernel, rep))?;
    let mut out = Vec::with_capacity(cfg.skew.j_grid.len() * cfg.tests.len());
    for &j in &cfg.skew.j_grid {
        let x = skewed_sample(cfg, &z, rep, j)?;
        for res in ctx.run_all(&x, &cfg.tests) {
            out.push(match res {
                Ok(r) if r.reject => Outcome::Reject,
                Ok(_) => Outcome::Accept,
                Err(e) => {
                    debug!("replication {rep}, j = {j}: {e}");
                    Outcome::Failed
                }
            });
        }
    }
    Ok(out)
}

/// Runs the experiment on the current rayon pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RejectionTable> {
    cfg.validate()?;
    let mut ctx = TestContext::prepare(&cfg.tests, cfg.n, cfg.alpha, cfg.calibration_reps, cfg.seed)?;
    ctx.n_angles = cfg.n_angles.unwrap_or(DEFAULT_ANGLES);
    let per_rep: Result<Vec<Vec<Outcome>>> = (0..cfg.reps as u64)
        .into_par_iter()
        .map(|r| run_replication(cfg, &ctx, r))
        .collect();
    let per_rep = per_rep?;

    let nt = cfg.tests.len();
    let mut rows = Vec::with_capacity(nt * cfg.skew.j_grid.len());
    for (ti, &test) in cfg.tests.iter().enumerate() {
        for (ji, &j) in cfg.skew.j_grid.iter().enumerate() {
            let mut rejections = 0;
            let mut failures = 0;
            for rep in &per_rep {
                match rep[ji * nt + ti] {
                    Outcome::Reject => rejections += 1,
                    Outcome::Failed => failures += 1,
                    Outcome::Accept => {}
                }
            }
            rows.push(TableRow {
                test,
                j,
                reps: cfg.reps,
                rejections,
                frequency: rejections as f64 / cfg.reps as f64,
                failures,
            });
        }
    }
    let mut calibrations = Vec::new();
    for (test, null) in [(TestId::Bar, &ctx.bar), (TestId::Bare, &ctx.bare)] {
        if let Some(null) = null {
            calibrations.push(Calibration {
                test,
                n: null.n,
                alpha: cfg.alpha,
                reps: null.reps(),
                seed: null.seed,
                critical_value: null.critical_value(cfg.alpha),
            });
        }
    }
    Ok(RejectionTable { rows, calibrations })
}

/// Runs the experiment on a dedicated pool of `threads` workers. The result
/// does not depend on `threads`.
pub fn run_experiment_with_threads(cfg: &ExperimentConfig, threads: usize) -> Result<RejectionTable> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start thread pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn round4(v: f64) -> f64 {
    format!("{v:.4}").parse().expect("formatted float")
}

/// Serializes a table. CSV has the columns
/// `test,j,reps,rejections,frequency,failures`; frequencies carry four
/// decimals in both formats.
pub fn emit_table(table: &RejectionTable, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("test,j,reps,rejections,frequency,failures\n");
            for r in &table.rows {
                writeln!(
                    s,
                    "{},{},{},{},{:.4},{}",
                    r.test.name(),
                    r.j,
                    r.reps,
                    r.rejections,
                    r.frequency,
                    r.failures
                )
                .expect("writing to a String");
            }
            s
        }
        Format::Json => {
            let rounded = RejectionTable {
                rows: table
                    .rows
                    .iter()
                    .map(|r| TableRow { frequency: round4(r.frequency), ..r.clone() })
                    .collect(),
                calibrations: table.calibrations.clone(),
            };
            let mut s = serde_json::to_string_pretty(&rounded).expect("table serializes");
            s.push('\n');
            s
        }
    }
}

pub fn parse_table_json(text: &str) -> Result<RejectionTable> {
    Ok(serde_json::from_str(text)?)
}

/// Frequencies keyed by `(test, j)`.
pub fn frequencies(table: &RejectionTable) -> BTreeMap<(TestId, u32), f64> {
    table.rows.iter().map(|r| ((r.test, r.j), r.frequency)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::Family;

    fn small_cfg() -> ExperimentConfig {
        ExperimentConfig {
            kernel: KernelSpec::new(Family::Normal),
            skew: SkewGrid { mechanism: Mechanism::Shift, delta: [0.0, 0.5], j_grid: vec![0, 2] },
            contamination: None,
            n: 20,
            reps: 6,
            alpha: 0.05,
            tests: vec![TestId::DepthRunsH, TestId::Ppg, TestId::Ppr, TestId::Marden2],
            seed: 42,
            calibration_reps: 1000,
            n_angles: Some(90),
        }
    }

    #[test]
    fn single_rep_gives_zero_or_one() {
        let mut cfg = small_cfg();
        cfg.reps = 1;
        let t = run_experiment(&cfg).unwrap();
        assert_eq!(t.rows.len(), 8);
        for r in &t.rows {
            assert!(r.frequency == 0.0 || r.frequency == 1.0);
        }
    }

    #[test]
    fn repeatable_and_thread_independent() {
        let cfg = small_cfg();
        let a = run_experiment_with_threads(&cfg, 1).unwrap();
        let b = run_experiment_with_threads(&cfg, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(emit_table(&a, Format::Csv), emit_table(&b, Format::Csv));
    }

    #[test]
    fn csv_layout() {
        let t = RejectionTable {
            rows: vec![TableRow {
                test: TestId::DepthRunsH,
                j: 0,
                reps: 3000,
                rejections: 128,
                frequency: 128.0 / 3000.0,
                failures: 0,
            }],
            calibrations: vec![],
        };
        let csv = emit_table(&t, Format::Csv);
        assert_eq!(csv, "test,j,reps,rejections,frequency,failures\ndepth-runs-h,0,3000,128,0.0427,0\n");
    }

    #[test]
    fn json_round_trip() {
        let t = run_experiment(&small_cfg()).unwrap();
        let back = parse_table_json(&emit_table(&t, Format::Json)).unwrap();
        assert_eq!(back.rows.len(), t.rows.len());
        for (a, b) in back.rows.iter().zip(&t.rows) {
            assert_eq!((a.test, a.j, a.reps, a.rejections, a.failures), (b.test, b.j, b.reps, b.rejections, b.failures));
            assert_eq!(a.frequency, round4(b.frequency));
        }
        assert_eq!(emit_table(&back, Format::Json), emit_table(&t, Format::Json));
    }

    #[test]
    fn config_parsing() {
        let text = r#"{
            "kernel": {"family": "cauchy", "cones": [{"axis": 0.0, "half_width": 0.2}]},
            "skew": {"mechanism": "shift", "delta": [0.0, 0.04], "j_grid": [0, 1, 2, 3]},
            "n": 100, "reps": 10, "alpha": 0.05,
            "tests": ["depth-runs-h", "bar", "ppg"], "seed": 1
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.calibration_reps, 4000);
        assert_eq!(cfg.tests[1], TestId::Bar);
        assert!(ExperimentConfig::from_json(&text.replace("\"reps\": 10", "\"reps\": 0")).is_err());
        assert!(ExperimentConfig::from_json(&text.replace("ppg", "nope")).is_err());
    }

    #[test]
    fn test_ids_round_trip() {
        for t in TestId::ALL {
            assert_eq!(TestId::parse(t.name()), Some(t));
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.name()));
        }
    }
}
