//! `depthruns`: symmetry tests, depth profiles, Monte Carlo experiments and
//! Baringhaus calibration from the command line.
//!
//! Machine-readable output goes to stdout, logs to stderr. Exit codes: 0 on
//! success, 2 for usage or input errors, 3 for numerical failures.

mod input;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use depthruns::competitors::{
    baringhaus_test, calibrate_baringhaus, cassart_test, marden_test, mcwilliams_test,
    projection_pursuit_test, Backend, BaringhausNull, DEFAULT_ANGLES,
};
use depthruns::depth::{depth_profile, EmpiricalSet};
use depthruns::harness::{emit_table, run_experiment, run_experiment_with_threads, ExperimentConfig, Format};
use depthruns::ordering::symmetrize;
use depthruns::runs::depth_runs_test;
use depthruns::{DepthKind, Point2, TestReport};

use input::{parse_center, read_sample, Sample};

#[derive(Parser)]
#[command(name = "depthruns", version, about = "Depth-based runs tests of central symmetry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one test on a point file and print the report as JSON.
    Test {
        input: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Symmetry center subtracted before testing, as `x,y` (or `x`).
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        center: String,
        /// Null replications for `bar` and `bare`.
        #[arg(long, default_value_t = 4000)]
        calibration_reps: usize,
        /// Seed for `bar` and `bare` calibration.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the depth of every observation as CSV `index,x,y,depth`.
    Depth {
        input: PathBuf,
        #[arg(long, value_enum)]
        depth: DepthArg,
        /// Measure depth against the points and their reflections.
        #[arg(long)]
        symmetrize: bool,
    },
    /// Run a Monte Carlo experiment described by a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; results do not depend on this.
        #[arg(long, env = "DEPTHRUNS_THREADS")]
        threads: Option<usize>,
        /// Output format; defaults to JSON for `.json` paths and CSV otherwise.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Simulate the null critical value of the Baringhaus statistic.
    Calibrate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 4000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Calibrate the shape-standardized variant.
        #[arg(long)]
        elliptical: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
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
    Mcwilliams,
}

#[derive(Clone, Copy, ValueEnum)]
enum DepthArg {
    H,
    S,
    Sv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<depthruns::Error> for Failure {
    fn from(e: depthruns::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Test { input, method, alpha, center, calibration_reps, seed } => {
            cmd_test(&input, method, alpha, &center, calibration_reps, seed)
        }
        Command::Depth { input, depth, symmetrize } => cmd_depth(&input, depth, symmetrize),
        Command::Simulate { config, out, threads, format } => cmd_simulate(&config, &out, threads, format),
        Command::Calibrate { n, alpha, reps, seed, elliptical } => cmd_calibrate(n, alpha, reps, seed, elliptical),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn print_json(value: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
}

fn bivariate(sample: Sample) -> CliResult<Vec<Point2>> {
    match sample {
        Sample::Bivariate(v) => Ok(v),
        Sample::Univariate(_) => Err(Failure::Input("this method needs a bivariate file (header \"x,y\")".into())),
    }
}

fn cmd_test(path: &Path, method: Method, alpha: f64, center: &str, calibration_reps: usize, seed: u64) -> CliResult<()> {
    let sample = read_sample(path).map_err(Failure::Input)?;
    let center = parse_center(center).map_err(Failure::Input)?;
    let report: TestReport = if let Method::Mcwilliams = method {
        let data: Vec<f64> = match sample {
            Sample::Univariate(v) => v.into_iter().map(|x| x - center[0]).collect(),
            Sample::Bivariate(_) => {
                return Err(Failure::Input("mcwilliams needs a univariate file (header \"x\")".into()))
            }
        };
        mcwilliams_test(&data, alpha)?
    } else {
        if center.len() != 2 {
            return Err(Failure::Input("bivariate data need a center x,y".into()));
        }
        let c = Point2::new(center[0], center[1]);
        let pts: Vec<Point2> = bivariate(sample)?.into_iter().map(|p| p - c).collect();
        info!("testing {} observations", pts.len());
        match method {
            Method::DepthRunsH => depth_runs_test(&pts, DepthKind::Halfspace, alpha)?,
            Method::DepthRunsS => depth_runs_test(&pts, DepthKind::Simplicial, alpha)?,
            Method::DepthRunsSv => depth_runs_test(&pts, DepthKind::SimplicialVolume, alpha)?,
            Method::DepthRunsSvmod => depth_runs_test(&pts, DepthKind::SimplicialVolumeModified, alpha)?,
            Method::Marden1 => marden_test(&pts, false, false, alpha)?,
            Method::Marden2 => marden_test(&pts, true, false, alpha)?,
            Method::Marden1e => marden_test(&pts, false, true, alpha)?,
            Method::Marden2e => marden_test(&pts, true, true, alpha)?,
            Method::Bar | Method::Bare => {
                let elliptical = matches!(method, Method::Bare);
                let null = BaringhausNull::simulate(pts.len(), calibration_reps, seed, elliptical)?;
                baringhaus_test(&pts, &null, alpha)?
            }
            Method::Cassart => cassart_test(&pts, alpha)?,
            Method::Ppg => projection_pursuit_test(&pts, Backend::Skewness, alpha, DEFAULT_ANGLES)?,
            Method::Ppr => projection_pursuit_test(&pts, Backend::McWilliamsRuns, alpha, DEFAULT_ANGLES)?,
            Method::Mcwilliams => unreachable!(),
        }
    };
    print_json(serde_json::to_value(&report).expect("report serializes"));
    Ok(())
}

fn cmd_depth(path: &Path, depth: DepthArg, symmetrized: bool) -> CliResult<()> {
    let pts = bivariate(read_sample(path).map_err(Failure::Input)?)?;
    let kind = match depth {
        DepthArg::H => DepthKind::Halfspace,
        DepthArg::S => DepthKind::Simplicial,
        DepthArg::Sv => DepthKind::SimplicialVolume,
    };
    let set = if symmetrized { symmetrize(&pts)? } else { EmpiricalSet::new(pts.clone())? };
    let values = depth_profile(&pts, &set, kind, None)?.values;
    let mut out = String::from("index,x,y,depth\n");
    for (i, (p, d)) in pts.iter().zip(&values).enumerate() {
        out.push_str(&format!("{},{},{},{}\n", i + 1, p.x, p.y, d));
    }
    print!("{out}");
    Ok(())
}

fn cmd_simulate(config: &Path, out: &Path, threads: Option<usize>, format: Option<FormatArg>) -> CliResult<()> {
    let text = fs::read_to_string(config).map_err(|e| Failure::Input(format!("{}: {e}", config.display())))?;
    let cfg = ExperimentConfig::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", config.display())))?;
    let format = match format {
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Csv) => Format::Csv,
        None if out.extension().is_some_and(|e| e == "json") => Format::Json,
        None => Format::Csv,
    };
    info!(
        "running {} replications of {} test(s) over {} intensities",
        cfg.reps,
        cfg.tests.len(),
        cfg.skew.j_grid.len()
    );
    let table = match threads {
        Some(t) => run_experiment_with_threads(&cfg, t)?,
        None => run_experiment(&cfg)?,
    };
    fs::write(out, emit_table(&table, format)).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    info!("wrote {}", out.display());
    Ok(())
}

fn cmd_calibrate(n: usize, alpha: f64, reps: usize, seed: u64, elliptical: bool) -> CliResult<()> {
    let critical_value = if elliptical {
        depthruns::report::check_alpha(alpha)?;
        BaringhausNull::simulate(n, reps, seed, true)?.critical_value(alpha)
    } else {
        calibrate_baringhaus(n, reps, alpha, seed)?
    };
    print_json(serde_json::json!({
        "test": if elliptical { "bare" } else { "bar" },
        "n": n,
        "alpha": alpha,
        "reps": reps,
        "seed": seed,
        "critical_value": critical_value,
    }));
    Ok(())
}
