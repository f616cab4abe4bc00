//! Data-generating processes: symmetric kernels (normal, Cauchy, Student t,
//! cone-conditioned versions of these, and a spiral), skewing mechanisms and
//! outlier contamination.
//!
//! Randomness comes from ChaCha8 streams keyed by a master seed, a purpose
//! and an index, so that replication `r` of an experiment always sees the
//! same numbers whatever the order in which replications are run.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::Sym2;
use crate::geom::Point2;
use crate::normal::{phi, t3_cdf};

/// Independent random streams used by the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Kernel = 1,
    Skew = 2,
    Calibration = 3,
}

/// The generator for `(seed, stream, index)`.
pub fn stream_rng(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((stream as u64) << 56) | (index & ((1 << 56) - 1)));
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Normal,
    Cauchy,
    /// Student t with `df` degrees of freedom.
    T { df: f64 },
    /// `S U (1 + 10θ) (cos θ, sin θ)`; ignores the shape matrix.
    Spiral,
}

/// Two-sided cone `|arctan(z₂/z₁) - axis| ≤ half_width`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cone {
    pub axis: f64,
    pub half_width: f64,
}

impl Cone {
    pub fn contains(&self, z: Point2) -> bool {
        let angle = if z.x == 0.0 {
            if z.y >= 0.0 {
                PI / 2.0
            } else {
                -PI / 2.0
            }
        } else {
            (z.y / z.x).atan()
        };
        (angle - self.axis).abs() <= self.half_width
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: Family,
    /// Shape matrix `[[a, b], [b, c]]`; the identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<[[f64; 2]; 2]>,
    /// Accepted region; empty means no conditioning.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cones: Vec<Cone>,
}

/// Maximum number of proposals per accepted point in cone sampling.
pub const CONE_PROPOSAL_CAP: u64 = 1_000_000;

impl KernelSpec {
    pub fn new(family: Family) -> Self {
        KernelSpec { family, shape: None, cones: Vec::new() }
    }

    pub fn with_shape(mut self, shape: [[f64; 2]; 2]) -> Self {
        self.shape = Some(shape);
        self
    }

    pub fn with_cones(mut self, cones: Vec<Cone>) -> Self {
        self.cones = cones;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.cholesky()?;
        for c in &self.cones {
            if !(c.half_width > 0.0 && c.half_width < PI / 2.0) || !c.axis.is_finite() {
                return Err(Error::invalid(format!("invalid cone {c:?}")));
            }
        }
        if let Family::T { df } = self.family {
            if !(df > 0.0 && df.is_finite()) {
                return Err(Error::invalid(format!("degrees of freedom must be positive, got {df}")));
            }
        }
        Ok(())
    }

    // lower Cholesky factor (l11, l21, l22)
    fn cholesky(&self) -> Result<(f64, f64, f64)> {
        let Some(m) = self.shape else {
            return Ok((1.0, 0.0, 1.0));
        };
        if m[0][1] != m[1][0] {
            return Err(Error::invalid("shape matrix must be symmetric"));
        }
        let s = Sym2::new(m[0][0], m[0][1], m[1][1]);
        if !s.is_spd() {
            return Err(Error::invalid("shape matrix must be positive definite"));
        }
        let l11 = s.xx.sqrt();
        let l21 = s.xy / l11;
        Ok((l11, l21, (s.yy - l21 * l21).sqrt()))
    }
}

fn gaussian_pair<R: Rng>(rng: &mut R) -> Point2 {
    let x: f64 = StandardNormal.sample(rng);
    let y: f64 = StandardNormal.sample(rng);
    Point2::new(x, y)
}

fn propose<R: Rng>(family: Family, l: (f64, f64, f64), rng: &mut R) -> Point2 {
    let scale = |g: Point2| Point2::new(l.0 * g.x, l.1 * g.x + l.2 * g.y);
    match family {
        Family::Normal => scale(gaussian_pair(rng)),
        Family::Cauchy => {
            let g = gaussian_pair(rng);
            let w: f64 = StandardNormal.sample(rng);
            scale(g) * (1.0 / w.abs())
        }
        Family::T { df } => {
            let g = gaussian_pair(rng);
            let v: f64 = ChiSquared::new(df).expect("validated df").sample(rng);
            scale(g) * (1.0 / (v / df).sqrt())
        }
        Family::Spiral => {
            let s = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let u: f64 = rng.random();
            let theta = PI * rng.random::<f64>();
            Point2::new(theta.cos(), theta.sin()) * (s * u * (1.0 + 10.0 * theta))
        }
    }
}

/// `n` independent draws from the kernel.
pub fn sample_kernel_with<R: Rng>(spec: &KernelSpec, n: usize, rng: &mut R) -> Result<Vec<Point2>> {
    spec.validate()?;
    let l = spec.cholesky()?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        if spec.cones.is_empty() {
            out.push(propose(spec.family, l, rng));
            continue;
        }
        let mut tries = 0u64;
        loop {
            let z = propose(spec.family, l, rng);
            if spec.cones.iter().any(|c| c.contains(z)) {
                out.push(z);
                break;
            }
            tries += 1;
            if tries >= CONE_PROPOSAL_CAP {
                return Err(Error::SamplerExhausted(tries));
            }
        }
    }
    Ok(out)
}

pub fn sample_kernel(spec: &KernelSpec, n: usize, seed: u64) -> Result<Vec<Point2>> {
    sample_kernel_with(spec, n, &mut stream_rng(seed, Stream::Kernel, 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    None,
    AzzaliniNormal,
    AzzaliniCauchy,
    Shift,
    SinhArcsinh,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewSpec {
    pub mechanism: Mechanism,
    pub delta: [f64; 2],
    pub j: u32,
}

/// Applies the skewing mechanism with intensity `j`.
///
/// The Azzalini mechanisms keep `z` when `U ≤ F(j δ'z ...)` and negate it
/// otherwise, drawing one uniform per observation; `j = 0` keeps or negates
/// each point with probability one half. Shift adds `j δ`; sinh-arcsinh maps
/// each coordinate to `sinh(asinh(z_k) + j δ_k)`.
pub fn apply_skew_with<R: Rng>(sample: &[Point2], spec: &SkewSpec, rng: &mut R) -> Vec<Point2> {
    let j = spec.j as f64;
    let delta = Point2::from(spec.delta);
    match spec.mechanism {
        Mechanism::None => sample.to_vec(),
        Mechanism::AzzaliniNormal | Mechanism::AzzaliniCauchy => sample
            .iter()
            .map(|&z| {
                let u: f64 = rng.random();
                let t = j * delta.dot(z);
                let keep = if spec.mechanism == Mechanism::AzzaliniNormal {
                    phi(t)
                } else {
                    t3_cdf(t * (3.0 / (1.0 + z.norm_sq())).sqrt())
                };
                if u <= keep {
                    z
                } else {
                    -z
                }
            })
            .collect(),
        Mechanism::Shift => sample.iter().map(|&z| z + delta * j).collect(),
        // sinh(asinh(z)) is not exact in floating point
        Mechanism::SinhArcsinh if spec.j == 0 => sample.to_vec(),
        Mechanism::SinhArcsinh => sample
            .iter()
            .map(|&z| {
                Point2::new(
                    (z.x.asinh() + j * delta.x).sinh(),
                    (z.y.asinh() + j * delta.y).sinh(),
                )
            })
            .collect(),
    }
}

pub fn apply_skew(sample: &[Point2], spec: &SkewSpec, seed: u64) -> Vec<Point2> {
    apply_skew_with(sample, spec, &mut stream_rng(seed, Stream::Skew, 0))
}

/// Overwrites the observation `from_end` places from the end (1 = last).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Replacement {
    pub from_end: usize,
    pub point: Point2,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ContaminationSpec {
    pub replacements: Vec<Replacement>,
}

impl ContaminationSpec {
    /// The last two observations become `(10, 10)` and `(11, 1)`.
    pub fn two_outliers() -> Self {
        ContaminationSpec {
            replacements: vec![
                Replacement { from_end: 2, point: Point2::new(10.0, 10.0) },
                Replacement { from_end: 1, point: Point2::new(11.0, 1.0) },
            ],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = Vec::new();
        for r in &self.replacements {
            if r.from_end == 0 || r.from_end > n {
                return Err(Error::invalid(format!(
                    "replacement position {} is outside a sample of size {n}",
                    r.from_end
                )));
            }
            if seen.contains(&r.from_end) {
                return Err(Error::invalid(format!("position {} replaced twice", r.from_end)));
            }
            if !r.point.is_finite() {
                return Err(Error::invalid("replacement point is not finite"));
            }
            seen.push(r.from_end);
        }
        Ok(())
    }
}

pub fn apply_contamination(sample: &[Point2], spec: &ContaminationSpec) -> Result<Vec<Point2>> {
    spec.validate(sample.len())?;
    let mut out = sample.to_vec();
    let n = out.len();
    for r in &spec.replacements {
        out[n - r.from_end] = r.point;
    }
    Ok(out)
}
