//! Robust auxiliary estimators: Tyler's shape matrix with the location fixed
//! at the origin, the inverse symmetric square root of a shape, spatial signs
//! and norm ranks.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point2;

/// A symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub const IDENTITY: Sym2 = Sym2 { xx: 1.0, xy: 0.0, yy: 1.0 };

    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Sym2 { xx, xy, yy }
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Sym2::new(a, 0.0, b)
    }

    /// `v v'`.
    pub fn outer(v: Point2) -> Self {
        Sym2::new(v.x * v.x, v.x * v.y, v.y * v.y)
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn is_finite(&self) -> bool {
        self.xx.is_finite() && self.xy.is_finite() && self.yy.is_finite()
    }

    /// Positive definiteness via the leading minors.
    pub fn is_spd(&self) -> bool {
        self.is_finite() && self.xx > 0.0 && self.det() > 0.0
    }

    pub fn scaled(&self, s: f64) -> Self {
        Sym2::new(self.xx * s, self.xy * s, self.yy * s)
    }

    pub fn add(&self, o: &Sym2) -> Self {
        Sym2::new(self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)
    }

    pub fn max_abs_diff(&self, o: &Sym2) -> f64 {
        (self.xx - o.xx)
            .abs()
            .max((self.xy - o.xy).abs())
            .max((self.yy - o.yy).abs())
    }

    pub fn inverse(&self) -> Option<Sym2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Sym2::new(self.yy / d, -self.xy / d, self.xx / d))
    }

    pub fn apply(&self, v: Point2) -> Point2 {
        Point2::new(self.xx * v.x + self.xy * v.y, self.xy * v.x + self.yy * v.y)
    }

    /// `v' M v`.
    pub fn quad_form(&self, v: Point2) -> f64 {
        self.xx * v.x * v.x + 2.0 * self.xy * v.x * v.y + self.yy * v.y * v.y
    }

    /// Product of two symmetric matrices; the result need not be symmetric,
    /// so it is returned row-major.
    pub fn matmul(&self, o: &Sym2) -> [[f64; 2]; 2] {
        [
            [self.xx * o.xx + self.xy * o.xy, self.xx * o.xy + self.xy * o.yy],
            [self.xy * o.xx + self.yy * o.xy, self.xy * o.xy + self.yy * o.yy],
        ]
    }

    /// The unique symmetric positive definite square root, from the
    /// Cayley–Hamilton identity `√M = (M + √det·I) / √(tr + 2√det)`.
    pub fn sqrt(&self) -> Result<Sym2> {
        if !self.is_spd() {
            return Err(Error::invalid("square root needs a positive definite matrix"));
        }
        let s = self.det().sqrt();
        let t = (self.trace() + 2.0 * s).sqrt();
        Ok(Sym2::new((self.xx + s) / t, self.xy / t, (self.yy + s) / t))
    }

    /// `M^{-1/2}`, symmetric positive definite.
    pub fn inv_sqrt(&self) -> Result<Sym2> {
        self.sqrt()?
            .inverse()
            .ok_or_else(|| Error::invalid("matrix is numerically singular"))
    }
}

/// A 2×2 shape matrix: symmetric positive definite with trace 2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeMatrix(Sym2);

impl ShapeMatrix {
    /// Rescales an SPD matrix to trace 2.
    pub fn normalized(m: Sym2) -> Result<Self> {
        if !m.is_spd() {
            return Err(Error::invalid("shape matrix must be positive definite"));
        }
        Ok(ShapeMatrix(m.scaled(2.0 / m.trace())))
    }

    pub fn matrix(&self) -> Sym2 {
        self.0
    }
}

/// Inverse symmetric square root of a shape matrix.
pub fn inv_sqrt(shape: &ShapeMatrix) -> Result<Sym2> {
    shape.0.inv_sqrt()
}

/// Iteration controls for [`tyler_shape`].
#[derive(Clone, Copy, Debug)]
pub struct TylerOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for TylerOptions {
    fn default() -> Self {
        TylerOptions {
            tol: 1e-9,
            max_iter: 500,
        }
    }
}

fn nonzero_observations(sample: &[Point2], what: &str) -> Vec<Point2> {
    let kept: Vec<Point2> = sample.iter().copied().filter(|p| !p.is_origin()).collect();
    let dropped = sample.len() - kept.len();
    if dropped > 0 {
        warn!("{what}: dropped {dropped} observation(s) at the origin");
    }
    kept
}

/// `(1/n) Σ x x' / (x' Σ⁻¹ x)`.
fn tyler_map(obs: &[Point2], inv: &Sym2) -> Sym2 {
    let acc = obs.iter().fold(Sym2::new(0.0, 0.0, 0.0), |acc, &x| {
        acc.add(&Sym2::outer(x).scaled(1.0 / inv.quad_form(x)))
    });
    acc.scaled(1.0 / obs.len() as f64)
}

/// Max-entry residual of the defining equation `(1/n) Σ x x'/(x'Σ⁻¹x) = Σ/2`.
pub fn tyler_residual(sample: &[Point2], shape: &ShapeMatrix) -> Result<f64> {
    let obs = nonzero_observations(sample, "tyler residual");
    if obs.is_empty() {
        return Err(Error::invalid("no nonzero observations"));
    }
    let inv = shape
        .0
        .inverse()
        .ok_or_else(|| Error::invalid("singular shape"))?;
    Ok(tyler_map(&obs, &inv).max_abs_diff(&shape.0.scaled(0.5)))
}

/// Tyler's shape estimator about the origin, normalized to trace 2.
///
/// Fixed-point iteration from the identity; each step maps `Σ` to
/// `(2/n) Σ_i x_i x_i' / (x_i' Σ⁻¹ x_i)` and rescales to trace 2. Iteration
/// stops once the largest entry change is below `tol` and the residual of the
/// defining equation is below `10·tol`.
pub fn tyler_shape(sample: &[Point2], opts: TylerOptions) -> Result<ShapeMatrix> {
    crate::geom::ensure_finite(sample)?;
    let obs = nonzero_observations(sample, "tyler shape");
    if obs.len() < 3 {
        return Err(Error::invalid(format!(
            "shape estimation needs at least 3 nonzero observations, got {}",
            obs.len()
        )));
    }
    let dir_scatter = obs.iter().fold(Sym2::new(0.0, 0.0, 0.0), |acc, &x| {
        acc.add(&Sym2::outer(x * (1.0 / x.norm())))
    });
    if dir_scatter.scaled(1.0 / obs.len() as f64).det() <= 1e-12 {
        return Err(Error::Degenerate(
            "observations lie on a single line through the origin".into(),
        ));
    }

    let mut sigma = Sym2::IDENTITY;
    let mut residual = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        let inv = sigma
            .inverse()
            .ok_or_else(|| Error::Degenerate("shape iterate became singular".into()))?;
        let next = tyler_map(&obs, &inv);
        if !next.is_spd() {
            return Err(Error::Degenerate("shape iterate lost definiteness".into()));
        }
        let next = next.scaled(2.0 / next.trace());
        let step = next.max_abs_diff(&sigma);
        sigma = next;
        if step < opts.tol {
            let inv = sigma.inverse().expect("trace-normalized SPD iterate");
            residual = tyler_map(&obs, &inv).max_abs_diff(&sigma.scaled(0.5));
            if residual < 10.0 * opts.tol {
                log::debug!("tyler converged in {iter} iterations, residual {residual:e}");
                return Ok(ShapeMatrix(sigma));
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual,
        last: sigma,
    })
}

/// `Σ̂^{-1/2} x_i` for every observation.
pub fn standardize(sample: &[Point2], shape: &ShapeMatrix) -> Result<Vec<Point2>> {
    let root = inv_sqrt(shape)?;
    Ok(sample.iter().map(|&x| root.apply(x)).collect())
}

/// Unit directions and norm ranks of the nonzero observations.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialSigns {
    /// `x_i / ‖x_i‖`.
    pub signs: Vec<Point2>,
    /// 1-based rank of `‖x_i‖`, ties by ascending index.
    pub ranks: Vec<usize>,
    /// Position of each kept observation in the input.
    pub kept: Vec<usize>,
}

pub fn spatial_signs_and_norm_ranks(sample: &[Point2]) -> SpatialSigns {
    let kept: Vec<usize> = (0..sample.len()).filter(|&i| !sample[i].is_origin()).collect();
    if kept.len() < sample.len() {
        warn!(
            "spatial signs: dropped {} observation(s) at the origin",
            sample.len() - kept.len()
        );
    }
    let norms: Vec<f64> = kept.iter().map(|&i| sample[i].norm()).collect();
    let signs = kept
        .iter()
        .zip(&norms)
        .map(|(&i, &r)| sample[i] * (1.0 / r))
        .collect();
    let mut order: Vec<usize> = (0..kept.len()).collect();
    order.sort_by(|&a, &b| norms[a].total_cmp(&norms[b]).then(a.cmp(&b)));
    let mut ranks = vec![0; kept.len()];
    for (r, &i) in order.iter().enumerate() {
        ranks[i] = r + 1;
    }
    SpatialSigns { signs, ranks, kept }
}
