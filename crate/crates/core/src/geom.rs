//! Planar and k-dimensional geometric predicates.
//!
//! Everything here works with plain `f64` arithmetic and exact sign tests on
//! the computed values. Simplices are closed: a point on an edge or vertex is
//! contained.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn is_origin(self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product. Swapping the arguments negates
    /// the result exactly.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(v: [f64; 2]) -> Self {
        Point2::new(v[0], v[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// Rejects samples containing NaN or infinite coordinates.
pub fn ensure_finite(points: &[Point2]) -> Result<()> {
    match points.iter().position(|p| !p.is_finite()) {
        Some(i) => Err(Error::invalid(format!("observation {} is not finite", i + 1))),
        None => Ok(()),
    }
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Orientation of the triple: +1 counterclockwise, -1 clockwise, 0 collinear.
pub fn orient(a: Point2, b: Point2, c: Point2) -> i8 {
    sign((b - a).cross(c - a))
}

/// Whether the origin lies in the closed triangle with vertices `a`, `b`, `c`.
///
/// The decision only uses the signs of `a×b`, `b×c` and `c×a`, each of which
/// flips exactly under vertex swaps, so the answer does not depend on the
/// vertex order. Collinear triangles reduce to the segment hull of the points.
pub fn simplex_contains_origin(a: Point2, b: Point2, c: Point2) -> bool {
    let s = [sign(a.cross(b)), sign(b.cross(c)), sign(c.cross(a))];
    let pos = s.contains(&1);
    let neg = s.contains(&-1);
    if pos && neg {
        return false;
    }
    if pos || neg {
        return true;
    }
    // All three points sit on one line through the origin.
    let lo_x = a.x.min(b.x).min(c.x);
    let hi_x = a.x.max(b.x).max(c.x);
    let lo_y = a.y.min(b.y).min(c.y);
    let hi_y = a.y.max(b.y).max(c.y);
    lo_x <= 0.0 && hi_x >= 0.0 && lo_y <= 0.0 && hi_y >= 0.0
}

/// A vector of three signs, each +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignVector3(pub [i8; 3]);

impl SignVector3 {
    pub fn negated(self) -> Self {
        SignVector3(self.0.map(|s| -s))
    }

    /// All eight sign vectors, `(+,+,+)` first.
    pub fn all() -> [SignVector3; 8] {
        let mut out = [SignVector3([1, 1, 1]); 8];
        for (bits, slot) in out.iter_mut().enumerate() {
            let pick = |k: usize| if bits >> (2 - k) & 1 == 0 { 1 } else { -1 };
            *slot = SignVector3([pick(0), pick(1), pick(2)]);
        }
        out
    }
}

/// Enumerates the sign vectors `s` for which the origin lies in
/// `S(s1·x, s2·y, s3·z)`.
///
/// When no line through the origin holds two of the points the result has
/// exactly two entries, one the negation of the other. Degenerate inputs are
/// still enumerated; interpreting the result is left to the caller.
pub fn covering_sign_vectors(x: Point2, y: Point2, z: Point2) -> Vec<SignVector3> {
    SignVector3::all()
        .into_iter()
        .filter(|s| {
            let [a, b, c] = s.0;
            simplex_contains_origin(x * a as f64, y * b as f64, z * c as f64)
        })
        .collect()
}

/// A point in `R^k`, `k >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointK(Vec<f64>);

impl PointK {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("a point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("point coordinates must be finite"));
        }
        Ok(PointK(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn negated(&self) -> PointK {
        PointK(self.0.iter().map(|c| -c).collect())
    }
}

impl From<Point2> for PointK {
    fn from(p: Point2) -> Self {
        PointK(vec![p.x, p.y])
    }
}

/// Whether the origin lies in the closed simplex spanned by `k + 1` points of
/// `R^k`.
///
/// The barycentric system `Σ λ_i v_i = 0, Σ λ_i = 1` is solved directly; if it
/// is singular the vertices are affinely dependent and the hull is the union
/// of the hulls of its facets, which are searched recursively.
pub fn simplex_contains_origin_k(vertices: &[PointK]) -> Result<bool> {
    let k = vertices
        .first()
        .map(PointK::dim)
        .ok_or_else(|| Error::invalid("simplex needs at least one vertex"))?;
    if vertices.len() != k + 1 {
        return Err(Error::invalid(format!(
            "a simplex in dimension {k} needs {} vertices, got {}",
            k + 1,
            vertices.len()
        )));
    }
    if let Some(bad) = vertices.iter().find(|v| v.dim() != k) {
        return Err(Error::invalid(format!(
            "vertex of dimension {} in a {k}-dimensional simplex",
            bad.dim()
        )));
    }
    let scale = vertices
        .iter()
        .flat_map(|v| v.coords().iter())
        .fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Ok(true);
    }
    let pts: Vec<&[f64]> = vertices.iter().map(PointK::coords).collect();
    Ok(hull_contains_origin(&pts, scale))
}

// Relative pivot size below which a system is treated as singular.
const SINGULAR_RTOL: f64 = 1e-12;
// Relative distance at which the origin counts as lying on a lower-dimensional face.
const FACE_RTOL: f64 = 1e-10;

fn hull_contains_origin(pts: &[&[f64]], scale: f64) -> bool {
    let k = pts[0].len();
    let m = pts.len();
    if m == 1 {
        return pts[0].iter().all(|c| c.abs() <= FACE_RTOL * scale);
    }
    let weights = if m == k + 1 {
        barycentric_full(pts, scale)
    } else {
        barycentric_face(pts, scale)
    };
    match weights {
        Barycentric::Weights(w) => w.iter().all(|&l| l >= 0.0),
        Barycentric::OffHull => false,
        Barycentric::Singular => (0..m).any(|skip| {
            let sub: Vec<&[f64]> = pts
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, p)| *p)
                .collect();
            hull_contains_origin(&sub, scale)
        }),
    }
}

enum Barycentric {
    Weights(Vec<f64>),
    // the origin is not in the affine hull of the face
    OffHull,
    // the points are affinely dependent
    Singular,
}

// Full-dimensional case: square system with a row of ones appended.
fn barycentric_full(pts: &[&[f64]], scale: f64) -> Barycentric {
    let k = pts[0].len();
    let n = k + 1;
    let mut a = vec![vec![0.0; n + 1]; n];
    for (col, p) in pts.iter().enumerate() {
        for (row, &v) in p.iter().enumerate() {
            a[row][col] = v / scale;
        }
        a[k][col] = 1.0;
    }
    a[k][n] = 1.0;
    match solve_in_place(a, SINGULAR_RTOL) {
        Some(w) => Barycentric::Weights(w),
        None => Barycentric::Singular,
    }
}

// Lower-dimensional face: least squares in the affine hull, accepted only if
// the origin actually lies in that hull.
fn barycentric_face(pts: &[&[f64]], scale: f64) -> Barycentric {
    let k = pts[0].len();
    let m = pts.len();
    let base: Vec<f64> = pts[0].iter().map(|v| v / scale).collect();
    let diffs: Vec<Vec<f64>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(&base).map(|(v, b)| v / scale - b).collect())
        .collect();
    let r = m - 1;
    let mut g = vec![vec![0.0; r + 1]; r];
    for i in 0..r {
        for j in 0..r {
            g[i][j] = dot(&diffs[i], &diffs[j]);
        }
        g[i][r] = -dot(&diffs[i], &base);
    }
    let Some(mu) = solve_in_place(g, SINGULAR_RTOL) else {
        return Barycentric::Singular;
    };
    let mut resid = base.clone();
    for (d, &w) in diffs.iter().zip(&mu) {
        for t in 0..k {
            resid[t] += w * d[t];
        }
    }
    if dot(&resid, &resid).sqrt() > FACE_RTOL {
        return Barycentric::OffHull;
    }
    let mut weights = Vec::with_capacity(m);
    weights.push(1.0 - mu.iter().sum::<f64>());
    weights.extend(mu.iter().map(|&w| if w.abs() <= FACE_RTOL { 0.0 } else { w }));
    if weights[0].abs() <= FACE_RTOL {
        weights[0] = 0.0;
    }
    Barycentric::Weights(weights)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// Gaussian elimination with partial pivoting on an augmented n×(n+1) matrix.
fn solve_in_place(mut a: Vec<Vec<f64>>, rtol: f64) -> Option<Vec<f64>> {
    let n = a.len();
    let norm = a
        .iter()
        .flat_map(|row| row[..n].iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    if norm == 0.0 {
        return None;
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col].abs() <= rtol * norm {
            return None;
        }
        a.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for c in col..=n {
                    a[row][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (a[row][n] - s) / a[row][row];
    }
    Some(x)
}
