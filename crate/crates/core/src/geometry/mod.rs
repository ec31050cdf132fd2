//! Feasible sets: linear maximization oracles, membership and the
//! uniform-convexity catalog.

pub mod catalog;
pub mod lmo;

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, ensure, Error, Result};
use crate::norms::{lp_norm, norm_equivalence, singular_values, Norm, NormTag};

pub use catalog::{levelset_uc_params, nominal_unit_ball_params, unit_ball_params, UcParams};
pub use lmo::{lmo_l1, lmo_lp, lmo_schatten, TiePolicy};

/// A compact convex body accessed through its oracles.
///
/// All implementations are immutable after construction.
pub trait FeasibleSet: Debug + Send + Sync {
    fn dim(&self) -> usize;

    /// The norm the set's uniform-convexity parameters are stated against.
    fn norm(&self) -> Norm;

    /// `argmax_{v ∈ C} ⟨φ, v⟩`.
    fn lmo(&self, phi: &[f64]) -> Result<Vec<f64>>;

    /// Violation of the defining inequality; non-positive inside the set.
    fn excess(&self, x: &[f64]) -> f64;

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.excess(x) <= tol
    }

    fn uc_params(&self) -> Result<UcParams>;

    fn descriptor(&self) -> SetDescriptor;

    /// An interior reference point of the set.
    fn center(&self) -> Vec<f64>;

    /// The boundary point on the ray from [`center`](Self::center) along `dir`.
    fn boundary_along(&self, dir: &[f64]) -> Vec<f64>;

    /// `max_{x ∈ C} ‖x‖₂`.
    fn euclidean_extent(&self) -> f64;

    /// Unit (in [`norm`](Self::norm)) direction that pushes `x` out of the
    /// set fastest, when known in closed form.
    fn outward_direction(&self, x: &[f64]) -> Option<Vec<f64>> {
        let c = self.center();
        let d: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a - b).collect();
        let n = self.norm().eval(&d);
        (n > 0.0).then(|| d.iter().map(|v| v / n).collect())
    }
}

fn scale_to(dir: &[f64], current: f64, target: f64) -> Vec<f64> {
    dir.iter().map(|v| v * (target / current)).collect()
}

/// `ℓp` ball of radius `r` centred at the origin, `1 < p < ∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpBall {
    p: f64,
    radius: f64,
    dim: usize,
}

impl LpBall {
    pub fn new(p: f64, radius: f64, dim: usize) -> Result<Self> {
        ensure(p > 1.0 && p.is_finite(), || {
            format!("lp ball needs 1 < p < inf, got {p} (use the l1 family for p = 1)")
        })?;
        ensure(radius > 0.0 && radius.is_finite(), || format!("radius must be positive, got {radius}"))?;
        ensure(dim > 0, || "dimension must be positive".into())?;
        Ok(Self { p, radius, dim })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl FeasibleSet for LpBall {
    fn dim(&self) -> usize {
        self.dim
    }

    fn norm(&self) -> Norm {
        Norm::Lp { p: self.p }
    }

    fn lmo(&self, phi: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, phi.len())?;
        lmo_lp(self.p, self.radius, phi)
    }

    fn excess(&self, x: &[f64]) -> f64 {
        lp_norm(x, self.p) - self.radius
    }

    fn uc_params(&self) -> Result<UcParams> {
        let (a, q) = unit_ball_params(self.p);
        Ok(UcParams::new(a, q, NormTag::Lp(self.p))?.scaled_to_radius(self.radius))
    }

    fn descriptor(&self) -> SetDescriptor {
        SetDescriptor::Lp { p: self.p, radius: self.radius, dim: self.dim }
    }

    fn center(&self) -> Vec<f64> {
        vec![0.0; self.dim]
    }

    fn boundary_along(&self, dir: &[f64]) -> Vec<f64> {
        scale_to(dir, lp_norm(dir, self.p), self.radius)
    }

    fn euclidean_extent(&self) -> f64 {
        self.radius * norm_equivalence(self.p, 2.0, self.dim)
    }
}

/// `ℓ1` ball of radius `r`; a polytope, not uniformly convex.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Ball {
    radius: f64,
    dim: usize,
    tie: TiePolicy,
}

impl L1Ball {
    pub fn new(radius: f64, dim: usize) -> Result<Self> {
        Self::with_tie_policy(radius, dim, TiePolicy::default())
    }

    pub fn with_tie_policy(radius: f64, dim: usize, tie: TiePolicy) -> Result<Self> {
        ensure(radius > 0.0 && radius.is_finite(), || format!("radius must be positive, got {radius}"))?;
        ensure(dim > 0, || "dimension must be positive".into())?;
        Ok(Self { radius, dim, tie })
    }
}

impl FeasibleSet for L1Ball {
    fn dim(&self) -> usize {
        self.dim
    }

    fn norm(&self) -> Norm {
        Norm::Lp { p: 1.0 }
    }

    fn lmo(&self, phi: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, phi.len())?;
        lmo_l1(self.radius, phi, self.tie)
    }

    fn excess(&self, x: &[f64]) -> f64 {
        lp_norm(x, 1.0) - self.radius
    }

    fn uc_params(&self) -> Result<UcParams> {
        Err(Error::NotUniformlyConvex("l1 ball".into()))
    }

    fn descriptor(&self) -> SetDescriptor {
        SetDescriptor::L1 { radius: self.radius, dim: self.dim, tie: self.tie }
    }

    fn center(&self) -> Vec<f64> {
        vec![0.0; self.dim]
    }

    fn boundary_along(&self, dir: &[f64]) -> Vec<f64> {
        scale_to(dir, lp_norm(dir, 1.0), self.radius)
    }

    fn euclidean_extent(&self) -> f64 {
        self.radius
    }
}

/// Schatten-p ball of radius `r` over `rows × cols` matrices (column-major).
#[derive(Debug, Clone, PartialEq)]
pub struct SchattenBall {
    p: f64,
    rows: usize,
    cols: usize,
    radius: f64,
}

impl SchattenBall {
    pub fn new(p: f64, rows: usize, cols: usize, radius: f64) -> Result<Self> {
        ensure(p > 1.0 && p.is_finite(), || format!("schatten ball needs 1 < p < inf, got {p}"))?;
        ensure(radius > 0.0 && radius.is_finite(), || format!("radius must be positive, got {radius}"))?;
        ensure(rows > 0 && cols > 0, || "matrix shape must be positive".into())?;
        Ok(Self { p, rows, cols, radius })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

impl FeasibleSet for SchattenBall {
    fn dim(&self) -> usize {
        self.rows * self.cols
    }

    fn norm(&self) -> Norm {
        Norm::Schatten { p: self.p, rows: self.rows, cols: self.cols }
    }

    fn lmo(&self, phi: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), phi.len())?;
        lmo_schatten(self.p, self.radius, phi, self.rows, self.cols)
    }

    fn excess(&self, x: &[f64]) -> f64 {
        lp_norm(&singular_values(x, self.rows, self.cols), self.p) - self.radius
    }

    fn uc_params(&self) -> Result<UcParams> {
        let (a, q) = unit_ball_params(self.p);
        Ok(UcParams::new(a, q, NormTag::Schatten(self.p))?.scaled_to_radius(self.radius))
    }

    fn descriptor(&self) -> SetDescriptor {
        SetDescriptor::Schatten { p: self.p, rows: self.rows, cols: self.cols, radius: self.radius }
    }

    fn center(&self) -> Vec<f64> {
        vec![0.0; self.dim()]
    }

    fn boundary_along(&self, dir: &[f64]) -> Vec<f64> {
        scale_to(dir, self.norm().eval(dir), self.radius)
    }

    fn euclidean_extent(&self) -> f64 {
        // Frobenius norm is the Schatten-2 norm.
        self.radius * norm_equivalence(self.p, 2.0, self.rows.min(self.cols))
    }
}

/// `f(x) = Σ_i a_i (x_i − c_i)²` with positive weights `a`: non-negative,
/// `2·max a`-smooth and `(2·min a, 2)`-uniformly convex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSquares {
    pub weights: Vec<f64>,
    pub center: Vec<f64>,
}

impl WeightedSquares {
    pub fn value(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.center).zip(&self.weights).map(|((xi, ci), a)| a * (xi - ci) * (xi - ci)).sum()
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.center).zip(&self.weights).map(|((xi, ci), a)| 2.0 * a * (xi - ci)).collect()
    }

    pub fn smoothness(&self) -> f64 {
        2.0 * self.weights.iter().fold(0.0_f64, |m, a| m.max(*a))
    }

    pub fn convexity_modulus(&self) -> f64 {
        2.0 * self.weights.iter().fold(f64::INFINITY, |m, a| m.min(*a))
    }
}

/// Sublevel set `{x : f(x) ≤ w}` of a [`WeightedSquares`] function.
///
/// Only membership and uniform-convexity parameters are provided; there is
/// no linear oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSet {
    f: WeightedSquares,
    w: f64,
}

impl LevelSet {
    pub fn new(f: WeightedSquares, w: f64) -> Result<Self> {
        ensure(w > 0.0 && w.is_finite(), || format!("level must be positive, got {w}"))?;
        ensure(!f.weights.is_empty(), || "level-set function needs at least one coordinate".into())?;
        ensure(f.weights.len() == f.center.len(), || "weights and center lengths differ".into())?;
        ensure(f.weights.iter().all(|a| *a > 0.0 && a.is_finite()), || "weights must be positive".into())?;
        Ok(Self { f, w })
    }

    /// `{x : ‖x‖₂² ≤ w}` in dimension `dim`.
    pub fn squared_norm(dim: usize, w: f64) -> Result<Self> {
        Self::new(WeightedSquares { weights: vec![1.0; dim], center: vec![0.0; dim] }, w)
    }

    pub fn function(&self) -> &WeightedSquares {
        &self.f
    }

    pub fn level(&self) -> f64 {
        self.w
    }
}

impl FeasibleSet for LevelSet {
    fn dim(&self) -> usize {
        self.f.weights.len()
    }

    fn norm(&self) -> Norm {
        Norm::L2
    }

    fn lmo(&self, _phi: &[f64]) -> Result<Vec<f64>> {
        Err(Error::Unsupported("linear oracle over level sets"))
    }

    fn excess(&self, x: &[f64]) -> f64 {
        self.f.value(x) - self.w
    }

    fn uc_params(&self) -> Result<UcParams> {
        levelset_uc_params(self.f.convexity_modulus(), 2.0, self.f.smoothness(), self.w)
    }

    fn descriptor(&self) -> SetDescriptor {
        SetDescriptor::Levelset {
            dim: self.dim(),
            w: self.w,
            weights: Some(self.f.weights.clone()),
            center: Some(self.f.center.clone()),
        }
    }

    fn center(&self) -> Vec<f64> {
        self.f.center.clone()
    }

    fn boundary_along(&self, dir: &[f64]) -> Vec<f64> {
        let q: f64 = dir.iter().zip(&self.f.weights).map(|(u, a)| a * u * u).sum();
        let t = (self.w / q).sqrt();
        self.f.center.iter().zip(dir).map(|(c, u)| c + t * u).collect()
    }

    fn euclidean_extent(&self) -> f64 {
        let amin = self.f.weights.iter().fold(f64::INFINITY, |m, a| m.min(*a));
        lp_norm(&self.f.center, 2.0) + (self.w / amin).sqrt()
    }

    fn outward_direction(&self, x: &[f64]) -> Option<Vec<f64>> {
        let g = self.f.gradient(x);
        let n = lp_norm(&g, 2.0);
        (n > 0.0).then(|| g.iter().map(|v| v / n).collect())
    }
}

/// JSON-facing description of a feasible set.
///
/// ```json
/// {"family": "lp", "p": 3, "radius": 5, "dim": 10}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SetDescriptor {
    Lp {
        p: f64,
        radius: f64,
        dim: usize,
    },
    Schatten {
        p: f64,
        rows: usize,
        cols: usize,
        radius: f64,
    },
    L1 {
        radius: f64,
        dim: usize,
        #[serde(default)]
        tie: TiePolicy,
    },
    Levelset {
        dim: usize,
        w: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
}

impl SetDescriptor {
    pub fn build(&self) -> Result<SetVariant> {
        SetVariant::try_from(self.clone())
    }
}

/// Closed sum of the supported set families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SetDescriptor", into = "SetDescriptor")]
pub enum SetVariant {
    Lp(LpBall),
    Schatten(SchattenBall),
    L1(L1Ball),
    Level(LevelSet),
}

impl TryFrom<SetDescriptor> for SetVariant {
    type Error = Error;

    fn try_from(d: SetDescriptor) -> Result<Self> {
        Ok(match d {
            SetDescriptor::Lp { p, radius, dim } => SetVariant::Lp(LpBall::new(p, radius, dim)?),
            SetDescriptor::Schatten { p, rows, cols, radius } => {
                SetVariant::Schatten(SchattenBall::new(p, rows, cols, radius)?)
            }
            SetDescriptor::L1 { radius, dim, tie } => SetVariant::L1(L1Ball::with_tie_policy(radius, dim, tie)?),
            SetDescriptor::Levelset { dim, w, weights, center } => {
                let weights = weights.unwrap_or_else(|| vec![1.0; dim]);
                let center = center.unwrap_or_else(|| vec![0.0; dim]);
                ensure(weights.len() == dim && center.len() == dim, || {
                    format!("level-set weights/center must have length {dim}")
                })?;
                SetVariant::Level(LevelSet::new(WeightedSquares { weights, center }, w)?)
            }
        })
    }
}

impl From<SetVariant> for SetDescriptor {
    fn from(v: SetVariant) -> Self {
        v.descriptor()
    }
}

impl SetVariant {
    fn inner(&self) -> &dyn FeasibleSet {
        match self {
            SetVariant::Lp(s) => s,
            SetVariant::Schatten(s) => s,
            SetVariant::L1(s) => s,
            SetVariant::Level(s) => s,
        }
    }

    /// Short human-readable label, e.g. `lp(p=3,r=5,d=10)`.
    pub fn label(&self) -> String {
        match self.descriptor() {
            SetDescriptor::Lp { p, radius, dim } => format!("lp(p={p},r={radius},d={dim})"),
            SetDescriptor::Schatten { p, rows, cols, radius } => format!("schatten(p={p},r={radius},{rows}x{cols})"),
            SetDescriptor::L1 { radius, dim, .. } => format!("l1(r={radius},d={dim})"),
            SetDescriptor::Levelset { dim, w, .. } => format!("levelset(w={w},d={dim})"),
        }
    }
}

impl FeasibleSet for SetVariant {
    fn dim(&self) -> usize {
        self.inner().dim()
    }
    fn norm(&self) -> Norm {
        self.inner().norm()
    }
    fn lmo(&self, phi: &[f64]) -> Result<Vec<f64>> {
        self.inner().lmo(phi)
    }
    fn excess(&self, x: &[f64]) -> f64 {
        self.inner().excess(x)
    }
    fn uc_params(&self) -> Result<UcParams> {
        self.inner().uc_params()
    }
    fn descriptor(&self) -> SetDescriptor {
        self.inner().descriptor()
    }
    fn center(&self) -> Vec<f64> {
        self.inner().center()
    }
    fn boundary_along(&self, dir: &[f64]) -> Vec<f64> {
        self.inner().boundary_along(dir)
    }
    fn euclidean_extent(&self) -> f64 {
        self.inner().euclidean_extent()
    }
    fn outward_direction(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.inner().outward_direction(x)
    }
}

/// Membership with tolerance: `excess(x) ≤ tol`.
pub fn membership(set: &dyn FeasibleSet, x: &[f64], tol: f64) -> bool {
    set.contains(x, tol)
}

/// Uniform-convexity parameters of a set variant.
pub fn uc_params(set: &SetVariant) -> Result<UcParams> {
    set.uc_params()
}
