//! Smooth convex objectives and their structural constants.

use std::fmt::Debug;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, ensure, Result};
use crate::geometry::FeasibleSet;
use crate::norms::{dot, dual_lower_from_euclidean, lp_norm};
use crate::sampling;

/// Value/gradient oracle plus the constants the rate bounds need.
///
/// Smoothness and strong convexity are stated against the Euclidean norm;
/// see [`crate::norms::smoothness_in_norm`] for conversions.
pub trait SmoothObjective: Debug + Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    /// Euclidean smoothness constant `L`.
    fn smoothness(&self) -> f64;

    /// Euclidean strong-convexity modulus, if any.
    fn strong_convexity(&self) -> Option<f64> {
        None
    }

    fn heb(&self) -> Option<HebDescriptor> {
        self.strong_convexity().and_then(|mu| heb_from_uniform_convexity(mu, 2.0).ok())
    }

    /// Lower bound on `‖∇f(x)‖_*` over `set` (dual of the set's norm), when
    /// known analytically.
    fn grad_floor(&self, _set: &dyn FeasibleSet) -> Option<f64> {
        None
    }

    /// Analytic minimizer of `γ ↦ f(x + γd)` over `[0, 1]`, when available.
    fn exact_step(&self, _x: &[f64], _d: &[f64]) -> Option<f64> {
        None
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::Value::Null
    }
}

/// Hölderian error bound `‖x − x*‖ ≤ μ·h(x)^θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HebDescriptor {
    pub mu: f64,
    pub theta: f64,
}

impl HebDescriptor {
    pub fn new(mu: f64, theta: f64) -> Result<Self> {
        ensure(mu > 0.0 && mu.is_finite(), || format!("HEB mu must be positive, got {mu}"))?;
        ensure(theta > 0.0 && theta <= 0.5, || format!("HEB theta must lie in (0, 1/2], got {theta}"))?;
        Ok(Self { mu, theta })
    }
}

/// Error bound implied by `(μ, r)`-uniform convexity of the objective:
/// `((2/μ)^{1/r}, 1/r)`.
pub fn heb_from_uniform_convexity(mu_f: f64, r: f64) -> Result<HebDescriptor> {
    ensure(mu_f > 0.0 && mu_f.is_finite(), || format!("mu must be positive, got {mu_f}"))?;
    ensure(r >= 2.0 && r.is_finite(), || format!("exponent must be >= 2, got {r}"))?;
    HebDescriptor::new((2.0 / mu_f).powf(1.0 / r), 1.0 / r)
}

#[derive(Debug, Clone, PartialEq)]
enum Curvature {
    Diagonal(Vec<f64>),
    Dense(DMatrix<f64>),
}

/// `f(x) = ½(x − x0)ᵀA(x − x0)` with `A` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective {
    a: Curvature,
    x0: Vec<f64>,
    lambda_min: f64,
    lambda_max: f64,
    descriptor: Option<ObjectiveDescriptor>,
}

impl QuadraticObjective {
    pub fn diagonal(a: Vec<f64>, x0: Vec<f64>) -> Result<Self> {
        check_dim(a.len(), x0.len())?;
        ensure(!a.is_empty(), || "empty quadratic".into())?;
        ensure(a.iter().all(|v| *v > 0.0 && v.is_finite()), || "diagonal curvature must be positive".into())?;
        let lambda_min = a.iter().copied().fold(f64::INFINITY, f64::min);
        let lambda_max = a.iter().copied().fold(0.0, f64::max);
        Ok(Self { a: Curvature::Diagonal(a), x0, lambda_min, lambda_max, descriptor: None })
    }

    /// `½‖x − x0‖₂²`.
    pub fn isotropic(x0: Vec<f64>) -> Self {
        Self::diagonal(vec![1.0; x0.len()], x0).expect("identity curvature is valid")
    }

    pub fn dense(a: DMatrix<f64>, x0: Vec<f64>) -> Result<Self> {
        ensure(a.is_square(), || "curvature matrix must be square".into())?;
        check_dim(a.nrows(), x0.len())?;
        ensure((&a - a.transpose()).amax() <= 1e-12 * a.amax().max(1.0), || {
            "curvature matrix must be symmetric".into()
        })?;
        let eig = a.clone().symmetric_eigen();
        let lambda_min = eig.eigenvalues.min();
        let lambda_max = eig.eigenvalues.max();
        ensure(lambda_min > 0.0, || {
            format!("curvature matrix must be positive definite (min eigenvalue {lambda_min})")
        })?;
        Ok(Self { a: Curvature::Dense(a), x0, lambda_min, lambda_max, descriptor: None })
    }

    pub fn minimizer(&self) -> &[f64] {
        &self.x0
    }

    pub fn eigen_range(&self) -> (f64, f64) {
        (self.lambda_min, self.lambda_max)
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        match &self.a {
            Curvature::Diagonal(a) => a.iter().zip(v).map(|(ai, vi)| ai * vi).collect(),
            Curvature::Dense(m) => (m * DVector::from_column_slice(v)).as_slice().to_vec(),
        }
    }

    fn with_descriptor(mut self, d: ObjectiveDescriptor) -> Self {
        self.descriptor = Some(d);
        self
    }
}

impl SmoothObjective for QuadraticObjective {
    fn dim(&self) -> usize {
        self.x0.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let r: Vec<f64> = x.iter().zip(&self.x0).map(|(a, b)| a - b).collect();
        0.5 * dot(&r, &self.apply(&r))
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r: Vec<f64> = x.iter().zip(&self.x0).map(|(a, b)| a - b).collect();
        self.apply(&r)
    }

    fn smoothness(&self) -> f64 {
        self.lambda_max
    }

    fn strong_convexity(&self) -> Option<f64> {
        Some(self.lambda_min)
    }

    fn grad_floor(&self, set: &dyn FeasibleSet) -> Option<f64> {
        Some(grad_floor_quadratic(self, set))
    }

    fn exact_step(&self, x: &[f64], d: &[f64]) -> Option<f64> {
        if d.iter().all(|v| *v == 0.0) {
            return Some(0.0);
        }
        let slope = -dot(&self.gradient(x), d);
        let curv = dot(d, &self.apply(d));
        Some(if curv <= 0.0 {
            if slope > 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            (slope / curv).clamp(0.0, 1.0)
        })
    }

    fn describe(&self) -> serde_json::Value {
        match &self.descriptor {
            Some(d) => serde_json::to_value(d).unwrap_or_default(),
            None => serde_json::json!({ "family": "quadratic", "dim": self.dim() }),
        }
    }
}

/// Lower bound on `‖∇f(x)‖_*` over `set` for a quadratic.
///
/// `‖A(x − x0)‖₂ ≥ λ_min (‖x0‖₂ − max_{x∈C}‖x‖₂)`, converted to the dual of
/// the set's norm. Zero whenever `x0` may be feasible.
pub fn grad_floor_quadratic(f: &QuadraticObjective, set: &dyn FeasibleSet) -> f64 {
    let slack = (lp_norm(&f.x0, 2.0) - set.euclidean_extent()).max(0.0);
    dual_lower_from_euclidean(f.lambda_min * slack, &set.norm(), set.dim())
}

/// Where the unconstrained minimizer `x0` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum X0Direction {
    Named(NamedDirection),
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedDirection {
    /// `Σ e_i`.
    Ones,
    /// `e₁`.
    E1,
    /// A seeded Gaussian direction.
    Random,
}

fn default_cond() -> f64 {
    1.0
}

fn default_scale_norm() -> f64 {
    2.0
}

/// JSON description of a quadratic test problem.
///
/// `A = diag(logspace(0, log10(cond)))` under a seeded shuffle, and `x0` is
/// `x0_direction` rescaled so that `‖x0‖_{x0_norm_p} = x0_scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveDescriptor {
    pub family: ObjectiveFamily,
    pub dim: usize,
    #[serde(default = "default_cond")]
    pub cond: f64,
    pub x0_direction: X0Direction,
    pub x0_scale: f64,
    #[serde(default = "default_scale_norm")]
    pub x0_norm_p: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveFamily {
    Quadratic,
}

impl ObjectiveDescriptor {
    pub fn build(&self) -> Result<QuadraticObjective> {
        let d = self.dim;
        ensure(d > 0, || "dimension must be positive".into())?;
        ensure(self.cond >= 1.0 && self.cond.is_finite(), || {
            format!("condition number must be >= 1, got {}", self.cond)
        })?;
        ensure(self.x0_scale >= 0.0 && self.x0_scale.is_finite(), || "x0_scale must be non-negative".into())?;
        ensure(self.x0_norm_p >= 1.0, || "x0_norm_p must be >= 1".into())?;
        let mut rng = sampling::rng(self.seed);
        let mut a: Vec<f64> = if d == 1 {
            vec![1.0]
        } else {
            let top = self.cond.log10();
            (0..d).map(|i| 10f64.powf(top * i as f64 / (d - 1) as f64)).collect()
        };
        a.shuffle(&mut rng);
        let dir = match &self.x0_direction {
            X0Direction::Named(NamedDirection::Ones) => vec![1.0; d],
            X0Direction::Named(NamedDirection::E1) => {
                let mut e = vec![0.0; d];
                e[0] = 1.0;
                e
            }
            X0Direction::Named(NamedDirection::Random) => sampling::gaussian(&mut rng, d),
            X0Direction::Explicit(v) => {
                check_dim(d, v.len())?;
                v.clone()
            }
        };
        let n = lp_norm(&dir, self.x0_norm_p);
        ensure(n > 0.0 || self.x0_scale == 0.0, || "x0 direction must be nonzero".into())?;
        let x0 = if n > 0.0 { dir.iter().map(|v| v * self.x0_scale / n).collect() } else { vec![0.0; d] };
        Ok(QuadraticObjective::diagonal(a, x0)?.with_descriptor(self.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{LpBall, SetVariant};
    use approx::assert_relative_eq;

    #[test]
    fn heb_examples() {
        assert_eq!(heb_from_uniform_convexity(2.0, 2.0).unwrap(), HebDescriptor { mu: 1.0, theta: 0.5 });
        let h = heb_from_uniform_convexity(0.5, 2.0).unwrap();
        assert_relative_eq!(h.mu, 2.0, max_relative = 1e-15);
        assert_eq!(heb_from_uniform_convexity(2.0, 4.0).unwrap(), HebDescriptor { mu: 1.0, theta: 0.25 });
        assert!(heb_from_uniform_convexity(0.0, 2.0).is_err());
        assert!(heb_from_uniform_convexity(1.0, 1.5).is_err());
    }

    #[test]
    fn grad_floor_examples() {
        let ball = LpBall::new(2.0, 5.0, 2).unwrap();
        let f = QuadraticObjective::isotropic(vec![6.0, 8.0]);
        assert_relative_eq!(grad_floor_quadratic(&f, &ball), 5.0, max_relative = 1e-14);
        let inside = QuadraticObjective::isotropic(vec![1.0, 1.0]);
        assert_eq!(grad_floor_quadratic(&inside, &ball), 0.0);
        let aniso = QuadraticObjective::diagonal(vec![1.0, 100.0], vec![10.0, 0.0]).unwrap();
        assert_relative_eq!(grad_floor_quadratic(&aniso, &ball), 5.0, max_relative = 1e-14);
    }

    #[test]
    fn grad_floor_in_l3_pair() {
        // ‖x‖₂ ≤ d^{1/6} on the unit ℓ3 ball in d = 20; the ℓ_{3/2} dual norm
        // dominates ℓ2, so no further conversion.
        let ball = LpBall::new(3.0, 1.0, 20).unwrap();
        let mut x0 = vec![0.0; 20];
        x0[0] = 3.0;
        let f = QuadraticObjective::isotropic(x0);
        assert_relative_eq!(grad_floor_quadratic(&f, &ball), 3.0 - 20f64.powf(1.0 / 6.0), max_relative = 1e-14);
    }

    #[test]
    fn exact_step_examples() {
        let f = QuadraticObjective::isotropic(vec![2.0, 0.0]);
        assert_eq!(f.exact_step(&[0.0, 0.0], &[1.0, 0.0]), Some(1.0));
        assert_eq!(f.exact_step(&[0.0, 0.0], &[0.0, 0.0]), Some(0.0));
        let g = QuadraticObjective::isotropic(vec![0.5, 0.0]);
        assert_eq!(g.exact_step(&[0.0, 0.0], &[1.0, 0.0]), Some(0.5));
    }

    #[test]
    fn descriptor_builds_conditioned_problem() {
        let d: ObjectiveDescriptor = serde_json::from_str(
            r#"{"family":"quadratic","dim":10,"cond":100,"x0_direction":"ones","x0_scale":15,"x0_norm_p":3,"seed":4}"#,
        )
        .unwrap();
        let f = d.build().unwrap();
        let (lo, hi) = f.eigen_range();
        assert_relative_eq!(hi / lo, 100.0, max_relative = 1e-12);
        assert_relative_eq!(lp_norm(f.minimizer(), 3.0), 15.0, max_relative = 1e-14);
        assert_eq!(f, d.build().unwrap());
        assert_eq!(f.describe()["cond"], 100.0);
    }

    #[test]
    fn explicit_direction_is_length_checked() {
        let d: ObjectiveDescriptor =
            serde_json::from_str(r#"{"family":"quadratic","dim":3,"x0_direction":[1,0],"x0_scale":1}"#).unwrap();
        assert!(d.build().is_err());
    }

    #[test]
    fn dense_matches_diagonal() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0]));
        let f = QuadraticObjective::dense(a, vec![1.0, -1.0]).unwrap();
        let g = QuadraticObjective::diagonal(vec![1.0, 4.0], vec![1.0, -1.0]).unwrap();
        let x = [0.3, 0.7];
        assert_eq!(f.value(&x), g.value(&x));
        assert_eq!(f.gradient(&x), g.gradient(&x));
        assert_eq!(f.eigen_range(), (1.0, 4.0));
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(QuadraticObjective::dense(bad, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn quadratic_grad_floor_via_trait() {
        let s: SetVariant = serde_json::from_str(r#"{"family":"lp","p":2,"radius":5,"dim":2}"#).unwrap();
        let f = QuadraticObjective::isotropic(vec![10.0, 0.0]);
        assert_eq!(f.grad_floor(&s), Some(5.0));
    }
}
