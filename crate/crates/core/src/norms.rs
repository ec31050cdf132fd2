//! Vector and matrix norms, dual exponents and norm-equivalence factors.
//!
//! Points are flat `f64` slices. Matrices are stored column-major with the
//! shape carried by [`Norm::Schatten`].

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Euclidean inner product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Hölder conjugate `p* = p / (p - 1)`, with `1* = ∞` and `∞* = 1`.
pub fn dual_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `ℓp` norm for `p ∈ [1, ∞]`, rescaled by the largest magnitude so neither
/// tiny nor huge entries over/underflow.
pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    if p.is_infinite() {
        return m;
    }
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    if p == 2.0 {
        let s: f64 = x.iter().map(|v| (v / m) * (v / m)).sum();
        return m * s.sqrt();
    }
    let s: f64 = x.iter().map(|v| (v.abs() / m).powf(p)).sum();
    m * s.powf(1.0 / p)
}

/// Singular values of a column-major `rows × cols` matrix.
pub fn singular_values(x: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    DMatrix::from_column_slice(rows, cols, x).singular_values().iter().copied().collect()
}

/// A norm on flat points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Norm {
    /// `ℓp` norm, `p ∈ [1, ∞]`.
    Lp { p: f64 },
    /// Schatten-p norm of a column-major `rows × cols` matrix.
    Schatten { p: f64, rows: usize, cols: usize },
}

impl Norm {
    pub const L2: Norm = Norm::Lp { p: 2.0 };

    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            Norm::Lp { p } => lp_norm(x, p),
            Norm::Schatten { p, rows, cols } => lp_norm(&singular_values(x, rows, cols), p),
        }
    }

    pub fn dual(&self) -> Norm {
        match *self {
            Norm::Lp { p } => Norm::Lp { p: dual_exponent(p) },
            Norm::Schatten { p, rows, cols } => Norm::Schatten { p: dual_exponent(p), rows, cols },
        }
    }

    /// The exponent `p` of the norm.
    pub fn exponent(&self) -> f64 {
        match *self {
            Norm::Lp { p } | Norm::Schatten { p, .. } => p,
        }
    }

    pub fn tag(&self) -> NormTag {
        match *self {
            Norm::Lp { p } => NormTag::Lp(p),
            Norm::Schatten { p, .. } => NormTag::Schatten(p),
        }
    }

    /// Ambient dimension seen by norm-equivalence factors (`d` for vectors,
    /// `min(rows, cols)` singular values for matrices).
    fn equivalence_dim(&self, len: usize) -> usize {
        match *self {
            Norm::Lp { .. } => len,
            Norm::Schatten { rows, cols, .. } => rows.min(cols),
        }
    }
}

/// Identifier of the norm a set of uniform-convexity parameters refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormTag {
    Lp(f64),
    Schatten(f64),
}

/// Smallest `K` with `‖v‖_b ≤ K ‖v‖_a` on `ℝ^d`: `d^{max(0, 1/b − 1/a)}`.
pub fn norm_equivalence(a: f64, b: f64, d: usize) -> f64 {
    let inv = |p: f64| if p.is_infinite() { 0.0 } else { 1.0 / p };
    let e = (inv(b) - inv(a)).max(0.0);
    (d as f64).powf(e)
}

/// Smoothness constant with respect to `norm` (primal) and its dual,
/// converted from a constant declared against the Euclidean pair.
///
/// `‖∇f(x) − ∇f(y)‖_* ≤ K(2→*) ‖∇f(x) − ∇f(y)‖₂ ≤ K(2→*) L₂ ‖x − y‖₂
///  ≤ K(2→*) L₂ K(‖·‖→2) ‖x − y‖`.
pub fn smoothness_in_norm(l2: f64, norm: &Norm, len: usize) -> f64 {
    let d = norm.equivalence_dim(len);
    let p = norm.exponent();
    let pd = dual_exponent(p);
    l2 * norm_equivalence(2.0, pd, d) * norm_equivalence(p, 2.0, d)
}

/// Lower bound on `‖g‖_*` from a lower bound on `‖g‖₂`.
pub fn dual_lower_from_euclidean(g2_lower: f64, norm: &Norm, len: usize) -> f64 {
    let d = norm.equivalence_dim(len);
    let pd = dual_exponent(norm.exponent());
    g2_lower / norm_equivalence(pd, 2.0, d)
}

/// Upper bound on `‖v‖` (in `norm`) from `‖v‖₂`.
pub fn norm_upper_from_euclidean(v2: f64, norm: &Norm, len: usize) -> f64 {
    let d = norm.equivalence_dim(len);
    v2 * norm_equivalence(2.0, norm.exponent(), d)
}
