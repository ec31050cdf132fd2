//! Uniform-convexity parameters of the supported set families.
//!
//! A set `C` is `(α, q)`-uniformly convex with respect to `‖·‖` when
//! `ηx + (1−η)y + η(1−η)·α‖x−y‖^q·z ∈ C` for all `x, y ∈ C`, `η ∈ [0, 1]`
//! and unit `z`. Parameters of a radius-`r` ball follow from the unit ball
//! by `α ↦ α / r^{q−1}`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::norms::NormTag;

/// `(α, q)` uniform-convexity parameters and the norm they refer to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UcParams {
    pub alpha: f64,
    pub q: f64,
    pub norm: NormTag,
}

impl UcParams {
    pub fn new(alpha: f64, q: f64, norm: NormTag) -> Result<Self> {
        ensure(alpha > 0.0 && alpha.is_finite(), || format!("alpha must be positive, got {alpha}"))?;
        ensure(q >= 2.0 && q.is_finite(), || format!("q must be at least 2, got {q}"))?;
        Ok(Self { alpha, q, norm })
    }

    /// Parameters of the radius-`r` ball given those of the unit ball.
    pub fn scaled_to_radius(self, r: f64) -> Self {
        Self { alpha: self.alpha / r.powf(self.q - 1.0), ..self }
    }
}

/// Unit-ball parameters of the `ℓp` (or Schatten-p) ball, `p > 1`.
///
/// For `p ∈ (1, 2]` this is `((p−1)/2, 2)`. For `p > 2` the largest `α`
/// compatible with exponent `p` is `2^{2−p}/p`: near a flat boundary point
/// (e.g. `e₁`) the symmetric chord `(a, ±t)` has `1 − a ≈ t^p/p` while the
/// midpoint perturbation is `α(2t)^p/4`.
pub fn unit_ball_params(p: f64) -> (f64, f64) {
    if p <= 2.0 {
        ((p - 1.0) / 2.0, 2.0)
    } else {
        (2f64.powf(2.0 - p) / p, p)
    }
}

/// The `(1/p, p)` constant often quoted for `p > 2` unit balls.
///
/// It exceeds [`unit_ball_params`] by `2^{p−2}` and fails the chord
/// perturbation test near flat boundary points; the verifier uses it as a
/// negative control.
pub fn nominal_unit_ball_params(p: f64) -> (f64, f64) {
    if p <= 2.0 {
        ((p - 1.0) / 2.0, 2.0)
    } else {
        (1.0 / p, p)
    }
}

/// Parameters of the sublevel set `{f ≤ w}` of a non-negative, `L`-smooth,
/// `(μ, r)`-uniformly convex function, with respect to the Euclidean norm:
/// `α = μ / (2√(2wL))`.
pub fn levelset_uc_params(mu: f64, r_exp: f64, smoothness: f64, w: f64) -> Result<UcParams> {
    ensure(mu > 0.0, || format!("mu must be positive, got {mu}"))?;
    ensure(smoothness > 0.0, || format!("L must be positive, got {smoothness}"))?;
    ensure(w > 0.0, || format!("level must be positive, got {w}"))?;
    ensure(r_exp >= 2.0, || format!("uniform convexity exponent must be >= 2, got {r_exp}"))?;
    let alpha = mu / (2.0 * (2.0 * w * smoothness).sqrt());
    UcParams::new(alpha, r_exp, NormTag::Lp(2.0))
}
