//! Rate constants and bound curves for Frank-Wolfe on uniformly convex sets.
//!
//! Every sublinear bound comes from the recursion
//! `h_{t+1} ≤ h_t · max{1/2, 1 − C·h_t^η}`, whose solution is dominated by
//! `M / (t + k)^{1/η}`. Constants are carried in log space because `1/η`
//! grows without bound as `η → 0⁺`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::solver::RunTrace;

/// Constants of the recursion bound `h_t ≤ M / (t + k)^{1/η}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecursionConstants {
    pub eta: f64,
    pub c: f64,
    pub h0: f64,
    pub k: f64,
    /// `ln M`; `M` itself may overflow for small `η`.
    pub ln_m: f64,
}

impl RecursionConstants {
    pub fn m_rate(&self) -> f64 {
        self.ln_m.exp()
    }

    /// `M / (t + k)^{1/η}`, `+∞` at `t + k = 0`.
    pub fn evaluate(&self, t: f64) -> f64 {
        let base = t + self.k;
        if base <= 0.0 {
            return f64::INFINITY;
        }
        (self.ln_m - base.ln() / self.eta).exp()
    }
}

/// Solves the recursion constants for `(η, C, h0)`.
///
/// `k = (2 − 2^η)/(2^η − 1)` and
/// `M = max{h0·k^{1/η}, 2 / ((η − (1−η)(2^η − 1))·C)^{1/η}}`.
pub fn recursion_bound(eta: f64, c: f64, h0: f64) -> Result<RecursionConstants> {
    ensure(eta > 0.0 && eta <= 1.0, || format!("eta must lie in (0, 1], got {eta}"))?;
    ensure(c > 0.0 && c.is_finite(), || format!("C must be positive, got {c}"))?;
    ensure(h0 >= 0.0 && h0.is_finite(), || format!("h0 must be non-negative, got {h0}"))?;
    let two_eta = eta.exp2();
    let k = (2.0 - two_eta) / (two_eta - 1.0);
    let denom = eta - (1.0 - eta) * (two_eta - 1.0);
    ensure(denom > 0.0, || format!("recursion denominator is non-positive ({denom}) at eta={eta}"))?;
    let inv = 1.0 / eta;
    let ln_first = if h0 > 0.0 && k > 0.0 { h0.ln() + inv * k.ln() } else { f64::NEG_INFINITY };
    let ln_second = 2f64.ln() - inv * (denom * c).ln();
    Ok(RecursionConstants { eta, c, h0, k, ln_m: ln_first.max(ln_second) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Global scaling with a gradient floor.
    GradientFloor,
    /// Local scaling at the optimum, valid after the burn-in `h_t ≤ 1`.
    LocalScaling,
    /// Hölderian error bound on the objective.
    ErrorBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum Regime {
    /// `h_t ≤ factor^t · h0`.
    Linear {
        factor: f64,
        h0: f64,
    },
    Sublinear(RecursionConstants),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBound {
    pub regime: Regime,
    pub kind: BoundKind,
    /// Iterate-to-vertex constant of the local-scaling bound.
    pub h: Option<f64>,
    /// The linear factor as it is usually stated, kept for comparison when
    /// it differs from the recursion-derived one.
    pub stated_factor: Option<f64>,
}

impl RateBound {
    /// Bound on `h_t`, `t` counted from the bound's anchor.
    pub fn evaluate(&self, t: f64) -> f64 {
        match self.regime {
            Regime::Linear { factor, h0 } => h0 * factor.powf(t),
            Regime::Sublinear(rc) => rc.evaluate(t),
        }
    }

    /// Polynomial decay exponent `1/η`, or `None` in the linear regime.
    pub fn exponent(&self) -> Option<f64> {
        match self.regime {
            Regime::Linear { .. } => None,
            Regime::Sublinear(rc) => Some(1.0 / rc.eta),
        }
    }

    pub fn linear_factor(&self) -> Option<f64> {
        match self.regime {
            Regime::Linear { factor, .. } => Some(factor),
            Regime::Sublinear(_) => None,
        }
    }

    /// A copy with `M` scaled by `s` (for negative controls).
    pub fn scaled(mut self, s: f64) -> Self {
        match &mut self.regime {
            Regime::Linear { h0, .. } => *h0 *= s,
            Regime::Sublinear(rc) => rc.ln_m += s.ln(),
        }
        self
    }
}

fn check_common(c: f64, alpha: f64, q: f64, l: f64, h0: f64) -> Result<()> {
    ensure(c > 0.0 && c.is_finite(), || format!("gradient floor c must be positive, got {c}"))?;
    ensure(alpha > 0.0 && alpha.is_finite(), || format!("alpha must be positive, got {alpha}"))?;
    ensure(q >= 2.0 && q.is_finite(), || format!("q must be at least 2, got {q}"))?;
    ensure(l > 0.0 && l.is_finite(), || format!("L must be positive, got {l}"))?;
    ensure(h0 >= 0.0 && h0.is_finite(), || format!("h0 must be non-negative, got {h0}"))
}

/// Bound under a gradient floor `‖∇f‖_* ≥ c` on an `(α, q)`-uniformly
/// convex set: `η = 1 − 2/q`, `C = (cα/2)^{2/q}/(2L)`; linear with factor
/// `max{1/2, 1 − cα/(4L)}` when `q = 2`.
pub fn gradient_floor_bound(c: f64, alpha: f64, q: f64, l: f64, h0: f64) -> Result<RateBound> {
    check_common(c, alpha, q, l, h0)?;
    let cc = (c * alpha / 2.0).powf(2.0 / q) / (2.0 * l);
    let eta = 1.0 - 2.0 / q;
    let (regime, stated) = if eta <= 0.0 {
        let factor = 0.5_f64.max(1.0 - cc);
        let stated = 0.5_f64.max(1.0 - c * alpha / l);
        (Regime::Linear { factor, h0 }, Some(stated))
    } else {
        (Regime::Sublinear(recursion_bound(eta, cc, h0)?), None)
    };
    Ok(RateBound { regime, kind: BoundKind::GradientFloor, h: None, stated_factor: stated })
}

/// `H = 2·max{(2L/(cα))^{1/(q−1)}·(2/(cα))^{1/(q(q−1))}, (2/(cα))^{1/q}}`.
pub fn local_vertex_constant(c: f64, alpha: f64, q: f64, l: f64) -> f64 {
    let ca = c * alpha;
    let a = (2.0 * l / ca).powf(1.0 / (q - 1.0)) * (2.0 / ca).powf(1.0 / (q * (q - 1.0)));
    let b = (2.0 / ca).powf(1.0 / q);
    2.0 * a.max(b)
}

/// Bound from local scaling at the optimum, valid from the first iterate
/// with `h_t ≤ 1` (`h0` is the gap there): `η = 1 − 2/(q(q−1))`,
/// `C = 1/(2LH²)`; linear with factor `max{1/2, 1 − C}` when `q = 2`.
pub fn local_scaling_bound(c: f64, alpha: f64, q: f64, l: f64, h0: f64) -> Result<RateBound> {
    check_common(c, alpha, q, l, h0)?;
    let h = local_vertex_constant(c, alpha, q, l);
    let cc = 1.0 / (2.0 * l * h * h);
    let eta = 1.0 - 2.0 / (q * (q - 1.0));
    let regime = if eta <= 0.0 {
        Regime::Linear { factor: 0.5_f64.max(1.0 - cc), h0 }
    } else {
        Regime::Sublinear(recursion_bound(eta, cc, h0)?)
    };
    Ok(RateBound { regime, kind: BoundKind::LocalScaling, h: Some(h), stated_factor: None })
}

/// Bound under a Hölderian error bound `(μ, θ)`: `η = 1 − 2θ/q`,
/// `C = (α/μ)^{2/q}/L`.
pub fn error_bound_rate(alpha: f64, q: f64, mu_heb: f64, theta: f64, l: f64, h0: f64) -> Result<RateBound> {
    ensure(theta > 0.0 && theta <= 0.5, || format!("theta must lie in (0, 1/2], got {theta}"))?;
    ensure(mu_heb > 0.0 && mu_heb.is_finite(), || format!("HEB mu must be positive, got {mu_heb}"))?;
    check_common(1.0, alpha, q, l, h0)?;
    let cc = (alpha / mu_heb).powf(2.0 / q) / l;
    let eta = 1.0 - 2.0 * theta / q;
    Ok(RateBound {
        regime: Regime::Sublinear(recursion_bound(eta, cc, h0)?),
        kind: BoundKind::ErrorBound,
        h: None,
        stated_factor: None,
    })
}

/// Index of the first entry `≤ level`.
pub fn first_at_most(h: &[f64], level: f64) -> Option<usize> {
    h.iter().position(|v| *v <= level)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub t: usize,
    pub gap: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceCheck {
    pub violations: Vec<Violation>,
    pub max_ratio: f64,
}

impl TraceCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Relative slack on bound comparisons (round-off in `f(x_t) − f(x*)`).
pub const BOUND_SLACK: f64 = 1e-12;

/// Compares `h_t` with `bound(t − burn_in)` for every `t ≥ burn_in`.
///
/// Traces without primal gaps produce an empty, passing report.
pub fn check_trace(trace: &RunTrace, bound: &RateBound, burn_in: usize) -> TraceCheck {
    let h = trace.primal_gaps().unwrap_or_default();
    check_gaps(&h, bound, burn_in)
}

/// [`check_trace`] on a bare sequence of primal gaps.
pub fn check_gaps(h: &[f64], bound: &RateBound, burn_in: usize) -> TraceCheck {
    let mut violations = Vec::new();
    let mut max_ratio = 0.0_f64;
    for (t, &gap) in h.iter().enumerate().skip(burn_in) {
        let b = bound.evaluate((t - burn_in) as f64);
        if b.is_finite() && b > 0.0 {
            max_ratio = max_ratio.max(gap / b);
        }
        if gap > b + BOUND_SLACK * b.abs().max(1.0) {
            violations.push(Violation { t, gap, bound: b });
        }
    }
    TraceCheck { violations, max_ratio }
}
