//! Follow-The-Leader for online linear losses over a feasible set.
//!
//! With linear losses `l_t(x) = ⟨c_t, x⟩` the leader is a single oracle
//! call on the negated cumulative loss, and so is the hindsight optimum.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, ensure, Error, Result};
use crate::geometry::FeasibleSet;
use crate::norms::{dot, Norm};
use crate::sampling::{self, SeededRng};

/// Loss-vector generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LossStream {
    /// The listed losses, cycled when the horizon exceeds the list.
    Fixed { losses: Vec<Vec<f64>> },
    /// `c_t = base + noise_scale·u_t` with `u_t` uniform on `[−1, 1]^d`.
    DriftingMean { base: Vec<f64>, noise_scale: f64, seed: u64 },
    /// `c_t = mean + s_t·amplitude·perp` with the sign `s_t` chosen to push
    /// the cumulative loss back across the hyperplane `⟨·, perp⟩ = 0`
    /// (seeded coin flip when it sits on it). Keeps the leader oscillating
    /// around the mean's hindsight vertex.
    Adversarial { mean: Vec<f64>, perp: Vec<f64>, amplitude: f64, seed: u64 },
}

impl LossStream {
    pub fn dim(&self) -> usize {
        match self {
            LossStream::Fixed { losses } => losses.first().map_or(0, Vec::len),
            LossStream::DriftingMean { base, .. } => base.len(),
            LossStream::Adversarial { mean, .. } => mean.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            LossStream::Fixed { losses } => {
                ensure(!losses.is_empty(), || "fixed stream needs at least one loss".into())?;
                let d = losses[0].len();
                for l in losses {
                    check_dim(d, l.len())?;
                }
            }
            LossStream::DriftingMean { noise_scale, .. } => {
                ensure(*noise_scale >= 0.0, || "noise_scale must be non-negative".into())?;
            }
            LossStream::Adversarial { mean, perp, amplitude, .. } => {
                check_dim(mean.len(), perp.len())?;
                ensure(*amplitude >= 0.0, || "amplitude must be non-negative".into())?;
            }
        }
        ensure(self.dim() > 0, || "loss dimension must be positive".into())
    }

    /// Direction whose minimizer is a sensible first action, if the stream
    /// has a natural mean.
    pub fn mean_hint(&self) -> Option<&[f64]> {
        match self {
            LossStream::Fixed { .. } => None,
            LossStream::DriftingMean { base, .. } => Some(base),
            LossStream::Adversarial { mean, .. } => Some(mean),
        }
    }

    fn seed(&self) -> u64 {
        match self {
            LossStream::Fixed { .. } => 0,
            LossStream::DriftingMean { seed, .. } | LossStream::Adversarial { seed, .. } => *seed,
        }
    }

    /// Loss of round `t` (1-based) given the cumulative loss before it.
    fn emit(&self, t: usize, cumulative: &[f64], rng: &mut SeededRng) -> Vec<f64> {
        match self {
            LossStream::Fixed { losses } => losses[(t - 1) % losses.len()].clone(),
            LossStream::DriftingMean { base, noise_scale, .. } => {
                base.iter().map(|b| b + noise_scale * rng.random_range(-1.0..=1.0)).collect()
            }
            LossStream::Adversarial { mean, perp, amplitude, .. } => {
                let side = dot(cumulative, perp);
                let s = if side.abs() < 1e-12 {
                    if rng.random::<bool>() {
                        1.0
                    } else {
                        -1.0
                    }
                } else {
                    -side.signum()
                };
                mean.iter().zip(perp).map(|(m, p)| m + s * amplitude * p).collect()
            }
        }
    }
}

/// First action of the leader, before any loss is observed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum X1Policy {
    /// Minimizer of the stream's mean loss, else of `⟨e₁, ·⟩`.
    #[default]
    MeanHint,
    /// Oracle answer for a seeded Gaussian direction.
    SeededDirection {
        seed: u64,
    },
    Point {
        x: Vec<f64>,
    },
}

impl X1Policy {
    pub fn resolve(&self, set: &dyn FeasibleSet, stream: &LossStream) -> Result<Vec<f64>> {
        let d = set.dim();
        match self {
            X1Policy::MeanHint => {
                let hint = stream.mean_hint().map(<[f64]>::to_vec).unwrap_or_else(|| {
                    let mut e = vec![0.0; d];
                    e[0] = 1.0;
                    e
                });
                check_dim(d, hint.len())?;
                match set.lmo(&hint.iter().map(|v| -v).collect::<Vec<_>>()) {
                    Err(Error::ZeroDirection) => Ok(set.center()),
                    r => r,
                }
            }
            X1Policy::SeededDirection { seed } => {
                let mut rng = sampling::rng(*seed);
                set.lmo(&sampling::gaussian(&mut rng, d))
            }
            X1Policy::Point { x } => {
                check_dim(d, x.len())?;
                let excess = set.excess(x);
                if excess > crate::solver::FEASIBILITY_TOL {
                    return Err(Error::InfeasibleStart { excess });
                }
                Ok(x.clone())
            }
        }
    }
}

/// The leader's action at round `t ≥ 1`: `x1` at `t = 1`, otherwise the
/// minimizer of `⟨cumulative, ·⟩`. The flag reports a fall-back to `x1`
/// because the cumulative loss vanished.
pub fn ftl_step(set: &dyn FeasibleSet, cumulative: &[f64], t: usize, x1: &[f64]) -> Result<(Vec<f64>, bool)> {
    ensure(t >= 1, || "rounds are numbered from 1".into())?;
    if t == 1 {
        return Ok((x1.to_vec(), false));
    }
    let neg: Vec<f64> = cumulative.iter().map(|v| -v).collect();
    match set.lmo(&neg) {
        Ok(v) => Ok((v, false)),
        Err(Error::ZeroDirection) => Ok((x1.to_vec(), true)),
        Err(e) => Err(e),
    }
}

/// Regret bound for the leader on an `(α, q)`-uniformly convex set when the
/// average loss stays at dual norm `≥ L_T`:
/// `(4M²/(αL_T))(1 + ln T)` at `q = 2`, otherwise
/// `2M(2M/(αL_T))^{1/(q−1)}·(q−1)/(q−2)·T^{1−1/(q−1)}`.
pub fn ftl_regret_bound(alpha: f64, q: f64, m_loss: f64, l_t: f64, t: f64) -> Result<f64> {
    ensure(alpha > 0.0, || format!("alpha must be positive, got {alpha}"))?;
    ensure(q >= 2.0, || format!("q must be at least 2, got {q}"))?;
    ensure(l_t > 0.0, || format!("L_T must be positive, got {l_t}"))?;
    ensure(m_loss >= 0.0, || format!("M must be non-negative, got {m_loss}"))?;
    ensure(t >= 1.0, || format!("horizon must be at least 1, got {t}"))?;
    if q == 2.0 {
        Ok(4.0 * m_loss * m_loss / (alpha * l_t) * (1.0 + t.ln()))
    } else {
        let e = 1.0 / (q - 1.0);
        Ok(2.0 * m_loss * (2.0 * m_loss / (alpha * l_t)).powf(e) * (q - 1.0) / (q - 2.0) * t.powf(1.0 - e))
    }
}

/// One round of play.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub t: usize,
    pub action: Vec<f64>,
    pub loss_vector: Vec<f64>,
    pub loss: f64,
    /// `‖(1/t)Σ_{τ≤t} c_τ‖_*`.
    pub cum_grad_dual_norm: f64,
    /// Regret against the best fixed action for rounds `1..=t`.
    pub regret: f64,
    /// `max_{τ≤t} ‖c_τ‖_*`.
    pub m_loss: f64,
    /// `min_{τ≤t} ‖(1/τ)Σ c‖_*`.
    pub l_t: f64,
    pub bound: Option<f64>,
    /// The leader fell back to `x1` because the cumulative loss vanished.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineTrace {
    pub rounds: Vec<Round>,
    pub alpha: Option<f64>,
    pub q: Option<f64>,
    /// `L_T = 0`: the regret bound does not apply.
    pub degenerate: bool,
}

impl OnlineTrace {
    pub fn regrets(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.regret).collect()
    }

    pub fn l_t(&self) -> f64 {
        self.rounds.last().map_or(0.0, |r| r.l_t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineConfig {
    pub horizon: usize,
    #[serde(default)]
    pub x1: X1Policy,
    /// Keep per-round actions and loss vectors (memory grows as `T·d`).
    #[serde(default = "yes")]
    pub keep_vectors: bool,
}

fn yes() -> bool {
    true
}

impl OnlineConfig {
    pub fn new(horizon: usize) -> Self {
        Self { horizon, x1: X1Policy::default(), keep_vectors: true }
    }
}

/// Plays the leader against `stream` for `cfg.horizon` rounds.
pub fn run_ftl(set: &dyn FeasibleSet, stream: &LossStream, cfg: &OnlineConfig) -> Result<OnlineTrace> {
    stream.validate()?;
    check_dim(set.dim(), stream.dim())?;
    ensure(cfg.horizon >= 1, || "horizon must be at least 1".into())?;
    let uc = set.uc_params().ok();
    let dual: Norm = set.norm().dual();
    let d = set.dim();
    let x1 = cfg.x1.resolve(set, stream)?;
    let mut rng = sampling::rng(stream.seed());

    let mut cum = vec![0.0; d];
    let mut x = x1.clone();
    let mut fallback = false;
    let mut total = 0.0;
    let (mut m_loss, mut l_t) = (0.0_f64, f64::INFINITY);
    let mut rounds = Vec::with_capacity(cfg.horizon);
    for t in 1..=cfg.horizon {
        let c = stream.emit(t, &cum, &mut rng);
        let loss = dot(&c, &x);
        total += loss;
        for (s, ci) in cum.iter_mut().zip(&c) {
            *s += ci;
        }
        m_loss = m_loss.max(dual.eval(&c));
        let avg = dual.eval(&cum) / t as f64;
        l_t = l_t.min(avg);
        // The next leader is also the hindsight minimizer for rounds 1..=t.
        let (next, fb) = ftl_step(set, &cum, t + 1, &x1)?;
        let best = if fb { 0.0 } else { dot(&cum, &next) };
        let bound = match uc {
            Some(p) if l_t > 0.0 => ftl_regret_bound(p.alpha, p.q, m_loss, l_t, t as f64).ok(),
            _ => None,
        };
        rounds.push(Round {
            t,
            action: if cfg.keep_vectors { x.clone() } else { Vec::new() },
            loss_vector: if cfg.keep_vectors { c } else { Vec::new() },
            loss,
            cum_grad_dual_norm: avg,
            regret: total - best,
            m_loss,
            l_t,
            bound,
            fallback,
        });
        x = next;
        fallback = fb;
    }
    Ok(OnlineTrace { rounds, alpha: uc.map(|p| p.alpha), q: uc.map(|p| p.q), degenerate: l_t <= 0.0 })
}
