//! The Frank-Wolfe loop with traced iterations.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, ensure, Error, Result};
use crate::geometry::{FeasibleSet, SetDescriptor};
use crate::norms::dot;
use crate::objectives::SmoothObjective;
use crate::sampling;

/// Membership tolerance for iterates and the starting point.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Default dual stopping threshold on the FW gap.
pub const DEFAULT_STOP_GAP: f64 = 1e-12;

/// Open-loop step-size schedules.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// `γ_t = 1/(t+1)`.
    #[default]
    InvT,
    /// `γ_t = 2/(t+2)`.
    TwoOverT,
}

impl Schedule {
    pub fn gamma(self, t: usize) -> f64 {
        let t = t as f64;
        match self {
            Schedule::InvT => 1.0 / (t + 1.0),
            Schedule::TwoOverT => 2.0 / (t + 2.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum StepRule {
    Deterministic {
        #[serde(default)]
        schedule: Schedule,
    },
    /// `min{1, g/(L‖d‖₂²)}`; `smoothness` overrides the objective's
    /// Euclidean `L`.
    ShortStep {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        smoothness: Option<f64>,
    },
    ExactLineSearch,
}

impl StepRule {
    pub const DETERMINISTIC: StepRule = StepRule::Deterministic { schedule: Schedule::InvT };
    pub const SHORT: StepRule = StepRule::ShortStep { smoothness: None };

    pub fn name(&self) -> &'static str {
        match self {
            StepRule::Deterministic { .. } => "deterministic",
            StepRule::ShortStep { .. } => "short_step",
            StepRule::ExactLineSearch => "exact_line_search",
        }
    }
}

/// `min{1, g/(L·d_sq)}`; 0 at zero gap and 1 when `d_sq = 0` with a
/// positive gap.
pub fn short_step(fw_gap: f64, smoothness: f64, d_sq: f64) -> f64 {
    if fw_gap <= 0.0 {
        0.0
    } else if d_sq <= 0.0 {
        1.0
    } else {
        (fw_gap / (smoothness * d_sq)).min(1.0)
    }
}

/// Minimizer of a unimodal `phi` on `[a, b]` by golden-section search down
/// to an interval of width `tol`.
pub fn golden_section(phi: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (phi(c), phi(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = phi(d);
        }
    }
    0.5 * (a + b)
}

fn step_point(x: &[f64], d: &[f64], gamma: f64) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + gamma * b).collect()
}

/// `argmin_{γ∈[0,1]} f(x + γd)`: analytic when the objective offers it,
/// otherwise golden section to width `1e-10`, never worse than the
/// candidates `0`, the short step and `1`.
pub fn exact_line_search(f: &dyn SmoothObjective, x: &[f64], d: &[f64]) -> f64 {
    if d.iter().all(|v| *v == 0.0) {
        return 0.0;
    }
    if let Some(g) = f.exact_step(x, d) {
        return g;
    }
    let phi = |g: f64| f.value(&step_point(x, d, g));
    let gs = golden_section(phi, 0.0, 1.0, 1e-10);
    let gap = -dot(&f.gradient(x), d);
    let ss = short_step(gap.max(0.0), f.smoothness(), dot(d, d));
    let mut best = (phi(gs), gs);
    for cand in [0.0, ss, 1.0] {
        let v = phi(cand);
        if v < best.0 {
            best = (v, cand);
        }
    }
    best.1
}

/// One traced iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterRecord {
    pub t: usize,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    /// Step taken from `x_t`; 0 on the final record.
    pub gamma: f64,
    pub fw_gap: f64,
    pub min_fw_gap: f64,
    pub primal_gap: Option<f64>,
    /// `‖x_t − v_t‖` in the set's norm.
    pub dist_to_vertex: f64,
    pub dist_sq_euclid: f64,
    /// `‖∇f(x_t)‖_*` in the dual of the set's norm.
    pub grad_dual_norm: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    GapReached,
    ZeroGradient,
    Horizon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub set: SetDescriptor,
    pub objective: serde_json::Value,
    pub rule: StepRule,
    pub horizon: usize,
    pub stop_gap: f64,
    pub seed: Option<u64>,
    pub f_star: Option<f64>,
    pub stop_reason: StopReason,
    /// Short steps taken with `‖x − v‖ = 0` and a positive gap.
    pub degenerate_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub records: Vec<IterRecord>,
    pub meta: TraceMeta,
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> &IterRecord {
        self.records.last().expect("traces hold at least one record")
    }

    pub fn primal_gaps(&self) -> Option<Vec<f64>> {
        self.records.iter().map(|r| r.primal_gap).collect()
    }

    pub fn fw_gaps(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.fw_gap).collect()
    }

    pub fn min_fw_gaps(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.min_fw_gap).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FwConfig {
    pub horizon: usize,
    #[serde(default = "default_stop_gap")]
    pub stop_gap: f64,
    /// Reference optimum used for primal gaps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_star: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_stop_gap() -> f64 {
    DEFAULT_STOP_GAP
}

impl FwConfig {
    pub fn new(horizon: usize) -> Self {
        Self { horizon, stop_gap: DEFAULT_STOP_GAP, x_star: None, seed: None }
    }

    pub fn with_optimum(mut self, x_star: Vec<f64>) -> Self {
        self.x_star = Some(x_star);
        self
    }

    pub fn with_stop_gap(mut self, g: f64) -> Self {
        self.stop_gap = g;
        self
    }
}

/// FW vertex and clamped gap at `x`; a zero gradient gives `(x, 0)`.
fn vertex_and_gap(set: &dyn FeasibleSet, x: &[f64], grad: &[f64]) -> Result<(Vec<f64>, f64, bool)> {
    let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
    match set.lmo(&neg) {
        Ok(v) => {
            let gap: f64 = grad.iter().zip(x).zip(&v).map(|((g, a), b)| g * (a - b)).sum();
            Ok((v, gap.max(0.0), false))
        }
        Err(Error::ZeroDirection) => Ok((x.to_vec(), 0.0, true)),
        Err(e) => Err(e),
    }
}

fn choose_gamma(rule: &StepRule, f: &dyn SmoothObjective, t: usize, x: &[f64], d: &[f64], gap: f64, d_sq: f64) -> f64 {
    match *rule {
        StepRule::Deterministic { schedule } => schedule.gamma(t),
        StepRule::ShortStep { smoothness } => short_step(gap, smoothness.unwrap_or_else(|| f.smoothness()), d_sq),
        StepRule::ExactLineSearch => exact_line_search(f, x, d),
    }
}

/// `(1−γ)x + γv`, component-wise.
fn convex_update(x: &mut [f64], v: &[f64], gamma: f64) {
    for (a, b) in x.iter_mut().zip(v) {
        *a = (1.0 - gamma) * *a + gamma * b;
    }
}

fn check_start(set: &dyn FeasibleSet, f: &dyn SmoothObjective, x_init: &[f64]) -> Result<()> {
    check_dim(set.dim(), x_init.len())?;
    check_dim(set.dim(), f.dim())?;
    let excess = set.excess(x_init);
    if excess > FEASIBILITY_TOL {
        return Err(Error::InfeasibleStart { excess });
    }
    Ok(())
}

/// Runs Frank-Wolfe from `x_init` for at most `cfg.horizon` steps, stopping
/// early once the FW gap drops to `cfg.stop_gap`.
pub fn run_fw(
    set: &dyn FeasibleSet,
    f: &dyn SmoothObjective,
    x_init: &[f64],
    rule: StepRule,
    cfg: &FwConfig,
) -> Result<RunTrace> {
    check_start(set, f, x_init)?;
    ensure(cfg.stop_gap >= 0.0, || "stop_gap must be non-negative".into())?;
    if let Some(xs) = &cfg.x_star {
        check_dim(set.dim(), xs.len())?;
    }
    let f_star = cfg.x_star.as_deref().map(|xs| f.value(xs));
    let norm = set.norm();
    let dual = norm.dual();

    let mut x = x_init.to_vec();
    let mut records = Vec::with_capacity(cfg.horizon.min(1 << 20) + 1);
    let mut min_gap = f64::INFINITY;
    let mut degenerate = 0;
    let mut t = 0;
    let stop_reason = loop {
        let grad = f.gradient(&x);
        let (v, gap, zero_grad) = vertex_and_gap(set, &x, &grad)?;
        let d: Vec<f64> = v.iter().zip(&x).map(|(a, b)| a - b).collect();
        let d_sq = dot(&d, &d);
        let value = f.value(&x);
        min_gap = min_gap.min(gap);
        let mut rec = IterRecord {
            t,
            x: x.clone(),
            v: v.clone(),
            gamma: 0.0,
            fw_gap: gap,
            min_fw_gap: min_gap,
            primal_gap: f_star.map(|fs| value - fs),
            dist_to_vertex: norm.eval(&d),
            dist_sq_euclid: d_sq,
            grad_dual_norm: dual.eval(&grad),
            value,
        };
        let stop = if zero_grad {
            Some(StopReason::ZeroGradient)
        } else if gap <= cfg.stop_gap {
            Some(StopReason::GapReached)
        } else if t >= cfg.horizon {
            Some(StopReason::Horizon)
        } else {
            None
        };
        if let Some(reason) = stop {
            records.push(rec);
            break reason;
        }
        let gamma = choose_gamma(&rule, f, t, &x, &d, gap, d_sq);
        if matches!(rule, StepRule::ShortStep { .. }) && d_sq == 0.0 {
            degenerate += 1;
        }
        rec.gamma = gamma;
        records.push(rec);
        convex_update(&mut x, &v, gamma);
        t += 1;
    };

    Ok(RunTrace {
        records,
        meta: TraceMeta {
            set: set.descriptor(),
            objective: f.describe(),
            rule,
            horizon: cfg.horizon,
            stop_gap: cfg.stop_gap,
            seed: cfg.seed,
            f_star,
            stop_reason,
            degenerate_steps: degenerate,
        },
    })
}

/// High-accuracy reference optimum: FW with exact line search for
/// `steps` iterations, returning the best iterate seen and its value.
pub fn reference_optimum(
    set: &dyn FeasibleSet,
    f: &dyn SmoothObjective,
    x_init: &[f64],
    steps: usize,
) -> Result<(Vec<f64>, f64)> {
    check_start(set, f, x_init)?;
    let mut x = x_init.to_vec();
    let mut best = (x.clone(), f.value(&x));
    for _ in 0..steps {
        let grad = f.gradient(&x);
        let (v, gap, zero) = vertex_and_gap(set, &x, &grad)?;
        if zero || gap == 0.0 {
            break;
        }
        let d: Vec<f64> = v.iter().zip(&x).map(|(a, b)| a - b).collect();
        let gamma = exact_line_search(f, &x, &d);
        convex_update(&mut x, &v, gamma);
        let val = f.value(&x);
        if val < best.1 {
            best = (x.clone(), val);
        }
    }
    Ok(best)
}

/// A seeded starting vertex: the oracle answer for a Gaussian direction.
pub fn seeded_start(set: &dyn FeasibleSet, seed: u64) -> Result<Vec<f64>> {
    let mut rng = sampling::rng(seed);
    set.lmo(&sampling::gaussian(&mut rng, set.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{L1Ball, LpBall};
    use crate::objectives::QuadraticObjective;
    use crate::stats::loglog_slope;

    #[test]
    fn short_step_examples() {
        assert_eq!(short_step(0.0, 3.0, 1.0), 0.0);
        assert_eq!(short_step(2.0, 1.0, 1.0), 1.0);
        assert_eq!(short_step(0.5, 2.0, 1.0), 0.25);
        assert_eq!(short_step(0.5, 2.0, 0.0), 1.0);
    }

    #[test]
    fn schedules() {
        assert_eq!(Schedule::InvT.gamma(0), 1.0);
        assert_eq!(Schedule::InvT.gamma(3), 0.25);
        assert_eq!(Schedule::TwoOverT.gamma(2), 0.5);
    }

    #[test]
    fn golden_section_finds_interior_minimum() {
        let g = golden_section(|t| (t - 0.3_f64).powi(2), 0.0, 1.0, 1e-10);
        assert!((g - 0.3).abs() < 1e-9);
    }

    #[test]
    fn start_at_unconstrained_optimum() {
        let ball = LpBall::new(2.0, 1.0, 2).unwrap();
        let f = QuadraticObjective::isotropic(vec![0.2, 0.1]);
        let tr = run_fw(&ball, &f, &[0.2, 0.1], StepRule::SHORT, &FwConfig::new(10)).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(tr.records[0].fw_gap, 0.0);
        assert_eq!(tr.meta.stop_reason, StopReason::ZeroGradient);
    }

    #[test]
    fn euclidean_projection_example() {
        let ball = LpBall::new(2.0, 1.0, 2).unwrap();
        let f = QuadraticObjective::isotropic(vec![2.0, 0.0]);
        let cfg = FwConfig::new(200).with_optimum(vec![1.0, 0.0]);
        let tr = run_fw(&ball, &f, &[0.0, 1.0], StepRule::SHORT, &cfg).unwrap();
        let last = tr.last();
        assert!(last.primal_gap.unwrap() <= 1e-6);
        assert!((last.x[0] - 1.0).abs() < 1e-3 && last.x[1].abs() < 1e-3);
    }

    #[test]
    fn l1_deterministic_is_sublinear() {
        // Interior optimum. With a vertex optimum the first unit step lands
        // on it; with a face-interior optimum the running-min gap decays
        // like 1/t².
        let ball = L1Ball::new(1.0, 3).unwrap();
        let f = QuadraticObjective::isotropic(vec![0.2, std::f64::consts::PI / 30.0, -0.1]);
        let tr = run_fw(&ball, &f, &[0.0, 0.0, 1.0], StepRule::DETERMINISTIC, &FwConfig::new(100)).unwrap();
        assert_eq!(tr.len(), 101);
        let t: Vec<f64> = (1..tr.len()).map(|i| i as f64).collect();
        let s = loglog_slope(&t, &tr.min_fw_gaps()[1..]).unwrap();
        assert!((-1.4..=-0.6).contains(&s), "slope {s}");
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let ball = LpBall::new(2.0, 1.0, 2).unwrap();
        let f = QuadraticObjective::isotropic(vec![2.0, 0.0]);
        let err = run_fw(&ball, &f, &[2.0, 0.0], StepRule::SHORT, &FwConfig::new(5)).unwrap_err();
        assert!(matches!(err, Error::InfeasibleStart { .. }));
    }

    #[test]
    fn rule_json() {
        let r: StepRule = serde_json::from_str(r#"{"rule":"deterministic"}"#).unwrap();
        assert_eq!(r, StepRule::DETERMINISTIC);
        let r: StepRule = serde_json::from_str(r#"{"rule":"deterministic","schedule":"two_over_t"}"#).unwrap();
        assert_eq!(r, StepRule::Deterministic { schedule: Schedule::TwoOverT });
        let r: StepRule = serde_json::from_str(r#"{"rule":"exact_line_search"}"#).unwrap();
        assert_eq!(r, StepRule::ExactLineSearch);
    }
}
