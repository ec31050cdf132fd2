//! Sampling checks of the geometric inequalities behind the rate bounds.
//!
//! Every check draws its samples from per-index seeded streams and reduces
//! with an order-independent max (ties go to the lowest sample index), so
//! reports are reproducible regardless of thread scheduling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::local_vertex_constant;
use crate::error::{ensure, Error, Result};
use crate::geometry::{
    nominal_unit_ball_params, FeasibleSet, L1Ball, LevelSet, LpBall, SchattenBall, SetVariant, UcParams,
    WeightedSquares,
};
use crate::norms::{dot, smoothness_in_norm, Norm, NormTag};
use crate::objectives::{QuadraticObjective, SmoothObjective};
use crate::sampling::{feasible_point, gaussian, unit_vector};
use crate::solver::{run_fw, FwConfig, RunTrace, StepRule};

/// The η grid of the uniform-convexity check.
pub const ETA_GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Gradient norm below which a claimed optimum with a positive floor is
/// considered stale.
pub const STALE_GRAD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    #[serde(default = "d_pairs")]
    pub n_pairs: usize,
    #[serde(default = "d_dirs")]
    pub n_directions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "d_tol")]
    pub tol: f64,
    #[serde(default = "d_bias")]
    pub boundary_bias: f64,
}

fn d_pairs() -> usize {
    1000
}
fn d_dirs() -> usize {
    50
}
fn d_tol() -> f64 {
    1e-9
}
fn d_bias() -> f64 {
    0.5
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { n_pairs: d_pairs(), n_directions: d_dirs(), seed: 0, tol: d_tol(), boundary_bias: d_bias() }
    }
}

impl SamplerConfig {
    fn validate(&self) -> Result<()> {
        ensure(self.n_pairs > 0 && self.n_directions > 0, || "sample counts must be positive".into())?;
        ensure(self.tol >= 0.0, || "tolerance must be non-negative".into())?;
        ensure((0.0..=1.0).contains(&self.boundary_bias), || "boundary_bias must lie in [0, 1]".into())
    }

    fn stream(&self, i: usize) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(i as u64);
        r
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub subject: String,
    pub pass: bool,
    pub worst_violation: f64,
    pub witness: Option<Value>,
    pub samples: usize,
    pub config: Option<SamplerConfig>,
}

/// Worst violation seen so far, with the index that produced it.
#[derive(Debug, Clone)]
struct Worst {
    value: f64,
    index: usize,
    witness: Option<Value>,
}

impl Worst {
    fn none() -> Self {
        Self { value: f64::NEG_INFINITY, index: usize::MAX, witness: None }
    }

    fn offer(&mut self, value: f64, index: usize, witness: impl FnOnce() -> Value) {
        let value = if value.is_nan() { f64::INFINITY } else { value };
        if value > self.value || (value == self.value && index < self.index) {
            *self = Self { value, index, witness: Some(witness()) };
        }
    }

    fn merge(a: Worst, b: Worst) -> Worst {
        if b.value > a.value || (b.value == a.value && b.index < a.index) {
            b
        } else {
            a
        }
    }
}

fn finish(
    check: &str,
    subject: String,
    worst: Worst,
    samples: usize,
    tol: f64,
    cfg: Option<SamplerConfig>,
) -> CheckReport {
    let worst_violation = if worst.value == f64::NEG_INFINITY { 0.0 } else { worst.value };
    CheckReport {
        check: check.into(),
        subject,
        pass: worst_violation <= tol,
        worst_violation,
        witness: worst.witness,
        samples,
        config: cfg,
    }
}

fn label(set: &dyn FeasibleSet) -> String {
    serde_json::to_string(&set.descriptor()).unwrap_or_default()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// Boundary point along `base + s·g` (relative to the center), with `g` a
/// Gaussian direction rescaled to the Euclidean length of `base`.
fn near(rng: &mut impl Rng, set: &dyn FeasibleSet, base: &[f64], s: f64) -> Vec<f64> {
    let g = gaussian(rng, set.dim());
    let bl = dot(base, base).sqrt();
    let gl = dot(&g, &g).sqrt().max(f64::MIN_POSITIVE);
    let dir: Vec<f64> = base.iter().zip(&g).map(|(b, gi)| b + s * bl * gi / gl).collect();
    set.boundary_along(&dir)
}

/// Pair `i` of a check. Three interleaved kinds: independent feasible
/// points; a short boundary chord around a random boundary point (or
/// `anchor` when given); a short boundary chord near a coordinate axis,
/// where the boundary of an `ℓp` ball is flattest for `p > 2`.
fn sample_pair(
    set: &dyn FeasibleSet,
    cfg: &SamplerConfig,
    i: usize,
    anchor: Option<&[f64]>,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, Vec<f64>) {
    let c = set.center();
    match i % 3 {
        0 => (feasible_point(rng, set, cfg.boundary_bias), feasible_point(rng, set, cfg.boundary_bias)),
        1 => {
            let base = match anchor {
                Some(a) => sub(a, &c),
                None => sub(&set.boundary_along(&gaussian(rng, set.dim())), &c),
            };
            let s = log_uniform(rng, 1e-3, 1.0);
            let x = if anchor.is_some() && rng.random::<bool>() {
                set.boundary_along(&base)
            } else {
                near(rng, set, &base, s)
            };
            (x, near(rng, set, &base, s))
        }
        _ => {
            let mut base = vec![0.0; set.dim()];
            let j = rng.random_range(0..set.dim());
            base[j] = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let s = log_uniform(rng, 1e-3, 0.3);
            (near(rng, set, &base, s), near(rng, set, &base, s))
        }
    }
}

/// Samples `ηx + (1−η)y + η(1−η)·α‖x−y‖^q·z` for boundary-biased pairs,
/// the η grid and `n_directions` unit `z` (plus the outward direction at
/// the chord point), and reports the worst membership excess.
pub fn check_uniform_convexity(set: &dyn FeasibleSet, uc: &UcParams, cfg: &SamplerConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let norm = set.norm();
    ensure(uc.norm == norm.tag(), || format!("parameters refer to {:?}, set uses {:?}", uc.norm, norm.tag()))?;
    let worst = (0..cfg.n_pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.stream(i);
            let (x, y) = sample_pair(set, cfg, i, None, &mut rng);
            let zs: Vec<Vec<f64>> = (0..cfg.n_directions).map(|_| unit_vector(&mut rng, &norm, set.dim())).collect();
            let dist = norm.eval(&sub(&x, &y));
            let mut w = Worst::none();
            for &eta in &ETA_GRID {
                let m: Vec<f64> = x.iter().zip(&y).map(|(a, b)| eta * a + (1.0 - eta) * b).collect();
                let pert = eta * (1.0 - eta) * uc.alpha * dist.powf(uc.q);
                let outward = set.outward_direction(&m);
                for z in outward.iter().chain(&zs) {
                    let p: Vec<f64> = m.iter().zip(z).map(|(a, b)| a + pert * b).collect();
                    let e = set.excess(&p);
                    w.offer(e, i, || json!({ "x": x, "y": y, "eta": eta, "z": z, "excess": e }));
                }
            }
            w
        })
        .reduce(Worst::none, Worst::merge);
    Ok(finish("uniform_convexity", label(set), worst, cfg.n_pairs, cfg.tol, Some(cfg.clone())))
}

/// Samples `⟨−∇f(x), v − x⟩ ≥ (α/2)‖v − x‖^q‖∇f(x)‖_*` with `v` the oracle
/// answer at `−∇f(x)`. Violations are relative to `max(1, ‖∇f‖_*‖v − x‖)`.
pub fn check_global_scaling(
    set: &dyn FeasibleSet,
    uc: &UcParams,
    f: &dyn SmoothObjective,
    cfg: &SamplerConfig,
) -> Result<CheckReport> {
    cfg.validate()?;
    let norm = set.norm();
    let dual = norm.dual();
    let worst = (0..cfg.n_pairs)
        .into_par_iter()
        .map(|i| -> Result<Worst> {
            let mut rng = cfg.stream(i);
            let (x, y) = sample_pair(set, cfg, i, None, &mut rng);
            let mut w = Worst::none();
            for p in [x, y] {
                let g = f.gradient(&p);
                let v = match set.lmo(&g.iter().map(|a| -a).collect::<Vec<_>>()) {
                    Ok(v) => v,
                    Err(Error::ZeroDirection) => continue,
                    Err(e) => return Err(e),
                };
                let d = sub(&v, &p);
                let lhs = -dot(&g, &d);
                let (dn, gn) = (norm.eval(&d), dual.eval(&g));
                let rhs = 0.5 * uc.alpha * dn.powf(uc.q) * gn;
                let viol = (rhs - lhs) / (gn * dn).max(1.0);
                w.offer(viol, i, || json!({ "x": p, "v": v, "lhs": lhs, "rhs": rhs }));
            }
            Ok(w)
        })
        .try_reduce(Worst::none, |a, b| Ok(Worst::merge(a, b)))?;
    Ok(finish("global_scaling", label(set), worst, cfg.n_pairs * 2, cfg.tol, Some(cfg.clone())))
}

/// Per-sample terms `(lhs, w, scale)` of the local scaling inequality
/// Sample index, direction, and the three scalar terms of the local inequality.
type LocalTerm = (usize, Vec<f64>, f64, f64, f64);

/// `lhs ≥ α·w` at `x_star`.
fn local_terms(
    set: &dyn FeasibleSet,
    f: &dyn SmoothObjective,
    x_star: &[f64],
    q: f64,
    cfg: &SamplerConfig,
) -> Result<Vec<LocalTerm>> {
    cfg.validate()?;
    let norm = set.norm();
    let g = f.gradient(x_star);
    let gn = norm.dual().eval(&g);
    if gn <= STALE_GRAD && f.grad_floor(set).is_some_and(|c| c > 0.0) {
        return Err(Error::StaleOptimum { grad_norm: gn });
    }
    Ok((0..cfg.n_pairs)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = cfg.stream(i);
            let (x, y) = sample_pair(set, cfg, i, Some(x_star), &mut rng);
            [x, y]
                .into_iter()
                .map(|p| {
                    let d = sub(x_star, &p);
                    let lhs = -dot(&g, &d);
                    let dn = norm.eval(&d);
                    (i, p, lhs, 0.5 * gn * dn.powf(q), (gn * dn).max(1.0))
                })
                .collect::<Vec<_>>()
        })
        .collect())
}

/// Samples `⟨−∇f(x*), x* − x⟩ ≥ (α/2)‖∇f(x*)‖_*‖x* − x‖^q`, concentrating
/// samples near `x_star`. Violations are relative to
/// `max(1, ‖∇f(x*)‖_*‖x* − x‖)`.
pub fn check_local_scaling(
    set: &dyn FeasibleSet,
    f: &dyn SmoothObjective,
    x_star: &[f64],
    alpha: f64,
    q: f64,
    cfg: &SamplerConfig,
) -> Result<CheckReport> {
    let terms = local_terms(set, f, x_star, q, cfg)?;
    let mut worst = Worst::none();
    for (i, p, lhs, w, scale) in &terms {
        let viol = (alpha * w - lhs) / scale;
        worst.offer(viol, *i, || json!({ "x": p, "lhs": lhs, "rhs": alpha * w }));
    }
    Ok(finish("local_scaling", label(set), worst, terms.len(), cfg.tol, Some(cfg.clone())))
}

/// Largest `α` (to resolution `1e-4`, by bisection) for which the local
/// scaling inequality at `x_star` holds on the sampled points. `None` if
/// it fails even at `α = 0`.
pub fn estimate_local_alpha(
    set: &dyn FeasibleSet,
    f: &dyn SmoothObjective,
    x_star: &[f64],
    q: f64,
    cfg: &SamplerConfig,
) -> Result<Option<f64>> {
    let terms = local_terms(set, f, x_star, q, cfg)?;
    let holds = |a: f64| terms.iter().all(|(_, _, lhs, w, s)| (a * w - lhs) / s <= cfg.tol);
    if !holds(0.0) {
        return Ok(None);
    }
    let mut hi = 1.0;
    while holds(hi) && hi < 1e12 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

/// Resolution below which a measured primal gap is not trusted.
pub fn gap_resolution(trace: &RunTrace) -> f64 {
    1e-12 * trace.meta.f_star.map_or(1.0, |v| v.abs().max(1.0))
}

/// Checks `‖x_t − v_t‖ ≤ H·h_t^{1/(q(q−1))}` on every record from the first
/// one with `h_t ≤ 1`. Records whose gap is below [`gap_resolution`] are
/// skipped.
pub fn check_vertex_distance(trace: &RunTrace, c: f64, alpha: f64, q: f64, l: f64, tol: f64) -> Result<CheckReport> {
    let h = trace.primal_gaps().ok_or(Error::InvalidParams("trace has no primal gaps".into()))?;
    ensure(c > 0.0 && alpha > 0.0 && l > 0.0 && q >= 2.0, || "c, alpha, L must be positive and q >= 2".into())?;
    let big_h = local_vertex_constant(c, alpha, q, l);
    let e = 1.0 / (q * (q - 1.0));
    let res = gap_resolution(trace);
    let start = h.iter().position(|v| *v <= 1.0).unwrap_or(h.len());
    let mut worst = Worst::none();
    let mut n = 0;
    for (t, rec) in trace.records.iter().enumerate().skip(start) {
        if h[t] <= res {
            continue;
        }
        n += 1;
        let rhs = big_h * h[t].powf(e);
        worst.offer(
            rec.dist_to_vertex - rhs,
            t,
            || json!({ "t": t, "h": h[t], "dist": rec.dist_to_vertex, "rhs": rhs }),
        );
    }
    Ok(finish("vertex_distance", serde_json::to_string(&trace.meta.set).unwrap_or_default(), worst, n, tol, None))
}

/// Samples `⟨v₁ − v₂, φ₁⟩ ≤ (1/α)^{1/(q−1)}‖φ₁ − φ₂‖_*^{1+1/(q−1)} /
/// max(‖φ₁‖_*, ‖φ₂‖_*)^{1/(q−1)}` with `vᵢ` the oracle answers. Violations
/// are relative to `max(1, ‖φ₁‖_*·‖v₁ − v₂‖)`.
pub fn check_lmo_stability(set: &dyn FeasibleSet, uc: &UcParams, cfg: &SamplerConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let norm = set.norm();
    let dual = norm.dual();
    let e = 1.0 / (uc.q - 1.0);
    let d = set.dim();
    let worst = (0..cfg.n_pairs)
        .into_par_iter()
        .map(|i| -> Result<Worst> {
            let mut rng = cfg.stream(i);
            let p1 = match i % 3 {
                2 => {
                    let mut b = gaussian(&mut rng, d).iter().map(|v| 1e-2 * v).collect::<Vec<_>>();
                    b[rng.random_range(0..d)] += 1.0;
                    b
                }
                _ => gaussian(&mut rng, d),
            };
            let s = if i % 3 == 0 { 1.0 } else { log_uniform(&mut rng, 1e-4, 1.0) };
            let p2: Vec<f64> = p1.iter().zip(gaussian(&mut rng, d)).map(|(a, g)| a + s * g).collect();
            let (v1, v2) = (set.lmo(&p1)?, set.lmo(&p2)?);
            let lhs = dot(&sub(&v1, &v2), &p1);
            let n1 = dual.eval(&p1);
            let rhs =
                (1.0 / uc.alpha).powf(e) * dual.eval(&sub(&p1, &p2)).powf(1.0 + e) / n1.max(dual.eval(&p2)).powf(e);
            let mut w = Worst::none();
            let scale = (n1 * norm.eval(&sub(&v1, &v2))).max(1.0);
            w.offer((lhs - rhs) / scale, i, || json!({ "phi1": p1, "phi2": p2, "lhs": lhs, "rhs": rhs }));
            Ok(w)
        })
        .try_reduce(Worst::none, |a, b| Ok(Worst::merge(a, b)))?;
    Ok(finish("lmo_stability", label(set), worst, cfg.n_pairs, cfg.tol, Some(cfg.clone())))
}

/// Brute-force comparison of the oracle at `phi` with `n` sampled boundary
/// points: returns `(oracle value, best sampled value)`.
pub fn lmo_dominance(set: &dyn FeasibleSet, phi: &[f64], n: usize, seed: u64) -> Result<(f64, f64)> {
    let v = set.lmo(phi)?;
    let chunks = 64;
    let per = n.div_ceil(chunks);
    let best = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(k as u64);
            let mut b = f64::NEG_INFINITY;
            for _ in 0..per.min(n.saturating_sub(k * per)) {
                let x = set.boundary_along(&gaussian(&mut r, set.dim()));
                b = b.max(dot(phi, &x));
            }
            b
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok((dot(phi, &v), best))
}

/// The sets every positive check runs on.
pub fn catalog() -> Vec<SetVariant> {
    let lp = |p, r, d| SetVariant::Lp(LpBall::new(p, r, d).expect("valid ball"));
    let sch = |p, m, n, r| SetVariant::Schatten(SchattenBall::new(p, m, n, r).expect("valid ball"));
    vec![
        lp(1.5, 1.0, 3),
        lp(2.0, 1.0, 3),
        lp(2.0, 5.0, 5),
        lp(2.5, 1.0, 3),
        lp(3.0, 1.0, 3),
        lp(3.0, 5.0, 4),
        lp(5.0, 2.0, 3),
        sch(1.5, 3, 2, 1.0),
        sch(3.0, 2, 2, 1.0),
        SetVariant::Level(
            LevelSet::new(WeightedSquares { weights: vec![1.0, 2.0, 4.0], center: vec![0.5, -0.2, 0.0] }, 2.0)
                .expect("valid level set"),
        ),
        SetVariant::Level(LevelSet::squared_norm(3, 2.0).expect("valid level set")),
    ]
}

/// Direction from the center towards the most symmetric boundary point
/// (`Σ e_i`, or the identity pattern for matrices).
pub fn symmetric_direction(set: &dyn FeasibleSet) -> Vec<f64> {
    match set.norm() {
        Norm::Schatten { rows, cols, .. } => {
            let mut v = vec![0.0; rows * cols];
            for k in 0..rows.min(cols) {
                v[k * rows + k] = 1.0;
            }
            v
        }
        Norm::Lp { .. } => vec![1.0; set.dim()],
    }
}

/// Test problem with an analytic constrained optimum on a set with an
/// oracle: `½‖x − x0‖₂²` with `x0` three times the symmetric boundary
/// point, so the optimum is that boundary point.
pub fn symmetric_problem(set: &dyn FeasibleSet) -> (QuadraticObjective, Vec<f64>) {
    let x_star = set.boundary_along(&symmetric_direction(set));
    let c = set.center();
    let x0 = x_star.iter().zip(&c).map(|(x, ci)| ci + 3.0 * (x - ci)).collect();
    (QuadraticObjective::isotropic(x0), x_star)
}

/// Frank-Wolfe trace on [`symmetric_problem`] with short steps, carrying
/// primal gaps.
pub fn symmetric_trace(
    set: &dyn FeasibleSet,
    rule: StepRule,
    horizon: usize,
) -> Result<(RunTrace, QuadraticObjective)> {
    let (f, x_star) = symmetric_problem(set);
    let mut start = vec![0.0; set.dim()];
    start[0] = -1.0;
    let x_init = set.boundary_along(&start);
    let tr = run_fw(set, &f, &x_init, rule, &FwConfig::new(horizon).with_optimum(x_star))?;
    Ok((tr, f))
}

/// All positive checks on [`catalog`]. Sets without an oracle only take the
/// uniform-convexity check.
pub fn positive_suite(cfg: &SamplerConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for set in catalog() {
        let uc = set.uc_params()?;
        out.push(check_uniform_convexity(&set, &uc, cfg)?);
        if matches!(set, SetVariant::Level(_)) {
            continue;
        }
        let (f, x_star) = symmetric_problem(&set);
        out.push(check_global_scaling(&set, &uc, &f, cfg)?);
        out.push(check_local_scaling(&set, &f, &x_star, uc.alpha, uc.q, cfg)?);
        out.push(check_lmo_stability(&set, &uc, cfg)?);
        let (tr, f) = symmetric_trace(&set, StepRule::SHORT, 2000)?;
        let c = f.grad_floor(&set).unwrap_or(0.0);
        let l = smoothness_in_norm(f.smoothness(), &set.norm(), set.dim());
        out.push(check_vertex_distance(&tr, c, uc.alpha, uc.q, l, cfg.tol)?);
    }
    Ok(out)
}

/// Configurations known to violate their check. Each report should fail.
pub fn negative_controls(cfg: &SamplerConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let tag = |r: CheckReport, what: &str| CheckReport { subject: format!("{} [{what}]", r.subject), ..r };

    let l3 = LpBall::new(3.0, 1.0, 2)?;
    let inflated = UcParams::new(2.0, 3.0, NormTag::Lp(3.0))?;
    out.push(tag(check_uniform_convexity(&l3, &inflated, cfg)?, "alpha inflated to 2"));

    for p in [3.0, 5.0] {
        let ball = LpBall::new(p, 1.0, 2)?;
        let (a, q) = nominal_unit_ball_params(p);
        let nominal = UcParams::new(a, q, NormTag::Lp(p))?;
        out.push(tag(check_uniform_convexity(&ball, &nominal, cfg)?, "alpha = 1/p"));
    }
    let sch = SchattenBall::new(3.0, 2, 2, 1.0)?;
    let (a, q) = nominal_unit_ball_params(3.0);
    out.push(tag(check_uniform_convexity(&sch, &UcParams::new(a, q, NormTag::Schatten(3.0))?, cfg)?, "alpha = 1/p"));

    let lvl = LevelSet::squared_norm(3, 2.0)?;
    let proof = lvl.uc_params()?;
    let statement = UcParams { alpha: 2.0 * proof.alpha, ..proof };
    out.push(tag(check_uniform_convexity(&lvl, &statement, cfg)?, "alpha = mu/sqrt(2wL)"));

    // The l1 ball has flat faces: any claimed curvature fails.
    let (l1, f, x_star) = l1_face_problem()?;
    let fake = UcParams::new(0.1, 2.0, NormTag::Lp(1.0))?;
    out.push(tag(check_global_scaling(&l1, &fake, &f, cfg)?, "fabricated (0.1, 2)"));
    out.push(tag(check_local_scaling(&l1, &f, &x_star, 0.1, 2.0, cfg)?, "fabricated (0.1, 2)"));
    let tr = l1_face_trace(20_000)?;
    let c = f.grad_floor(&l1).unwrap_or(0.0);
    let l = smoothness_in_norm(1.0, &l1.norm(), 3);
    out.push(tag(check_vertex_distance(&tr, c, 0.1, 2.0, l, cfg.tol)?, "polytope trace"));
    Ok(out)
}

/// `½‖x − x0‖₂²` over the unit `ℓ1` ball in `d = 3` with `x0` far along
/// `Σ e_i`, slightly perturbed so the optimum is an irrational point in the
/// interior of the positive face.
pub fn l1_face_problem() -> Result<(L1Ball, QuadraticObjective, Vec<f64>)> {
    let x0 = vec![10.0, 10.0 + 0.1 * std::f64::consts::SQRT_2, 10.0 - 0.1 * std::f64::consts::PI / 3.0];
    let shift = (x0.iter().sum::<f64>() - 1.0) / 3.0;
    let x_star = x0.iter().map(|v| v - shift).collect();
    Ok((L1Ball::new(1.0, 3)?, QuadraticObjective::isotropic(x0), x_star))
}

/// Frank-Wolfe with exact line search on [`l1_face_problem`]: iterates
/// approach the optimum while the oracle keeps returning vertices.
pub fn l1_face_trace(horizon: usize) -> Result<RunTrace> {
    let (l1, f, x_star) = l1_face_problem()?;
    run_fw(&l1, &f, &[-1.0, 0.0, 0.0], StepRule::ExactLineSearch, &FwConfig::new(horizon).with_optimum(x_star))
}
