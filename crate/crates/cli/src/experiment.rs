use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use ucfw_core::bounds::{
    check_gaps, error_bound_rate, first_at_most, gradient_floor_bound, local_scaling_bound, RateBound,
};
use ucfw_core::norms::{norm_upper_from_euclidean, smoothness_in_norm};
use ucfw_core::solver::{reference_optimum, seeded_start, StopReason};
use ucfw_core::stats::loglog_slope;
use ucfw_core::{run_fw, FeasibleSet, FwConfig, RunTrace, SmoothObjective, StepRule};

use crate::config::{ExperimentConfig, Instance};
use crate::output::{write_atomic, write_json};
use crate::svg::{log_plot, Series};

/// Bound curves overlaid on a trace. `None` entries are not applicable.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Overlay {
    pub floor: Option<RateBound>,
    pub local: Option<(usize, RateBound)>,
    pub heb: Option<RateBound>,
}

impl Overlay {
    fn at(&self, t: usize) -> [Option<f64>; 3] {
        let floor = self.floor.map(|b| b.evaluate(t as f64));
        let local = self.local.and_then(|(t0, b)| (t >= t0).then(|| b.evaluate((t - t0) as f64)));
        let heb = self.heb.map(|b| b.evaluate(t as f64));
        [floor, local, heb]
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundStatus {
    pub bound: String,
    pub pass: bool,
    pub violations: usize,
    pub max_ratio: f64,
}

/// Per-run summary written next to the CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub stem: String,
    pub rule: String,
    pub p: Option<f64>,
    pub set: String,
    pub iterations: usize,
    pub stop_reason: StopReason,
    pub final_fw_gap: f64,
    pub final_min_fw_gap: f64,
    pub final_primal_gap: Option<f64>,
    /// Log-log slope of the running-min gap over `t ∈ [10, T]`.
    pub min_gap_slope: Option<f64>,
    pub grad_floor: Option<f64>,
    pub alpha: Option<f64>,
    pub q: Option<f64>,
    pub smoothness: f64,
    pub bounds: Vec<BoundStatus>,
}

impl RunSummary {
    pub fn bounds_pass(&self) -> bool {
        self.bounds.iter().all(|b| b.pass)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bundle {
    pub name: String,
    pub dir: PathBuf,
    pub runs: Vec<RunSummary>,
    pub files: Vec<PathBuf>,
}

impl Bundle {
    pub fn pass(&self) -> bool {
        self.runs.iter().all(RunSummary::bounds_pass)
    }

    pub fn run(&self, rule: &str, p: Option<f64>) -> Option<&RunSummary> {
        self.runs.iter().find(|r| r.rule == rule && r.p == p)
    }
}

#[derive(Serialize)]
struct Row {
    t: usize,
    gamma: f64,
    fw_gap: f64,
    min_fw_gap: f64,
    primal_gap: Option<f64>,
    dist_to_vertex: f64,
    grad_dual_norm: f64,
    value: f64,
    bound_floor: Option<f64>,
    bound_local: Option<f64>,
    bound_heb: Option<f64>,
}

/// The bound curves that apply to `trace`. Without primal gaps the curves
/// start from the first FW gap, which dominates `h0`.
pub fn overlay(set: &dyn FeasibleSet, f: &dyn SmoothObjective, trace: &RunTrace) -> Overlay {
    let Ok(uc) = set.uc_params() else {
        return Overlay::default();
    };
    let norm = set.norm();
    let l = smoothness_in_norm(f.smoothness(), &norm, set.dim());
    let h = trace.primal_gaps();
    let h0 = h.as_ref().map_or(trace.records[0].fw_gap, |h| h[0]).max(0.0);
    let c = f.grad_floor(set).filter(|c| *c > 0.0);
    let floor = c.and_then(|c| gradient_floor_bound(c, uc.alpha, uc.q, l, h0).ok());
    let local = match (c, &h) {
        (Some(c), Some(h)) => first_at_most(h, 1.0)
            .and_then(|t0| local_scaling_bound(c, uc.alpha, uc.q, l, h[t0].max(0.0)).ok().map(|b| (t0, b))),
        _ => None,
    };
    let heb = f.heb().and_then(|e| {
        let mu = norm_upper_from_euclidean(e.mu, &norm, set.dim());
        error_bound_rate(uc.alpha, uc.q, mu, e.theta, l, h0).ok()
    });
    Overlay { floor, local, heb }
}

fn statuses(trace: &RunTrace, ov: &Overlay) -> Vec<BoundStatus> {
    let Some(h) = trace.primal_gaps() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut push = |name: &str, b: &RateBound, burn: usize| {
        let c = check_gaps(&h, b, burn);
        out.push(BoundStatus {
            bound: name.into(),
            pass: c.passed(),
            violations: c.violations.len(),
            max_ratio: c.max_ratio,
        });
    };
    if let Some(b) = &ov.floor {
        push("floor", b, 0);
    }
    if let Some((t0, b)) = &ov.local {
        push("local", b, *t0);
    }
    if let Some(b) = &ov.heb {
        push("heb", b, 0);
    }
    out
}

pub fn trace_csv(trace: &RunTrace, ov: &Overlay) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &trace.records {
        let [bound_floor, bound_local, bound_heb] = ov.at(r.t);
        w.serialize(Row {
            t: r.t,
            gamma: r.gamma,
            fw_gap: r.fw_gap,
            min_fw_gap: r.min_fw_gap,
            primal_gap: r.primal_gap,
            dist_to_vertex: r.dist_to_vertex,
            grad_dual_norm: r.grad_dual_norm,
            value: r.value,
            bound_floor,
            bound_local,
            bound_heb,
        })?;
    }
    w.into_inner().context("flushing csv")
}

fn stem(inst: &Instance, rule: &StepRule) -> String {
    match inst.p {
        Some(p) => format!("{}_p{}", rule.name(), p),
        None => rule.name().to_string(),
    }
}

struct Done {
    summary: RunSummary,
    trace: RunTrace,
    files: Vec<PathBuf>,
}

fn run_one(
    inst: &Instance,
    rule: StepRule,
    cfg: &ExperimentConfig,
    x_star: Option<&Vec<f64>>,
    dir: &Path,
) -> Result<Done> {
    let f = inst.problem.build()?;
    let set = &inst.set;
    let x_init = seeded_start(set, cfg.seed)?;
    let mut fw = FwConfig::new(cfg.horizon);
    fw.seed = Some(cfg.seed);
    if let Some(xs) = x_star {
        fw = fw.with_optimum(xs.clone());
    }
    let stem = stem(inst, &rule);
    let trace = run_fw(set, &f, &x_init, rule, &fw).with_context(|| format!("sub-run {stem}"))?;
    let ov = overlay(set, &f, &trace);
    let csv_path = dir.join(format!("{stem}.csv"));
    write_atomic(&csv_path, &trace_csv(&trace, &ov)?)?;

    let t: Vec<f64> = trace.records.iter().map(|r| r.t as f64).collect();
    let from = t.iter().position(|v| *v >= 10.0).unwrap_or(t.len());
    let last = trace.last();
    let uc = set.uc_params().ok();
    let summary = RunSummary {
        stem: stem.clone(),
        rule: rule.name().into(),
        p: inst.p,
        set: set.label(),
        iterations: last.t,
        stop_reason: trace.meta.stop_reason,
        final_fw_gap: last.fw_gap,
        final_min_fw_gap: last.min_fw_gap,
        final_primal_gap: last.primal_gap,
        min_gap_slope: loglog_slope(&t[from..], &trace.min_fw_gaps()[from..]),
        grad_floor: f.grad_floor(set),
        alpha: uc.map(|u| u.alpha),
        q: uc.map(|u| u.q),
        smoothness: smoothness_in_norm(f.smoothness(), &set.norm(), set.dim()),
        bounds: statuses(&trace, &ov),
    };
    let json_path = dir.join(format!("{stem}.json"));
    write_json(&json_path, &serde_json::json!({ "summary": summary, "meta": trace.meta, "overlay": ov }))?;
    Ok(Done { summary, trace, files: vec![csv_path, json_path] })
}

/// Runs every (p, rule) pair of `cfg` into `out`, then writes one SVG per
/// rule, `summary.json` and finally `manifest.json`.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<Bundle> {
    let instances = cfg.instances()?;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let optima: Vec<Option<Vec<f64>>> = instances
        .par_iter()
        .map(|inst| -> Result<Option<Vec<f64>>> {
            if cfg.reference_steps == 0 {
                return Ok(None);
            }
            let f = inst.problem.build()?;
            let x = seeded_start(&inst.set, cfg.seed)?;
            Ok(Some(reference_optimum(&inst.set, &f, &x, cfg.reference_steps)?.0))
        })
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, StepRule)> =
        (0..instances.len()).flat_map(|i| cfg.rules.iter().map(move |r| (i, *r))).collect();
    let done: Vec<Done> = jobs
        .par_iter()
        .map(|(i, rule)| run_one(&instances[*i], *rule, cfg, optima[*i].as_ref(), out))
        .collect::<Result<_>>()?;

    let mut files: Vec<PathBuf> = done.iter().flat_map(|d| d.files.clone()).collect();
    for rule in &cfg.rules {
        let series: Vec<Series> = done
            .iter()
            .filter(|d| d.trace.meta.rule == *rule)
            .map(|d| Series {
                label: d.summary.p.map_or_else(|| d.summary.set.clone(), |p| format!("p = {p}")),
                points: d.trace.records.iter().map(|r| (r.t as f64, r.min_fw_gap)).collect(),
            })
            .collect();
        let title = format!("{}: {}", cfg.name, rule.name());
        let path = out.join(format!("{}.svg", rule.name()));
        write_atomic(&path, log_plot(&title, "iteration", "min FW gap", &series).as_bytes())?;
        files.push(path);
    }
    let runs: Vec<RunSummary> = done.into_iter().map(|d| d.summary).collect();
    let summary = out.join("summary.json");
    write_json(&summary, &serde_json::json!({ "config": cfg, "runs": runs }))?;
    files.push(summary);
    let bundle = Bundle { name: cfg.name.clone(), dir: out.to_path_buf(), runs, files };
    crate::output::write_manifest(out, &bundle.files)?;
    Ok(bundle)
}
