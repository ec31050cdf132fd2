use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use ucfw_core::bounds::{recursion_bound, BOUND_SLACK};
use ucfw_core::objectives::{NamedDirection, ObjectiveFamily, X0Direction};
use ucfw_core::online::{OnlineConfig, X1Policy};
use ucfw_core::solver::DEFAULT_STOP_GAP;
use ucfw_core::stats::loglog_slope;
use ucfw_core::verify::{negative_controls, positive_suite, CheckReport, SamplerConfig};
use ucfw_core::{run_ftl, LossStream, ObjectiveDescriptor, OnlineTrace, SetDescriptor, StepRule};

use crate::config::{ExperimentConfig, Location};
use crate::experiment::{run_experiment, Bundle};
use crate::output::{write_atomic, write_json, write_manifest};
use crate::svg::{log_plot, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SuiteTag {
    Fig2,
    Online,
    #[value(name = "verify_all")]
    VerifyAll,
    #[value(name = "bounds_grid")]
    BoundsGrid,
}

impl SuiteTag {
    pub fn name(self) -> &'static str {
        match self {
            SuiteTag::Fig2 => "fig2",
            SuiteTag::Online => "online",
            SuiteTag::VerifyAll => "verify_all",
            SuiteTag::BoundsGrid => "bounds_grid",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub tag: SuiteTag,
    pub pass: bool,
    pub dir: PathBuf,
    pub detail: serde_json::Value,
}

pub fn run_suite(tag: SuiteTag, out: &Path, seed: u64) -> Result<SuiteOutcome> {
    let dir = out.join(tag.name());
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let (pass, detail) = match tag {
        SuiteTag::Fig2 => {
            let bundles = fig2(&dir, seed)?;
            let checks = Fig2Checks::evaluate(&bundles);
            write_json(&dir.join("checks.json"), &checks)?;
            let mut files: Vec<PathBuf> = bundles.iter().flat_map(|(_, b)| b.files.clone()).collect();
            files.push(dir.join("checks.json"));
            write_manifest(&dir, &files)?;
            (checks.pass(), serde_json::to_value(&checks)?)
        }
        SuiteTag::Online => {
            let runs = online_sweep(ONLINE_HORIZON, seed);
            let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
            let report = write_online(&dir, &runs)?;
            (report.iter().all(|r| r.bound_holds), serde_json::to_value(&report)?)
        }
        SuiteTag::VerifyAll => {
            let cfg = SamplerConfig { seed, ..SamplerConfig::default() };
            let report = VerifyReport::run(&cfg)?;
            write_json(&dir.join("report.json"), &report)?;
            write_manifest(&dir, &[dir.join("report.json")])?;
            (
                report.pass(),
                serde_json::json!({ "positive_pass": report.positives_pass(), "negatives_fail": report.negatives_fail() }),
            )
        }
        SuiteTag::BoundsGrid => {
            let grid = bounds_grid(GRID_STEPS);
            write_grid(&dir, &grid)?;
            let failed: Vec<&GridPoint> = grid.iter().filter(|g| !g.pass).collect();
            (failed.is_empty(), serde_json::json!({ "points": grid.len(), "failed": failed }))
        }
    };
    Ok(SuiteOutcome { tag, pass, dir, detail })
}

// ---- fig2 -----------------------------------------------------------------

pub const FIG2_P_GRID: [f64; 5] = [2.1, 2.5, 3.0, 5.0, 10.0];
pub const FIG2_HORIZON: usize = 1000;

pub fn fig2_config(loc: Location, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        name: format!("{} location", loc.name()),
        problem: ObjectiveDescriptor {
            family: ObjectiveFamily::Quadratic,
            dim: 10,
            cond: 100.0,
            x0_direction: X0Direction::Named(NamedDirection::Ones),
            x0_scale: 1.0,
            x0_norm_p: 2.0,
            seed,
        },
        set: SetDescriptor::Lp { p: 2.0, radius: 5.0, dim: 10 },
        p_grid: FIG2_P_GRID.to_vec(),
        rules: vec![StepRule::DETERMINISTIC, StepRule::SHORT, StepRule::ExactLineSearch],
        horizon: FIG2_HORIZON,
        seed,
        optimum_location: Some(loc),
        reference_steps: 20_000,
        output_dir: None,
    }
}

/// Both locations, curved first.
pub fn fig2(dir: &Path, seed: u64) -> Result<Vec<(Location, Bundle)>> {
    [Location::Curved, Location::Flat]
        .into_iter()
        .map(|loc| Ok((loc, run_experiment(&fig2_config(loc, seed), &dir.join(loc.name()))?)))
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Speedup {
    pub p: f64,
    pub curved: f64,
    pub flat: f64,
    /// The flat run stopped on the gap threshold, so its final value only
    /// bounds the true gap from above and the ratio is not certified.
    pub censored: bool,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlopeCheck {
    pub location: Location,
    pub p: f64,
    pub slope: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fig2Checks {
    /// Short step, `p ≤ 3`: curved final min-gap at least 10× below flat.
    pub speedups: Vec<Speedup>,
    /// Deterministic rule: min-gap slope in `[−1.4, −0.6]`.
    pub slopes: Vec<SlopeCheck>,
    /// Short step final min-gaps are nondecreasing in `p`, per location.
    pub ordered_by_p: Vec<(Location, bool)>,
}

impl Fig2Checks {
    pub fn evaluate(bundles: &[(Location, Bundle)]) -> Self {
        let get = |loc: Location| &bundles.iter().find(|(l, _)| *l == loc).expect("both locations").1;
        let (curved, flat) = (get(Location::Curved), get(Location::Flat));
        let short = StepRule::SHORT.name();
        let speedups = FIG2_P_GRID
            .iter()
            .filter(|p| **p <= 3.0)
            .map(|&p| {
                let c = curved.run(short, Some(p)).expect("curved run");
                let f = flat.run(short, Some(p)).expect("flat run");
                let censored = f.final_min_fw_gap <= DEFAULT_STOP_GAP;
                let ratio = f.final_min_fw_gap / c.final_min_fw_gap;
                Speedup {
                    p,
                    curved: c.final_min_fw_gap,
                    flat: f.final_min_fw_gap,
                    censored,
                    ratio,
                    pass: !censored && ratio >= 10.0,
                }
            })
            .collect();
        let det = StepRule::DETERMINISTIC.name();
        let slopes = bundles
            .iter()
            .flat_map(|(loc, b)| {
                FIG2_P_GRID.iter().map(move |&p| {
                    let slope = b.run(det, Some(p)).and_then(|r| r.min_gap_slope);
                    SlopeCheck { location: *loc, p, slope, pass: slope.is_some_and(|s| (-1.4..=-0.6).contains(&s)) }
                })
            })
            .collect();
        let ordered_by_p = bundles
            .iter()
            .map(|(loc, b)| {
                let finals: Vec<f64> =
                    FIG2_P_GRID.iter().filter_map(|&p| b.run(short, Some(p)).map(|r| r.final_min_fw_gap)).collect();
                (*loc, finals.windows(2).all(|w| w[0] <= w[1]))
            })
            .collect();
        Self { speedups, slopes, ordered_by_p }
    }

    pub fn speedups_pass(&self) -> bool {
        self.speedups.iter().all(|s| s.pass)
    }

    pub fn slopes_pass(&self) -> bool {
        self.slopes.iter().all(|s| s.pass)
    }

    pub fn pass(&self) -> bool {
        self.speedups_pass() && self.slopes_pass()
    }
}

// ---- online ---------------------------------------------------------------

pub const ONLINE_HORIZON: usize = 100_000;
pub const ONLINE_Q: [f64; 4] = [2.0, 2.5, 3.0, 5.0];

/// Streams of the online sweep on the unit `ℓq` ball in `ℝ³`.
pub fn online_streams(seed: u64) -> Vec<(&'static str, LossStream)> {
    vec![
        // ‖base‖₂ − 0.3·√3 > 0.6, so every running average stays above 0.5
        ("drifting", LossStream::DriftingMean { base: vec![1.0, -0.5, 0.2], noise_scale: 0.3, seed }),
        // keeps the leader switching sides around the flat point e₁
        (
            "adversarial",
            LossStream::Adversarial { mean: vec![-1.0, 0.0, 0.0], perp: vec![0.0, 1.0, 0.0], amplitude: 0.5, seed },
        ),
    ]
}

#[derive(Debug, Clone)]
pub struct OnlineRun {
    pub q: f64,
    pub stream: &'static str,
    pub trace: OnlineTrace,
}

pub fn online_sweep(horizon: usize, seed: u64) -> Vec<Result<OnlineRun>> {
    let jobs: Vec<(f64, &'static str, LossStream)> =
        ONLINE_Q.iter().flat_map(|&q| online_streams(seed).into_iter().map(move |(n, s)| (q, n, s))).collect();
    jobs.into_par_iter()
        .map(|(q, name, stream)| {
            let ball = SetDescriptor::Lp { p: q, radius: 1.0, dim: 3 }.build()?;
            let cfg = OnlineConfig { horizon, x1: X1Policy::MeanHint, keep_vectors: false };
            Ok(OnlineRun { q, stream: name, trace: run_ftl(&ball, &stream, &cfg)? })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OnlineReport {
    pub q: f64,
    pub stream: String,
    pub final_regret: f64,
    pub final_bound: Option<f64>,
    pub l_t: f64,
    /// Log-log slope of the regret over `t ∈ [10², T]`.
    pub slope: Option<f64>,
    pub bound_holds: bool,
}

pub fn online_report(run: &OnlineRun) -> OnlineReport {
    let rounds = &run.trace.rounds;
    let from = 99.min(rounds.len());
    let t: Vec<f64> = rounds[from..].iter().map(|r| r.t as f64).collect();
    let reg: Vec<f64> = rounds[from..].iter().map(|r| r.regret).collect();
    let last = rounds.last();
    OnlineReport {
        q: run.q,
        stream: run.stream.into(),
        final_regret: last.map_or(0.0, |r| r.regret),
        final_bound: last.and_then(|r| r.bound),
        l_t: run.trace.l_t(),
        slope: loglog_slope(&t, &reg),
        bound_holds: rounds.iter().all(|r| r.bound.is_some_and(|b| r.regret <= b)),
    }
}

#[derive(Serialize)]
struct RegretRow {
    t: usize,
    regret: f64,
    bound: Option<f64>,
    l_t: f64,
    m_loss: f64,
}

fn write_online(dir: &Path, runs: &[OnlineRun]) -> Result<Vec<OnlineReport>> {
    let mut files = Vec::new();
    let mut series = Vec::new();
    for run in runs {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &run.trace.rounds {
            w.serialize(RegretRow { t: r.t, regret: r.regret, bound: r.bound, l_t: r.l_t, m_loss: r.m_loss })?;
        }
        let path = dir.join(format!("regret_q{}_{}.csv", run.q, run.stream));
        write_atomic(&path, &w.into_inner().context("flushing csv")?)?;
        files.push(path);
        series.push(Series {
            label: format!("q = {} {}", run.q, run.stream),
            points: run.trace.rounds.iter().step_by(100).map(|r| (r.t as f64, r.regret)).collect(),
        });
    }
    let svg = dir.join("regret.svg");
    write_atomic(&svg, log_plot("Follow-The-Leader regret", "round", "regret", &series).as_bytes())?;
    files.push(svg);
    let report: Vec<OnlineReport> = runs.iter().map(online_report).collect();
    let path = dir.join("report.json");
    write_json(&path, &report)?;
    files.push(path);
    write_manifest(dir, &files)?;
    Ok(report)
}

// ---- verify_all -----------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub positive: Vec<CheckReport>,
    pub negative: Vec<CheckReport>,
}

impl VerifyReport {
    pub fn run(cfg: &SamplerConfig) -> Result<Self> {
        Ok(Self { positive: positive_suite(cfg)?, negative: negative_controls(cfg)? })
    }

    pub fn positives_pass(&self) -> bool {
        self.positive.iter().all(|r| r.pass)
    }

    pub fn negatives_fail(&self) -> bool {
        self.negative.iter().all(|r| !r.pass)
    }

    pub fn pass(&self) -> bool {
        self.positives_pass() && self.negatives_fail()
    }
}

// ---- bounds_grid ----------------------------------------------------------

pub const GRID_STEPS: usize = 100_000;
pub const GRID_ETA: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
pub const GRID_C: [f64; 3] = [0.01, 0.1, 1.0];
pub const GRID_H0: [f64; 3] = [0.5, 1.0, 10.0];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridPoint {
    pub eta: f64,
    pub c: f64,
    pub h0: f64,
    pub k: f64,
    pub m_rate: f64,
    pub pass: bool,
    pub first_violation: Option<usize>,
    /// `max_t h_t / bound(t)`.
    pub worst_ratio: f64,
}

/// Iterates `h_{t+1} = h_t·max{1/2, 1 − C·h_t^η}` for `steps` steps on one
/// point and compares with the closed-form bound (slack [`BOUND_SLACK`]).
pub fn grid_point(eta: f64, c: f64, h0: f64, steps: usize) -> Result<GridPoint> {
    let rc = recursion_bound(eta, c, h0)?;
    let mut h = h0;
    let mut first = None;
    let mut worst = 0.0_f64;
    for t in 0..=steps {
        let b = rc.evaluate(t as f64);
        if b.is_finite() && b > 0.0 {
            worst = worst.max(h / b);
        }
        if first.is_none() && h > b + BOUND_SLACK * b.abs().max(1.0) {
            first = Some(t);
        }
        h *= 0.5_f64.max(1.0 - c * h.powf(eta));
    }
    Ok(GridPoint {
        eta,
        c,
        h0,
        k: rc.k,
        m_rate: rc.m_rate(),
        pass: first.is_none(),
        first_violation: first,
        worst_ratio: worst,
    })
}

/// The 90-point grid, in `(η, C, h0)` lexicographic order.
pub fn bounds_grid(steps: usize) -> Vec<GridPoint> {
    let pts: Vec<(f64, f64, f64)> = GRID_ETA
        .iter()
        .flat_map(|&e| GRID_C.iter().flat_map(move |&c| GRID_H0.iter().map(move |&h| (e, c, h))))
        .collect();
    pts.par_iter().map(|&(e, c, h)| grid_point(e, c, h, steps).expect("grid parameters are valid")).collect()
}

fn write_grid(dir: &Path, grid: &[GridPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for g in grid {
        w.serialize(g)?;
    }
    let path = dir.join("grid.csv");
    write_atomic(&path, &w.into_inner().context("flushing csv")?)?;
    write_manifest(dir, &[path])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_point_example() {
        let g = grid_point(0.5, 1.0, 1.0, 10_000).unwrap();
        assert!(g.pass);
        assert!((g.m_rate - 23.31).abs() < 0.01);
    }

    #[test]
    fn grid_point_with_initial_halving_is_flagged() {
        let g = grid_point(0.5, 1.0, 10.0, 100).unwrap();
        assert_eq!(g.first_violation, Some(1));
    }

    #[test]
    fn suite_names_parse() {
        use clap::ValueEnum;
        for t in [SuiteTag::Fig2, SuiteTag::Online, SuiteTag::VerifyAll, SuiteTag::BoundsGrid] {
            assert_eq!(SuiteTag::from_str(t.name(), false).unwrap(), t);
        }
    }
}
