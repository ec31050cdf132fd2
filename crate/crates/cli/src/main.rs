use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use ucfw_cli::config::{env_seed, read_json};
use ucfw_cli::output::{write_atomic, write_json};
use ucfw_cli::suite::{online_report, OnlineRun};
use ucfw_cli::{run_experiment, run_suite, ExperimentConfig, SuiteTag};
use ucfw_core::online::{OnlineConfig, X1Policy};
use ucfw_core::verify::{self, SamplerConfig};
use ucfw_core::{run_ftl, FeasibleSet, LossStream, SetDescriptor, SmoothObjective, StepRule, UcParams};

#[derive(Parser)]
#[command(name = "ucfw", version, about = "Frank-Wolfe experiments over uniformly convex sets")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = "ucfw-out")]
    out: PathBuf,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one experiment config.
    Solve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a canned suite.
    Suite {
        tag: SuiteTag,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run one geometric check on a set (JSON inline or a path).
    Verify {
        #[arg(long)]
        set: String,
        #[arg(long)]
        check: Check,
        /// Override the catalog parameters, as `{"alpha": .., "q": .., "norm": ..}`.
        #[arg(long)]
        uc: Option<String>,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 50)]
        directions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Play Follow-The-Leader from a config.
    Online {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Check {
    #[value(name = "uniform_convexity")]
    UniformConvexity,
    #[value(name = "global_scaling")]
    GlobalScaling,
    #[value(name = "local_scaling")]
    LocalScaling,
    #[value(name = "lmo_stability")]
    LmoStability,
    #[value(name = "vertex_distance")]
    VertexDistance,
}

#[derive(Debug, Serialize, Deserialize)]
struct OnlineExperiment {
    #[serde(default = "online_name")]
    name: String,
    set: SetDescriptor,
    stream: LossStream,
    horizon: usize,
    #[serde(default)]
    x1: X1Policy,
}

fn online_name() -> String {
    "online".into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Solve { config } => {
            let cfg = ExperimentConfig::from_path(&config)?.with_env_seed()?;
            let out = cfg.output_dir.clone().unwrap_or(cli.out);
            let bundle = run_experiment(&cfg, &out)?;
            for r in &bundle.runs {
                let gaps = r.bounds.iter().map(|b| format!("{}={}", b.bound, if b.pass { "ok" } else { "VIOLATED" }));
                println!(
                    "{:<28} t={:<6} min_gap={:<12.3e} slope={:<8} {}",
                    r.stem,
                    r.iterations,
                    r.final_min_fw_gap,
                    r.min_gap_slope.map_or("-".into(), |s| format!("{s:.3}")),
                    gaps.collect::<Vec<_>>().join(" ")
                );
            }
            println!("wrote {}", bundle.dir.display());
            Ok(bundle.pass())
        }
        Cmd::Suite { tag, seed } => {
            let seed = env_seed()?.unwrap_or(seed);
            let o = run_suite(tag, &cli.out, seed)?;
            println!("{}", serde_json::to_string_pretty(&o.detail)?);
            println!("{}: {} ({})", tag.name(), if o.pass { "PASS" } else { "FAIL" }, o.dir.display());
            Ok(o.pass)
        }
        Cmd::Verify { set, check, uc, pairs, directions, seed } => {
            let desc: SetDescriptor = read_json(&set)?;
            let set = desc.build()?;
            let uc: UcParams = match uc {
                Some(s) => read_json(&s)?,
                None => set.uc_params()?,
            };
            let cfg = SamplerConfig {
                n_pairs: pairs,
                n_directions: directions,
                seed: env_seed()?.unwrap_or(seed),
                ..SamplerConfig::default()
            };
            let report = match check {
                Check::UniformConvexity => verify::check_uniform_convexity(&set, &uc, &cfg)?,
                Check::GlobalScaling => {
                    let (f, _) = verify::symmetric_problem(&set);
                    verify::check_global_scaling(&set, &uc, &f, &cfg)?
                }
                Check::LocalScaling => {
                    let (f, x_star) = verify::symmetric_problem(&set);
                    verify::check_local_scaling(&set, &f, &x_star, uc.alpha, uc.q, &cfg)?
                }
                Check::LmoStability => verify::check_lmo_stability(&set, &uc, &cfg)?,
                Check::VertexDistance => {
                    let (tr, f) = verify::symmetric_trace(&set, StepRule::SHORT, 2000)?;
                    let Some(c) = f.grad_floor(&set).filter(|c| *c > 0.0) else {
                        bail!("no positive gradient floor for {}", set.label());
                    };
                    let l = ucfw_core::norms::smoothness_in_norm(f.smoothness(), &set.norm(), set.dim());
                    verify::check_vertex_distance(&tr, c, uc.alpha, uc.q, l, cfg.tol)?
                }
            };
            let path = cli.out.join(format!("verify_{}.json", report.check));
            write_json(&path, &report)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.pass)
        }
        Cmd::Online { config } => {
            let mut cfg: OnlineExperiment = read_json(&config.to_string_lossy())?;
            if let Some(s) = env_seed()? {
                match &mut cfg.stream {
                    LossStream::DriftingMean { seed, .. } | LossStream::Adversarial { seed, .. } => *seed = s,
                    LossStream::Fixed { .. } => {}
                }
            }
            let set = cfg.set.build()?;
            let oc = OnlineConfig { horizon: cfg.horizon, x1: cfg.x1.clone(), keep_vectors: false };
            let trace = run_ftl(&set, &cfg.stream, &oc).context("online run")?;
            let dir = cli.out.join(&cfg.name);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["t", "loss", "regret", "bound", "l_t", "m_loss"])?;
            for r in &trace.rounds {
                let b = r.bound.map_or(String::new(), |b| b.to_string());
                w.write_record([
                    r.t.to_string(),
                    r.loss.to_string(),
                    r.regret.to_string(),
                    b,
                    r.l_t.to_string(),
                    r.m_loss.to_string(),
                ])?;
            }
            write_atomic(&dir.join("regret.csv"), &w.into_inner().context("flushing csv")?)?;
            let q = trace.q.unwrap_or(f64::NAN);
            let report = online_report(&OnlineRun { q, stream: "config", trace });
            write_json(&dir.join("report.json"), &report)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.bound_holds)
        }
    }
}
