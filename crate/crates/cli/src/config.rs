use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use ucfw_core::objectives::X0Direction;
use ucfw_core::verify::symmetric_direction;
use ucfw_core::{FeasibleSet, ObjectiveDescriptor, SetDescriptor, SetVariant, StepRule};

/// Seed override for every seeded config.
pub const SEED_ENV: &str = "UCFW_SEED";

/// Where the unconstrained minimizer sits relative to the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    /// Along `Σ e_i`, where an ℓp ball with `p > 2` is most curved.
    Curved,
    /// Along `e₁`, where it is flattest.
    Flat,
}

impl Location {
    pub fn name(self) -> &'static str {
        match self {
            Location::Curved => "curved",
            Location::Flat => "flat",
        }
    }

    fn direction(self, set: &dyn FeasibleSet) -> Vec<f64> {
        match self {
            Location::Curved => symmetric_direction(set),
            Location::Flat => {
                let mut e = vec![0.0; set.dim()];
                e[0] = 1.0;
                e
            }
        }
    }
}

/// Scale of `x0` relative to the boundary point along the chosen direction.
pub const X0_SCALE: f64 = 3.0;

fn default_name() -> String {
    "experiment".into()
}

fn default_rules() -> Vec<StepRule> {
    vec![StepRule::DETERMINISTIC, StepRule::SHORT, StepRule::ExactLineSearch]
}

fn default_reference() -> usize {
    20_000
}

/// One solver experiment: a problem family swept over step rules and,
/// optionally, over the exponent `p` of the set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub problem: ObjectiveDescriptor,
    pub set: SetDescriptor,
    /// Replaces `p` in the set descriptor, one sub-run per value.
    #[serde(default)]
    pub p_grid: Vec<f64>,
    #[serde(default = "default_rules")]
    pub rules: Vec<StepRule>,
    pub horizon: usize,
    #[serde(default)]
    pub seed: u64,
    /// Overrides the problem's `x0`: `3×` the boundary point along the
    /// location's direction.
    #[serde(default)]
    pub optimum_location: Option<Location>,
    /// Exact-line-search steps for the reference optimum; 0 skips primal gaps.
    #[serde(default = "default_reference")]
    pub reference_steps: usize,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

/// A fully built sub-problem.
#[derive(Debug, Clone)]
pub struct Instance {
    pub p: Option<f64>,
    pub set: SetVariant,
    pub problem: ObjectiveDescriptor,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Applies [`SEED_ENV`] when set.
    pub fn with_env_seed(mut self) -> Result<Self> {
        if let Some(s) = env_seed()? {
            self.seed = s;
            self.problem.seed = s;
        }
        Ok(self)
    }

    /// Builds and validates every sub-problem before anything runs.
    pub fn instances(&self) -> Result<Vec<Instance>> {
        ensure!(self.horizon > 0, "horizon must be positive");
        ensure!(!self.rules.is_empty(), "at least one step rule is required");
        let descriptors: Vec<(Option<f64>, SetDescriptor)> = if self.p_grid.is_empty() {
            vec![(None, self.set.clone())]
        } else {
            self.p_grid.iter().map(|&p| Ok((Some(p), with_p(&self.set, p)?))).collect::<Result<_>>()?
        };
        descriptors
            .into_iter()
            .map(|(p, d)| {
                let set = d.build().with_context(|| format!("set {d:?}"))?;
                let mut problem = self.problem.clone();
                ensure!(problem.dim == set.dim(), "problem dim {} does not match set dim {}", problem.dim, set.dim());
                if let Some(loc) = self.optimum_location {
                    let x0 = placed_x0(&set, loc);
                    problem.x0_scale = ucfw_core::norms::lp_norm(&x0, 2.0);
                    problem.x0_direction = X0Direction::Explicit(x0);
                    problem.x0_norm_p = 2.0;
                }
                problem.build().with_context(|| format!("problem for {}", set.label()))?;
                Ok(Instance { p, set, problem })
            })
            .collect()
    }
}

/// `center + 3(b − center)` with `b` the boundary point along the location.
pub fn placed_x0(set: &dyn FeasibleSet, loc: Location) -> Vec<f64> {
    let b = set.boundary_along(&loc.direction(set));
    let c = set.center();
    b.iter().zip(&c).map(|(bi, ci)| ci + X0_SCALE * (bi - ci)).collect()
}

fn with_p(d: &SetDescriptor, p: f64) -> Result<SetDescriptor> {
    Ok(match d.clone() {
        SetDescriptor::Lp { radius, dim, .. } => SetDescriptor::Lp { p, radius, dim },
        SetDescriptor::Schatten { rows, cols, radius, .. } => SetDescriptor::Schatten { p, rows, cols, radius },
        other => bail!("p_grid needs an lp or schatten set, got {other:?}"),
    })
}

/// Reads [`SEED_ENV`].
pub fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(s) => Ok(Some(s.trim().parse().with_context(|| format!("{SEED_ENV}={s:?} is not a u64"))?)),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(e).context(SEED_ENV),
    }
}

/// Parses JSON given inline (starting with `{`) or as a file path.
pub fn read_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {arg}"))
}
