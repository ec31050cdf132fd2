//! Frank-Wolfe over uniformly convex sets.
//!
//! * [`geometry`]: feasible sets, closed-form linear oracles and their
//!   uniform-convexity parameters.
//! * [`objectives`]: smooth objectives with the structural constants the
//!   rate bounds consume.
//! * [`solver`]: the Frank-Wolfe loop with traced iterations.
//! * [`bounds`]: rate constants, bound curves and trace checks.
//! * [`online`]: Follow-The-Leader with regret accounting.
//! * [`verify`]: sampling checks of the geometric inequalities.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod norms;
pub mod objectives;
pub mod online;
pub mod sampling;
pub mod solver;
pub mod stats;
pub mod verify;

pub use bounds::{RateBound, RecursionConstants};
pub use error::{Error, Result};
pub use geometry::{
    FeasibleSet, L1Ball, LevelSet, LpBall, SchattenBall, SetDescriptor, SetVariant, TiePolicy, UcParams,
    WeightedSquares,
};
pub use norms::{Norm, NormTag};
pub use objectives::{HebDescriptor, ObjectiveDescriptor, QuadraticObjective, SmoothObjective};
pub use online::{run_ftl, LossStream, OnlineTrace};
pub use solver::{run_fw, FwConfig, RunTrace, Schedule, StepRule};
