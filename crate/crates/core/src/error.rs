use thiserror::Error;

/// Errors raised by the oracles, solver, bound engine and verifier.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The linear direction handed to an LMO is identically zero.
    #[error("linear minimization oracle called with a zero direction")]
    ZeroDirection,

    #[error("singular value decomposition did not converge")]
    SvdFailure,

    #[error("set `{0}` is not uniformly convex")]
    NotUniformlyConvex(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The starting point of a run lies outside the feasible set.
    #[error("infeasible starting point (membership excess {excess:e})")]
    InfeasibleStart { excess: f64 },

    #[error("operation not supported: {0}")]
    Unsupported(&'static str),

    /// A supposed optimum has a vanishing gradient although the objective
    /// claims a positive gradient floor.
    #[error("stale optimum: dual gradient norm {grad_norm:e} at the reference point")]
    StaleOptimum { grad_norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParams(msg()))
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
