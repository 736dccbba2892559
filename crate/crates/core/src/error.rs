use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids (d={lhs_dim}, K={lhs_k} vs d={rhs_dim}, K={rhs_k})")]
    GridMismatch {
        lhs_dim: usize,
        lhs_k: usize,
        rhs_dim: usize,
        rhs_k: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{scheme} requires a one-dimensional grid, got d={dim}")]
    DimensionUnsupported { scheme: &'static str, dim: usize },

    #[error("blow-up at step {step}: max |u| = {max_abs:e}")]
    BlowUp { step: usize, max_abs: f64 },

    #[error("singular nonlinear substep at step {step}: |1 + i mu tau u| = {min_denominator:e} at grid point {point}")]
    SingularSubstep {
        step: usize,
        point: usize,
        min_denominator: f64,
    },

    #[error("grid too large for brute-force oracle: K = {k}, limit {limit}")]
    OracleGridTooLarge { k: usize, limit: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("cannot write output to {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Rewrites the step index carried by stepper errors. Single steps report
    /// step 0; `evolve` uses this to attach the failing step.
    pub(crate) fn at_step(self, n: usize) -> Self {
        match self {
            Error::BlowUp { max_abs, .. } => Error::BlowUp { step: n, max_abs },
            Error::SingularSubstep {
                point,
                min_denominator,
                ..
            } => Error::SingularSubstep {
                step: n,
                point,
                min_denominator,
            },
            other => other,
        }
    }
}
