use thiserror::Error;

use crate::entanglement::ModeId;

/// Errors produced by the model builders, solvers and sweep engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("eigenvalue solver did not converge ({context})")]
    EigenSolver { context: &'static str },

    #[error("no steady state: drift matrix is unstable (max Re eigenvalue = {max_real_part:.6e})")]
    Unstable { max_real_part: f64 },

    #[error("steady-state linear system is singular")]
    SingularLyapunov,

    #[error(
        "steady-state solve is ill-conditioned: residual = {residual:.3e}, \
         condition estimate = {cond_estimate:.3e}"
    )]
    IllConditioned { residual: f64, cond_estimate: f64 },

    #[error("covariance integration diverged at t = {t:.6e} (entry exceeded {limit:.1e})")]
    IntegrationDiverged { t: f64, limit: f64 },

    #[error(
        "mean-field iteration did not converge after {iterations} iterations \
         (residual = {residual:.3e})"
    )]
    MeanFieldNonConvergence {
        iterations: usize,
        residual: f64,
        last: Box<crate::model::MeanFieldState>,
    },

    #[error("duplicate mode in selection: {0:?}")]
    DuplicateMode(ModeId),

    #[error("bad partition: {0}")]
    BadPartition(String),

    #[error("hybridization undefined: both effective couplings vanish")]
    HybridizationUndefined,

    #[error("unknown scenario {name:?}; available: {}", available.join(", "))]
    UnknownScenario {
        name: String,
        available: Vec<&'static str>,
    },

    #[error("invalid sweep spec: {0}")]
    InvalidSweep(String),
}

pub type Result<T> = std::result::Result<T, Error>;
