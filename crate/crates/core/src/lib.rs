//! Steady-state Gaussian entanglement for an optomechanical system in which
//! two polarized drive components couple to a pair of mechanically coupled
//! resonators.
//!
//! The pipeline is: build the 8×8 drift and diffusion matrices of the
//! linearized quadrature dynamics ([`model`]), solve the steady-state
//! Lyapunov equation for the covariance ([`lyapunov`]), and evaluate
//! bipartite logarithmic negativity and tripartite minimum residual
//! contangle on mode reductions ([`entanglement`]). The [`darkmode`] module
//! analyzes the bright/dark hybridization of the optical pair, and [`sweep`]
//! runs declarative parameter grids, with the reference-figure grids in
//! [`scenario`].
//!
//! Everything is a pure function of its inputs; grids parallelize with the
//! `parallel` feature (on by default) without changing any output byte.

pub mod darkmode;
pub mod entanglement;
pub mod error;
pub mod lyapunov;
pub mod model;
pub mod params;
pub mod scenario;
pub mod sweep;

pub use darkmode::{classify_regime, hybridized_couplings, DarkModeReport, OpticalRegime};
pub use entanglement::{
    contangle, extract_submatrix, log_negativity, min_residual_contangle, partial_transpose,
    residual_contangle, symplectic_eigenvalues, EntanglementResult, ModeId, Partition,
};
pub use error::{Error, Result};
pub use lyapunov::{
    integrate_covariance, lyapunov_residual, solve_steady_covariance, CovarianceMatrix,
};
pub use model::{
    build_diffusion_matrix, build_drift_matrix, check_stability, mean_field_steady_state,
    DiffusionMatrix, DriftMatrix, DriveInput, Matrix8, MeanFieldState, StabilityReport,
};
pub use params::{effective_couplings, SystemParams};
pub use scenario::{scenario, scenario_names};
pub use sweep::{
    csv_string, run_sweep, run_sweep_serial, run_sweep_with_workers, summarize, write_csv,
    AxisSpec, ColumnSummary, Measure, RunOutput, Spacing, SweepAxis, SweepRecord, SweepSpec,
};
