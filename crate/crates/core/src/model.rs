//! Drift and diffusion matrices of the linearized quadrature dynamics,
//! stability classification, and the optional mean-field fixed point.
//!
//! Quadrature ordering is a frozen contract:
//! `(I_h, Y_h, I_v, Y_v, X_1, P_1, X_2, P_2)` — horizontal optical pair,
//! vertical optical pair, then the two mechanical pairs. Rows/columns 0–3
//! are optical, 4–7 mechanical.

use nalgebra::SMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// 8×8 real matrix in the frozen quadrature ordering.
pub type Matrix8 = SMatrix<f64, 8, 8>;

/// Drift matrix of the quadrature fluctuation dynamics `δẊ = M δX + noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftMatrix(pub Matrix8);

impl DriftMatrix {
    pub fn matrix(&self) -> &Matrix8 {
        &self.0
    }
}

/// Diagonal diffusion matrix of the covariance dynamics.
///
/// Optical entries are κ/2; mechanical entries are γ_m(2 n_th + 1)/2 per
/// resonator. All entries are strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionMatrix {
    diag: [f64; 8],
}

impl DiffusionMatrix {
    /// Builds a diffusion matrix from an explicit diagonal. Every entry must
    /// be strictly positive.
    pub fn from_diagonal(diag: [f64; 8]) -> Result<Self> {
        if diag.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "diffusion diagonal must be strictly positive and finite, got {diag:?}"
            )));
        }
        Ok(DiffusionMatrix { diag })
    }

    pub fn diagonal(&self) -> &[f64; 8] {
        &self.diag
    }

    pub fn matrix(&self) -> Matrix8 {
        Matrix8::from_diagonal(&nalgebra::SVector::from(self.diag))
    }
}

/// Outcome of the eigenvalue stability test on a drift matrix.
///
/// Stability is the strict condition `max Re λ < 0`. Spectra with
/// `|max Re λ| < 1e-12` are additionally flagged `marginal`, since at that
/// magnitude the sign is numerically meaningless.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityReport {
    pub eigenvalues: Vec<Complex64>,
    pub max_real_part: f64,
    pub stable: bool,
    pub marginal: bool,
}

/// Magnitude below which the leading real part is considered numerically zero.
pub const MARGINAL_STABILITY_TOL: f64 = 1e-12;

/// Builds the drift matrix for the given parameters.
///
/// Every parameter set produces a matrix; stability is a separate check.
/// For purely real couplings the `Im G` entries are exactly zero.
pub fn build_drift_matrix(p: &SystemParams) -> DriftMatrix {
    let (g_v, g_h) = p.effective_couplings();
    let mut m = Matrix8::zeros();

    // Optical 2x2 rotation-decay blocks plus optomechanical columns/rows.
    // Horizontal pair occupies rows 0-1, vertical rows 2-3.
    for (row, delta, g) in [(0, p.delta_h, g_h), (2, p.delta_v, g_v)] {
        m[(row, row)] = -p.kappa / 2.0;
        m[(row, row + 1)] = -delta;
        m[(row + 1, row)] = delta;
        m[(row + 1, row + 1)] = -p.kappa / 2.0;
        // Each optical mode couples identically to both resonators.
        for col in [4, 6] {
            m[(row, col)] = 2.0 * g.im;
            m[(row + 1, col)] = -2.0 * g.re;
            m[(col, row)] = 2.0 * g.im;
            m[(col + 1, row)] = -2.0 * g.re;
        }
    }

    let (st, ct) = (p.theta.sin(), p.theta.cos());
    let j = p.j_m;

    m[(4, 4)] = -p.gamma_m / 2.0;
    m[(4, 5)] = p.omega_1;
    m[(5, 4)] = -p.omega_1;
    m[(5, 5)] = -p.gamma_m / 2.0;
    m[(6, 6)] = -p.gamma_m / 2.0;
    m[(6, 7)] = p.omega_2;
    m[(7, 6)] = -p.omega_2;
    m[(7, 7)] = -p.gamma_m / 2.0;

    // Phase-modulated hopping: the phase enters with opposite sign for the
    // two resonators, which breaks the 1<->2 exchange symmetry unless θ = nπ.
    m[(4, 6)] = j * st;
    m[(4, 7)] = j * ct;
    m[(5, 6)] = -j * ct;
    m[(5, 7)] = j * st;
    m[(6, 4)] = -j * st;
    m[(6, 5)] = j * ct;
    m[(7, 4)] = -j * ct;
    m[(7, 5)] = -j * st;

    DriftMatrix(m)
}

/// Builds the diagonal diffusion matrix for the given parameters.
pub fn build_diffusion_matrix(p: &SystemParams) -> DiffusionMatrix {
    let opt = p.kappa / 2.0;
    let m1 = p.gamma_m * (2.0 * p.n_th1 + 1.0) / 2.0;
    let m2 = p.gamma_m * (2.0 * p.n_th2 + 1.0) / 2.0;
    DiffusionMatrix {
        diag: [opt, opt, opt, opt, m1, m1, m2, m2],
    }
}

/// Iteration cap for the Schur decomposition behind every eigenvalue call.
const SCHUR_MAX_ITER: usize = 100_000;

pub(crate) fn complex_eigenvalues(
    m: &nalgebra::DMatrix<f64>,
    context: &'static str,
) -> Result<Vec<Complex64>> {
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::EigenSolver { context })?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Classifies the drift matrix: stable iff every eigenvalue has a strictly
/// negative real part.
pub fn check_stability(m: &DriftMatrix) -> Result<StabilityReport> {
    let dm = nalgebra::DMatrix::from_fn(8, 8, |i, j| m.0[(i, j)]);
    let eigenvalues = complex_eigenvalues(&dm, "stability check")?;
    let max_real_part = eigenvalues.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityReport {
        stable: max_real_part < 0.0,
        marginal: max_real_part.abs() < MARGINAL_STABILITY_TOL,
        max_real_part,
        eigenvalues,
    })
}

/// Bare (pre-shift) drive inputs for the mean-field fixed point.
#[derive(Debug, Clone, Copy)]
pub struct DriveInput {
    /// Bare detuning of the horizontal mode.
    pub delta_h: f64,
    /// Bare detuning of the vertical mode.
    pub delta_v: f64,
    /// Single-photon optomechanical coupling rate.
    pub g: f64,
    /// Drive amplitude reaching the horizontal mode.
    pub alpha_in_h: Complex64,
    /// Drive amplitude reaching the vertical mode.
    pub alpha_in_v: Complex64,
}

/// Self-consistent classical steady state of the mean dynamics.
#[derive(Debug, Clone, Serialize)]
pub struct MeanFieldState {
    pub alpha_h: Complex64,
    pub alpha_v: Complex64,
    pub beta_1: Complex64,
    pub beta_2: Complex64,
    /// Effective detunings after the static mechanical shift.
    pub delta_eff_h: f64,
    pub delta_eff_v: f64,
    pub iterations: usize,
}

const MEAN_FIELD_TOL: f64 = 1e-12;
const MEAN_FIELD_MAX_ITER: usize = 1000;

/// Finds the classical fixed point by self-consistent iteration: solve the
/// linear optical and mechanical steady states at the current effective
/// detunings, update the detunings from the mechanical displacement, repeat
/// to relative tolerance 1e-12 (at most 1000 iterations).
///
/// The cavity decay, mechanical decay, mechanical frequencies and hopping are
/// taken from `params`; the drive and bare detunings from `input`.
pub fn mean_field_steady_state(p: &SystemParams, input: &DriveInput) -> Result<MeanFieldState> {
    p.validate()?;
    let half_kappa = p.kappa / 2.0;
    let i = Complex64::i();

    let state = |shift: f64, iterations: usize| -> (MeanFieldState, f64) {
        let delta_eff_h = input.delta_h - shift;
        let delta_eff_v = input.delta_v - shift;
        let alpha_h = p.kappa.sqrt() * input.alpha_in_h / (half_kappa - i * delta_eff_h);
        let alpha_v = p.kappa.sqrt() * input.alpha_in_v / (half_kappa - i * delta_eff_v);
        let s = alpha_h.norm_sqr() + alpha_v.norm_sqr();

        // Linear 2x2 solve for the mechanical amplitudes, including the
        // phase-modulated hopping.
        let a11 = i * p.omega_1 + p.gamma_m / 2.0;
        let a22 = i * p.omega_2 + p.gamma_m / 2.0;
        let a12 = i * p.j_m * (i * p.theta).exp();
        let a21 = i * p.j_m * (-i * p.theta).exp();
        let rhs = -i * input.g * s;
        let det = a11 * a22 - a12 * a21;
        let beta_1 = (rhs * a22 - a12 * rhs) / det;
        let beta_2 = (a11 * rhs - rhs * a21) / det;

        let new_shift = 2.0 * input.g * (beta_1.re + beta_2.re);
        (
            MeanFieldState {
                alpha_h,
                alpha_v,
                beta_1,
                beta_2,
                delta_eff_h,
                delta_eff_v,
                iterations,
            },
            new_shift,
        )
    };

    let mut shift = 0.0;
    for iter in 0..MEAN_FIELD_MAX_ITER {
        let (_, new_shift) = state(shift, iter + 1);
        let scale = shift.abs().max(new_shift.abs()).max(1.0);
        if (new_shift - shift).abs() <= MEAN_FIELD_TOL * scale {
            let (final_state, _) = state(new_shift, iter + 1);
            return Ok(final_state);
        }
        shift = new_shift;
    }
    let (last, new_shift) = state(shift, MEAN_FIELD_MAX_ITER);
    Err(Error::MeanFieldNonConvergence {
        iterations: MEAN_FIELD_MAX_ITER,
        residual: (new_shift - shift).abs(),
        last: Box::new(last),
    })
}
