//! Steady-state covariance: solve `M V + V Mᵀ = -D` by Kronecker
//! vectorization, with a fixed-step transient integrator of
//! `V̇ = M V + V Mᵀ + D` as an independent cross-check.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{check_stability, DiffusionMatrix, DriftMatrix, Matrix8};

/// Maximum-norm residual accepted from the steady-state solver.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Condition-number estimate above which the solve is rejected as
/// ill-conditioned.
pub const CONDITION_LIMIT: f64 = 1e14;
/// Asymmetry (before symmetrization) that triggers a diagnostic warning.
const ASYMMETRY_WARN: f64 = 1e-8;
/// Any covariance entry beyond this magnitude ends transient integration.
const DIVERGENCE_LIMIT: f64 = 1e12;

/// 8×8 symmetric steady-state quadrature covariance, in the same ordering as
/// the drift matrix. Symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(Matrix8);

impl CovarianceMatrix {
    /// Wraps a matrix, replacing it by its symmetric part `(V + Vᵀ)/2`.
    pub fn new(v: Matrix8) -> Self {
        CovarianceMatrix((v + v.transpose()) / 2.0)
    }

    pub fn matrix(&self) -> &Matrix8 {
        &self.0
    }

    pub fn zeros() -> Self {
        CovarianceMatrix(Matrix8::zeros())
    }

    /// Symplectic spectrum of the full four-mode covariance, ascending.
    /// Physical states have every value ≥ 1/2.
    pub fn symplectic_spectrum(&self) -> Result<Vec<f64>> {
        let dm = DMatrix::from_fn(8, 8, |i, j| self.0[(i, j)]);
        crate::entanglement::symplectic_eigenvalues(&dm)
    }
}

fn vec_index(i: usize, j: usize) -> usize {
    // Column-major stacking, matching the Kronecker identities used below.
    j * 8 + i
}

/// Solves `M V + V Mᵀ = -D` for the steady-state covariance.
///
/// The 8×8 equation is vectorized into the 64×64 dense system
/// `(M ⊗ I + I ⊗ M) vec(V) = -vec(D)` and solved by LU with partial
/// pivoting; the result is symmetrized. An unstable drift matrix has no
/// steady state and is rejected up front. Solutions whose residual exceeds
/// [`RESIDUAL_TOL`] are rejected with a condition-number diagnostic.
pub fn solve_steady_covariance(m: &DriftMatrix, d: &DiffusionMatrix) -> Result<CovarianceMatrix> {
    let report = check_stability(m)?;
    if !report.stable {
        return Err(Error::Unstable {
            max_real_part: report.max_real_part,
        });
    }

    let md = DMatrix::from_fn(8, 8, |i, j| m.0[(i, j)]);
    let id = DMatrix::<f64>::identity(8, 8);
    let a = md.kronecker(&id) + id.kronecker(&md);

    let mut rhs = DMatrix::<f64>::zeros(64, 1);
    for (k, &dk) in d.diagonal().iter().enumerate() {
        rhs[(vec_index(k, k), 0)] = -dk;
    }

    let lu = a.clone().lu();
    let x = lu.solve(&rhs).ok_or(Error::SingularLyapunov)?;

    let raw = Matrix8::from_fn(|i, j| x[(vec_index(i, j), 0)]);
    let asymmetry = (raw - raw.transpose()).amax();
    if asymmetry > ASYMMETRY_WARN {
        log::warn!(
            "steady-state covariance asymmetric before symmetrization: {asymmetry:.3e} \
             (possible ill-conditioning)"
        );
    }
    let v = CovarianceMatrix::new(raw);

    let residual = lyapunov_residual(m, d, &v);
    if residual >= RESIDUAL_TOL {
        let cond_estimate = match a.clone().try_inverse() {
            Some(inv) => one_norm(&a) * one_norm(&inv),
            None => f64::INFINITY,
        };
        if cond_estimate > CONDITION_LIMIT || residual.is_nan() {
            return Err(Error::IllConditioned {
                residual,
                cond_estimate,
            });
        }
        return Err(Error::IllConditioned {
            residual,
            cond_estimate,
        });
    }
    Ok(v)
}

fn one_norm(a: &DMatrix<f64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Maximum-norm residual `‖M V + V Mᵀ + D‖_max` of a candidate steady state.
pub fn lyapunov_residual(m: &DriftMatrix, d: &DiffusionMatrix, v: &CovarianceMatrix) -> f64 {
    let r = m.0 * v.0 + v.0 * m.0.transpose() + d.matrix();
    r.amax()
}

/// Integrates `V̇ = M V + V Mᵀ + D` from `v0` to `t_final` with the classical
/// fixed-step fourth-order scheme, symmetrizing the result.
///
/// Step-size guidance: `dt ≤ 0.01 / max|eig(M)|` keeps the scheme stable and
/// its truncation error well below typical steady-state tolerances. Blow-up
/// of any entry past 1e12 aborts with the time of divergence (the signature
/// of an unstable drift matrix).
pub fn integrate_covariance(
    m: &DriftMatrix,
    d: &DiffusionMatrix,
    v0: &CovarianceMatrix,
    t_final: f64,
    dt: f64,
) -> Result<CovarianceMatrix> {
    if !(dt > 0.0) || !(t_final >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "need dt > 0 and t_final >= 0, got dt = {dt}, t_final = {t_final}"
        )));
    }
    let dmat = d.matrix();
    let deriv = |v: &Matrix8| -> Matrix8 { m.0 * v + v * m.0.transpose() + dmat };

    // Land exactly on t_final with a uniform step no larger than requested.
    let steps = (t_final / dt).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;

    let mut v = v0.0;
    for step in 0..steps {
        let k1 = deriv(&v);
        let k2 = deriv(&(v + (h / 2.0) * k1));
        let k3 = deriv(&(v + (h / 2.0) * k2));
        let k4 = deriv(&(v + h * k3));
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if v.amax() > DIVERGENCE_LIMIT {
            return Err(Error::IntegrationDiverged {
                t: (step + 1) as f64 * h,
                limit: DIVERGENCE_LIMIT,
            });
        }
    }
    Ok(CovarianceMatrix::new(v))
}
