//! System parameters and effective couplings.
//!
//! All rates and frequencies are expressed in units of the mechanical
//! frequency `ω_m`; the construction is dimension-free. Detunings are signed
//! (red sideband = -1). Angles are plain radians.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and control parameters of the polarization-driven two-resonator
/// optomechanical system.
///
/// The drive coupling scale `g_m` is the effective coupling at polarization
/// angle zero. It may be complex, but is purely real under the usual drive
/// convention; both cases are supported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Frequency of the first mechanical resonator (units of ω_m).
    pub omega_1: f64,
    /// Frequency of the second mechanical resonator (units of ω_m).
    pub omega_2: f64,
    /// Optical decay rate κ, shared by both polarized modes.
    pub kappa: f64,
    /// Mechanical decay rate γ_m, shared by both resonators.
    pub gamma_m: f64,
    /// Effective detuning of the horizontal (TM) mode.
    pub delta_h: f64,
    /// Effective detuning of the vertical (TE) mode.
    pub delta_v: f64,
    /// Drive coupling scale G at polarization angle zero.
    pub g_m: Complex64,
    /// Phonon hopping rate between the two resonators, ≥ 0.
    pub j_m: f64,
    /// Polarization angle φ (radians).
    pub phi: f64,
    /// Modulation phase θ of the mechanical coupling (radians).
    pub theta: f64,
    /// Thermal phonon occupation of the first mechanical bath.
    pub n_th1: f64,
    /// Thermal phonon occupation of the second mechanical bath.
    pub n_th2: f64,
}

impl Default for SystemParams {
    /// Baseline operating point: κ = 0.2, γ_m = 1e-5, both detunings on the
    /// red sideband, G_m = J_m = 0.2, φ = π/4, θ = π/2, n_th = 100.
    fn default() -> Self {
        SystemParams {
            omega_1: 1.0,
            omega_2: 1.0,
            kappa: 0.2,
            gamma_m: 1e-5,
            delta_h: -1.0,
            delta_v: -1.0,
            g_m: Complex64::new(0.2, 0.0),
            j_m: 0.2,
            phi: std::f64::consts::FRAC_PI_4,
            theta: std::f64::consts::FRAC_PI_2,
            n_th1: 100.0,
            n_th2: 100.0,
        }
    }
}

impl SystemParams {
    /// Checks the parameter invariants: κ > 0, γ_m > 0, J_m ≥ 0, n_th ≥ 0,
    /// and everything finite.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega_1,
            self.omega_2,
            self.kappa,
            self.gamma_m,
            self.delta_h,
            self.delta_v,
            self.g_m.re,
            self.g_m.im,
            self.j_m,
            self.phi,
            self.theta,
            self.n_th1,
            self.n_th2,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParams(format!("kappa must be > 0, got {}", self.kappa)));
        }
        if self.gamma_m <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "gamma_m must be > 0, got {}",
                self.gamma_m
            )));
        }
        if self.j_m < 0.0 {
            return Err(Error::InvalidParams(format!("j_m must be >= 0, got {}", self.j_m)));
        }
        if self.n_th1 < 0.0 || self.n_th2 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "thermal occupations must be >= 0, got ({}, {})",
                self.n_th1, self.n_th2
            )));
        }
        Ok(())
    }

    /// Effective couplings `(G_v, G_h)` of this parameter set.
    pub fn effective_couplings(&self) -> (Complex64, Complex64) {
        effective_couplings(self.g_m, self.phi)
    }
}

/// Splits the drive coupling scale over the two polarized modes:
/// `G_v = G_m cos φ`, `G_h = G_m sin φ`.
///
/// The split preserves the total weight, `|G_v|² + |G_h|² = |G_m|²`.
pub fn effective_couplings(g_m: Complex64, phi: f64) -> (Complex64, Complex64) {
    (g_m * phi.cos(), g_m * phi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn coupling_split_at_cardinal_angles() {
        let g = Complex64::new(0.2, 0.0);

        let (gv, gh) = effective_couplings(g, 0.0);
        assert_eq!(gv, g);
        assert_eq!(gh, Complex64::new(0.0, 0.0));

        let (gv, gh) = effective_couplings(g, FRAC_PI_2);
        assert!(gv.norm() < 1e-15);
        assert_abs_diff_eq!(gh.re, 0.2, epsilon = 1e-15);

        let (gv, gh) = effective_couplings(g, FRAC_PI_4);
        let half_sqrt2 = 0.2 * std::f64::consts::SQRT_2 / 2.0;
        assert_abs_diff_eq!(gv.re, half_sqrt2, epsilon = 1e-15);
        assert_abs_diff_eq!(gh.re, half_sqrt2, epsilon = 1e-15);
    }

    #[test]
    fn coupling_split_preserves_norm() {
        let g = Complex64::new(0.13, -0.07);
        for k in 0..64 {
            let phi = k as f64 * 0.1;
            let (gv, gh) = effective_couplings(g, phi);
            assert_abs_diff_eq!(
                gv.norm_sqr() + gh.norm_sqr(),
                g.norm_sqr(),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn validation_rejects_bad_rates() {
        let mut p = SystemParams::default();
        p.kappa = 0.0;
        assert!(p.validate().is_err());

        let mut p = SystemParams::default();
        p.j_m = -0.1;
        assert!(p.validate().is_err());

        let mut p = SystemParams::default();
        p.n_th2 = -1.0;
        assert!(p.validate().is_err());

        let mut p = SystemParams::default();
        p.gamma_m = f64::NAN;
        assert!(p.validate().is_err());

        assert!(SystemParams::default().validate().is_ok());
    }
}
