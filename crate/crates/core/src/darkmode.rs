//! Bright/dark hybridized-mode analysis of the optical pair.
//!
//! The two polarized modes can be rotated into a bright combination that
//! carries the full optomechanical coupling and a residual mode whose only
//! handle on the rest of the system is the cross coupling `G_-`. When `G_-`
//! vanishes that residual mode is dark. The mechanical pair has its own dark
//! mode, controlled by the hopping rate and its modulation phase.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Whether the optical dark mode survives (`Odmu`) or is broken (`Odmb`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OpticalRegime {
    Odmu,
    Odmb,
}

impl std::fmt::Display for OpticalRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OpticalRegime::Odmu => "ODMU",
            OpticalRegime::Odmb => "ODMB",
        })
    }
}

/// Hybridized couplings and frequencies of the optical pair, plus the regime
/// classification.
#[derive(Debug, Clone, Serialize)]
pub struct DarkModeReport {
    /// Bright-mode coupling magnitude `sqrt(|G_v|² + |G_h|²)`.
    pub g_plus: f64,
    /// Bright-dark cross coupling; zero iff the dark mode decouples.
    pub g_minus: Complex64,
    /// Complex frequency (including the κ/2 linewidth) of the bright mode.
    pub omega_plus: Complex64,
    /// Complex frequency of the residual (dark) mode.
    pub omega_minus: Complex64,
    pub optical_regime: OpticalRegime,
    /// True when the mechanical dark mode is broken: hopping on and the
    /// modulation phase away from a half-turn multiple.
    pub mechanical_dark_broken: bool,
}

/// Default relative tolerance of the regime classification.
pub const CLASSIFY_TOL: f64 = 1e-12;

fn g_minus_of(p: &SystemParams) -> (f64, Complex64) {
    let (g_v, g_h) = p.effective_couplings();
    let g2 = g_v.norm_sqr() + g_h.norm_sqr();
    let g_minus = if g2 > 0.0 {
        g_v * g_h / g2 * (p.delta_h - p.delta_v)
    } else {
        Complex64::new(0.0, 0.0)
    };
    (g2.sqrt(), g_minus)
}

/// Computes the hybridized couplings `G_±` and frequencies `ω_±`.
///
/// `ω_+` is the `|G_h|²`-weighted vertical detuning plus the `|G_v|²`-weighted
/// horizontal detuning (each carrying its `iκ/2` linewidth); `ω_-` exchanges
/// the weights. Either weight assignment leaves the pair `{ω_+, ω_-}` with
/// the trace and determinant of the original optical block, which is how the
/// formulas are verified in the tests.
///
/// Undefined when both effective couplings vanish.
pub fn hybridized_couplings(p: &SystemParams) -> Result<DarkModeReport> {
    let (g_v, g_h) = p.effective_couplings();
    let g2 = g_v.norm_sqr() + g_h.norm_sqr();
    if g2 <= 0.0 {
        return Err(Error::HybridizationUndefined);
    }
    let (g_plus, g_minus) = g_minus_of(p);
    let half_kappa_i = Complex64::new(0.0, p.kappa / 2.0);
    let dv = p.delta_v + half_kappa_i;
    let dh = p.delta_h + half_kappa_i;
    let omega_plus = (dv * g_h.norm_sqr() + dh * g_v.norm_sqr()) / g2;
    let omega_minus = (dv * g_v.norm_sqr() + dh * g_h.norm_sqr()) / g2;
    let (optical_regime, mechanical_dark_broken) = classify_regime(p, CLASSIFY_TOL);
    Ok(DarkModeReport {
        g_plus,
        g_minus,
        omega_plus,
        omega_minus,
        optical_regime,
        mechanical_dark_broken,
    })
}

/// Classifies the dark-mode regimes at relative tolerance `tol`.
///
/// Optical: ODMU iff `|G_-| < tol·max(|G|, tol)` or one of the two effective
/// couplings vanishes (within `tol`). Mechanical: the dark mode counts as
/// broken iff `J_m > tol` and `|sin θ| > tol`.
pub fn classify_regime(p: &SystemParams, tol: f64) -> (OpticalRegime, bool) {
    let (g_v, g_h) = p.effective_couplings();
    let (g_norm, g_minus) = g_minus_of(p);
    let one_coupling_dark = g_v.norm().min(g_h.norm()) < tol;
    let cross_dark = g_minus.norm() < tol * g_norm.max(tol);
    let optical = if one_coupling_dark || cross_dark {
        OpticalRegime::Odmu
    } else {
        OpticalRegime::Odmb
    };
    let mech_broken = p.j_m > tol && p.theta.sin().abs() > tol;
    (optical, mech_broken)
}
