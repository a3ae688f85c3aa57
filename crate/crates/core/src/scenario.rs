//! Named sweep scenarios reproducing the reference figures: each returns the
//! exact parameter grid and measures behind one figure panel.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::entanglement::ModeId::{Mech1, Mech2, OpticalH, OpticalV};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::sweep::{AxisSpec, Measure, SweepAxis, SweepSpec};

/// Default grid densities: angles get 361 points per turn, rates 101,
/// thermal axes 101 log-spaced points over four decades.
const ANGLE_POINTS: usize = 361;
const RATE_POINTS: usize = 101;
const THERMAL_POINTS: usize = 101;

pub fn scenario_names() -> &'static [&'static str] {
    &[
        "fig2", "fig3", "fig4", "fig5a", "fig5b", "fig5c", "fig5d", "fig6a", "fig6b", "fig6c",
        "fig6d", "fig7a", "fig7b", "fig8a", "fig8b", "fig9a", "fig9b", "fig10a", "fig10b", "fig11",
    ]
}

fn angle_axis(axis: SweepAxis) -> AxisSpec {
    AxisSpec::linear(axis, 0.0, 2.0 * PI, ANGLE_POINTS)
}

fn thermal_axis() -> AxisSpec {
    AxisSpec::log(SweepAxis::NTh, 1.0, 1e4, THERMAL_POINTS)
}

fn all_four_pairs() -> Vec<Measure> {
    vec![
        Measure::LogNegativity(OpticalH, Mech1),
        Measure::LogNegativity(OpticalH, Mech2),
        Measure::LogNegativity(OpticalV, Mech1),
        Measure::LogNegativity(OpticalV, Mech2),
    ]
}

fn both_triples() -> Vec<Measure> {
    vec![
        Measure::ResidualContangleMin(OpticalH, Mech1, Mech2),
        Measure::ResidualContangleMin(OpticalV, Mech1, Mech2),
    ]
}

/// Returns the sweep spec of a named figure scenario.
///
/// All scenarios share the baseline (κ = 0.2, γ_m = 1e-5, degenerate
/// red-sideband detunings, n_th = 100) except where a figure pins something
/// else; the polar-map scenario `fig3` uses the split detunings it is about.
pub fn scenario(name: &str) -> Result<SweepSpec> {
    let base = SystemParams::default();
    let spec = |base, axes, measures| SweepSpec {
        base,
        axes,
        measures,
        scenario: Some(name.to_string()),
    };

    match name {
        // Stability diagram over drive coupling and hopping.
        "fig2" => Ok(spec(
            base,
            vec![
                AxisSpec::linear(SweepAxis::Gm, 0.0, 0.5, RATE_POINTS),
                AxisSpec::linear(SweepAxis::Jm, 0.0, 0.5, RATE_POINTS),
            ],
            vec![Measure::Stability],
        )),
        // Bright-dark cross coupling over the polarization angle, with
        // slightly split cavities.
        "fig3" => {
            let mut b = base;
            b.j_m = 0.0;
            b.delta_v = -1.0;
            b.delta_h = -(1.0 + 1e-3);
            Ok(spec(b, vec![angle_axis(SweepAxis::Phi)], vec![Measure::GMinusAbs]))
        }
        // Bipartite entanglement over the polarization angle, hopping off.
        "fig4" => {
            let mut b = base;
            b.j_m = 0.0;
            Ok(spec(
                b,
                vec![angle_axis(SweepAxis::Phi)],
                vec![
                    Measure::LogNegativity(OpticalV, Mech1),
                    Measure::LogNegativity(OpticalV, Mech2),
                    Measure::LogNegativity(OpticalH, Mech1),
                    Measure::LogNegativity(OpticalH, Mech2),
                ],
            ))
        }
        // Hopping-vs-polarization maps of the vertical (a) and horizontal (b)
        // opto-mechanical pairs at θ = π/2.
        "fig5a" | "fig5b" => {
            let measures = if name == "fig5a" {
                vec![
                    Measure::LogNegativity(OpticalV, Mech1),
                    Measure::LogNegativity(OpticalV, Mech2),
                ]
            } else {
                vec![
                    Measure::LogNegativity(OpticalH, Mech1),
                    Measure::LogNegativity(OpticalH, Mech2),
                ]
            };
            Ok(spec(
                base,
                vec![
                    AxisSpec::linear(SweepAxis::Jm, 0.0, 0.3, RATE_POINTS),
                    angle_axis(SweepAxis::Phi),
                ],
                measures,
            ))
        }
        // Modulation-phase sweep of all four pairs at φ = π/4, J_m = 0.2
        // (polar and flat renderings of the same data).
        "fig5c" | "fig5d" => Ok(spec(base, vec![angle_axis(SweepAxis::Theta)], all_four_pairs())),
        // Modulation-vs-polarization map, one pair per panel.
        "fig6a" | "fig6b" | "fig6c" | "fig6d" => {
            let pair = match name {
                "fig6a" => Measure::LogNegativity(OpticalH, Mech1),
                "fig6b" => Measure::LogNegativity(OpticalH, Mech2),
                "fig6c" => Measure::LogNegativity(OpticalV, Mech1),
                _ => Measure::LogNegativity(OpticalV, Mech2),
            };
            Ok(spec(
                base,
                vec![angle_axis(SweepAxis::Theta), angle_axis(SweepAxis::Phi)],
                vec![pair],
            ))
        }
        // Thermal robustness of the bipartite measures over the hopping rate.
        "fig7a" | "fig7b" => Ok(spec(
            base,
            vec![AxisSpec::linear(SweepAxis::Jm, 0.0, 0.2, RATE_POINTS), thermal_axis()],
            vec![
                Measure::LogNegativity(OpticalH, Mech1),
                Measure::LogNegativity(OpticalV, Mech1),
            ],
        )),
        // Tripartite onset over hopping and drive coupling.
        "fig8a" => Ok(spec(
            base,
            vec![
                AxisSpec::linear(SweepAxis::Jm, 0.0, 0.2, RATE_POINTS),
                AxisSpec::linear(SweepAxis::Gm, 0.0, 0.4, RATE_POINTS),
            ],
            both_triples(),
        )),
        // Tripartite measure over hopping and modulation phase at G_m = 0.3.
        "fig8b" => {
            let mut b = base;
            b.g_m = Complex64::new(0.3, 0.0);
            Ok(spec(
                b,
                vec![
                    AxisSpec::linear(SweepAxis::Jm, 0.0, 0.2, RATE_POINTS),
                    angle_axis(SweepAxis::Theta),
                ],
                both_triples(),
            ))
        }
        // Tripartite polar sweeps at J_m = 0.08, G_m = 0.3.
        "fig9a" | "fig9b" => {
            let mut b = base;
            b.g_m = Complex64::new(0.3, 0.0);
            b.j_m = 0.08;
            let axis = if name == "fig9a" {
                angle_axis(SweepAxis::Theta)
            } else {
                angle_axis(SweepAxis::Phi)
            };
            Ok(spec(b, vec![axis], both_triples()))
        }
        // Tripartite modulation-vs-polarization maps, one focus per panel.
        "fig10a" | "fig10b" => {
            let mut b = base;
            b.g_m = Complex64::new(0.3, 0.0);
            b.j_m = 0.08;
            let focus = if name == "fig10a" { OpticalH } else { OpticalV };
            Ok(spec(
                b,
                vec![angle_axis(SweepAxis::Theta), angle_axis(SweepAxis::Phi)],
                vec![Measure::ResidualContangleMin(focus, Mech1, Mech2)],
            ))
        }
        // Tripartite thermal robustness over the hopping rate at G_m = 0.3.
        "fig11" => {
            let mut b = base;
            b.g_m = Complex64::new(0.3, 0.0);
            Ok(spec(
                b,
                vec![thermal_axis(), AxisSpec::linear(SweepAxis::Jm, 0.0, 0.2, RATE_POINTS)],
                both_triples(),
            ))
        }
        _ => Err(Error::UnknownScenario {
            name: name.to_string(),
            available: scenario_names().to_vec(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn every_named_scenario_is_valid() {
        for name in scenario_names() {
            let s = scenario(name).unwrap();
            s.validate().unwrap();
            assert_eq!(s.scenario.as_deref(), Some(*name));
        }
    }

    #[test]
    fn unknown_scenario_lists_the_catalogue() {
        match scenario("fig99") {
            Err(Error::UnknownScenario { name, available }) => {
                assert_eq!(name, "fig99");
                assert_eq!(available, scenario_names().to_vec());
            }
            other => panic!("expected UnknownScenario, got {other:?}"),
        }
    }

    #[test]
    fn stability_grid_axes() {
        let s = scenario("fig2").unwrap();
        assert_eq!(s.axes.len(), 2);
        assert_eq!(s.axes[0].axis, SweepAxis::Gm);
        assert_eq!(s.axes[1].axis, SweepAxis::Jm);
        assert_eq!(s.measures, vec![Measure::Stability]);
        assert_abs_diff_eq!(s.base.phi, PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.base.theta, PI / 2.0, epsilon = 1e-15);
        assert_eq!(s.base.kappa, 0.2);
        assert_eq!(s.base.delta_h, -1.0);
    }

    #[test]
    fn tripartite_theta_sweep_parameters() {
        let s = scenario("fig9a").unwrap();
        assert_eq!(s.base.j_m, 0.08);
        assert_eq!(s.base.g_m.re, 0.3);
        assert_eq!(s.base.n_th1, 100.0);
        assert_eq!(s.axes[0].axis, SweepAxis::Theta);
        assert_eq!(s.measures.len(), 2);
    }

    #[test]
    fn thermal_grid_parameters() {
        let s = scenario("fig11").unwrap();
        assert_eq!(s.axes[0].axis, SweepAxis::NTh);
        assert_eq!(s.axes[0].spacing, crate::sweep::Spacing::Log);
        assert_eq!(s.axes[1].axis, SweepAxis::Jm);
        assert_eq!(s.base.g_m.re, 0.3);
        assert_abs_diff_eq!(s.base.phi, PI / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn split_detuning_scenario_keeps_the_split() {
        let s = scenario("fig3").unwrap();
        assert_eq!(s.base.delta_v, -1.0);
        assert_eq!(s.base.delta_h, -1.001);
        assert_eq!(s.base.j_m, 0.0);
    }
}
