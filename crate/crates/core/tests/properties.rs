//! Cross-cutting invariants checked over random parameter draws.

mod common;

use common::{draw_params, draw_stable_params};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_4, TAU};

use polarmech::{
    build_diffusion_matrix, build_drift_matrix, effective_couplings, extract_submatrix,
    log_negativity, min_residual_contangle, partial_transpose, solve_steady_covariance,
    symplectic_eigenvalues, Matrix8, ModeId, SystemParams,
};

/// Direct transcription of the drift matrix, written entry by entry as an
/// independent code path against the block-wise builder.
fn drift_transcription(p: &SystemParams) -> Matrix8 {
    let (g_v, g_h) = effective_couplings(p.g_m, p.phi);
    let k2 = -p.kappa / 2.0;
    let g2 = -p.gamma_m / 2.0;
    let (dh, dv) = (p.delta_h, p.delta_v);
    let (w1, w2) = (p.omega_1, p.omega_2);
    let (ih, rh) = (2.0 * g_h.im, -2.0 * g_h.re);
    let (iv, rv) = (2.0 * g_v.im, -2.0 * g_v.re);
    let (js, jc) = (p.j_m * p.theta.sin(), p.j_m * p.theta.cos());
    Matrix8::from_row_slice(&[
        k2, -dh, 0.0, 0.0, ih, 0.0, ih, 0.0, //
        dh, k2, 0.0, 0.0, rh, 0.0, rh, 0.0, //
        0.0, 0.0, k2, -dv, iv, 0.0, iv, 0.0, //
        0.0, 0.0, dv, k2, rv, 0.0, rv, 0.0, //
        ih, 0.0, iv, 0.0, g2, w1, js, jc, //
        rh, 0.0, rv, 0.0, -w1, g2, -jc, js, //
        ih, 0.0, iv, 0.0, -js, jc, g2, w2, //
        rh, 0.0, rv, 0.0, -jc, -js, -w2, g2, //
    ])
}

#[test]
fn drift_matches_direct_transcription_on_ten_thousand_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let p = draw_params(&mut rng);
        let built = build_drift_matrix(&p);
        let diff = (built.matrix() - drift_transcription(&p)).amax();
        assert!(diff < 1e-15, "builder deviates by {diff:.3e} at {p:?}");
    }
}

#[test]
fn zero_drive_decouples_light_from_mechanics() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let mut p = draw_params(&mut rng);
        p.g_m = num_complex::Complex64::new(0.0, 0.0);
        let m = build_drift_matrix(&p);
        for i in 0..4 {
            for j in 4..8 {
                assert_eq!(m.matrix()[(i, j)], 0.0);
                assert_eq!(m.matrix()[(j, i)], 0.0);
            }
        }
    }
}

#[test]
fn steady_states_are_physical() {
    // Vacuum floor: every symplectic eigenvalue of the full covariance stays
    // at or above 1/2 for stable real-coupling draws (the slice where the
    // dynamics is generated by a Hermitian quadratic form).
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..150 {
        let p = common::draw_stable_real(&mut rng);
        let v = solve_steady_covariance(&build_drift_matrix(&p), &build_diffusion_matrix(&p))
            .expect("stable draw must solve");
        for nu in v.symplectic_spectrum().unwrap() {
            assert!(nu >= 0.5 - 1e-9, "nu = {nu} below vacuum floor at {p:?}");
        }
    }
}

#[test]
fn reduced_spectra_match_the_two_mode_closed_form() {
    let det2 = |chi: &nalgebra::DMatrix<f64>, r: usize, c: usize| -> f64 {
        chi[(r, c)] * chi[(r + 1, c + 1)] - chi[(r, c + 1)] * chi[(r + 1, c)]
    };
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let p = draw_stable_params(&mut rng);
        let v = solve_steady_covariance(&build_drift_matrix(&p), &build_diffusion_matrix(&p))
            .unwrap();
        for a in ModeId::ALL {
            for b in ModeId::ALL {
                if a == b {
                    continue;
                }
                let chi = partial_transpose(&extract_submatrix(&v, &[a, b]).unwrap(), &[0]);
                let general = symplectic_eigenvalues(&chi).unwrap()[0];
                let delta = det2(&chi, 0, 0) + det2(&chi, 2, 2) + 2.0 * det2(&chi, 0, 2);
                let closed = (0.5
                    * (delta - (delta * delta - 4.0 * chi.determinant()).max(0.0).sqrt()))
                .max(0.0)
                .sqrt();
                assert!(
                    (general - closed).abs() < 1e-9,
                    "nu mismatch {general} vs {closed} for ({a:?},{b:?})"
                );
            }
        }
    }
}

#[test]
fn polarization_axes_have_exact_zeros() {
    // With a real drive coupling, the decoupled polarization is in vacuum
    // and exactly separable from everything.
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..40 {
        let mut p = draw_stable_params(&mut rng);
        p.g_m = num_complex::Complex64::new(p.g_m.norm(), 0.0);
        for (phi, dark) in [(0.0, ModeId::OpticalH), (std::f64::consts::FRAC_PI_2, ModeId::OpticalV)]
        {
            p.phi = phi;
            if !polarmech::check_stability(&build_drift_matrix(&p)).unwrap().stable {
                continue;
            }
            let v =
                solve_steady_covariance(&build_drift_matrix(&p), &build_diffusion_matrix(&p))
                    .unwrap();
            for mech in [ModeId::Mech1, ModeId::Mech2] {
                let r = log_negativity(&v, dark, mech).unwrap();
                assert_eq!(r.value, 0.0, "{dark:?}-{mech:?} at phi={phi}");
            }
        }
    }
}

#[test]
fn twin_symmetry_at_the_diagonal_angle() {
    // Random draws around the entangling operating region, so the equality
    // is mostly exercised on nonzero measures.
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut informative = 0;
    for _ in 0..40 {
        let mut p = SystemParams::default();
        p.kappa = rng.random_range(0.1..0.4);
        p.gamma_m = rng.random_range(1e-5..1e-3);
        p.delta_h = rng.random_range(-1.3..-0.8);
        p.delta_v = p.delta_h;
        p.g_m = num_complex::Complex64::new(rng.random_range(0.12..0.28), 0.0);
        p.j_m = rng.random_range(0.05..0.28);
        p.theta = rng.random_range(0.15..0.85) * std::f64::consts::PI;
        let n: f64 = rng.random_range(0.0..300.0);
        p.n_th1 = n;
        p.n_th2 = n;
        p.phi = FRAC_PI_4;
        if !polarmech::check_stability(&build_drift_matrix(&p)).unwrap().stable {
            continue;
        }
        let v = solve_steady_covariance(&build_drift_matrix(&p), &build_diffusion_matrix(&p))
            .unwrap();
        for mech in [ModeId::Mech1, ModeId::Mech2] {
            let h = log_negativity(&v, ModeId::OpticalH, mech).unwrap().value;
            let vv = log_negativity(&v, ModeId::OpticalV, mech).unwrap().value;
            assert!((h - vv).abs() < 1e-9, "twin mismatch {h} vs {vv}");
            if h > 0.0 {
                informative += 1;
            }
        }
        let rh = min_residual_contangle(&v, (ModeId::OpticalH, ModeId::Mech1, ModeId::Mech2))
            .unwrap()
            .value;
        let rv = min_residual_contangle(&v, (ModeId::OpticalV, ModeId::Mech1, ModeId::Mech2))
            .unwrap()
            .value;
        assert!((rh - rv).abs() < 1e-9, "twin Rmin mismatch {rh} vs {rv}");
    }
    assert!(informative > 0, "every twin draw was separable; weak test");
}

#[test]
fn mechanical_relabeling_flips_the_modulation_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..30 {
        let mut p = draw_stable_params(&mut rng);
        p.omega_2 = p.omega_1;
        p.n_th2 = p.n_th1;
        if !polarmech::check_stability(&build_drift_matrix(&p)).unwrap().stable {
            continue;
        }
        let mut q = p;
        q.theta = -p.theta;
        let va = solve_steady_covariance(&build_drift_matrix(&p), &build_diffusion_matrix(&p))
            .unwrap();
        let vb = solve_steady_covariance(&build_drift_matrix(&q), &build_diffusion_matrix(&q))
            .unwrap();
        for opt in [ModeId::OpticalH, ModeId::OpticalV] {
            let a1 = log_negativity(&va, opt, ModeId::Mech1).unwrap().value;
            let b2 = log_negativity(&vb, opt, ModeId::Mech2).unwrap().value;
            assert!((a1 - b2).abs() < 1e-9, "swap mismatch {a1} vs {b2}");
            let a2 = log_negativity(&va, opt, ModeId::Mech2).unwrap().value;
            let b1 = log_negativity(&vb, opt, ModeId::Mech1).unwrap().value;
            assert!((a2 - b1).abs() < 1e-9, "swap mismatch {a2} vs {b1}");
        }
    }
}

#[test]
fn log_negativity_is_continuous_along_a_sweep() {
    // No NaN and bounded finite-difference slopes away from grid-scale
    // features; the max(0, .) kink is the only allowed non-smoothness.
    let p = SystemParams::default();
    let n = 144;
    let mut prev: Option<f64> = None;
    for i in 0..=n {
        let mut q = p;
        q.theta = i as f64 * TAU / n as f64;
        let v = solve_steady_covariance(&build_drift_matrix(&q), &build_diffusion_matrix(&q))
            .unwrap();
        let e = log_negativity(&v, ModeId::OpticalH, ModeId::Mech1).unwrap().value;
        assert!(e.is_finite());
        if let Some(last) = prev {
            assert!(
                (e - last).abs() < 0.1,
                "jump of {} across one theta cell",
                (e - last).abs()
            );
        }
        prev = Some(e);
    }
}

proptest! {
    #[test]
    fn coupling_split_preserves_total_weight(mag in 0.0..0.5f64, arg in 0.0..TAU, phi in -10.0..10.0f64) {
        let g = num_complex::Complex64::from_polar(mag, arg);
        let (gv, gh) = effective_couplings(g, phi);
        prop_assert!((gv.norm_sqr() + gh.norm_sqr() - g.norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = draw_stable_params(&mut rng);
        let v = solve_steady_covariance(&build_drift_matrix(&p), &build_diffusion_matrix(&p)).unwrap();
        let chi = extract_submatrix(&v, &[ModeId::OpticalH, ModeId::Mech1, ModeId::Mech2]).unwrap();
        let twice = partial_transpose(&partial_transpose(&chi, &[1]), &[1]);
        prop_assert!((&twice - &chi).abs().max() == 0.0);
    }
}
