//! Compares the sequential and rayon-parallel sweep executions on the same
//! grids, plus the single-point steady-state solve they are built from.
//!
//! Run with `cargo bench -p polarmech`. Building with
//! `--no-default-features` benches only the sequential path.

use criterion::{criterion_group, criterion_main, Criterion};
use std::f64::consts::PI;

use polarmech::{
    build_diffusion_matrix, build_drift_matrix, run_sweep_serial, run_sweep_with_workers,
    solve_steady_covariance, AxisSpec, Measure, ModeId, SweepAxis, SweepSpec, SystemParams,
};

fn bipartite_phi_spec(points: usize) -> SweepSpec {
    let mut base = SystemParams::default();
    base.j_m = 0.0;
    SweepSpec {
        base,
        axes: vec![AxisSpec::linear(SweepAxis::Phi, 0.0, 2.0 * PI, points)],
        measures: vec![
            Measure::LogNegativity(ModeId::OpticalV, ModeId::Mech1),
            Measure::LogNegativity(ModeId::OpticalV, ModeId::Mech2),
            Measure::LogNegativity(ModeId::OpticalH, ModeId::Mech1),
            Measure::LogNegativity(ModeId::OpticalH, ModeId::Mech2),
        ],
        scenario: None,
    }
}

fn tripartite_grid_spec(points: usize) -> SweepSpec {
    let mut base = SystemParams::default();
    base.g_m = num_complex::Complex64::new(0.3, 0.0);
    SweepSpec {
        base,
        axes: vec![
            AxisSpec::linear(SweepAxis::Jm, 0.0, 0.2, points),
            AxisSpec::linear(SweepAxis::Theta, 0.0, 2.0 * PI, points),
        ],
        measures: vec![Measure::ResidualContangleMin(
            ModeId::OpticalH,
            ModeId::Mech1,
            ModeId::Mech2,
        )],
        scenario: None,
    }
}

fn bench_point_solve(c: &mut Criterion) {
    let p = SystemParams::default();
    let m = build_drift_matrix(&p);
    let d = build_diffusion_matrix(&p);
    c.bench_function("steady_covariance_point", |b| {
        b.iter(|| solve_steady_covariance(std::hint::black_box(&m), std::hint::black_box(&d)))
    });
}

fn bench_sweeps(c: &mut Criterion) {
    let phi = bipartite_phi_spec(61);
    let grid = tripartite_grid_spec(13);

    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("phi_61pts_serial", |b| {
        b.iter(|| run_sweep_serial(std::hint::black_box(&phi)).unwrap())
    });
    group.bench_function("grid_13x13_serial", |b| {
        b.iter(|| run_sweep_serial(std::hint::black_box(&grid)).unwrap())
    });
    #[cfg(feature = "parallel")]
    {
        group.bench_function("phi_61pts_parallel", |b| {
            b.iter(|| run_sweep_with_workers(std::hint::black_box(&phi), None).unwrap())
        });
        group.bench_function("grid_13x13_parallel", |b| {
            b.iter(|| run_sweep_with_workers(std::hint::black_box(&grid), None).unwrap())
        });
    }
    #[cfg(not(feature = "parallel"))]
    {
        // Keep the symbol used so the bench builds identically either way.
        let _ = run_sweep_with_workers(&phi, Some(1)).unwrap();
    }
    group.finish();
}

criterion_group!(benches, bench_point_solve, bench_sweeps);
criterion_main!(benches);
