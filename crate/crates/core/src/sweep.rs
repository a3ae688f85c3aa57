//! Declarative parameter-grid execution over the steady-state pipeline:
//! build the drift and diffusion matrices per point, classify stability,
//! solve the covariance where a steady state exists, and evaluate the
//! requested measures. Named scenarios reproduce the reference figures.
//!
//! Grid points are independent; with the `parallel` feature the map runs on
//! a rayon pool. Output order is row-major over the axes and identical for
//! any worker count.

use std::io::{self, Write};
use std::time::Instant;

use serde::Serialize;

use crate::darkmode;
use crate::entanglement::{log_negativity, min_residual_contangle, ModeId};
use crate::error::{Error, Result};
use crate::lyapunov::solve_steady_covariance;
use crate::model::{build_diffusion_matrix, build_drift_matrix, check_stability};
use crate::params::SystemParams;

/// A parameter that can serve as a sweep axis. `NTh` moves both baths
/// together; `DeltaH` moves only the horizontal detuning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepAxis {
    Phi,
    Theta,
    Jm,
    Gm,
    NTh,
    DeltaH,
}

impl SweepAxis {
    pub fn key(self) -> &'static str {
        match self {
            SweepAxis::Phi => "phi",
            SweepAxis::Theta => "theta",
            SweepAxis::Jm => "j_m",
            SweepAxis::Gm => "g_m",
            SweepAxis::NTh => "n_th",
            SweepAxis::DeltaH => "delta_h",
        }
    }

    pub fn parse(s: &str) -> Option<SweepAxis> {
        match s {
            "phi" => Some(SweepAxis::Phi),
            "theta" => Some(SweepAxis::Theta),
            "j_m" => Some(SweepAxis::Jm),
            "g_m" => Some(SweepAxis::Gm),
            "n_th" => Some(SweepAxis::NTh),
            "delta_h" => Some(SweepAxis::DeltaH),
            _ => None,
        }
    }

    /// Angle axes are interpreted in units of π by configuration front ends.
    pub fn is_angle(self) -> bool {
        matches!(self, SweepAxis::Phi | SweepAxis::Theta)
    }

    fn apply(self, p: &mut SystemParams, x: f64) {
        match self {
            SweepAxis::Phi => p.phi = x,
            SweepAxis::Theta => p.theta = x,
            SweepAxis::Jm => p.j_m = x,
            SweepAxis::Gm => p.g_m = num_complex::Complex64::new(x, 0.0),
            SweepAxis::NTh => {
                p.n_th1 = x;
                p.n_th2 = x;
            }
            SweepAxis::DeltaH => p.delta_h = x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Spacing {
    Linear,
    Log,
}

/// One sweep axis: an inclusive range discretized into `count` points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisSpec {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl AxisSpec {
    pub fn linear(axis: SweepAxis, start: f64, stop: f64, count: usize) -> Self {
        AxisSpec { axis, start, stop, count, spacing: Spacing::Linear }
    }

    pub fn log(axis: SweepAxis, start: f64, stop: f64, count: usize) -> Self {
        AxisSpec { axis, start, stop, count, spacing: Spacing::Log }
    }

    fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidSweep(format!(
                "axis {} needs at least 2 points, got {}",
                self.axis.key(),
                self.count
            )));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidSweep(format!("axis {} has non-finite endpoints", self.axis.key())));
        }
        if self.spacing == Spacing::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err(Error::InvalidSweep(format!(
                "log spacing on axis {} requires positive endpoints, got [{}, {}]",
                self.axis.key(),
                self.start,
                self.stop
            )));
        }
        Ok(())
    }

    /// The grid values of this axis, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => {
                        (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                    }
                }
            })
            .collect()
    }
}

/// A quantity evaluated at every grid point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Measure {
    /// Stability flag of the drift matrix (1 stable, 0 unstable).
    Stability,
    /// Logarithmic negativity of a mode pair; also records ν⁻.
    LogNegativity(ModeId, ModeId),
    /// Minimum residual contangle of a mode triple.
    ResidualContangleMin(ModeId, ModeId, ModeId),
    /// Magnitude of the bright-dark cross coupling |G_-|.
    GMinusAbs,
}

impl Measure {
    /// CSV column labels contributed by this measure.
    pub fn columns(&self) -> Vec<String> {
        match self {
            Measure::Stability => vec!["stable".into()],
            Measure::LogNegativity(a, b) => vec![
                format!("EN_{}_{}", a.label(), b.label()),
                format!("nu_{}_{}", a.label(), b.label()),
            ],
            Measure::ResidualContangleMin(u, v, w) => {
                vec![format!("Rmin_{}_{}_{}", u.label(), v.label(), w.label())]
            }
            Measure::GMinusAbs => vec!["g_minus_abs".into()],
        }
    }

    fn is_tripartite(&self) -> bool {
        matches!(self, Measure::ResidualContangleMin(..))
    }
}

/// A declarative sweep: base parameters, one or two axes, and the measures
/// to evaluate per grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axes: Vec<AxisSpec>,
    pub measures: Vec<Measure>,
    /// Name of the scenario this spec was derived from, if any.
    pub scenario: Option<String>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidSweep(format!(
                "need 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        if self.axes.len() == 2 && self.axes[0].axis == self.axes[1].axis {
            return Err(Error::InvalidSweep(format!(
                "both axes sweep {}",
                self.axes[0].axis.key()
            )));
        }
        for ax in &self.axes {
            ax.validate()?;
        }
        if self.measures.is_empty() {
            return Err(Error::InvalidSweep("no measures requested".into()));
        }
        Ok(())
    }

    /// Header labels: axis columns, measure columns, then the monogamy flag
    /// when any tripartite measure is present.
    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = self.axes.iter().map(|a| a.axis.key().to_string()).collect();
        for m in &self.measures {
            cols.extend(m.columns());
        }
        if self.measures.iter().any(Measure::is_tripartite) {
            cols.push("monogamy_ok".into());
        }
        cols
    }

    pub fn grid_len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    /// Row-major list of grid coordinates (outer axis first).
    fn grid(&self) -> Vec<Vec<f64>> {
        match self.axes.len() {
            1 => self.axes[0].values().into_iter().map(|x| vec![x]).collect(),
            2 => {
                let a = self.axes[0].values();
                let b = self.axes[1].values();
                let mut out = Vec::with_capacity(a.len() * b.len());
                for &x in &a {
                    for &y in &b {
                        out.push(vec![x, y]);
                    }
                }
                out
            }
            _ => unreachable!("validated"),
        }
    }

    /// The base parameters with this grid point's axis values applied.
    pub fn params_at(&self, axis_values: &[f64]) -> SystemParams {
        let mut p = self.base;
        for (ax, &x) in self.axes.iter().zip(axis_values) {
            ax.axis.apply(&mut p, x);
        }
        p
    }
}

/// One grid point's outcome. Unstable points carry `None` measures — never
/// fabricated zeros. Per-point failures land in `error` without aborting the
/// sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub axis_values: Vec<f64>,
    pub stable: bool,
    /// One entry per measure column (same order as `SweepSpec::columns`
    /// minus the axis and monogamy columns).
    pub values: Vec<Option<f64>>,
    /// All tripartite measures at this point respected monogamy; `None` when
    /// no tripartite measure was evaluated.
    pub monogamy_ok: Option<bool>,
    pub wall_time_s: f64,
    pub error: Option<String>,
}

fn eval_point(spec: &SweepSpec, axis_values: &[f64]) -> SweepRecord {
    let t0 = Instant::now();
    let mut values: Vec<Option<f64>> = Vec::new();
    let mut monogamy: Option<bool> = None;
    let mut first_error: Option<String> = None;
    let note_err = |slot: &mut Option<String>, e: String| {
        if slot.is_none() {
            *slot = Some(e);
        }
    };

    let p = spec.params_at(axis_values);
    if let Err(e) = p.validate() {
        let n_cols: usize = spec.measures.iter().map(|m| m.columns().len()).sum();
        return SweepRecord {
            axis_values: axis_values.to_vec(),
            stable: false,
            values: vec![None; n_cols],
            monogamy_ok: None,
            wall_time_s: t0.elapsed().as_secs_f64(),
            error: Some(e.to_string()),
        };
    }

    let m = build_drift_matrix(&p);
    let d = build_diffusion_matrix(&p);
    let stable = match check_stability(&m) {
        Ok(report) => report.stable,
        Err(e) => {
            note_err(&mut first_error, e.to_string());
            false
        }
    };

    let covariance = if stable {
        match solve_steady_covariance(&m, &d) {
            Ok(v) => Some(v),
            Err(e) => {
                note_err(&mut first_error, e.to_string());
                None
            }
        }
    } else {
        None
    };

    for measure in &spec.measures {
        match measure {
            Measure::Stability => values.push(Some(if stable { 1.0 } else { 0.0 })),
            Measure::GMinusAbs => match darkmode::hybridized_couplings(&p) {
                Ok(r) => values.push(Some(r.g_minus.norm())),
                Err(e) => {
                    note_err(&mut first_error, e.to_string());
                    values.push(None);
                }
            },
            Measure::LogNegativity(a, b) => match &covariance {
                Some(v) => match log_negativity(v, *a, *b) {
                    Ok(r) => {
                        values.push(Some(r.value));
                        values.push(Some(r.nu_min));
                    }
                    Err(e) => {
                        note_err(&mut first_error, e.to_string());
                        values.push(None);
                        values.push(None);
                    }
                },
                None => {
                    values.push(None);
                    values.push(None);
                }
            },
            Measure::ResidualContangleMin(u, w1, w2) => match &covariance {
                Some(v) => match min_residual_contangle(v, (*u, *w1, *w2)) {
                    Ok(r) => {
                        values.push(Some(r.value));
                        let ok = r.monogamy_ok.unwrap_or(true);
                        monogamy = Some(monogamy.unwrap_or(true) && ok);
                    }
                    Err(e) => {
                        note_err(&mut first_error, e.to_string());
                        values.push(None);
                    }
                },
                None => values.push(None),
            },
        }
    }

    SweepRecord {
        axis_values: axis_values.to_vec(),
        stable,
        values,
        monogamy_ok: monogamy,
        wall_time_s: t0.elapsed().as_secs_f64(),
        error: first_error,
    }
}

/// Runs the sweep with the default worker configuration.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    run_sweep_with_workers(spec, None)
}

/// Runs the sweep sequentially regardless of enabled features.
pub fn run_sweep_serial(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    Ok(spec.grid().iter().map(|pt| eval_point(spec, pt)).collect())
}

/// Runs the sweep, optionally pinning the worker count (`None` uses the
/// default pool size). Results are in row-major grid order and identical for
/// any worker count.
#[cfg(feature = "parallel")]
pub fn run_sweep_with_workers(spec: &SweepSpec, workers: Option<usize>) -> Result<Vec<SweepRecord>> {
    use rayon::prelude::*;
    spec.validate()?;
    let grid = spec.grid();
    match workers {
        Some(1) => Ok(grid.iter().map(|pt| eval_point(spec, pt)).collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidSweep(format!("thread pool: {e}")))?;
            Ok(pool.install(|| grid.par_iter().map(|pt| eval_point(spec, pt)).collect()))
        }
        None => Ok(grid.par_iter().map(|pt| eval_point(spec, pt)).collect()),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn run_sweep_with_workers(spec: &SweepSpec, _workers: Option<usize>) -> Result<Vec<SweepRecord>> {
    run_sweep_serial(spec)
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => String::new(),
    }
}

/// Writes the records as CSV: UTF-8, comma delimiter, `.` decimal, mandatory
/// header row, empty field = null. Output is a pure function of the spec and
/// records, so repeated runs are byte-identical.
pub fn write_csv<W: Write>(spec: &SweepSpec, records: &[SweepRecord], mut w: W) -> io::Result<()> {
    writeln!(w, "{}", spec.columns().join(","))?;
    let has_tri = spec.measures.iter().any(Measure::is_tripartite);
    for r in records {
        let mut fields: Vec<String> = r.axis_values.iter().map(|x| format!("{x}")).collect();
        fields.extend(r.values.iter().map(|&v| fmt_opt(v)));
        if has_tri {
            fields.push(match r.monogamy_ok {
                Some(true) => "1".into(),
                Some(false) => "0".into(),
                None => String::new(),
            });
        }
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Renders the CSV to a string.
pub fn csv_string(spec: &SweepSpec, records: &[SweepRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(spec, records, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

/// Summary of one measure column over a finished sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ColumnSummary {
    pub column: String,
    /// Largest value seen on the grid, with the axis values where it occurs.
    pub max_value: Option<f64>,
    pub max_at: Option<Vec<f64>>,
    /// Outer-axis value of the first grid point (scanning the outer axis,
    /// maximizing over the inner one) where the column turns positive.
    pub first_positive: Option<f64>,
}

/// Indices into `SweepRecord::values` of the headline column of each
/// measure, with its label. Diagnostic columns (ν⁻) and the stability flag
/// are skipped.
fn value_columns(spec: &SweepSpec) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut idx = 0usize;
    for m in &spec.measures {
        match m {
            Measure::Stability => idx += 1,
            Measure::LogNegativity(..) => {
                out.push((idx, m.columns()[0].clone()));
                idx += 2;
            }
            Measure::ResidualContangleMin(..) | Measure::GMinusAbs => {
                out.push((idx, m.columns()[0].clone()));
                idx += 1;
            }
        }
    }
    out
}

/// Per-column extrema and first-positive-crossing scan of a finished sweep.
pub fn summarize(spec: &SweepSpec, records: &[SweepRecord]) -> Vec<ColumnSummary> {
    let outer = spec.axes[0].values();
    let inner_len = if spec.axes.len() == 2 { spec.axes[1].count } else { 1 };

    value_columns(spec)
        .into_iter()
        .map(|(vi, column)| {
            let mut max_value: Option<f64> = None;
            let mut max_at: Option<Vec<f64>> = None;
            for r in records {
                if let Some(x) = r.values.get(vi).copied().flatten() {
                    if max_value.map_or(true, |m| x > m) {
                        max_value = Some(x);
                        max_at = Some(r.axis_values.clone());
                    }
                }
            }
            let mut first_positive = None;
            'outer: for (i, &ov) in outer.iter().enumerate() {
                for j in 0..inner_len {
                    let r = &records[i * inner_len + j];
                    if r.values.get(vi).copied().flatten().is_some_and(|x| x > 0.0) {
                        first_positive = Some(ov);
                        break 'outer;
                    }
                }
            }
            ColumnSummary {
                column,
                max_value,
                max_at,
                first_positive,
            }
        })
        .collect()
}

/// Structured output: the spec echo, library version, total timing and all
/// records in one JSON document.
#[derive(Debug, Serialize)]
pub struct RunOutput<'a> {
    pub library_version: &'static str,
    pub spec: &'a SweepSpec,
    pub columns: Vec<String>,
    pub wall_time_s: f64,
    pub records: &'a [SweepRecord],
}

impl<'a> RunOutput<'a> {
    pub fn new(spec: &'a SweepSpec, records: &'a [SweepRecord], wall_time_s: f64) -> Self {
        RunOutput {
            library_version: env!("CARGO_PKG_VERSION"),
            spec,
            columns: spec.columns(),
            wall_time_s,
            records,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn small_phi_spec() -> SweepSpec {
        let mut base = SystemParams::default();
        base.j_m = 0.0;
        base.n_th1 = 0.0;
        base.n_th2 = 0.0;
        SweepSpec {
            base,
            axes: vec![AxisSpec::linear(SweepAxis::Phi, 0.0, 2.0 * PI, 9)],
            measures: vec![
                Measure::LogNegativity(ModeId::OpticalV, ModeId::Mech1),
                Measure::LogNegativity(ModeId::OpticalH, ModeId::Mech1),
            ],
            scenario: None,
        }
    }

    #[test]
    fn axis_values_cover_endpoints() {
        let ax = AxisSpec::linear(SweepAxis::Jm, 0.0, 0.3, 4);
        let v = ax.values();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[3], 0.3);
        assert_abs_diff_eq!(v[1], 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(v[2], 0.2, epsilon = 1e-15);
        let ax = AxisSpec::log(SweepAxis::NTh, 1.0, 100.0, 3);
        let v = ax.values();
        assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[1], 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[2], 100.0, epsilon = 1e-12);
    }

    #[test]
    fn spec_validation_catches_bad_axes() {
        let mut s = small_phi_spec();
        s.axes[0].count = 1;
        assert!(s.validate().is_err());

        let mut s = small_phi_spec();
        s.axes[0].spacing = Spacing::Log;
        s.axes[0].start = 0.0;
        assert!(s.validate().is_err());

        let mut s = small_phi_spec();
        s.axes = vec![];
        assert!(s.validate().is_err());

        let mut s = small_phi_spec();
        s.axes = vec![
            AxisSpec::linear(SweepAxis::Phi, 0.0, 1.0, 3),
            AxisSpec::linear(SweepAxis::Phi, 0.0, 1.0, 3),
        ];
        assert!(s.validate().is_err());
    }

    #[test]
    fn single_point_grid_matches_direct_call() {
        let mut spec = small_phi_spec();
        spec.axes[0].count = 2;
        spec.axes[0].start = PI / 3.0;
        spec.axes[0].stop = PI / 3.0;
        let records = run_sweep_serial(&spec).unwrap();
        // Degenerate endpoints collapse onto the same parameter point.
        assert_eq!(records.len(), 2);
        let p = spec.params_at(&[PI / 3.0]);
        let v = solve_steady_covariance(&build_drift_matrix(&p), &build_diffusion_matrix(&p))
            .unwrap();
        let direct = log_negativity(&v, ModeId::OpticalV, ModeId::Mech1).unwrap();
        assert_abs_diff_eq!(records[0].values[0].unwrap(), direct.value, epsilon = 1e-14);
        assert_abs_diff_eq!(records[1].values[0].unwrap(), direct.value, epsilon = 1e-14);
    }

    #[test]
    fn unstable_points_carry_null_measures() {
        let mut spec = small_phi_spec();
        spec.base.j_m = 0.2;
        spec.axes = vec![AxisSpec::linear(SweepAxis::Gm, 0.0, 0.5, 6)];
        spec.measures.push(Measure::Stability);
        let records = run_sweep_serial(&spec).unwrap();
        let unstable: Vec<_> = records.iter().filter(|r| !r.stable).collect();
        assert!(!unstable.is_empty(), "expected an unstable tail on the G axis");
        for r in unstable {
            assert_eq!(r.values[0], None); // E_N null
            assert_eq!(r.values[1], None); // nu null
            assert_eq!(r.values[4], Some(0.0)); // stability flag itself
            // Instability is a classified outcome, not a per-point failure.
            assert!(r.error.is_none());
        }
    }

    #[test]
    fn serial_and_parallel_agree_bitwise() {
        let spec = small_phi_spec();
        let serial = run_sweep_serial(&spec).unwrap();
        let parallel = run_sweep_with_workers(&spec, Some(4)).unwrap();
        assert_eq!(csv_string(&spec, &serial), csv_string(&spec, &parallel));
    }

    #[test]
    fn csv_shape_and_nulls() {
        let mut spec = small_phi_spec();
        spec.measures.push(Measure::ResidualContangleMin(
            ModeId::OpticalH,
            ModeId::Mech1,
            ModeId::Mech2,
        ));
        let records = run_sweep_serial(&spec).unwrap();
        let csv = csv_string(&spec, &records);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "phi,EN_av_m1,nu_av_m1,EN_ah_m1,nu_ah_m1,Rmin_ah_m1_m2,monogamy_ok"
        );
        assert_eq!(lines.count(), 9);
        // Two runs are byte-identical.
        let again = run_sweep_serial(&spec).unwrap();
        assert_eq!(csv, csv_string(&spec, &again));
    }

    #[test]
    fn structured_output_embeds_spec_and_version() {
        let spec = small_phi_spec();
        let records = run_sweep_serial(&spec).unwrap();
        let out = RunOutput::new(&spec, &records, 0.25);
        let json = serde_json::to_value(&out).unwrap();
        assert_eq!(json["library_version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(json["records"].as_array().unwrap().len(), 9);
        assert!(json["spec"]["base"]["kappa"].as_f64().unwrap() > 0.0);
    }
}
