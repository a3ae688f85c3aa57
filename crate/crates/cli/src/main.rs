//! Command-line front end: single-point analyses, named figure scenarios and
//! declarative sweeps, with CSV or structured JSON output.
//!
//! Exit codes are a frozen contract: 0 success, 2 configuration error,
//! 3 unstable operating point, 4 numerical failure.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use config::{apply_set, parse_config, render_config, OutputFormat, RunConfig};
use polarmech::{
    build_diffusion_matrix, build_drift_matrix, check_stability, csv_string, hybridized_couplings,
    log_negativity, lyapunov_residual, min_residual_contangle, run_sweep_with_workers, scenario,
    scenario_names, solve_steady_covariance, summarize, Error, ModeId, RunOutput, SweepRecord,
    SweepSpec,
};

const EXIT_CONFIG: u8 = 2;
const EXIT_UNSTABLE: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "polarmech",
    version,
    about = "Steady-state Gaussian entanglement of a polarization-driven optomechanical system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a single operating point: stability, covariance diagnostics,
    /// every bipartite and tripartite measure, dark-mode report.
    Point {
        /// Override a parameter, e.g. --set phi=0.25 (angles in units of pi).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Read parameters from a config file before applying --set.
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        /// Interpret angles as raw radians instead of units of pi.
        #[arg(long)]
        radians: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run a named figure scenario and write CSV plus a metadata sidecar.
    Scenario {
        /// Scenario name; see `list-scenarios`.
        name: String,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        radians: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Run the sweep described by a config file.
    Sweep {
        config_file: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        radians: bool,
        /// Override the output path from the config.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Worker threads (0 = one per core; overrides the config).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// List the available figure scenarios.
    ListScenarios,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

type CmdResult = Result<(), (u8, String)>;

fn config_err<E: std::fmt::Display>(e: E) -> (u8, String) {
    (EXIT_CONFIG, e.to_string())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Point { set, config, radians, format, out } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
                    parse_config(&text).map_err(config_err)?
                }
                None => RunConfig::default(),
            };
            for assignment in &set {
                apply_set(&mut cfg, assignment, radians).map_err(config_err)?;
            }
            cmd_point(&cfg, format, out.as_deref())
        }
        Command::Scenario { name, set, radians, out, format, workers } => {
            let mut spec = scenario(&name).map_err(|e| match e {
                Error::UnknownScenario { .. } => config_err(e),
                other => (EXIT_NUMERICAL, other.to_string()),
            })?;
            let mut cfg = RunConfig {
                params: spec.base,
                axes: spec.axes.clone(),
                measures: spec.measures.clone(),
                ..RunConfig::default()
            };
            for assignment in &set {
                apply_set(&mut cfg, assignment, radians).map_err(config_err)?;
            }
            spec.base = cfg.params;
            spec.axes = cfg.axes.clone();
            spec.measures = cfg.measures.clone();
            spec.validate().map_err(config_err)?;

            let default_name = match format {
                Format::Csv => format!("{name}.csv"),
                Format::Structured => format!("{name}.json"),
            };
            let out_path = out
                .or(cfg.output.path.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(default_name));
            let workers = if workers == 0 { cfg.output.workers } else { Some(workers) };
            run_and_write(&spec, &cfg, workers, &out_path, format)
        }
        Command::Sweep { config_file, set, radians, out, workers } => {
            let text = fs::read_to_string(&config_file)
                .map_err(|e| config_err(format!("{}: {e}", config_file.display())))?;
            let mut cfg = parse_config(&text).map_err(config_err)?;
            for assignment in &set {
                apply_set(&mut cfg, assignment, radians).map_err(config_err)?;
            }
            let spec = SweepSpec {
                base: cfg.params,
                axes: cfg.axes.clone(),
                measures: cfg.measures.clone(),
                scenario: None,
            };
            spec.validate().map_err(config_err)?;
            let format = match cfg.output.format {
                OutputFormat::Csv => Format::Csv,
                OutputFormat::Structured => Format::Structured,
            };
            let out_path = out
                .or(cfg.output.path.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("sweep.csv"));
            let workers = match workers {
                Some(0) => None,
                Some(n) => Some(n),
                None => cfg.output.workers.filter(|&n| n != 0),
            };
            run_and_write(&spec, &cfg, workers, &out_path, format)
        }
        Command::ListScenarios => {
            for name in scenario_names() {
                println!("{name}");
            }
            Ok(())
        }
    }
}

const BIPARTITE_PAIRS: [(ModeId, ModeId); 6] = [
    (ModeId::OpticalH, ModeId::Mech1),
    (ModeId::OpticalH, ModeId::Mech2),
    (ModeId::OpticalV, ModeId::Mech1),
    (ModeId::OpticalV, ModeId::Mech2),
    (ModeId::OpticalH, ModeId::OpticalV),
    (ModeId::Mech1, ModeId::Mech2),
];

fn numerical_err(e: Error) -> (u8, String) {
    (EXIT_NUMERICAL, e.to_string())
}

fn cmd_point(cfg: &RunConfig, format: Format, out: Option<&Path>) -> CmdResult {
    let p = cfg.params;
    p.validate().map_err(config_err)?;
    let m = build_drift_matrix(&p);
    let d = build_diffusion_matrix(&p);
    let stability = check_stability(&m).map_err(numerical_err)?;

    let mut text = String::new();
    let mut json = serde_json::json!({
        "params": p,
        "stability": stability,
    });

    text.push_str(&format!(
        "stability: {}{}\n  max Re(eigenvalue) = {:.6e}\n  eigenvalues:\n",
        if stability.stable { "stable" } else { "UNSTABLE" },
        if stability.marginal { " (marginal)" } else { "" },
        stability.max_real_part
    ));
    for e in &stability.eigenvalues {
        text.push_str(&format!("    {:+.9} {:+.9}i\n", e.re, e.im));
    }

    if !stability.stable {
        emit(&text, &json, format, out)?;
        return Err((EXIT_UNSTABLE, "no steady state at this operating point".into()));
    }

    let v = solve_steady_covariance(&m, &d).map_err(numerical_err)?;
    let residual = lyapunov_residual(&m, &d, &v);
    let spectrum = v.symplectic_spectrum().map_err(numerical_err)?;
    text.push_str(&format!("\nsteady-state covariance:\n  residual = {residual:.3e}\n"));
    text.push_str(&format!(
        "  symplectic spectrum = [{}]\n",
        spectrum.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", ")
    ));
    json["covariance"] = serde_json::json!({
        "residual": residual,
        "symplectic_spectrum": spectrum,
    });

    text.push_str("\nbipartite log-negativity:\n");
    let mut bipartite = Vec::new();
    for (a, b) in BIPARTITE_PAIRS {
        let r = log_negativity(&v, a, b).map_err(numerical_err)?;
        text.push_str(&format!(
            "  E_N[{}-{}] = {:.6}   (nu = {:.6})\n",
            a.label(),
            b.label(),
            r.value,
            r.nu_min
        ));
        bipartite.push(r);
    }
    json["bipartite"] = serde_json::to_value(&bipartite).unwrap();

    text.push_str("\nminimum residual contangle:\n");
    let mut tripartite = Vec::new();
    for focus in [ModeId::OpticalH, ModeId::OpticalV] {
        let r = min_residual_contangle(&v, (focus, ModeId::Mech1, ModeId::Mech2))
            .map_err(numerical_err)?;
        text.push_str(&format!(
            "  R_min[{}-m1-m2] = {:.6e}{}\n",
            focus.label(),
            r.value,
            if r.monogamy_ok == Some(false) { "   MONOGAMY VIOLATION" } else { "" }
        ));
        tripartite.push(r);
    }
    json["tripartite"] = serde_json::to_value(&tripartite).unwrap();

    text.push_str("\ndark-mode analysis:\n");
    match hybridized_couplings(&p) {
        Ok(report) => {
            text.push_str(&format!(
                "  G_+ = {:.6}, |G_-| = {:.6e}\n  omega_+ = {:.6} {:+.6}i, omega_- = {:.6} {:+.6}i\n  optical regime: {}\n  mechanical dark mode broken: {}\n",
                report.g_plus,
                report.g_minus.norm(),
                report.omega_plus.re,
                report.omega_plus.im,
                report.omega_minus.re,
                report.omega_minus.im,
                report.optical_regime,
                report.mechanical_dark_broken
            ));
            json["dark_mode"] = serde_json::to_value(&report).unwrap();
        }
        Err(Error::HybridizationUndefined) => {
            text.push_str("  undefined (no drive coupling)\n");
            json["dark_mode"] = serde_json::Value::Null;
        }
        Err(e) => return Err(numerical_err(e)),
    }

    emit(&text, &json, format, out)
}

fn emit(text: &str, json: &serde_json::Value, format: Format, out: Option<&Path>) -> CmdResult {
    let rendered = match format {
        Format::Csv => text.to_string(),
        Format::Structured => format!("{:#}\n", json),
    };
    match out {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| (EXIT_NUMERICAL, format!("{}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn run_and_write(
    spec: &SweepSpec,
    cfg: &RunConfig,
    workers: Option<usize>,
    out_path: &Path,
    format: Format,
) -> CmdResult {
    let t0 = Instant::now();
    let records = run_sweep_with_workers(spec, workers).map_err(numerical_err)?;
    let wall = t0.elapsed().as_secs_f64();

    // Echo the effective configuration in re-parseable form.
    let mut echo_cfg = cfg.clone();
    echo_cfg.params = spec.base;
    echo_cfg.axes = spec.axes.clone();
    echo_cfg.measures = spec.measures.clone();
    echo_cfg.output.path = Some(out_path.display().to_string());
    let config_echo = render_config(&echo_cfg);

    let summary = summarize(spec, &records);
    let stable_points = records.iter().filter(|r| r.stable).count();
    let failures: Vec<&SweepRecord> = records.iter().filter(|r| r.error.is_some()).collect();

    let metadata = serde_json::json!({
        "scenario": spec.scenario,
        "library_version": env!("CARGO_PKG_VERSION"),
        "wall_time_s": wall,
        "grid_points": records.len(),
        "stable_points": stable_points,
        "point_failures": failures.len(),
        "columns": spec.columns(),
        "config_echo": config_echo,
        "spec": spec,
        "summary": summary,
    });

    match format {
        Format::Csv => {
            fs::write(out_path, csv_string(spec, &records))
                .map_err(|e| (EXIT_NUMERICAL, format!("{}: {e}", out_path.display())))?;
            let meta_path = out_path.with_extension("meta.json");
            fs::write(&meta_path, format!("{:#}\n", metadata))
                .map_err(|e| (EXIT_NUMERICAL, format!("{}: {e}", meta_path.display())))?;
            println!("wrote {} and {}", out_path.display(), meta_path.display());
        }
        Format::Structured => {
            let mut doc = serde_json::to_value(RunOutput::new(spec, &records, wall)).unwrap();
            doc["scenario"] = serde_json::json!(spec.scenario);
            doc["config_echo"] = serde_json::json!(config_echo);
            doc["summary"] = serde_json::to_value(&summary).unwrap();
            fs::write(out_path, format!("{:#}\n", doc))
                .map_err(|e| (EXIT_NUMERICAL, format!("{}: {e}", out_path.display())))?;
            println!("wrote {}", out_path.display());
        }
    }

    println!(
        "{} grid points ({} stable, {} failed) in {:.2}s",
        records.len(),
        stable_points,
        failures.len(),
        wall
    );
    for col in &summary {
        let mut line = format!("  {}:", col.column);
        match (col.max_value, &col.max_at) {
            (Some(max), Some(at)) => {
                let at: Vec<String> = spec
                    .axes
                    .iter()
                    .zip(at)
                    .map(|(ax, v)| format!("{} = {:.6}", ax.axis.key(), v))
                    .collect();
                line.push_str(&format!(" max {:.6e} at {}", max, at.join(", ")));
            }
            _ => line.push_str(" no finite values"),
        }
        match col.first_positive {
            Some(x) => line.push_str(&format!(
                "; first positive along {} at {:.6}",
                spec.axes[0].axis.key(),
                x
            )),
            None => line.push_str("; never positive"),
        }
        println!("{line}");
    }
    Ok(())
}
