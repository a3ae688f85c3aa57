//! Self-describing `key = value` run configuration with sections.
//!
//! Angles are accepted in units of π by default (`phi = 0.25` means π/4), so
//! figure captions transcribe without π literals; `angle_units = radians`
//! (or the `--radians` flag) switches to raw radians. Unknown sections or
//! keys are rejected. The canonical rendering always uses radians and
//! re-parses to an identical configuration.

use std::f64::consts::PI;

use num_complex::Complex64;
use polarmech::{AxisSpec, Measure, ModeId, Spacing, SweepAxis, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Structured,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub path: Option<String>,
    pub format: OutputFormat,
    pub workers: Option<usize>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { path: None, format: OutputFormat::Csv, workers: None }
    }
}

/// A full run description: physical parameters, optional sweep axes and
/// measures, output options.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub axes: Vec<AxisSpec>,
    pub measures: Vec<Measure>,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: SystemParams::default(),
            axes: Vec::new(),
            measures: Vec::new(),
            output: OutputConfig::default(),
        }
    }
}

const PARAM_KEYS: &[&str] = &[
    "omega_1", "omega_2", "kappa", "gamma_m", "delta_h", "delta_v", "g_m", "g_m_im", "j_m",
    "phi", "theta", "n_th1", "n_th2", "n_th", "angle_units",
];
const AXIS_KEYS: &[&str] = &["param", "start", "stop", "count", "spacing"];
const MEASURE_KEYS: &[&str] = &["bipartite", "tripartite", "stability", "g_minus"];
const OUTPUT_KEYS: &[&str] = &["path", "format", "workers"];

fn parse_f64(key: &str, value: &str) -> Result<f64, String> {
    value.parse::<f64>().map_err(|_| format!("{key}: expected a number, got {value:?}"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(format!("{key}: expected true/false, got {value:?}")),
    }
}

fn parse_mode(tok: &str) -> Result<ModeId, String> {
    ModeId::parse(tok).ok_or_else(|| format!("unknown mode {tok:?} (expected ah, av, m1 or m2)"))
}

fn parse_measure_list(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), String> {
    for tok in value.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let modes: Vec<&str> = tok.split('-').collect();
        match (key, modes.as_slice()) {
            ("bipartite", [a, b]) => {
                let (a, b) = (parse_mode(a)?, parse_mode(b)?);
                if a == b {
                    return Err(format!("bipartite pair {tok:?} repeats a mode"));
                }
                cfg.measures.push(Measure::LogNegativity(a, b));
            }
            ("tripartite", [u, v, w]) => {
                let (u, v, w) = (parse_mode(u)?, parse_mode(v)?, parse_mode(w)?);
                if u == v || u == w || v == w {
                    return Err(format!("tripartite triple {tok:?} repeats a mode"));
                }
                cfg.measures.push(Measure::ResidualContangleMin(u, v, w));
            }
            _ => return Err(format!("{key}: malformed entry {tok:?}")),
        }
    }
    Ok(())
}

/// Applies one `key = value` assignment. `section` is the config section
/// (or the `--set` prefix); angle values honor `radians`.
fn apply_entry(
    cfg: &mut RunConfig,
    section: &str,
    key: &str,
    value: &str,
    radians: bool,
) -> Result<(), String> {
    let angle = |x: f64| if radians { x } else { x * PI };
    match section {
        "params" => {
            if !PARAM_KEYS.contains(&key) {
                return Err(format!("unknown key {key:?} in [params]"));
            }
            let p = &mut cfg.params;
            match key {
                "omega_1" => p.omega_1 = parse_f64(key, value)?,
                "omega_2" => p.omega_2 = parse_f64(key, value)?,
                "kappa" => p.kappa = parse_f64(key, value)?,
                "gamma_m" => p.gamma_m = parse_f64(key, value)?,
                "delta_h" => p.delta_h = parse_f64(key, value)?,
                "delta_v" => p.delta_v = parse_f64(key, value)?,
                "g_m" => p.g_m = Complex64::new(parse_f64(key, value)?, p.g_m.im),
                "g_m_im" => p.g_m = Complex64::new(p.g_m.re, parse_f64(key, value)?),
                "j_m" => p.j_m = parse_f64(key, value)?,
                "phi" => p.phi = angle(parse_f64(key, value)?),
                "theta" => p.theta = angle(parse_f64(key, value)?),
                "n_th1" => p.n_th1 = parse_f64(key, value)?,
                "n_th2" => p.n_th2 = parse_f64(key, value)?,
                "n_th" => {
                    let n = parse_f64(key, value)?;
                    p.n_th1 = n;
                    p.n_th2 = n;
                }
                "angle_units" => unreachable!("handled in the pre-pass"),
                _ => unreachable!(),
            }
        }
        "axis1" | "axis2" => {
            if !AXIS_KEYS.contains(&key) {
                return Err(format!("unknown key {key:?} in [{section}]"));
            }
            let idx = if section == "axis1" { 0 } else { 1 };
            while cfg.axes.len() <= idx {
                // Placeholder defaults; `param` must be set explicitly.
                cfg.axes.push(AxisSpec::linear(SweepAxis::Phi, 0.0, 1.0, 2));
            }
            let ax = &mut cfg.axes[idx];
            match key {
                "param" => {
                    ax.axis = SweepAxis::parse(value)
                        .ok_or_else(|| format!("unknown axis parameter {value:?}"))?
                }
                "start" => ax.start = parse_f64(key, value)?,
                "stop" => ax.stop = parse_f64(key, value)?,
                "count" => {
                    ax.count = value
                        .parse::<usize>()
                        .map_err(|_| format!("count: expected an integer, got {value:?}"))?
                }
                "spacing" => {
                    ax.spacing = match value {
                        "linear" => Spacing::Linear,
                        "log" => Spacing::Log,
                        _ => return Err(format!("spacing: expected linear or log, got {value:?}")),
                    }
                }
                _ => unreachable!(),
            }
        }
        "measures" => {
            if !MEASURE_KEYS.contains(&key) {
                return Err(format!("unknown key {key:?} in [measures]"));
            }
            match key {
                "bipartite" | "tripartite" => parse_measure_list(cfg, key, value)?,
                "stability" => {
                    if parse_bool(key, value)? {
                        cfg.measures.push(Measure::Stability);
                    }
                }
                "g_minus" => {
                    if parse_bool(key, value)? {
                        cfg.measures.push(Measure::GMinusAbs);
                    }
                }
                _ => unreachable!(),
            }
        }
        "output" => {
            if !OUTPUT_KEYS.contains(&key) {
                return Err(format!("unknown key {key:?} in [output]"));
            }
            match key {
                "path" => cfg.output.path = Some(value.to_string()),
                "format" => {
                    cfg.output.format = match value {
                        "csv" => OutputFormat::Csv,
                        "structured" => OutputFormat::Structured,
                        _ => {
                            return Err(format!(
                                "format: expected csv or structured, got {value:?}"
                            ))
                        }
                    }
                }
                "workers" => {
                    cfg.output.workers = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| format!("workers: expected an integer, got {value:?}"))?,
                    )
                }
                _ => unreachable!(),
            }
        }
        _ => return Err(format!("unknown section [{section}]")),
    }
    Ok(())
}

fn split_line(line: &str) -> Option<(&str, &str)> {
    let (key, value) = line.split_once('=')?;
    Some((key.trim(), value.trim()))
}

/// Parses a config file. Unknown sections, keys, or malformed values are
/// errors; nothing is silently ignored.
pub fn parse_config(text: &str) -> Result<RunConfig, String> {
    // Pre-pass: entry list and the angle-units switch.
    let mut entries: Vec<(String, String, String)> = Vec::new();
    let mut section = String::from("params");
    let mut radians = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = name.trim().to_string();
            continue;
        }
        let (key, value) = split_line(line)
            .ok_or_else(|| format!("line {}: expected `key = value`, got {raw:?}", lineno + 1))?;
        if section == "params" && key == "angle_units" {
            radians = match value {
                "pi" => false,
                "radians" => true,
                _ => return Err(format!("angle_units: expected pi or radians, got {value:?}")),
            };
            continue;
        }
        entries.push((section.clone(), key.to_string(), value.to_string()));
    }

    let mut cfg = RunConfig::default();
    for (section, key, value) in &entries {
        apply_entry(&mut cfg, section, key, value, radians)
            .map_err(|e| format!("config error: {e}"))?;
    }
    if cfg.axes.len() == 2 && entries.iter().all(|(s, k, _)| !(s == "axis1" && k == "param")) {
        return Err("config error: [axis2] given without [axis1] param".into());
    }
    Ok(cfg)
}

/// Applies a repeatable `--set key=value` override on top of a config.
/// Unprefixed keys target `[params]`; `axis1.`, `axis2.` and `output.`
/// prefixes reach the other sections.
pub fn apply_set(cfg: &mut RunConfig, assignment: &str, radians: bool) -> Result<(), String> {
    let (key, value) = split_line(assignment)
        .ok_or_else(|| format!("--set: expected key=value, got {assignment:?}"))?;
    let (section, key) = match key.split_once('.') {
        Some((s, k)) => (s, k),
        None => ("params", key),
    };
    if section == "params" && key == "angle_units" {
        return Err("--set: use the --radians flag instead of angle_units".into());
    }
    apply_entry(cfg, section, key, value, radians).map_err(|e| format!("--set {assignment:?}: {e}"))
}

fn measure_tokens(measures: &[Measure]) -> (Vec<String>, Vec<String>, bool, bool) {
    let mut bi = Vec::new();
    let mut tri = Vec::new();
    let mut stability = false;
    let mut g_minus = false;
    for m in measures {
        match m {
            Measure::LogNegativity(a, b) => bi.push(format!("{}-{}", a.label(), b.label())),
            Measure::ResidualContangleMin(u, v, w) => {
                tri.push(format!("{}-{}-{}", u.label(), v.label(), w.label()))
            }
            Measure::Stability => stability = true,
            Measure::GMinusAbs => g_minus = true,
        }
    }
    (bi, tri, stability, g_minus)
}

/// Canonical rendering: radians, every parameter explicit. Re-parsing the
/// result yields an identical `RunConfig`.
pub fn render_config(cfg: &RunConfig) -> String {
    let p = &cfg.params;
    let mut out = String::new();
    out.push_str("[params]\n");
    out.push_str("angle_units = radians\n");
    let mut kv: Vec<(&str, f64)> = vec![
        ("omega_1", p.omega_1),
        ("omega_2", p.omega_2),
        ("kappa", p.kappa),
        ("gamma_m", p.gamma_m),
        ("delta_h", p.delta_h),
        ("delta_v", p.delta_v),
        ("g_m", p.g_m.re),
    ];
    if p.g_m.im != 0.0 {
        kv.push(("g_m_im", p.g_m.im));
    }
    kv.extend([
        ("j_m", p.j_m),
        ("phi", p.phi),
        ("theta", p.theta),
        ("n_th1", p.n_th1),
        ("n_th2", p.n_th2),
    ]);
    for (k, v) in kv {
        out.push_str(&format!("{k} = {v}\n"));
    }

    for (i, ax) in cfg.axes.iter().enumerate() {
        out.push_str(&format!("\n[axis{}]\n", i + 1));
        out.push_str(&format!("param = {}\n", ax.axis.key()));
        out.push_str(&format!("start = {}\n", ax.start));
        out.push_str(&format!("stop = {}\n", ax.stop));
        out.push_str(&format!("count = {}\n", ax.count));
        out.push_str(&format!(
            "spacing = {}\n",
            if ax.spacing == Spacing::Log { "log" } else { "linear" }
        ));
    }

    let (bi, tri, stability, g_minus) = measure_tokens(&cfg.measures);
    if !cfg.measures.is_empty() {
        out.push_str("\n[measures]\n");
        if !bi.is_empty() {
            out.push_str(&format!("bipartite = {}\n", bi.join(", ")));
        }
        if !tri.is_empty() {
            out.push_str(&format!("tripartite = {}\n", tri.join(", ")));
        }
        if stability {
            out.push_str("stability = true\n");
        }
        if g_minus {
            out.push_str("g_minus = true\n");
        }
    }

    out.push_str("\n[output]\n");
    out.push_str(&format!(
        "format = {}\n",
        if cfg.output.format == OutputFormat::Structured { "structured" } else { "csv" }
    ));
    if let Some(path) = &cfg.output.path {
        out.push_str(&format!("path = {path}\n"));
    }
    if let Some(workers) = cfg.output.workers {
        out.push_str(&format!("workers = {workers}\n"));
    }
    out
}
