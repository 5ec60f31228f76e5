//! Command-line configuration and run orchestration.
//!
//! Every option can come from a flag or from a config file of `key = value`
//! lines whose keys are the long flag names; flags win. A manifest written
//! by a previous run is also accepted as a config file.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{classify_regime, critical_curve, default_workers, sweep, AxisRange, CriticalSearch, PointSettings, SweepSpec, Thresholds};
use crate::error::{Result, WalkError};
use crate::evolution::{evolve, reduce_phi, sites_for_steps, Boundary, KerrMode, WalkParams};
use crate::fiberloop::{loop_evolve, LoopState};
use crate::observables::{long_time_averages, ObservableSeries, Recorder};

#[derive(Debug, Parser)]
#[command(name = "nlwalk", version, about = "Nonlinear flip-flop quantum walks through potential barriers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one parameter point and write its time series
    Run(Flags),
    /// Long-time averages and regime labels over a (chi, phi) grid
    Sweep(Flags),
    /// Critical barrier phi_c for a list of nonlinearities
    CriticalPhi(Flags),
    /// Coupled fiber-loop pulse evolution
    Fiberloop(Flags),
}

/// All options arrive as text so that flags and config-file entries go
/// through the same parser.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Coin angle in radians or as a multiple of pi (`pi/4`)
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Barrier angle; `min:max:count` for sweep
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Nonlinearity; `min:max:count` for sweep
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<String>,
    /// Comma-separated nonlinearities for critical-phi
    #[arg(long = "chi-list", allow_hyphen_values = true)]
    pub chi_list: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub steps: Option<String>,
    /// Lattice size (default 2*steps+3)
    #[arg(long, allow_hyphen_values = true)]
    pub sites: Option<String>,
    /// Trailing steps in long-time averages
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long = "record-stride", allow_hyphen_values = true)]
    pub record_stride: Option<String>,
    /// Comma-separated steps, `every:K`, or `none`
    #[arg(long, allow_hyphen_values = true)]
    pub snapshots: Option<String>,
    /// `periodic` or `open`
    #[arg(long)]
    pub boundary: Option<String>,
    /// Output path prefix
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub workers: Option<String>,
    /// `total` or `per-component`
    #[arg(long = "kerr-mode")]
    pub kerr_mode: Option<String>,
    /// sp_bar cutoff for self-trapping
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<String>,
    /// Bisection tolerance in radians
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<String>,
    /// Fiber-loop nonlinearity
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Key-value config file (or a previous run's manifest)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Flags {
    fn entries(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("theta", &self.theta),
            ("phi", &self.phi),
            ("chi", &self.chi),
            ("chi-list", &self.chi_list),
            ("steps", &self.steps),
            ("sites", &self.sites),
            ("window", &self.window),
            ("record-stride", &self.record_stride),
            ("snapshots", &self.snapshots),
            ("boundary", &self.boundary),
            ("out", &self.out),
            ("workers", &self.workers),
            ("kerr-mode", &self.kerr_mode),
            ("threshold", &self.threshold),
            ("tol", &self.tol),
            ("gamma", &self.gamma),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Run,
    Sweep,
    CriticalPhi,
    Fiberloop,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Run => "run",
            Mode::Sweep => "sweep",
            Mode::CriticalPhi => "critical-phi",
            Mode::Fiberloop => "fiberloop",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Mode::Run => &["theta", "phi", "chi", "snapshots", "boundary", "kerr-mode", "threshold", "steps", "sites", "window", "record-stride", "out", "workers"],
            Mode::Sweep => &["theta", "phi", "chi", "kerr-mode", "threshold", "steps", "sites", "window", "record-stride", "out", "workers"],
            Mode::CriticalPhi => &["theta", "chi", "chi-list", "kerr-mode", "threshold", "tol", "steps", "sites", "window", "record-stride", "out", "workers"],
            Mode::Fiberloop => &["gamma", "snapshots", "threshold", "steps", "sites", "window", "record-stride", "out", "workers"],
        }
    }
}

/// Fully resolved invocation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub theta: f64,
    pub phi: f64,
    pub chi: f64,
    pub chi_range: AxisRange,
    pub phi_range: AxisRange,
    pub chi_list: Vec<f64>,
    pub steps: usize,
    pub sites: usize,
    pub window: usize,
    pub record_stride: usize,
    pub snapshots: Vec<usize>,
    pub boundary: Boundary,
    pub kerr_mode: KerrMode,
    pub workers: usize,
    pub threshold: f64,
    pub tol: f64,
    pub gamma: f64,
    pub out: PathBuf,
    /// Every key that applies to the mode, with its resolved value.
    pub resolved: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

/// Parses command-line arguments (including the program name).
pub fn parse_config<I, T>(args: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| WalkError::Usage(e.to_string().trim_end().to_owned()))?;
    RunConfig::from_cli(cli)
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (mode, flags) = match cli.command {
            Command::Run(f) => (Mode::Run, f),
            Command::Sweep(f) => (Mode::Sweep, f),
            Command::CriticalPhi(f) => (Mode::CriticalPhi, f),
            Command::Fiberloop(f) => (Mode::Fiberloop, f),
        };
        let mut raw = match &flags.config {
            Some(path) => read_config_file(path, mode)?,
            None => BTreeMap::new(),
        };
        if flags.chi.is_some() || flags.chi_list.is_some() {
            raw.remove("chi");
            raw.remove("chi-list");
        }
        for (key, value) in flags.entries() {
            if let Some(v) = value {
                raw.insert(key.to_owned(), v.clone());
            }
        }
        Self::resolve(mode, raw)
    }

    fn resolve(mode: Mode, raw: BTreeMap<String, String>) -> Result<Self> {
        let allowed = mode.keys();
        if let Some(bad) = raw.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(WalkError::Usage(format!("option `{bad}` is not accepted by `{}`", mode.name())));
        }
        if raw.contains_key("chi") && raw.contains_key("chi-list") {
            return Err(WalkError::Usage("conflicting options `chi` and `chi-list`".into()));
        }
        let get = |k: &str| raw.get(k).map(String::as_str);
        let mut warnings = Vec::new();

        let steps = get("steps").map(|v| parse_count("steps", v)).transpose()?.unwrap_or(2000);
        let sites = get("sites").map(|v| parse_count("sites", v)).transpose()?.unwrap_or_else(|| sites_for_steps(steps));
        let window = get("window").map(|v| parse_count("window", v)).transpose()?.unwrap_or(200);
        let record_stride = get("record-stride").map(|v| parse_count("record-stride", v)).transpose()?.unwrap_or(1);
        if record_stride == 0 {
            return Err(WalkError::Usage("record-stride: must be at least 1".into()));
        }
        let theta = get("theta").map(|v| parse_angle("theta", v)).transpose()?.unwrap_or(FRAC_PI_4);
        let workers = get("workers").map(|v| parse_count("workers", v)).transpose()?.unwrap_or_else(default_workers);
        if workers == 0 {
            return Err(WalkError::Usage("workers: must be at least 1".into()));
        }
        let boundary = match get("boundary").unwrap_or("periodic") {
            "periodic" => Boundary::Periodic,
            "open" => Boundary::Open,
            other => return Err(WalkError::Usage(format!("boundary: expected `periodic` or `open`, got `{other}`"))),
        };
        let kerr_mode = match get("kerr-mode").unwrap_or("total") {
            "total" => KerrMode::Total,
            "per-component" => KerrMode::PerComponent,
            other => return Err(WalkError::Usage(format!("kerr-mode: expected `total` or `per-component`, got `{other}`"))),
        };
        let threshold = get("threshold").map(|v| parse_real("threshold", v)).transpose()?.unwrap_or(0.1);
        let tol = get("tol").map(|v| parse_real("tol", v)).transpose()?.unwrap_or(1e-3);
        if tol.is_nan() || tol <= 0.0 {
            return Err(WalkError::Usage("tol: must be positive".into()));
        }
        let gamma = get("gamma").map(|v| parse_real("gamma", v)).transpose()?.unwrap_or(0.0);
        if gamma < 0.0 {
            return Err(WalkError::Usage("gamma: must be >= 0".into()));
        }
        let out = PathBuf::from(get("out").unwrap_or("nlwalk"));

        let mut phi = 0.0;
        let mut chi = 0.0;
        let mut chi_range = AxisRange::single(0.0);
        let mut phi_range = AxisRange::single(0.0);
        let mut chi_list = Vec::new();
        match mode {
            Mode::Run => {
                let requested = get("phi").map(|v| parse_angle("phi", v)).transpose()?.unwrap_or(0.0);
                let (reduced, changed) = reduce_phi(requested);
                if changed {
                    warnings.push(format!("phi = {requested} outside [0, pi/2]; reduced by symmetry to {reduced}"));
                }
                phi = reduced;
                chi = get("chi").map(|v| parse_real("chi", v)).transpose()?.unwrap_or(0.0);
                if chi < 0.0 {
                    return Err(WalkError::Usage("chi: must be >= 0".into()));
                }
            }
            Mode::Sweep => {
                chi_range = get("chi").map(|v| parse_range("chi", v, false)).transpose()?.unwrap_or(AxisRange::new(0.0, 1.0, 21));
                phi_range = get("phi").map(|v| parse_range("phi", v, true)).transpose()?.unwrap_or(AxisRange::new(0.0, FRAC_PI_2, 21));
            }
            Mode::CriticalPhi => {
                chi_list = match (get("chi"), get("chi-list")) {
                    (Some(v), _) => vec![parse_real("chi", v)?],
                    (_, Some(v)) => v.split(',').map(|x| parse_real("chi-list", x)).collect::<Result<_>>()?,
                    _ => vec![0.2, 0.3, 0.4, 0.5],
                };
                if chi_list.windows(2).any(|w| w[0] >= w[1]) || chi_list.iter().any(|&c| c < 0.0) {
                    return Err(WalkError::Usage("chi-list: values must be >= 0 and strictly increasing".into()));
                }
            }
            Mode::Fiberloop => {}
        }

        let snapshots = match get("snapshots") {
            None => vec![0, steps / 4, steps / 2, steps],
            Some(v) => parse_snapshots(v, steps)?,
        };
        let mut snapshots = snapshots;
        snapshots.sort_unstable();
        snapshots.dedup();

        let mut config = RunConfig {
            mode,
            theta,
            phi,
            chi,
            chi_range,
            phi_range,
            chi_list,
            steps,
            sites,
            window,
            record_stride,
            snapshots,
            boundary,
            kerr_mode,
            workers,
            threshold,
            tol,
            gamma,
            out,
            resolved: BTreeMap::new(),
            warnings,
        };
        config.resolved = config.canonical();
        Ok(config)
    }

    /// Resolved values of every key the mode accepts, in config-file form.
    fn canonical(&self) -> BTreeMap<String, String> {
        let range = |r: &AxisRange| format!("{}:{}:{}", r.min, r.max, r.count);
        let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut all = BTreeMap::new();
        all.insert("theta", self.theta.to_string());
        all.insert("steps", self.steps.to_string());
        all.insert("sites", self.sites.to_string());
        all.insert("window", self.window.to_string());
        all.insert("record-stride", self.record_stride.to_string());
        all.insert("snapshots", if self.snapshots.is_empty() { "none".into() } else { self.snapshots.iter().map(usize::to_string).collect::<Vec<_>>().join(",") });
        all.insert("boundary", match self.boundary { Boundary::Periodic => "periodic", Boundary::Open => "open" }.into());
        all.insert("kerr-mode", match self.kerr_mode { KerrMode::Total => "total", KerrMode::PerComponent => "per-component" }.into());
        all.insert("workers", self.workers.to_string());
        all.insert("threshold", self.threshold.to_string());
        all.insert("tol", self.tol.to_string());
        all.insert("gamma", self.gamma.to_string());
        all.insert("out", self.out.display().to_string());
        match self.mode {
            Mode::Run => {
                all.insert("phi", self.phi.to_string());
                all.insert("chi", self.chi.to_string());
            }
            Mode::Sweep => {
                all.insert("phi", range(&self.phi_range));
                all.insert("chi", range(&self.chi_range));
            }
            Mode::CriticalPhi => {
                all.insert("chi-list", list(&self.chi_list));
            }
            Mode::Fiberloop => {}
        }
        let allowed = self.mode.keys();
        all.into_iter().filter(|(k, _)| allowed.contains(k)).map(|(k, v)| (k.to_owned(), v)).collect()
    }

    fn point_settings(&self) -> PointSettings {
        PointSettings { steps: self.steps, window: self.window, sites: Some(self.sites), kerr_mode: self.kerr_mode }
    }

    fn recorder(&self) -> Recorder {
        Recorder::with_stride(self.record_stride).snapshots(self.snapshots.iter().copied())
    }

    pub fn output_path(&self, suffix: &str) -> PathBuf {
        let mut name = self.out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
        name.push(format!("_{suffix}"));
        self.out.with_file_name(name)
    }
}

fn read_config_file(path: &Path, mode: Mode) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| WalkError::io(path, e))?;
    if text.trim_start().starts_with('{') {
        return read_manifest(path, &text, mode);
    }
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(WalkError::Usage(format!("{}:{}: expected `key = value`", path.display(), lineno + 1)));
        };
        let key = key.trim().trim_start_matches("--");
        if !ALL_KEYS.contains(&key) {
            return Err(WalkError::Usage(format!("{}:{}: unknown key `{key}`", path.display(), lineno + 1)));
        }
        map.insert(key.to_owned(), value.trim().to_owned());
    }
    Ok(map)
}

const ALL_KEYS: [&str; 16] = [
    "theta", "phi", "chi", "chi-list", "steps", "sites", "window", "record-stride", "snapshots", "boundary", "out", "workers", "kerr-mode",
    "threshold", "tol", "gamma",
];

fn read_manifest(path: &Path, text: &str, mode: Mode) -> Result<BTreeMap<String, String>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| WalkError::Usage(format!("{}: invalid manifest: {e}", path.display())))?;
    if let Some(m) = value.get("mode").and_then(|m| m.as_str()) {
        if m != mode.name() {
            return Err(WalkError::Usage(format!("{}: manifest is for `{m}`, not `{}`", path.display(), mode.name())));
        }
    }
    let config = value
        .get("config")
        .and_then(|c| c.as_object())
        .ok_or_else(|| WalkError::Usage(format!("{}: manifest has no `config` object", path.display())))?;
    config
        .iter()
        .map(|(k, v)| {
            v.as_str()
                .map(|s| (k.clone(), s.to_owned()))
                .ok_or_else(|| WalkError::Usage(format!("{}: config value `{k}` is not a string", path.display())))
        })
        .collect()
}

fn parse_count(key: &str, v: &str) -> Result<usize> {
    v.trim().parse().map_err(|_| WalkError::Usage(format!("{key}: expected a non-negative integer, got `{v}`")))
}

fn parse_real(key: &str, v: &str) -> Result<f64> {
    match v.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(WalkError::Usage(format!("{key}: expected a number, got `{v}`"))),
    }
}

/// Radians, or a rational multiple of pi such as `pi/4`, `3pi/8`,
/// `3*pi/8`, `-pi/2` or `0.5pi`.
pub fn parse_angle(key: &str, v: &str) -> Result<f64> {
    let s = v.trim();
    let bad = || WalkError::Usage(format!("{key}: expected an angle in radians or like `pi/4`, got `{v}`"));
    let Some(at) = s.find("pi") else {
        return parse_real(key, s);
    };
    let coef = s[..at].trim().trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = s[at + 2..].trim();
    let div = if rest.is_empty() {
        1.0
    } else {
        let d = rest.strip_prefix('/').ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?;
        if d == 0.0 {
            return Err(bad());
        }
        d
    };
    let angle = coef * PI / div;
    if angle.is_finite() { Ok(angle) } else { Err(bad()) }
}

/// `min:max:count` with angle syntax for `phi`; a bare value is a single
/// point.
pub fn parse_range(key: &str, v: &str, angle: bool) -> Result<AxisRange> {
    let value = |s: &str| if angle { parse_angle(key, s) } else { parse_real(key, s) };
    let parts: Vec<&str> = v.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(AxisRange::single(value(single)?)),
        [min, max, count] => {
            let count = parse_count(key, count)?;
            if count == 0 {
                return Err(WalkError::Usage(format!("{key}: range count must be at least 1")));
            }
            Ok(AxisRange::new(value(min)?, value(max)?, count))
        }
        _ => Err(WalkError::Usage(format!("{key}: expected `min:max:count`, got `{v}`"))),
    }
}

fn parse_snapshots(v: &str, steps: usize) -> Result<Vec<usize>> {
    let v = v.trim();
    if v == "none" {
        return Ok(Vec::new());
    }
    if let Some(k) = v.strip_prefix("every:") {
        let k = parse_count("snapshots", k)?;
        if k == 0 {
            return Err(WalkError::Usage("snapshots: stride must be at least 1".into()));
        }
        return Ok((0..=steps).step_by(k).collect());
    }
    let list: Vec<usize> = v.split(',').map(|x| parse_count("snapshots", x)).collect::<Result<_>>()?;
    if let Some(&late) = list.iter().find(|&&t| t > steps) {
        return Err(WalkError::Usage(format!("snapshots: step {late} is beyond steps = {steps}")));
    }
    Ok(list)
}

/// What [`execute`] produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub outputs: Vec<PathBuf>,
    pub manifest: PathBuf,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| WalkError::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| WalkError::io(path, e))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let mut w = create(path)?;
    f(&mut w).and_then(|_| w.flush()).map_err(|e| WalkError::io(path, e))
}

/// Runs the configured mode and writes its CSV files plus a JSON manifest.
pub fn execute(config: &RunConfig) -> Result<Report> {
    let started = Instant::now();
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut outputs = Vec::new();

    let results = match config.mode {
        Mode::Run => {
            let params = WalkParams::new(config.theta, config.phi, config.chi, config.sites)?
                .boundary(config.boundary)
                .kerr_mode(config.kerr_mode);
            let mut state = params.initial_state()?;
            let series = evolve(&mut state, &params, config.steps, &config.recorder())?;
            write_series(config, &series, ("up", "down"), &mut outputs)?;
            summary(config, &series)
        }
        Mode::Fiberloop => {
            let mut state = LoopState::single_pulse(config.sites, config.sites / 2, config.gamma)?;
            let series = loop_evolve(&mut state, config.steps, &config.recorder())?;
            write_series(config, &series, ("u", "v"), &mut outputs)?;
            summary(config, &series)
        }
        Mode::Sweep => {
            let spec = SweepSpec {
                theta: config.theta,
                chi: config.chi_range,
                phi: config.phi_range,
                settings: config.point_settings(),
                thresholds: Thresholds { trapped_sp: config.threshold, ..Thresholds::default() },
            };
            let grid = sweep(&spec, config.workers)?;
            let path = config.output_path("grid.csv");
            write_file(&path, |w| grid.write_csv(w))?;
            outputs.push(path);
            json!({ "cells": grid.cells.len() })
        }
        Mode::CriticalPhi => {
            let search = CriticalSearch { settings: config.point_settings(), threshold: config.threshold, tol: config.tol };
            let curve = critical_curve(config.theta, &config.chi_list, &search, config.workers)?;
            let path = config.output_path("critical.csv");
            write_file(&path, |w| curve.write_csv(w))?;
            outputs.push(path);
            let multimodal: Vec<f64> = curve.points.iter().filter(|p| p.multimodal()).map(|p| p.chi).collect();
            json!({
                "strictly_decreasing": curve.is_strictly_decreasing(),
                "multimodal_chi": multimodal,
                "no_transition_chi": curve.no_transition,
            })
        }
    };

    let manifest_path = config.output_path("manifest.json");
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "mode": config.mode.name(),
        "config": config.resolved,
        "warnings": config.warnings,
        "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "results": results,
        "started_unix": started_unix,
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
    });
    write_file(&manifest_path, |w| {
        serde_json::to_writer_pretty(&mut *w, &manifest)?;
        writeln!(w)
    })?;
    Ok(Report { outputs, manifest: manifest_path })
}

fn write_series(config: &RunConfig, series: &ObservableSeries, labels: (&str, &str), outputs: &mut Vec<PathBuf>) -> Result<()> {
    let path = config.output_path("series.csv");
    write_file(&path, |w| series.write_csv(w))?;
    outputs.push(path);
    for snap in &series.snapshots {
        let path = config.output_path(&format!("snapshot_{}.csv", snap.t));
        write_file(&path, |w| snap.write_csv(labels, w))?;
        outputs.push(path);
    }
    Ok(())
}

fn summary(config: &RunConfig, series: &ObservableSeries) -> serde_json::Value {
    let window = config.window.min(series.len()).max(1);
    match long_time_averages(series, window) {
        Ok(avg) => {
            let thresholds = Thresholds { trapped_sp: config.threshold, ..Thresholds::default() };
            let regime = classify_regime(avg.xi_bar, avg.sp_bar, &series.xi[series.len() - window..], &thresholds);
            json!({
                "records": series.len(),
                "xi_bar": avg.xi_bar,
                "sp_bar": avg.sp_bar,
                "window_records": avg.window,
                "regime": regime.as_str(),
            })
        }
        Err(_) => json!({ "records": series.len() }),
    }
}
