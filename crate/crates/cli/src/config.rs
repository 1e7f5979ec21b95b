//! Run configuration: flat `section.key = value` documents.
//!
//! ```text
//! # weak-coupling Ohmic Zeno scan
//! task = zeno
//! bath.kind = ohmic
//! bath.alpha = 0.01
//! bath.omega_c = 10
//! grid.tau = logspace(0.01, 20, 200)
//! output.format = csv
//! ```
//!
//! Lists are comma separated or written as `linspace(lo, hi, n)` /
//! `logspace(lo, hi, n)`. Every key has a default, listed in [`KEYS`].

use std::fmt::{self, Write as _};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use zeno_core::bath::BathSpec;
use zeno_core::oracle::Sampling;
use zeno_core::quad::QuadConfig;
use zeno_core::zeno::log_space;
use zeno_core::Numerics;

use crate::error::ConfigError;
use crate::presets::Preset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Eta,
    Spectrum,
    Dynamics,
    Zeno,
    Oracle,
    Reproduce,
}

impl Task {
    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Eta => "eta",
            Task::Spectrum => "spectrum",
            Task::Dynamics => "dynamics",
            Task::Zeno => "zeno",
            Task::Oracle => "oracle",
            Task::Reproduce => "reproduce",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "eta" => Task::Eta,
            "spectrum" => Task::Spectrum,
            "dynamics" => Task::Dynamics,
            "zeno" => Task::Zeno,
            "oracle" => Task::Oracle,
            "reproduce" => Task::Reproduce,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BathKind {
    Lorentzian,
    Ohmic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathConfig {
    pub kind: BathKind,
    pub alpha: f64,
    pub lambda: f64,
    pub omega_c: f64,
}

impl Default for BathConfig {
    fn default() -> Self {
        BathConfig {
            kind: BathKind::Lorentzian,
            alpha: 0.01,
            lambda: 0.09,
            omega_c: 10.0,
        }
    }
}

impl BathConfig {
    pub fn spec(&self) -> BathSpec {
        match self.kind {
            BathKind::Lorentzian => BathSpec::Lorentzian {
                alpha: self.alpha,
                lambda: self.lambda,
            },
            BathKind::Ohmic => BathSpec::OhmicDrude {
                alpha: self.alpha,
                omega_c: self.omega_c,
            },
        }
    }
}

/// Flat mirror of [`Numerics`] so each knob has its own key.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericsConfig {
    pub omega_max: f64,
    pub eta_tol: f64,
    pub eta_damping: f64,
    pub eta_max_iter: usize,
    pub eta_scan_samples: usize,
    pub pv_delta_rel: f64,
    pub pv_rel_tol: f64,
    pub dynamics_rel_tol: f64,
    pub zeno_abs_tol: f64,
    pub zeno_rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        let n = Numerics::default();
        NumericsConfig {
            omega_max: n.omega_max,
            eta_tol: n.eta.tol,
            eta_damping: n.eta.damping,
            eta_max_iter: n.eta.max_iter,
            eta_scan_samples: n.eta.scan_samples,
            pv_delta_rel: n.pv.delta_rel,
            pv_rel_tol: n.pv.quad.rel_tol,
            dynamics_rel_tol: n.dynamics_rel_tol,
            zeno_abs_tol: n.zeno_quad.abs_tol,
            zeno_rel_tol: n.zeno_quad.rel_tol,
            max_intervals: n.zeno_quad.max_intervals,
        }
    }
}

impl NumericsConfig {
    pub fn to_numerics(&self) -> Numerics {
        let mut n = Numerics::default();
        n.omega_max = self.omega_max;
        n.pv.omega_max = self.omega_max;
        n.eta.tol = self.eta_tol;
        n.eta.damping = self.eta_damping;
        n.eta.max_iter = self.eta_max_iter;
        n.eta.scan_samples = self.eta_scan_samples;
        n.pv.delta_rel = self.pv_delta_rel;
        n.pv.quad.rel_tol = self.pv_rel_tol;
        n.pv.quad.max_intervals = self.max_intervals;
        n.eta.quad.max_intervals = self.max_intervals;
        n.dynamics_rel_tol = self.dynamics_rel_tol;
        n.zeno_quad = QuadConfig {
            abs_tol: self.zeno_abs_tol,
            rel_tol: self.zeno_rel_tol,
            max_intervals: self.max_intervals,
        };
        n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeChoice {
    /// Logarithmic for Lorentzian baths, linear for Ohmic.
    Auto,
    Linear,
    Logarithmic,
}

impl SchemeChoice {
    pub fn resolve(&self, bath: &BathSpec) -> Sampling {
        match self {
            SchemeChoice::Auto => Sampling::default_for(bath),
            SchemeChoice::Linear => Sampling::Linear,
            SchemeChoice::Logarithmic => Sampling::Logarithmic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleTarget {
    Dynamics,
    Zeno,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub modes: usize,
    pub omega_max: f64,
    pub scheme: SchemeChoice,
    pub target: OracleTarget,
    /// Also integrate the amplitude equations at every interval and require
    /// agreement with exact propagation.
    pub ode_check: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            modes: 2000,
            omega_max: 200.0,
            scheme: SchemeChoice::Auto,
            target: OracleTarget::Dynamics,
            ode_check: false,
        }
    }
}

/// Sweep axes. An empty axis falls back to the bath value (for `alpha`,
/// `lambda`, `omega_c`) or to the task's default sampling.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub alpha: Vec<f64>,
    pub lambda: Vec<f64>,
    pub omega_c: Vec<f64>,
    pub tau: Vec<f64>,
    pub t: Vec<f64>,
    pub omega: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    fn as_str(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    /// `None` writes to stdout.
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: None,
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub task: Task,
    pub preset: Option<Preset>,
    pub bath: BathConfig,
    pub numerics: NumericsConfig,
    pub oracle: OracleConfig,
    pub grid: GridConfig,
    pub output: OutputConfig,
    /// Worker threads; 0 uses one per logical CPU.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            task: Task::Eta,
            preset: None,
            bath: BathConfig::default(),
            numerics: NumericsConfig::default(),
            oracle: OracleConfig::default(),
            grid: GridConfig::default(),
            output: OutputConfig::default(),
            jobs: 0,
        }
    }
}

/// Accepted keys with their defaults.
pub const KEYS: &[(&str, &str)] = &[
    ("task", "eta | spectrum | dynamics | zeno | oracle | reproduce (default eta)"),
    ("preset", "fig1 | fig2a | fig2b | fig3 | fig4 (used by task = reproduce)"),
    ("bath.kind", "lorentzian | ohmic (default lorentzian)"),
    ("bath.alpha", "coupling strength (default 0.01)"),
    ("bath.lambda", "Lorentzian width (default 0.09)"),
    ("bath.omega_c", "Ohmic cutoff (default 10)"),
    ("numerics.omega_max", "frequency cutoff for pole search, coherence and principal values (default 200)"),
    ("numerics.eta_tol", "fixed-point tolerance (default 1e-12)"),
    ("numerics.eta_damping", "fixed-point damping (default 0.5)"),
    ("numerics.eta_max_iter", "fixed-point iteration cap (default 10000)"),
    ("numerics.eta_scan_samples", "uniqueness scan samples (default 1000)"),
    ("numerics.pv_delta_rel", "excised core half-width for principal values (default 1e-3)"),
    ("numerics.pv_rel_tol", "principal-value relative tolerance (default 1e-11)"),
    ("numerics.dynamics_rel_tol", "resonance-window relative tolerance (default 1e-6)"),
    ("numerics.zeno_abs_tol", "decay-rate absolute tolerance (default 1e-14)"),
    ("numerics.zeno_rel_tol", "decay-rate relative tolerance (default 1e-10)"),
    ("numerics.max_intervals", "adaptive quadrature panel cap (default 20000)"),
    ("oracle.modes", "bath modes (default 2000)"),
    ("oracle.omega_max", "discretization cutoff (default 200)"),
    ("oracle.scheme", "auto | linear | logarithmic (default auto)"),
    ("oracle.target", "dynamics | zeno (default dynamics)"),
    ("oracle.ode_check", "true | false (default false)"),
    ("grid.alpha", "list of couplings (default: bath.alpha)"),
    ("grid.lambda", "list of Lorentzian widths (default: bath.lambda)"),
    ("grid.omega_c", "list of Ohmic cutoffs (default: bath.omega_c)"),
    ("grid.tau", "measurement intervals (default logspace(0.01, 20, 200))"),
    ("grid.t", "times (default linspace(0, 50, 1001))"),
    ("grid.omega", "frequencies for spectrum tables (default logspace(0.01, 100, 401))"),
    ("output.path", "output file (default stdout)"),
    ("output.format", "csv | json (default csv)"),
    ("run.jobs", "worker threads, 0 = all CPUs (default 0)"),
];

/// Parse a document on top of the defaults and validate the result.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    apply_document(&mut cfg, text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Apply a document's entries to an existing config without validating.
pub fn apply_document(cfg: &mut RunConfig, text: &str) -> Result<(), ConfigError> {
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::at(idx + 1, format!("expected `key = value`, got `{line}`")));
        };
        cfg.set(key.trim(), value.trim()).map_err(|e| e.with_line(idx + 1))?;
    }
    Ok(())
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

impl RunConfig {
    /// Assign one key. Used for document lines and `--set` overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "task" => self.task = parse_enum(key, value, Task::parse)?,
            "preset" => self.preset = Some(parse_enum(key, value, Preset::parse)?),
            "bath.kind" => {
                self.bath.kind = parse_enum(key, value, |s| match s {
                    "lorentzian" => Some(BathKind::Lorentzian),
                    "ohmic" | "ohmic_drude" => Some(BathKind::Ohmic),
                    _ => None,
                })?
            }
            "bath.alpha" => self.bath.alpha = parse_f64(key, value)?,
            "bath.lambda" => self.bath.lambda = parse_f64(key, value)?,
            "bath.omega_c" => self.bath.omega_c = parse_f64(key, value)?,
            "numerics.omega_max" => self.numerics.omega_max = parse_f64(key, value)?,
            "numerics.eta_tol" => self.numerics.eta_tol = parse_f64(key, value)?,
            "numerics.eta_damping" => self.numerics.eta_damping = parse_f64(key, value)?,
            "numerics.eta_max_iter" => self.numerics.eta_max_iter = parse_usize(key, value)?,
            "numerics.eta_scan_samples" => self.numerics.eta_scan_samples = parse_usize(key, value)?,
            "numerics.pv_delta_rel" => self.numerics.pv_delta_rel = parse_f64(key, value)?,
            "numerics.pv_rel_tol" => self.numerics.pv_rel_tol = parse_f64(key, value)?,
            "numerics.dynamics_rel_tol" => self.numerics.dynamics_rel_tol = parse_f64(key, value)?,
            "numerics.zeno_abs_tol" => self.numerics.zeno_abs_tol = parse_f64(key, value)?,
            "numerics.zeno_rel_tol" => self.numerics.zeno_rel_tol = parse_f64(key, value)?,
            "numerics.max_intervals" => self.numerics.max_intervals = parse_usize(key, value)?,
            "oracle.modes" => self.oracle.modes = parse_usize(key, value)?,
            "oracle.omega_max" => self.oracle.omega_max = parse_f64(key, value)?,
            "oracle.scheme" => {
                self.oracle.scheme = parse_enum(key, value, |s| match s {
                    "auto" => Some(SchemeChoice::Auto),
                    "linear" => Some(SchemeChoice::Linear),
                    "logarithmic" | "log" => Some(SchemeChoice::Logarithmic),
                    _ => None,
                })?
            }
            "oracle.target" => {
                self.oracle.target = parse_enum(key, value, |s| match s {
                    "dynamics" => Some(OracleTarget::Dynamics),
                    "zeno" => Some(OracleTarget::Zeno),
                    _ => None,
                })?
            }
            "oracle.ode_check" => self.oracle.ode_check = parse_enum(key, value, |s| s.parse().ok())?,
            "grid.alpha" => self.grid.alpha = parse_list(key, value)?,
            "grid.lambda" => self.grid.lambda = parse_list(key, value)?,
            "grid.omega_c" => self.grid.omega_c = parse_list(key, value)?,
            "grid.tau" => self.grid.tau = parse_list(key, value)?,
            "grid.t" => self.grid.t = parse_list(key, value)?,
            "grid.omega" => self.grid.omega = parse_list(key, value)?,
            "output.path" => {
                self.output.path = if value.is_empty() { None } else { Some(PathBuf::from(value)) }
            }
            "output.format" => self.output.format = parse_enum(key, value, Format::parse)?,
            "run.jobs" => self.jobs = parse_usize(key, value)?,
            _ => return Err(ConfigError::new(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let check = |ok: bool, msg: String| if ok { Ok(()) } else { Err(ConfigError::new(msg)) };
        let b = &self.bath;
        check(b.alpha.is_finite() && b.alpha >= 0.0, format!("bath.alpha must be >= 0, got {}", b.alpha))?;
        check(b.lambda.is_finite() && b.lambda > 0.0, format!("bath.lambda must be > 0, got {}", b.lambda))?;
        check(b.omega_c.is_finite() && b.omega_c > 0.0, format!("bath.omega_c must be > 0, got {}", b.omega_c))?;
        let n = &self.numerics;
        for (name, v) in [
            ("numerics.eta_tol", n.eta_tol),
            ("numerics.pv_delta_rel", n.pv_delta_rel),
            ("numerics.pv_rel_tol", n.pv_rel_tol),
            ("numerics.dynamics_rel_tol", n.dynamics_rel_tol),
            ("numerics.zeno_abs_tol", n.zeno_abs_tol),
            ("numerics.zeno_rel_tol", n.zeno_rel_tol),
        ] {
            check(v.is_finite() && v > 0.0, format!("{name} must be > 0, got {v}"))?;
        }
        check(
            n.omega_max.is_finite() && n.omega_max >= 100.0,
            format!("numerics.omega_max must be >= 100, got {}", n.omega_max),
        )?;
        check(
            n.eta_damping > 0.0 && n.eta_damping <= 1.0,
            format!("numerics.eta_damping must be in (0, 1], got {}", n.eta_damping),
        )?;
        check(n.eta_max_iter > 0, "numerics.eta_max_iter must be positive".into())?;
        check(n.eta_scan_samples >= 2, "numerics.eta_scan_samples must be at least 2".into())?;
        check(n.max_intervals > 0, "numerics.max_intervals must be positive".into())?;
        check(self.oracle.modes >= 2, format!("oracle.modes must be >= 2, got {}", self.oracle.modes))?;
        check(
            self.oracle.omega_max.is_finite() && self.oracle.omega_max > 0.0,
            format!("oracle.omega_max must be > 0, got {}", self.oracle.omega_max),
        )?;

        let g = &self.grid;
        check(g.alpha.iter().all(|a| *a >= 0.0), "grid.alpha values must be >= 0".into())?;
        check(g.lambda.iter().all(|a| *a > 0.0), "grid.lambda values must be > 0".into())?;
        check(g.omega_c.iter().all(|a| *a > 0.0), "grid.omega_c values must be > 0".into())?;
        check(
            g.lambda.is_empty() || b.kind == BathKind::Lorentzian || self.task == Task::Reproduce,
            "grid.lambda requires bath.kind = lorentzian".into(),
        )?;
        check(
            g.omega_c.is_empty() || b.kind == BathKind::Ohmic || self.task == Task::Reproduce,
            "grid.omega_c requires bath.kind = ohmic".into(),
        )?;
        check(g.tau.iter().all(|t| *t > 0.0), "grid.tau values must be > 0".into())?;
        check(strictly_increasing(&g.tau), "grid.tau must be strictly increasing".into())?;
        check(g.t.iter().all(|t| *t >= 0.0), "grid.t values must be >= 0".into())?;
        check(strictly_increasing(&g.t), "grid.t must be strictly increasing".into())?;
        check(g.omega.iter().all(|w| *w > 0.0), "grid.omega values must be > 0".into())?;
        check(
            self.task != Task::Reproduce || self.preset.is_some(),
            "task = reproduce needs a preset".into(),
        )?;
        Ok(())
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn parse_enum<T>(key: &str, value: &str, f: impl Fn(&str) -> Option<T>) -> Result<T, ConfigError> {
    f(value).ok_or_else(|| ConfigError::new(format!("invalid value `{value}` for `{key}`")))
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ConfigError::new(format!("`{key}` expects a finite number, got `{value}`"))),
    }
}

fn parse_usize(key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::new(format!("`{key}` expects a non-negative integer, got `{value}`")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    for (name, log) in [("linspace", false), ("logspace", true)] {
        if let Some(args) = value.strip_prefix(name) {
            let inner = args
                .trim()
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| ConfigError::new(format!("`{key}`: expected {name}(lo, hi, n)")))?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(ConfigError::new(format!("`{key}`: expected {name}(lo, hi, n)")));
            }
            let lo = parse_f64(key, parts[0])?;
            let hi = parse_f64(key, parts[1])?;
            let n = parse_usize(key, parts[2])?;
            if n == 0 || (n > 1 && hi <= lo) || (log && lo <= 0.0) {
                return Err(ConfigError::new(format!("`{key}`: invalid range {name}({lo}, {hi}, {n})")));
            }
            return Ok(if log { log_space(lo, hi, n) } else { lin_space(lo, hi, n) });
        }
    }
    value.split(',').map(|s| parse_f64(key, s.trim())).collect()
}

pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

struct Num(f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Debug formatting is the shortest representation that parses back exactly.
        write!(f, "{:?}", self.0)
    }
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| Num(*x).to_string()).collect::<Vec<_>>().join(", ")
}

/// Render a config as a document that [`parse_config`] reads back unchanged.
pub fn emit_config(cfg: &RunConfig) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("task", cfg.task.as_str().into());
    if let Some(p) = cfg.preset {
        kv("preset", p.as_str().into());
    }
    kv(
        "bath.kind",
        match cfg.bath.kind {
            BathKind::Lorentzian => "lorentzian",
            BathKind::Ohmic => "ohmic",
        }
        .into(),
    );
    kv("bath.alpha", Num(cfg.bath.alpha).to_string());
    kv("bath.lambda", Num(cfg.bath.lambda).to_string());
    kv("bath.omega_c", Num(cfg.bath.omega_c).to_string());
    let n = &cfg.numerics;
    kv("numerics.omega_max", Num(n.omega_max).to_string());
    kv("numerics.eta_tol", Num(n.eta_tol).to_string());
    kv("numerics.eta_damping", Num(n.eta_damping).to_string());
    kv("numerics.eta_max_iter", n.eta_max_iter.to_string());
    kv("numerics.eta_scan_samples", n.eta_scan_samples.to_string());
    kv("numerics.pv_delta_rel", Num(n.pv_delta_rel).to_string());
    kv("numerics.pv_rel_tol", Num(n.pv_rel_tol).to_string());
    kv("numerics.dynamics_rel_tol", Num(n.dynamics_rel_tol).to_string());
    kv("numerics.zeno_abs_tol", Num(n.zeno_abs_tol).to_string());
    kv("numerics.zeno_rel_tol", Num(n.zeno_rel_tol).to_string());
    kv("numerics.max_intervals", n.max_intervals.to_string());
    let o = &cfg.oracle;
    kv("oracle.modes", o.modes.to_string());
    kv("oracle.omega_max", Num(o.omega_max).to_string());
    kv(
        "oracle.scheme",
        match o.scheme {
            SchemeChoice::Auto => "auto",
            SchemeChoice::Linear => "linear",
            SchemeChoice::Logarithmic => "logarithmic",
        }
        .into(),
    );
    kv(
        "oracle.target",
        match o.target {
            OracleTarget::Dynamics => "dynamics",
            OracleTarget::Zeno => "zeno",
        }
        .into(),
    );
    kv("oracle.ode_check", o.ode_check.to_string());
    let g = &cfg.grid;
    for (k, v) in [
        ("grid.alpha", &g.alpha),
        ("grid.lambda", &g.lambda),
        ("grid.omega_c", &g.omega_c),
        ("grid.tau", &g.tau),
        ("grid.t", &g.t),
        ("grid.omega", &g.omega),
    ] {
        if !v.is_empty() {
            kv(k, list(v));
        }
    }
    if let Some(p) = &cfg.output.path {
        kv("output.path", p.display().to_string());
    }
    kv("output.format", cfg.output.format.as_str().into());
    kv("run.jobs", cfg.jobs.to_string());
    s
}
