//! Task execution over parameter grids.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use zeno_core::bath::BathSpec;
use zeno_core::dynamics::{default_times, sigma_x_series_with_eta};
use zeno_core::oracle::{self, discretize, oracle_eta, SectorSpectrum};
use zeno_core::renorm::{solve_eta_with, Renormalization};
use zeno_core::selfenergy::{decay_width, level_shift_with};
use zeno_core::zeno::{default_taus, interaction_f, log_space, zeno_scan_with_eta};
use zeno_core::{Error, Numerics};

use crate::config::{BathKind, OracleTarget, RunConfig, Task};
use crate::error::CliError;

/// One table entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Values of a numeric column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        self.rows
            .iter()
            .map(|r| match r[idx] {
                Field::Num(v) => Some(v),
                Field::Int(v) => Some(v as f64),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellPayload {
    /// Scalars describing the whole cell (eta, pole, ...).
    pub meta: BTreeMap<String, Value>,
    pub table: Table,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub index: usize,
    pub bath: BathSpec,
    pub outcome: Result<CellPayload, Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub task: Task,
    pub cells: Vec<CellReport>,
}

impl RunReport {
    pub fn warnings(&self) -> Vec<String> {
        let multi = self.cells.len() > 1;
        let mut out = Vec::new();
        for c in &self.cells {
            let prefix = if multi { format!("cell {}: ", c.index) } else { String::new() };
            match &c.outcome {
                Ok(p) => out.extend(p.warnings.iter().map(|w| format!("{prefix}{w}"))),
                Err(e) => out.push(format!("{prefix}failed: {e}")),
            }
        }
        out
    }
}

/// The task and bath list a config resolves to. Presets fix both; otherwise
/// the cells are the Cartesian product of the coupling and scale axes.
pub fn plan(cfg: &RunConfig) -> (Task, Vec<BathSpec>) {
    if cfg.task == Task::Reproduce {
        if let Some(p) = cfg.preset {
            return (p.task(), p.baths());
        }
    }
    let alphas = if cfg.grid.alpha.is_empty() { vec![cfg.bath.alpha] } else { cfg.grid.alpha.clone() };
    let (scales, kind) = match cfg.bath.kind {
        BathKind::Lorentzian => (&cfg.grid.lambda, cfg.bath.lambda),
        BathKind::Ohmic => (&cfg.grid.omega_c, cfg.bath.omega_c),
    };
    let scales = if scales.is_empty() { vec![kind] } else { scales.clone() };
    let mut baths = Vec::with_capacity(alphas.len() * scales.len());
    for &alpha in &alphas {
        for &s in &scales {
            baths.push(match cfg.bath.kind {
                BathKind::Lorentzian => BathSpec::Lorentzian { alpha, lambda: s },
                BathKind::Ohmic => BathSpec::OhmicDrude { alpha, omega_c: s },
            });
        }
    }
    (cfg.task, baths)
}

/// Run every cell on a pool of `cfg.jobs` workers. Cells fail independently;
/// the run fails only when all of them do.
pub fn run(cfg: &RunConfig) -> Result<RunReport, CliError> {
    cfg.validate()?;
    let (task, baths) = plan(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    let cells: Vec<CellReport> = pool.install(|| {
        baths
            .par_iter()
            .enumerate()
            .map(|(index, bath)| CellReport {
                index,
                bath: *bath,
                outcome: run_cell(task, bath, cfg),
            })
            .collect()
    });
    for c in &cells {
        if let Err(e) = &c.outcome {
            log::warn!("cell {} ({:?}) failed: {e}", c.index, c.bath);
        }
    }
    if let Some(first) = cells.iter().find_map(|c| c.outcome.as_ref().err()) {
        if cells.iter().all(|c| c.outcome.is_err()) {
            return Err(match cells.len() {
                1 => CliError::Core(first.clone()),
                count => CliError::AllCellsFailed {
                    count,
                    first: first.clone(),
                },
            });
        }
    }
    Ok(RunReport { task, cells })
}

pub fn run_cell(task: Task, bath: &BathSpec, cfg: &RunConfig) -> Result<CellPayload, Error> {
    bath.validate()?;
    let numerics = cfg.numerics.to_numerics();
    let renorm = solve_eta_with(bath, &numerics.eta)?;
    let mut warnings = bath.warnings();
    if !renorm.unique {
        warnings.push("self-consistency has more than one root".into());
    }
    let mut meta = BTreeMap::new();
    meta.insert("bath".to_string(), serde_json::to_value(bath).expect("bath serializes"));
    meta.insert("eta".to_string(), json!(renorm.eta));
    let table = match task {
        Task::Eta => eta_table(&renorm),
        Task::Spectrum => spectrum_table(bath, renorm.eta, cfg, &numerics)?,
        Task::Dynamics => dynamics_table(bath, &renorm, cfg, &numerics, &mut meta)?,
        Task::Zeno => zeno_table(bath, renorm.eta, cfg, &numerics, &mut meta)?,
        Task::Oracle => match cfg.oracle.target {
            OracleTarget::Dynamics => oracle_dynamics_table(bath, &renorm, cfg, &numerics, &mut meta)?,
            OracleTarget::Zeno => oracle_zeno_table(bath, renorm.eta, cfg, &numerics, &mut meta)?,
        },
        Task::Reproduce => unreachable!("presets resolve to a concrete task"),
    };
    Ok(CellPayload { meta, table, warnings })
}

fn eta_table(r: &Renormalization) -> Table {
    let mut t = Table::new(&["eta", "residual", "iterations", "method", "unique"]);
    let method = serde_json::to_value(r.method).expect("method serializes");
    t.rows.push(vec![
        r.eta.into(),
        r.residual.into(),
        Field::Int(r.iterations as u64),
        method.as_str().unwrap_or_default().into(),
        r.unique.into(),
    ]);
    t
}

pub fn default_omegas() -> Vec<f64> {
    log_space(1e-2, 1e2, 401)
}

fn spectrum_table(bath: &BathSpec, eta: f64, cfg: &RunConfig, numerics: &Numerics) -> Result<Table, Error> {
    let omegas = if cfg.grid.omega.is_empty() { default_omegas() } else { cfg.grid.omega.clone() };
    let rows = omegas
        .par_iter()
        .map(|&w| {
            Ok(vec![
                w.into(),
                bath.spectral_density(w)?.into(),
                level_shift_with(bath, eta, w, &numerics.pv)?.into(),
                decay_width(bath, eta, w)?.into(),
                interaction_f(w, eta).into(),
            ])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut t = Table::new(&["omega", "J", "R", "Gamma", "f"]);
    t.rows = rows;
    Ok(t)
}

fn times(cfg: &RunConfig) -> Vec<f64> {
    if cfg.grid.t.is_empty() {
        default_times()
    } else {
        cfg.grid.t.clone()
    }
}

fn taus(cfg: &RunConfig) -> Vec<f64> {
    if cfg.grid.tau.is_empty() {
        default_taus()
    } else {
        cfg.grid.tau.clone()
    }
}

fn dynamics_table(
    bath: &BathSpec,
    renorm: &Renormalization,
    cfg: &RunConfig,
    numerics: &Numerics,
    meta: &mut BTreeMap<String, Value>,
) -> Result<Table, Error> {
    let s = sigma_x_series_with_eta(bath, renorm, &times(cfg), numerics)?;
    meta.insert("omega0".into(), json!(s.omega0));
    meta.insert("gamma_pole".into(), json!(s.gamma_pole));
    meta.insert("shift".into(), json!(s.shift.as_str()));
    meta.insert("error_estimate".into(), json!(s.error_estimate));
    let mut t = Table::new(&["t", "sigma_x"]);
    t.rows = s.times.iter().zip(&s.values).map(|(&t, &v)| vec![t.into(), v.into()]).collect();
    Ok(t)
}

fn zeno_table(
    bath: &BathSpec,
    eta: f64,
    cfg: &RunConfig,
    numerics: &Numerics,
    meta: &mut BTreeMap<String, Value>,
) -> Result<Table, Error> {
    let c = zeno_scan_with_eta(bath, eta, &taus(cfg), numerics)?;
    meta.insert("gamma0".into(), json!(c.gamma0));
    let mut t = Table::new(&["tau", "gamma", "gamma_rwa", "gamma0", "ratio", "ratio_rwa", "regime"]);
    t.rows = (0..c.taus.len())
        .map(|i| {
            vec![
                c.taus[i].into(),
                c.gamma[i].into(),
                c.gamma_rwa[i].into(),
                c.gamma0.into(),
                c.ratio[i].into(),
                c.ratio_rwa[i].into(),
                c.regime[i].as_str().into(),
            ]
        })
        .collect();
    Ok(t)
}

fn oracle_sector(
    bath: &BathSpec,
    cfg: &RunConfig,
    meta: &mut BTreeMap<String, Value>,
) -> Result<(oracle::DiscreteBath, SectorSpectrum), Error> {
    let scheme = cfg.oracle.scheme.resolve(bath);
    let disc = discretize(bath, cfg.oracle.modes, cfg.oracle.omega_max, scheme)?;
    let eta = oracle_eta(&disc)?.eta;
    let sector = SectorSpectrum::new(&disc, eta)?;
    meta.insert("oracle_eta".into(), json!(eta));
    meta.insert("oracle_modes".into(), json!(cfg.oracle.modes));
    meta.insert("oracle_scheme".into(), serde_json::to_value(scheme).expect("scheme serializes"));
    meta.insert("oracle_omega_max".into(), json!(cfg.oracle.omega_max));
    Ok((disc, sector))
}

fn oracle_dynamics_table(
    bath: &BathSpec,
    renorm: &Renormalization,
    cfg: &RunConfig,
    numerics: &Numerics,
    meta: &mut BTreeMap<String, Value>,
) -> Result<Table, Error> {
    let s = sigma_x_series_with_eta(bath, renorm, &times(cfg), numerics)?;
    let (disc, sector) = oracle_sector(bath, cfg, meta)?;
    let t_rec = disc.recurrence_time(1.0);
    let mut worst: f64 = 0.0;
    let mut t = Table::new(&["t", "sigma_x", "sigma_x_oracle", "deviation", "in_window"]);
    for (&time, &v) in s.times.iter().zip(&s.values) {
        let o = sector.sigma_x(time);
        let dev = (v - o).abs();
        let inside = time < t_rec;
        if inside {
            worst = worst.max(dev);
        }
        t.rows.push(vec![time.into(), v.into(), o.into(), dev.into(), inside.into()]);
    }
    meta.insert("omega0".into(), json!(s.omega0));
    meta.insert("gamma_pole".into(), json!(s.gamma_pole));
    meta.insert("shift".into(), json!(s.shift.as_str()));
    meta.insert("recurrence_time".into(), json!(t_rec));
    meta.insert("max_deviation".into(), json!(worst));
    Ok(t)
}

fn oracle_zeno_table(
    bath: &BathSpec,
    eta: f64,
    cfg: &RunConfig,
    numerics: &Numerics,
    meta: &mut BTreeMap<String, Value>,
) -> Result<Table, Error> {
    let c = zeno_scan_with_eta(bath, eta, &taus(cfg), numerics)?;
    let (disc, sector) = oracle_sector(bath, cfg, meta)?;
    let mut columns = vec!["tau", "gamma", "gamma_oracle", "deviation"];
    if cfg.oracle.ode_check {
        columns.extend(["survival", "survival_ode"]);
    }
    let rows = c
        .taus
        .par_iter()
        .zip(&c.gamma)
        .map(|(&tau, &g)| {
            let go = sector.gamma(tau)?;
            let dev = if g > 0.0 { (go - g) / g } else { go - g };
            let mut row: Vec<Field> = vec![tau.into(), g.into(), go.into(), dev.into()];
            if cfg.oracle.ode_check {
                let check = oracle::oracle_survival(&disc, sector.eta, tau)?;
                row.extend([check.eigen.into(), check.ode.into()]);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let worst = rows
        .iter()
        .map(|r| match r[3] {
            Field::Num(d) => d.abs(),
            _ => 0.0,
        })
        .fold(0.0, f64::max);
    meta.insert("gamma0".into(), json!(c.gamma0));
    meta.insert("max_rel_deviation".into(), json!(worst));
    let mut t = Table::new(&columns);
    t.rows = rows;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn cartesian_cells_in_order() {
        let cfg = parse_config("grid.alpha = 0.01, 0.1\ngrid.lambda = 0.09, 0.3, 0.5").unwrap();
        let (task, baths) = plan(&cfg);
        assert_eq!(task, Task::Eta);
        assert_eq!(baths.len(), 6);
        assert_eq!(baths[1], BathSpec::Lorentzian { alpha: 0.01, lambda: 0.3 });
        assert_eq!(baths[3], BathSpec::Lorentzian { alpha: 0.1, lambda: 0.09 });
    }

    #[test]
    fn single_cell_matches_direct_call() {
        let cfg = parse_config("task = eta\nbath.kind = ohmic\nbath.omega_c = 10").unwrap();
        let report = run(&cfg).unwrap();
        assert_eq!(report.cells.len(), 1);
        let p = report.cells[0].outcome.as_ref().unwrap();
        let direct = zeno_core::renorm::solve_eta(&cfg.bath.spec(), 1e-12).unwrap().eta;
        assert_eq!(p.table.column("eta").unwrap(), vec![direct]);
    }

    #[test]
    fn decoupled_cell_gives_trivial_limits() {
        let cfg = parse_config("task = zeno\ngrid.alpha = 0, 0.01\ngrid.tau = 0.1, 1, 10").unwrap();
        let report = run(&cfg).unwrap();
        let p = report.cells[0].outcome.as_ref().unwrap();
        assert_eq!(p.meta["eta"], json!(1.0));
        assert!(p.table.column("gamma").unwrap().iter().all(|g| *g == 0.0));
        assert!(p.table.rows.iter().all(|r| r[6] == Field::from("neutral")));
        assert!(report.cells[1].outcome.is_ok());
    }

    #[test]
    fn failures_are_per_cell() {
        // A narrow Lorentzian has two self-consistent solutions.
        let cfg = parse_config("grid.lambda = 0.09, 0.01").unwrap();
        let r = run(&cfg).unwrap();
        assert!(r.cells[0].outcome.is_ok());
        assert!(matches!(r.cells[1].outcome, Err(Error::MethodValidity(_))));
        assert!(r.warnings()[0].starts_with("cell 1: failed"));

        let cfg = parse_config("grid.alpha = 0.01, 0.03\nbath.lambda = 0.01").unwrap();
        let e = run(&cfg).unwrap_err();
        assert!(matches!(e, CliError::AllCellsFailed { count: 2, .. }));
        assert_eq!(e.exit_code(), 4);
    }

    #[test]
    fn tau_axis_is_preserved() {
        let cfg = parse_config("task = zeno\ngrid.tau = logspace(0.01, 20, 200)").unwrap();
        let report = run(&cfg).unwrap();
        let taus = report.cells[0].outcome.as_ref().unwrap().table.column("tau").unwrap();
        assert_eq!(taus, cfg.grid.tau);
    }
}
