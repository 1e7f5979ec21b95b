//! Brute-force reference: the bath is discretized into `N` modes and the
//! transformed Hamiltonian is solved exactly in its single-excitation sector
//! `{|down, 0>, |up, 1_j>}`.
//!
//! The sector is closed under the transformed Hamiltonian (the residual
//! terms dropped by the transformation are fourth order in the couplings),
//! so these results check the effective model, not the untransformed one.

pub mod arrowhead;
pub mod ode;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::error::{Error, Result};
use crate::renorm::{solve_fixed_point, EtaSolverConfig, Renormalization};

pub use arrowhead::ArrowheadSpectrum;
pub use ode::{OdeConfig, OdeOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    Linear,
    /// Geometric panel edges from `omega_max * 1e-6` up, plus `[0, first edge]`.
    Logarithmic,
}

impl Sampling {
    /// Linear for baths whose weight sits at high frequency, logarithmic for
    /// the low-frequency Lorentzian.
    pub fn default_for(bath: &BathSpec) -> Self {
        match bath {
            BathSpec::Lorentzian { .. } => Sampling::Logarithmic,
            BathSpec::OhmicDrude { .. } => Sampling::Linear,
        }
    }
}

const LOG_SPAN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteBath {
    pub omegas: Vec<f64>,
    pub gs: Vec<f64>,
    /// Panel widths the modes were sampled from.
    pub widths: Vec<f64>,
    pub scheme: Sampling,
    pub omega_max: f64,
}

/// Midpoint sampling: one mode per panel with `g_j^2 = J(w_j) dw_j`.
pub fn discretize(bath: &BathSpec, n: usize, omega_max: f64, scheme: Sampling) -> Result<DiscreteBath> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 modes, got {n}")));
    }
    if !(omega_max > 0.0 && omega_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("omega_max must be positive, got {omega_max}")));
    }
    let edges: Vec<f64> = match scheme {
        Sampling::Linear => (0..=n).map(|k| omega_max * k as f64 / n as f64).collect(),
        Sampling::Logarithmic => {
            let lo = omega_max * LOG_SPAN;
            let ratio = (omega_max / lo).ln();
            std::iter::once(0.0)
                .chain((0..n).map(|k| {
                    if k == n - 1 {
                        omega_max
                    } else {
                        lo * (ratio * k as f64 / (n - 1) as f64).exp()
                    }
                }))
                .collect()
        }
    };
    let mut omegas = Vec::with_capacity(n);
    let mut gs = Vec::with_capacity(n);
    let mut widths = Vec::with_capacity(n);
    for w in edges.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let dw = w[1] - w[0];
        omegas.push(mid);
        gs.push((bath.j(mid) * dw).sqrt());
        widths.push(dw);
    }
    Ok(DiscreteBath {
        omegas,
        gs,
        widths,
        scheme,
        omega_max,
    })
}

impl DiscreteBath {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// `sum g_j^2` over modes inside `[a, b]`.
    pub fn weight_in(&self, a: f64, b: f64) -> f64 {
        self.omegas
            .iter()
            .zip(&self.gs)
            .filter(|(w, _)| **w >= a && **w <= b)
            .map(|(_, g)| g * g)
            .sum()
    }

    /// Time after which the discreteness of the modes around `omega`
    /// produces revivals: `2 pi / dw` for the panel containing `omega`.
    pub fn recurrence_time(&self, omega: f64) -> f64 {
        let idx = self
            .omegas
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - omega).abs().total_cmp(&(b.1 - omega).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        2.0 * PI / self.widths[idx]
    }

    /// Renormalized couplings `V_j = eta g_j xi_j / w_j = eta g_j / (w_j + eta)`.
    pub fn renormalized_couplings(&self, eta: f64) -> Vec<f64> {
        self.omegas
            .iter()
            .zip(&self.gs)
            .map(|(w, g)| eta * g / (w + eta))
            .collect()
    }
}

/// Discrete self-consistency `eta = exp(-sum_j g_j^2 / (2 (w_j + eta)^2))`.
pub fn oracle_eta(disc: &DiscreteBath) -> Result<Renormalization> {
    oracle_eta_with(disc, &EtaSolverConfig::default())
}

pub fn oracle_eta_with(disc: &DiscreteBath, cfg: &EtaSolverConfig) -> Result<Renormalization> {
    let g = |eta: f64| -> Result<f64> {
        let s: f64 = disc
            .omegas
            .iter()
            .zip(&disc.gs)
            .map(|(w, g)| g * g / (2.0 * (w + eta) * (w + eta)))
            .sum();
        Ok((-s).exp())
    };
    if disc.gs.iter().all(|g| *g == 0.0) {
        return Ok(Renormalization {
            eta: 1.0,
            residual: 0.0,
            iterations: 0,
            method: crate::renorm::EtaMethod::FixedPoint,
            unique: true,
        });
    }
    solve_fixed_point(&g, cfg)
}

/// Exact eigen-decomposition of the single-excitation sector at a given `eta`.
#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    pub eta: f64,
    pub spectrum: ArrowheadSpectrum,
    /// `sum_j (w_j - eta/2) + eta/2`
    pub trace: f64,
}

impl SectorSpectrum {
    /// Diagonal `(eta/2, w_j - eta/2)`, off-diagonal `V_j`.
    pub fn new(disc: &DiscreteBath, eta: f64) -> Result<Self> {
        let d: Vec<f64> = disc.omegas.iter().map(|w| w - 0.5 * eta).collect();
        let v = disc.renormalized_couplings(eta);
        let spectrum = arrowhead::solve(0.5 * eta, &d, &v)?;
        let trace = 0.5 * eta + d.iter().sum::<f64>();
        Ok(SectorSpectrum { eta, spectrum, trace })
    }

    /// `sum_E x(E)^2 cos((E + eta/2) t)`
    pub fn sigma_x(&self, t: f64) -> f64 {
        let shift = 0.5 * self.eta;
        self.spectrum
            .values
            .iter()
            .zip(&self.spectrum.corner_weight)
            .map(|(e, x2)| x2 * ((e + shift) * t).cos())
            .sum()
    }

    /// `|<down,0| exp(-i H t) |down,0>|^2`
    pub fn survival(&self, t: f64) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (e, x2) in self.spectrum.values.iter().zip(&self.spectrum.corner_weight) {
            let (s, c) = (e * t).sin_cos();
            re += x2 * c;
            im -= x2 * s;
        }
        re * re + im * im
    }

    pub fn eigenvalue_sum(&self) -> f64 {
        self.spectrum.values.iter().sum()
    }

    pub fn completeness(&self) -> f64 {
        self.spectrum.corner_weight.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSeries {
    pub eta: f64,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Results at times beyond this are contaminated by mode revivals.
    pub recurrence_time: f64,
}

/// Coherence of the discretized model, using the discrete `eta`.
pub fn oracle_sigma_x(disc: &DiscreteBath, times: &[f64]) -> Result<OracleSeries> {
    let eta = oracle_eta(disc)?.eta;
    let sector = SectorSpectrum::new(disc, eta)?;
    Ok(OracleSeries {
        eta,
        times: times.to_vec(),
        values: times.iter().map(|&t| sector.sigma_x(t)).collect(),
        recurrence_time: disc.recurrence_time(1.0),
    })
}

/// Agreement required between the eigen-expansion and the integrated
/// amplitude equations.
pub const SURVIVAL_AGREEMENT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalCheck {
    pub eigen: f64,
    pub ode: f64,
    pub ode_steps: usize,
}

/// `|chi(tau)|^2` from `chi(0) = 1`, computed by exact propagation and by
/// integrating the amplitude equations; the two must agree.
pub fn oracle_survival(disc: &DiscreteBath, eta: f64, tau: f64) -> Result<SurvivalCheck> {
    oracle_survival_with(disc, eta, tau, &OdeConfig::default())
}

pub fn oracle_survival_with(disc: &DiscreteBath, eta: f64, tau: f64, cfg: &OdeConfig) -> Result<SurvivalCheck> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::Domain(format!("tau must be non-negative, got {tau}")));
    }
    let sector = SectorSpectrum::new(disc, eta)?;
    let eigen = sector.survival(tau);
    let detuning: Vec<f64> = disc.omegas.iter().map(|w| w - eta).collect();
    let v = disc.renormalized_couplings(eta);
    let out = ode::survival(&detuning, &v, tau, cfg)?;
    if (eigen - out.survival).abs() > SURVIVAL_AGREEMENT {
        return Err(Error::Consistency(format!(
            "survival at tau = {tau}: eigen-expansion {eigen:.12} vs amplitude equations {:.12}",
            out.survival
        )));
    }
    Ok(SurvivalCheck {
        eigen,
        ode: out.survival,
        ode_steps: out.steps,
    })
}

/// Effective rate `-ln|chi(tau)|^2 / tau` under ideal projections every `tau`,
/// at the discrete bath's own `eta`.
pub fn oracle_gamma(disc: &DiscreteBath, tau: f64) -> Result<f64> {
    let eta = oracle_eta(disc)?.eta;
    SectorSpectrum::new(disc, eta)?.gamma(tau)
}

impl SectorSpectrum {
    pub fn gamma(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("tau must be positive, got {tau}")));
        }
        let p = self.survival(tau);
        if !(p > 0.0) {
            return Err(Error::numerical(format!(
                "survival vanishes at tau = {tau}; effective rate undefined"
            )));
        }
        Ok(-p.ln() / tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_panel_linear() {
        let bath = BathSpec::lorentzian(0.01, 0.09).unwrap();
        let d = discretize(&bath, 2, 2.0, Sampling::Linear).unwrap();
        assert_eq!(d.omegas, vec![0.5, 1.5]);
        for (w, g) in d.omegas.iter().zip(&d.gs) {
            assert!((g * g - bath.j(*w)).abs() < 1e-16);
        }
    }

    #[test]
    fn log_sampling_concentrates_near_peak() {
        let bath = BathSpec::lorentzian(0.01, 0.09).unwrap();
        let count = |s| {
            discretize(&bath, 500, 200.0, s)
                .unwrap()
                .omegas
                .iter()
                .filter(|w| **w > 0.03 && **w < 0.27)
                .count()
        };
        assert!(count(Sampling::Logarithmic) > 10 * count(Sampling::Linear).max(1));
    }

    #[test]
    fn modes_strictly_increasing() {
        let bath = BathSpec::ohmic(0.1, 10.0).unwrap();
        for s in [Sampling::Linear, Sampling::Logarithmic] {
            let d = discretize(&bath, 300, 200.0, s).unwrap();
            assert!(d.omegas[0] > 0.0);
            assert!(d.omegas.windows(2).all(|w| w[1] > w[0]));
            assert!((d.widths.iter().sum::<f64>() - 200.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_degenerate_discretization() {
        let bath = BathSpec::ohmic(0.1, 10.0).unwrap();
        assert!(discretize(&bath, 1, 200.0, Sampling::Linear).is_err());
        assert!(discretize(&bath, 10, 0.0, Sampling::Linear).is_err());
    }

    #[test]
    fn decoupled_modes() {
        let bath = BathSpec::ohmic(0.0, 10.0).unwrap();
        let d = discretize(&bath, 50, 20.0, Sampling::Linear).unwrap();
        assert_eq!(oracle_eta(&d).unwrap().eta, 1.0);
        let s = oracle_sigma_x(&d, &[0.0, 1.0, 7.5]).unwrap();
        for (t, v) in s.times.iter().zip(&s.values) {
            assert!((v - t.cos()).abs() < 1e-14);
        }
        let sector = SectorSpectrum::new(&d, 1.0).unwrap();
        assert_eq!(sector.gamma(2.0).unwrap(), 0.0);
        assert_eq!(oracle_gamma(&d, 2.0).unwrap(), 0.0);
        let c = oracle_survival(&d, 1.0, 3.0).unwrap();
        assert!((c.eigen - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sector_invariants() {
        let bath = BathSpec::lorentzian(0.1, 0.3).unwrap();
        let d = discretize(&bath, 400, 200.0, Sampling::Logarithmic).unwrap();
        let eta = oracle_eta(&d).unwrap().eta;
        let s = SectorSpectrum::new(&d, eta).unwrap();
        assert!((s.completeness() - 1.0).abs() < 1e-9);
        assert!((s.sigma_x(0.0) - 1.0).abs() < 1e-9);
        assert!((s.eigenvalue_sum() - s.trace).abs() < 1e-9 * s.trace.abs());
    }

    #[test]
    fn survival_routes_agree() {
        let bath = BathSpec::lorentzian(0.01, 0.09).unwrap();
        let d = discretize(&bath, 200, 50.0, Sampling::Logarithmic).unwrap();
        let eta = oracle_eta(&d).unwrap().eta;
        for &tau in &[0.1, 1.0, 3.0] {
            let c = oracle_survival(&d, eta, tau).unwrap();
            assert!((c.eigen - c.ode).abs() < SURVIVAL_AGREEMENT);
        }
    }

    #[test]
    fn quadratic_short_time_onset() {
        let bath = BathSpec::ohmic(0.1, 10.0).unwrap();
        let d = discretize(&bath, 300, 100.0, Sampling::Linear).unwrap();
        let eta = oracle_eta(&d).unwrap().eta;
        let s = SectorSpectrum::new(&d, eta).unwrap();
        // 1 - P(t) ~ t^2 sum V_j^2 for small t.
        let v2: f64 = d.renormalized_couplings(eta).iter().map(|v| v * v).sum();
        for &t in &[1e-3, 1e-4] {
            let loss = 1.0 - s.survival(t);
            assert!((loss / (v2 * t * t) - 1.0).abs() < 0.05, "t = {t}: {loss}");
        }
    }
}
