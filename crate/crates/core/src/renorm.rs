//! Self-consistent renormalization of the qubit splitting.
//!
//! The transformed Hamiltonian carries the splitting `eta` (in units of the
//! bare splitting), fixed by `eta = G(eta)` with
//! `G(eta) = exp(-integral_0^inf J(w) / (2 (w + eta)^2) dw)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::error::{Error, Result};
use crate::quad::{integrate_points_to_infinity, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaMethod {
    FixedPoint,
    Bisection,
}

/// Solution of the self-consistency condition with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Renormalization {
    pub eta: f64,
    /// `|eta - G(eta)|` at the returned point.
    pub residual: f64,
    pub iterations: usize,
    pub method: EtaMethod,
    /// True when the sign scan found exactly one crossing.
    pub unique: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSolverConfig {
    pub tol: f64,
    pub damping: f64,
    pub max_iter: usize,
    /// Lower edge of the bisection bracket.
    pub bracket_lo: f64,
    pub scan_samples: usize,
    pub quad: QuadConfig,
}

impl Default for EtaSolverConfig {
    fn default() -> Self {
        EtaSolverConfig {
            tol: 1e-12,
            damping: 0.5,
            max_iter: 10_000,
            bracket_lo: 1e-6,
            scan_samples: 1000,
            quad: QuadConfig::with_tol(1e-15, 1e-13),
        }
    }
}

/// Exponent of `G` for the Lorentzian bath in closed form:
/// `alpha [pi lambda eta - lambda^2 - eta^2 + (lambda^2 - eta^2) ln(lambda/eta)] / (lambda^2 + eta^2)^2`.
pub fn lorentzian_exponent_closed_form(alpha: f64, lambda: f64, eta: f64) -> f64 {
    let l2 = lambda * lambda;
    let e2 = eta * eta;
    let num = PI * lambda * eta - l2 - e2 + (l2 - e2) * (lambda / eta).ln();
    alpha * num / ((l2 + e2) * (l2 + e2))
}

/// Exponent of `G` by quadrature, valid for any bath.
pub fn exponent_quadrature(bath: &BathSpec, eta: f64, quad: &QuadConfig) -> Result<f64> {
    if bath.is_decoupled() {
        return Ok(0.0);
    }
    let f = |w: f64| {
        let d = w + eta;
        bath.j(w) / (2.0 * d * d)
    };
    let peak = bath.peak_frequency();
    let mut pts = vec![0.0, eta, peak, 2.0 * peak.max(eta)];
    if eta < 0.1 {
        pts.push(10.0 * eta);
    }
    integrate_points_to_infinity(&f, &pts, quad)
        .map(|r| r.value)
        .map_err(|e| Error::numerical(format!("eta exponent at eta = {eta}: {e}")))
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("eta must lie in (0, 1], got {eta}")))
    }
}

fn map_with(bath: &BathSpec, eta: f64, quad: &QuadConfig) -> Result<f64> {
    let exponent = match *bath {
        _ if bath.is_decoupled() => 0.0,
        BathSpec::Lorentzian { alpha, lambda } => lorentzian_exponent_closed_form(alpha, lambda, eta),
        BathSpec::OhmicDrude { .. } => exponent_quadrature(bath, eta, quad)?,
    };
    Ok((-exponent).exp())
}

/// `G(eta)`: closed form for the Lorentzian bath, quadrature for the Ohmic bath.
pub fn eta_map(bath: &BathSpec, eta_trial: f64) -> Result<f64> {
    check_eta(eta_trial)?;
    map_with(bath, eta_trial, &EtaSolverConfig::default().quad)
}

/// Solve `eta = G(eta)` with default settings except the tolerance.
pub fn solve_eta(bath: &BathSpec, tol: f64) -> Result<Renormalization> {
    solve_eta_with(
        bath,
        &EtaSolverConfig {
            tol,
            ..Default::default()
        },
    )
}

pub fn solve_eta_with(bath: &BathSpec, cfg: &EtaSolverConfig) -> Result<Renormalization> {
    bath.validate()?;
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", cfg.tol)));
    }
    if bath.is_decoupled() {
        return Ok(Renormalization {
            eta: 1.0,
            residual: 0.0,
            iterations: 0,
            method: EtaMethod::FixedPoint,
            unique: true,
        });
    }
    let g = |eta: f64| map_with(bath, eta, &cfg.quad);
    solve_fixed_point(&g, cfg)
}

/// Shared solver for `eta = g(eta)` on `(0, 1]`; the discrete oracle reuses it.
pub(crate) fn solve_fixed_point<G>(g: &G, cfg: &EtaSolverConfig) -> Result<Renormalization>
where
    G: Fn(f64) -> Result<f64>,
{
    let h = |eta: f64| g(eta).map(|v| eta - v);

    // Sign scan of h over (0, 1].
    let n = cfg.scan_samples.max(2);
    let mut crossings = 0;
    let mut prev = h(1.0 / n as f64)?;
    for k in 2..=n {
        let cur = h(k as f64 / n as f64)?;
        if (prev < 0.0) != (cur < 0.0) {
            crossings += 1;
        }
        prev = cur;
    }
    if crossings > 1 {
        return Err(Error::MethodValidity(format!(
            "self-consistency equation has {crossings} solutions in (0, 1]"
        )));
    }
    let unique = true;

    let mut eta = 1.0;
    let mut last_res = f64::INFINITY;
    let mut growth = 0;
    for it in 1..=cfg.max_iter {
        let gv = g(eta)?;
        let res = (eta - gv).abs();
        if res <= cfg.tol {
            return Ok(Renormalization {
                eta,
                residual: res,
                iterations: it,
                method: EtaMethod::FixedPoint,
                unique,
            });
        }
        growth = if res > last_res { growth + 1 } else { 0 };
        last_res = res;
        let next = eta + cfg.damping * (gv - eta);
        if growth >= 5 || !(next > cfg.bracket_lo && next <= 1.0) {
            log::debug!("fixed-point iteration unstable at step {it}, switching to bisection");
            return bisect(&h, cfg, it, unique);
        }
        eta = next;
    }
    Err(Error::numerical(format!(
        "eta iteration did not converge within {} steps (residual {last_res:.3e})",
        cfg.max_iter
    )))
}

fn bisect<H>(h: &H, cfg: &EtaSolverConfig, spent: usize, unique: bool) -> Result<Renormalization>
where
    H: Fn(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (cfg.bracket_lo, 1.0);
    let (h_lo, h_hi) = (h(lo)?, h(hi)?);
    if h_lo.signum() == h_hi.signum() {
        return Err(Error::MethodValidity(format!(
            "no sign change of eta - G(eta) on [{lo}, 1]"
        )));
    }
    let rising = h_lo < 0.0;
    let mut iterations = spent;
    loop {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let hm = h(mid)?;
        if hm.abs() <= cfg.tol {
            return Ok(Renormalization {
                eta: mid,
                residual: hm.abs(),
                iterations,
                method: EtaMethod::Bisection,
                unique,
            });
        }
        if (hm < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi || iterations > spent + cfg.max_iter {
            return Err(Error::numerical(format!(
                "bisection stalled at eta = {mid} with residual {:.3e}",
                hm.abs()
            )));
        }
    }
}

/// Mode-resolved renormalized coupling factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingWeight {
    /// `xi = w / (w + eta)`
    pub xi: f64,
    /// `(eta xi / w)^2 = eta^2 / (w + eta)^2`; multiplies `J` to give the
    /// spectral density of the renormalized couplings.
    pub weight: f64,
}

pub fn coupling_weight(omega: f64, eta: f64) -> CouplingWeight {
    let d = omega + eta;
    CouplingWeight {
        xi: omega / d,
        weight: eta * eta / (d * d),
    }
}
