//! Effective decay rates under repeated ideal projective measurements.
//!
//! With measurements every `tau` the excited-state population decays as
//! `exp(-gamma(tau) t)` where
//! `gamma(tau) = 2 pi integral J(w)/4 f(w) F(w, tau) dw`,
//! `F` is the Fejer-type measurement kernel centred at the renormalized
//! splitting and `f(w) = (2 eta / (w + eta))^2` weighs rotating against
//! counter-rotating contributions. The rotating-wave companion uses the bare
//! splitting and `f = 1`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::error::{Error, Result};
use crate::quad::{adaptive_partition, integrate_to_infinity, QuadConfig};
use crate::renorm::solve_eta_with;
use crate::Numerics;

/// `F(w, tau) = 2 sin^2((eta - w) tau / 2) / (pi (eta - w)^2 tau)`.
#[inline]
pub fn kernel_f(omega: f64, eta: f64, tau: f64) -> f64 {
    let x = 0.5 * (eta - omega) * tau;
    let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
    tau / (2.0 * PI) * sinc * sinc
}

/// `f(w) = (1 - (w - eta)/(w + eta))^2 = (2 eta / (w + eta))^2`.
#[inline]
pub fn interaction_f(omega: f64, eta: f64) -> f64 {
    let r = 2.0 * eta / (omega + eta);
    r * r
}

/// Long-interval rotating-wave rate `2 pi J(1) / 4`.
pub fn gamma_0(bath: &BathSpec) -> f64 {
    0.5 * PI * bath.j(1.0)
}

/// `2 pi integral_0^inf J(w)/4 g(w) F(w - center, tau) dw`.
fn measured_rate<G>(bath: &BathSpec, center: f64, g: G, tau: f64, cfg: &QuadConfig) -> Result<f64>
where
    G: Fn(f64) -> f64 + Sync,
{
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::Domain(format!("measurement interval must be positive, got {tau}")));
    }
    if bath.is_decoupled() {
        return Ok(0.0);
    }
    let integrand = |w: f64| 0.5 * PI * bath.j(w) * g(w) * kernel_f(w, center, tau);

    let lobe = 2.0 * PI / tau;
    let cut = (center + 100.0 * lobe).max(1000.0);
    let mut pts = vec![0.0, center, bath.peak_frequency(), cut];
    for k in 1..=10 {
        pts.push(center + k as f64 * lobe);
        pts.push(center - k as f64 * lobe);
    }
    // Panels no wider than half an oscillation of F.
    let step = 0.5 * lobe;
    let n = (cut / step).ceil() as usize;
    pts.extend((1..n).map(|i| i as f64 * step));
    pts.retain(|&p| (0.0..=cut).contains(&p));

    let local = QuadConfig {
        max_intervals: pts.len() + cfg.max_intervals,
        ..*cfg
    };
    let (head, _) = adaptive_partition(&integrand, &pts, &local)
        .map_err(|e| Error::numerical(format!("decay rate at tau = {tau}: {e}")))?;

    // Beyond `cut` the kernel oscillates many times per unit change of the
    // smooth factor; replace sin^2 by its mean.
    let tail_f = |w: f64| {
        let d = w - center;
        0.5 * PI * bath.j(w) * g(w) / (PI * d * d * tau)
    };
    let tail = integrate_to_infinity(&tail_f, cut, cfg)?;
    Ok(head.value + tail.value)
}

/// `gamma(tau)` with the counter-rotating correction, given `eta`.
pub fn gamma_tau(bath: &BathSpec, eta: f64, tau: f64, numerics: &Numerics) -> Result<f64> {
    measured_rate(bath, eta, |w| interaction_f(w, eta), tau, &numerics.zeno_quad)
}

/// Rotating-wave `gamma_RWA(tau)`: kernel centred at the bare splitting, `f = 1`.
pub fn gamma_rwa_tau(bath: &BathSpec, tau: f64, numerics: &Numerics) -> Result<f64> {
    measured_rate(bath, 1.0, |_| 1.0, tau, &numerics.zeno_quad)
}

/// Survival after `n` projections spaced by `tau`, for a known rate.
pub fn survival_from_rate(gamma: f64, tau: f64, n: u32) -> f64 {
    (-gamma * n as f64 * tau).exp()
}

/// `rho_ee(n tau) = exp(-gamma(tau) n tau)` starting from the excited state.
pub fn survival_probability(
    bath: &BathSpec,
    eta: f64,
    tau: f64,
    n: u32,
    numerics: &Numerics,
) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    Ok(survival_from_rate(gamma_tau(bath, eta, tau, numerics)?, tau, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Zeno,
    AntiZeno,
    Neutral,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Zeno => "zeno",
            Regime::AntiZeno => "anti_zeno",
            Regime::Neutral => "neutral",
        }
    }
}

const REGIME_TOL: f64 = 1e-3;

pub fn classify_regime(ratio: f64) -> Regime {
    if ratio > 1.0 + REGIME_TOL {
        Regime::AntiZeno
    } else if ratio < 1.0 - REGIME_TOL {
        Regime::Zeno
    } else {
        Regime::Neutral
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZenoCurve {
    pub eta: f64,
    pub taus: Vec<f64>,
    pub gamma: Vec<f64>,
    pub gamma_rwa: Vec<f64>,
    pub gamma0: f64,
    /// `gamma / gamma0`; NaN when `gamma0` vanishes.
    pub ratio: Vec<f64>,
    pub ratio_rwa: Vec<f64>,
    pub regime: Vec<Regime>,
}

/// 200 log-spaced intervals in `[1e-2, 20]`.
pub fn default_taus() -> Vec<f64> {
    log_space(1e-2, 20.0, 200)
}

pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

pub fn zeno_scan(bath: &BathSpec, taus: &[f64], numerics: &Numerics) -> Result<ZenoCurve> {
    let eta = solve_eta_with(bath, &numerics.eta)?.eta;
    zeno_scan_with_eta(bath, eta, taus, numerics)
}

pub fn zeno_scan_with_eta(
    bath: &BathSpec,
    eta: f64,
    taus: &[f64],
    numerics: &Numerics,
) -> Result<ZenoCurve> {
    if taus.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("measurement intervals must be strictly increasing".into()));
    }
    let rows = taus
        .par_iter()
        .map(|&tau| Ok((gamma_tau(bath, eta, tau, numerics)?, gamma_rwa_tau(bath, tau, numerics)?)))
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let gamma0 = gamma_0(bath);
    let (gamma, gamma_rwa): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let ratio_of = |g: &f64| if gamma0 > 0.0 { g / gamma0 } else { f64::NAN };
    let ratio: Vec<f64> = gamma.iter().map(ratio_of).collect();
    let ratio_rwa = gamma_rwa.iter().map(ratio_of).collect();
    let regime = ratio
        .iter()
        .map(|&r| if r.is_nan() { Regime::Neutral } else { classify_regime(r) })
        .collect();
    Ok(ZenoCurve {
        eta,
        taus: taus.to_vec(),
        gamma,
        gamma_rwa,
        gamma0,
        ratio,
        ratio_rwa,
        regime,
    })
}
