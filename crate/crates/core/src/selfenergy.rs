//! Level shift `R(w)` and decay width `Gamma(w)` of the dressed qubit.
//!
//! Both are built from the renormalized coupling density
//! `eta^2 J(w) / (w + eta)^2`: `Gamma` is `pi` times that density and `R`
//! is its Cauchy principal-value Hilbert transform.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::error::{Error, Result};
use crate::quad::{integrate_points, integrate_to_infinity, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfEnergySample {
    pub omega: f64,
    pub r: f64,
    pub gamma: f64,
}

/// Settings for the principal-value quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvConfig {
    /// Half-width of the excised core is `delta_rel * max(omega, 1)`.
    pub delta_rel: f64,
    /// Upper edge of the finite outer segment; the remainder is integrated
    /// through a `1/x` map.
    pub omega_max: f64,
    pub quad: QuadConfig,
}

impl Default for PvConfig {
    fn default() -> Self {
        PvConfig {
            delta_rel: 1e-3,
            omega_max: 200.0,
            quad: QuadConfig::with_tol(1e-14, 1e-11),
        }
    }
}

/// `Gamma(w) = pi eta^2 J(w) / (w + eta)^2`.
pub fn decay_width(bath: &BathSpec, eta: f64, omega: f64) -> Result<f64> {
    bath.spectral_density(omega)?;
    Ok(width_unchecked(bath, eta, omega))
}

#[inline]
pub(crate) fn width_unchecked(bath: &BathSpec, eta: f64, omega: f64) -> f64 {
    let d = omega + eta;
    PI * eta * eta * bath.j(omega) / (d * d)
}

/// Closed-form level shift of the Lorentzian bath.
pub fn lorentzian_level_shift(alpha: f64, lambda: f64, eta: f64, omega: f64) -> f64 {
    let l2 = lambda * lambda;
    let e2 = eta * eta;
    let w2 = omega * omega;
    let le2 = (l2 + e2) * (l2 + e2);
    let ew = eta + omega;
    let t1 = omega * omega.abs().ln() / (ew * ew * (l2 + w2));
    let t2 = (PI * lambda * (l2 + eta * (2.0 * omega - eta))
        - 2.0 * (l2 * (2.0 * eta - omega) + e2 * omega) * lambda.abs().ln())
        / (2.0 * le2 * (l2 + w2));
    let t3 = (-ew * (l2 + e2) + (2.0 * e2 * eta + (e2 - l2) * omega) * eta.abs().ln())
        / (le2 * ew * ew);
    2.0 * alpha * e2 * (t1 + t2 + t3)
}

/// `R(w)`: closed form for the Lorentzian bath, principal-value quadrature
/// for the Ohmic bath.
pub fn level_shift(bath: &BathSpec, eta: f64, omega: f64) -> Result<f64> {
    level_shift_with(bath, eta, omega, &PvConfig::default())
}

pub fn level_shift_with(bath: &BathSpec, eta: f64, omega: f64, pv: &PvConfig) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("level shift requires omega > 0, got {omega}")));
    }
    match *bath {
        _ if bath.is_decoupled() => Ok(0.0),
        BathSpec::Lorentzian { alpha, lambda } => Ok(lorentzian_level_shift(alpha, lambda, eta, omega)),
        BathSpec::OhmicDrude { .. } => pv_integral_with(bath, eta, omega, pv),
    }
}

pub fn pv_integral(bath: &BathSpec, eta: f64, omega: f64) -> Result<f64> {
    pv_integral_with(bath, eta, omega, &PvConfig::default())
}

/// `P integral_0^inf eta^2 J(x) / ((omega - x)(x + eta)^2) dx` by excising a
/// symmetric core around the pole and subtracting the smooth factor there.
pub fn pv_integral_with(bath: &BathSpec, eta: f64, omega: f64, pv: &PvConfig) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("principal value requires omega > 0, got {omega}")));
    }
    if bath.is_decoupled() {
        return Ok(0.0);
    }
    let density = |x: f64| {
        let d = x + eta;
        eta * eta * bath.j(x) / (d * d)
    };
    let delta = (pv.delta_rel * omega.max(1.0)).min(0.5 * omega);
    let (lo, hi) = (omega - delta, omega + delta);
    let outer = |x: f64| density(x) / (omega - x);

    let peak = bath.peak_frequency();
    let mut left_pts = vec![0.0, lo];
    left_pts.extend([eta, peak, 0.1 * peak].into_iter().filter(|&p| p > 0.0 && p < lo));
    let left = integrate_points(&outer, &left_pts, &pv.quad)?;

    let g0 = density(omega);
    let core_f = |x: f64| (density(x) - g0) / (omega - x);
    let core = integrate_points(&core_f, &[lo, omega, hi], &pv.quad)?;

    let top = pv.omega_max.max(10.0 * hi).max(10.0 * peak);
    let mut right_pts = vec![hi, top, 2.0 * hi];
    right_pts.extend([eta, peak].into_iter().filter(|&p| p > hi && p < top));
    let right = integrate_points(&outer, &right_pts, &pv.quad)?;
    let tail = integrate_to_infinity(&outer, top, &pv.quad)?;

    let value = left.value + core.value + right.value + tail.value;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::numerical(format!("principal value at omega = {omega} is not finite")))
    }
}

/// Self-energy of a bath at fixed `eta`.
#[derive(Debug, Clone, Copy)]
pub struct SelfEnergy {
    pub bath: BathSpec,
    pub eta: f64,
    pub pv: PvConfig,
}

impl SelfEnergy {
    pub fn new(bath: BathSpec, eta: f64) -> Self {
        SelfEnergy {
            bath,
            eta,
            pv: PvConfig::default(),
        }
    }

    pub fn with_pv(mut self, pv: PvConfig) -> Self {
        self.pv = pv;
        self
    }

    pub fn r(&self, omega: f64) -> Result<f64> {
        level_shift_with(&self.bath, self.eta, omega, &self.pv)
    }

    pub fn gamma(&self, omega: f64) -> f64 {
        width_unchecked(&self.bath, self.eta, omega.max(0.0))
    }

    pub fn sample(&self, omega: f64) -> Result<SelfEnergySample> {
        Ok(SelfEnergySample {
            omega,
            r: self.r(omega)?,
            gamma: self.gamma(omega),
        })
    }

    /// `w - eta - R(w)`; its root is the dressed oscillation frequency.
    pub fn pole_condition(&self, omega: f64) -> Result<f64> {
        Ok(omega - self.eta - self.r(omega)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const SETS: [(f64, f64, f64); 2] = [(0.01, 0.09, 0.98336), (0.1, 0.3, 0.91444)];

    #[test]
    fn width_vanishes_at_zero() {
        let bath = BathSpec::ohmic(0.1, 10.0).unwrap();
        assert_eq!(decay_width(&bath, 0.9, 0.0).unwrap(), 0.0);
        assert!(decay_width(&bath, 0.9, -0.1).is_err());
    }

    #[test]
    fn width_at_reported_poles() {
        let l = BathSpec::lorentzian(0.01, 0.09).unwrap();
        let g = decay_width(&l, 0.98336, 1.0225).unwrap();
        assert!((g / 0.014654 - 1.0).abs() < 1e-3, "{g}");
        let o = BathSpec::ohmic(0.1, 10.0).unwrap();
        let g = decay_width(&o, 0.84469, 0.77221).unwrap();
        assert!((g / 0.13163 - 1.0).abs() < 1e-3, "{g}");
    }

    #[test]
    fn closed_form_matches_principal_value() {
        for (alpha, lambda, eta) in SETS {
            let bath = BathSpec::lorentzian(alpha, lambda).unwrap();
            for k in 0..50 {
                let w = 0.1 + 0.1 * k as f64;
                let closed = level_shift(&bath, eta, w).unwrap();
                let pv = pv_integral(&bath, eta, w).unwrap();
                assert!((closed - pv).abs() < 1e-9, "w = {w}: {closed} vs {pv}");
            }
        }
    }

    #[test]
    fn ohmic_principal_value_matches_mapped_closed_form() {
        // 2 a w / ((w/wc)^2 + 1) is the Lorentzian form with alpha = a wc^2, lambda = wc.
        let bath = BathSpec::ohmic(0.1, 10.0).unwrap();
        for &w in &[0.05, 0.3, 0.77221, 1.0, 3.0, 9.99, 10.0, 25.0] {
            let pv = pv_integral(&bath, 0.84469, w).unwrap();
            let mapped = lorentzian_level_shift(0.1 * 100.0, 10.0, 0.84469, w);
            assert!((pv - mapped).abs() < 1e-9, "w = {w}: {pv} vs {mapped}");
        }
    }

    #[test]
    fn pole_condition_arithmetic() {
        let l = BathSpec::lorentzian(0.01, 0.09).unwrap();
        let r = level_shift(&l, 0.98336, 1.0225).unwrap();
        assert!((r - 0.03914).abs() < 1e-3, "{r}");
        let o = BathSpec::ohmic(0.01, 10.0).unwrap();
        let r = level_shift(&o, 0.98447, 0.97720).unwrap();
        assert!((r + 0.00727).abs() < 1e-3, "{r}");
        let o = BathSpec::ohmic(0.1, 10.0).unwrap();
        let r = pv_integral(&o, 0.84469, 0.77221).unwrap();
        assert!((r + 0.07248).abs() < 2e-3, "{r}");
    }

    #[test]
    fn decoupled_shift_is_zero() {
        let bath = BathSpec::lorentzian(0.0, 0.09).unwrap();
        assert_eq!(level_shift(&bath, 1.0, 0.5).unwrap(), 0.0);
        assert_eq!(pv_integral(&bath, 1.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn shift_is_linear_in_coupling() {
        for bath in [
            BathSpec::lorentzian(0.01, 0.3).unwrap(),
            BathSpec::ohmic(0.01, 10.0).unwrap(),
        ] {
            let strong = bath.with_alpha(0.1);
            for &w in &[0.2, 1.0, 4.0] {
                let a = level_shift(&bath, 0.95, w).unwrap() / 0.01;
                let b = level_shift(&strong, 0.95, w).unwrap() / 0.1;
                assert_relative_eq!(a, b, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn zero_frequency_is_a_domain_error() {
        let bath = BathSpec::lorentzian(0.01, 0.09).unwrap();
        assert!(matches!(level_shift(&bath, 0.98, 0.0), Err(Error::Domain(_))));
        assert!(matches!(pv_integral(&bath, 0.98, -1.0), Err(Error::Domain(_))));
    }
}
