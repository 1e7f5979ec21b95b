//! Bath spectral densities.
//!
//! Energies are measured in units of the bare qubit splitting, so the
//! splitting itself is `1.0` everywhere in this crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which environment the qubit sees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BathSpec {
    /// Low-frequency bath `J(w) = 2 alpha w / (w^2 + lambda^2)`, peaked at
    /// `lambda` and falling off as `1/w` above it.
    Lorentzian { alpha: f64, lambda: f64 },
    /// Ohmic bath with Drude cutoff `J(w) = 2 alpha w / ((w/omega_c)^2 + 1)`.
    OhmicDrude { alpha: f64, omega_c: f64 },
}

impl BathSpec {
    pub fn lorentzian(alpha: f64, lambda: f64) -> Result<Self> {
        let bath = BathSpec::Lorentzian { alpha, lambda };
        bath.validate()?;
        Ok(bath)
    }

    pub fn ohmic(alpha: f64, omega_c: f64) -> Result<Self> {
        let bath = BathSpec::OhmicDrude { alpha, omega_c };
        bath.validate()?;
        Ok(bath)
    }

    /// Checks parameter invariants. A zero coupling is accepted and stands
    /// for the decoupled qubit.
    pub fn validate(&self) -> Result<()> {
        let (alpha, scale, name) = match *self {
            BathSpec::Lorentzian { alpha, lambda } => (alpha, lambda, "lambda"),
            BathSpec::OhmicDrude { alpha, omega_c } => (alpha, omega_c, "omega_c"),
        };
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite and non-negative, got {alpha}"
            )));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be finite and positive, got {scale}"
            )));
        }
        Ok(())
    }

    /// Soft warnings about parameters outside the intended regime.
    pub fn warnings(&self) -> Vec<String> {
        match *self {
            BathSpec::Lorentzian { lambda, .. } if lambda >= 1.0 => vec![format!(
                "lambda = {lambda} is not below the qubit splitting; the bath is no longer low-frequency"
            )],
            _ => Vec::new(),
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            BathSpec::Lorentzian { alpha, .. } | BathSpec::OhmicDrude { alpha, .. } => alpha,
        }
    }

    /// Same bath with the coupling replaced.
    pub fn with_alpha(&self, alpha: f64) -> Self {
        match *self {
            BathSpec::Lorentzian { lambda, .. } => BathSpec::Lorentzian { alpha, lambda },
            BathSpec::OhmicDrude { omega_c, .. } => BathSpec::OhmicDrude { alpha, omega_c },
        }
    }

    pub fn is_decoupled(&self) -> bool {
        self.alpha() == 0.0
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BathSpec::Lorentzian { .. } => "lorentzian",
            BathSpec::OhmicDrude { .. } => "ohmic",
        }
    }

    /// `J(omega)`, rejecting negative frequencies.
    pub fn spectral_density(&self, omega: f64) -> Result<f64> {
        if omega.is_nan() || omega < 0.0 {
            return Err(Error::Domain(format!(
                "spectral density requires omega >= 0, got {omega}"
            )));
        }
        Ok(self.j(omega))
    }

    /// Unchecked `J(omega)` for use inside integrands.
    #[inline]
    pub fn j(&self, omega: f64) -> f64 {
        match *self {
            BathSpec::Lorentzian { alpha, lambda } => {
                2.0 * alpha * omega / (omega * omega + lambda * lambda)
            }
            BathSpec::OhmicDrude { alpha, omega_c } => {
                let r = omega / omega_c;
                2.0 * alpha * omega / (r * r + 1.0)
            }
        }
    }

    /// Frequency at which `J` is largest.
    pub fn peak_frequency(&self) -> f64 {
        match *self {
            BathSpec::Lorentzian { lambda, .. } => lambda,
            BathSpec::OhmicDrude { omega_c, .. } => omega_c,
        }
    }
}
