//! Named figure presets and the four reference baths they use.

use serde::{Deserialize, Serialize};
use zeno_core::bath::BathSpec;

use crate::config::Task;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Spectral densities of both baths at both coupling strengths.
    Fig1,
    /// Weak-coupling coherence.
    Fig2a,
    /// Strong-coupling coherence.
    Fig2b,
    /// Weak-coupling decay rates.
    Fig3,
    /// Strong-coupling decay rates.
    Fig4,
}

pub const WEAK_LORENTZIAN: BathSpec = BathSpec::Lorentzian { alpha: 0.01, lambda: 0.09 };
pub const WEAK_OHMIC: BathSpec = BathSpec::OhmicDrude { alpha: 0.01, omega_c: 10.0 };
pub const STRONG_LORENTZIAN: BathSpec = BathSpec::Lorentzian { alpha: 0.1, lambda: 0.3 };
pub const STRONG_OHMIC: BathSpec = BathSpec::OhmicDrude { alpha: 0.1, omega_c: 10.0 };

/// The four coupling regimes in the order weak Lorentzian, weak Ohmic,
/// strong Lorentzian, strong Ohmic.
pub const REFERENCE_SETS: [BathSpec; 4] = [WEAK_LORENTZIAN, WEAK_OHMIC, STRONG_LORENTZIAN, STRONG_OHMIC];

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Fig1, Preset::Fig2a, Preset::Fig2b, Preset::Fig3, Preset::Fig4];

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str() == s)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }

    pub fn task(&self) -> Task {
        match self {
            Preset::Fig1 => Task::Spectrum,
            Preset::Fig2a | Preset::Fig2b => Task::Dynamics,
            Preset::Fig3 | Preset::Fig4 => Task::Zeno,
        }
    }

    pub fn baths(&self) -> Vec<BathSpec> {
        match self {
            Preset::Fig1 => REFERENCE_SETS.to_vec(),
            Preset::Fig2a | Preset::Fig3 => vec![WEAK_LORENTZIAN, WEAK_OHMIC],
            Preset::Fig2b | Preset::Fig4 => vec![STRONG_LORENTZIAN, STRONG_OHMIC],
        }
    }
}
