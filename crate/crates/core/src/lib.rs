//! Decoherence dynamics and measurement-modulated decay of a qubit coupled
//! to a bosonic bath, treated with a unitary transformation that keeps the
//! counter-rotating terms.
//!
//! All energies are in units of the bare qubit splitting and all times in
//! units of its inverse.
//!
//! Pipeline: [`renorm`] fixes the renormalized splitting `eta`, [`selfenergy`]
//! supplies `R(w)` and `Gamma(w)`, [`dynamics`] integrates the coherence and
//! locates the dressed pole, and [`zeno`] evaluates decay rates under
//! repeated projective measurements. [`oracle`] solves a discretized bath
//! exactly for cross-checks.

pub mod bath;
pub mod dynamics;
pub mod error;
pub mod oracle;
pub mod quad;
pub mod renorm;
pub mod selfenergy;
pub mod zeno;

pub use bath::BathSpec;
pub use error::{Error, Result};
pub use renorm::Renormalization;

use quad::QuadConfig;
use renorm::EtaSolverConfig;
use selfenergy::PvConfig;

/// Every numerical knob in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    pub eta: EtaSolverConfig,
    pub pv: PvConfig,
    /// Upper frequency edge for the coherence integral and pole search.
    pub omega_max: f64,
    /// Relative tolerance for the adaptive resonance window of the coherence integral.
    pub dynamics_rel_tol: f64,
    /// Tolerances for the Zeno decay-rate integrals.
    pub zeno_quad: QuadConfig,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            eta: EtaSolverConfig::default(),
            pv: PvConfig::default(),
            omega_max: 200.0,
            dynamics_rel_tol: 1e-6,
            zeno_quad: QuadConfig::with_tol(1e-14, 1e-10),
        }
    }
}
