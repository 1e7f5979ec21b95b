//! Measurement-free coherence `<sigma_x(t)>` and the dressed pole.
//!
//! The coherence is the Fourier transform of the spectral weight
//! `Gamma(w) / (pi [(w - eta - R(w))^2 + Gamma(w)^2])`. The weight is
//! tabulated once on a Kronrod node set whose panels resolve both the
//! resonance and `cos(w t)` at the largest requested time; each time point
//! is then a weighted sum over the table.

pub mod fit;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::error::{Error, Result};
use crate::quad::{adaptive_partition, gauss10_weights, gk21_nodes, QuadConfig};
use crate::renorm::{solve_eta_with, Renormalization};
use crate::selfenergy::SelfEnergy;
use crate::Numerics;

pub use fit::{fit_damped_cosine, DampedCosineFit};

/// Direction of the shift of the dressed frequency relative to the bare splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shift {
    Blue,
    Red,
    None,
}

impl Shift {
    pub fn as_str(&self) -> &'static str {
        match self {
            Shift::Blue => "blue",
            Shift::Red => "red",
            Shift::None => "none",
        }
    }
}

const SHIFT_TOL: f64 = 1e-6;

pub fn classify_shift(omega0: f64) -> Shift {
    if omega0 > 1.0 + SHIFT_TOL {
        Shift::Blue
    } else if omega0 < 1.0 - SHIFT_TOL {
        Shift::Red
    } else {
        Shift::None
    }
}

/// Root of `w - eta - R(w)` and the width there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub omega0: f64,
    pub gamma_pole: f64,
    /// Set when the scan found more than one root; `omega0` is then the
    /// root nearest `eta`.
    pub multiple: bool,
}

const POLE_SCAN_POINTS: usize = 1000;
const POLE_TOL: f64 = 1e-10;

/// Locate the dressed pole on `(0, omega_max]` by a uniform sign scan
/// followed by bisection.
pub fn find_pole(bath: &BathSpec, eta: f64, numerics: &Numerics) -> Result<Pole> {
    let se = SelfEnergy::new(*bath, eta).with_pv(numerics.pv);
    if bath.is_decoupled() {
        return Ok(Pole {
            omega0: eta,
            gamma_pole: 0.0,
            multiple: false,
        });
    }
    let hi = numerics.omega_max;
    let step = hi / POLE_SCAN_POINTS as f64;
    let grid: Vec<f64> = (1..=POLE_SCAN_POINTS).map(|k| k as f64 * step).collect();
    let values = grid
        .par_iter()
        .map(|&w| se.pole_condition(w))
        .collect::<Result<Vec<f64>>>()?;

    let mut roots = Vec::new();
    for k in 1..grid.len() {
        let (pa, pb) = (values[k - 1], values[k]);
        if pa == 0.0 {
            roots.push(grid[k - 1]);
        } else if (pa < 0.0) != (pb < 0.0) && pb != 0.0 {
            roots.push(bisect_pole(&se, grid[k - 1], grid[k], pa)?);
        }
    }
    if values[grid.len() - 1] == 0.0 {
        roots.push(grid[grid.len() - 1]);
    }
    let omega0 = roots
        .iter()
        .copied()
        .min_by(|a, b| (a - eta).abs().total_cmp(&(b - eta).abs()))
        .ok_or(Error::PoleNotFound { lo: step, hi })?;
    Ok(Pole {
        omega0,
        gamma_pole: se.gamma(omega0),
        multiple: roots.len() > 1,
    })
}

fn bisect_pole(se: &SelfEnergy, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    while b - a > POLE_TOL {
        let m = 0.5 * (a + b);
        let fm = se.pole_condition(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Sampled coherence with the pole data that shapes it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub eta: f64,
    pub omega0: f64,
    pub gamma_pole: f64,
    pub shift: Shift,
    /// Largest Gauss/Kronrod discrepancy over all time points.
    pub error_estimate: f64,
}

/// The spectral weight tabulated on Kronrod nodes.
#[derive(Debug, Clone)]
pub struct SpectralTable {
    nodes: Vec<f64>,
    kronrod: Vec<f64>,
    gauss: Vec<f64>,
    weight: Vec<f64>,
}

impl SpectralTable {
    /// Build the table for times up to `t_max`.
    pub fn build(se: &SelfEnergy, pole: &Pole, t_max: f64, numerics: &Numerics) -> Result<Self> {
        let omega_max = numerics.omega_max;
        if !(omega_max > pole.omega0) {
            return Err(Error::InvalidParameter(format!(
                "omega_max = {omega_max} must exceed the pole at {}",
                pole.omega0
            )));
        }
        let weight = |w: f64| -> f64 {
            let g = se.gamma(w);
            match se.r(w) {
                Ok(r) => {
                    let d = w - se.eta - r;
                    g / (PI * (d * d + g * g))
                }
                Err(_) => f64::NAN,
            }
        };

        let half = (20.0 * pole.gamma_pole).max(0.05);
        let lo = (pole.omega0 - half).max(0.0);
        let hi = (pole.omega0 + half).min(omega_max);

        let window_cfg = QuadConfig {
            abs_tol: 1e-12,
            rel_tol: numerics.dynamics_rel_tol,
            max_intervals: 50_000,
        };
        let (_, window) = adaptive_partition(&weight, &[lo, pole.omega0, hi], &window_cfg)
            .map_err(|e| Error::numerical(format!("resonance window [{lo}, {hi}]: {e}")))?;

        let outside_cfg = QuadConfig {
            abs_tol: 1e-10,
            rel_tol: numerics.dynamics_rel_tol,
            max_intervals: 50_000,
        };
        let mut panels: Vec<(f64, f64)> = Vec::new();
        for (a, b) in [(0.0, lo), (hi, omega_max)] {
            if b - a <= 0.0 {
                continue;
            }
            let mut pts = vec![a, b];
            for p in [se.bath.peak_frequency(), se.eta, 0.1 * se.bath.peak_frequency()] {
                if p > a && p < b {
                    pts.push(p);
                }
            }
            let (_, part) = adaptive_partition(&weight, &pts, &outside_cfg).map_err(|e| {
                Error::numerical(format!("spectral panel [{a}, {b}]: {e}"))
            })?;
            panels.extend(part.iter().map(|p| (p.a, p.b)));
        }
        panels.extend(window.iter().map(|p| (p.a, p.b)));
        panels.sort_by(|x, y| x.0.total_cmp(&y.0));

        // Every panel narrower than a quarter period of cos(w t_max).
        let max_width = if t_max > 0.0 { PI / (4.0 * t_max) } else { f64::INFINITY };
        let mut fine = Vec::with_capacity(panels.len());
        for (a, b) in panels {
            let pieces = ((b - a) / max_width).ceil().max(1.0) as usize;
            let h = (b - a) / pieces as f64;
            for i in 0..pieces {
                let pa = a + i as f64 * h;
                let pb = if i + 1 == pieces { b } else { pa + h };
                fine.push((pa, pb));
            }
        }

        let mut nodes = Vec::with_capacity(fine.len() * 21);
        let mut kronrod = Vec::with_capacity(fine.len() * 21);
        let mut gauss = Vec::with_capacity(fine.len() * 21);
        for &(a, b) in &fine {
            gk21_nodes(a, b, |x, w| {
                nodes.push(x);
                kronrod.push(w);
            });
            gauss.extend_from_slice(&gauss10_weights(a, b));
        }
        let values: Vec<f64> = nodes.par_iter().map(|&w| weight(w)).collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            let panel = fine[i / 21];
            return Err(Error::numerical(format!(
                "spectral weight not finite at omega = {} in panel [{}, {}]",
                nodes[i], panel.0, panel.1
            )));
        }
        Ok(SpectralTable {
            nodes,
            kronrod,
            gauss,
            weight: values,
        })
    }

    /// `(Kronrod, Gauss)` estimates of `integral weight(w) cos(w t) dw`.
    pub fn cosine_transform(&self, t: f64) -> (f64, f64) {
        let mut k = 0.0;
        let mut g = 0.0;
        for i in 0..self.nodes.len() {
            let v = self.weight[i] * (self.nodes[i] * t).cos();
            k += self.kronrod[i] * v;
            g += self.gauss[i] * v;
        }
        (k, g)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Default time grid: `[0, 50]` in steps of `0.05`.
pub fn default_times() -> Vec<f64> {
    (0..=1000).map(|k| k as f64 * 0.05).collect()
}

/// Solve for `eta`, locate the pole, and integrate the coherence at each time.
pub fn sigma_x_series(bath: &BathSpec, times: &[f64], numerics: &Numerics) -> Result<DynamicsSeries> {
    let renorm = solve_eta_with(bath, &numerics.eta)?;
    sigma_x_series_with_eta(bath, &renorm, times, numerics)
}

pub fn sigma_x_series_with_eta(
    bath: &BathSpec,
    renorm: &Renormalization,
    times: &[f64],
    numerics: &Numerics,
) -> Result<DynamicsSeries> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::Domain("times must be finite and non-negative".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("times must be strictly increasing".into()));
    }
    let eta = renorm.eta;
    let pole = find_pole(bath, eta, numerics)?;
    let shift = classify_shift(pole.omega0);

    if bath.is_decoupled() {
        // The weight collapses to a delta function at the bare splitting.
        return Ok(DynamicsSeries {
            times: times.to_vec(),
            values: times.iter().map(|t| t.cos()).collect(),
            eta,
            omega0: pole.omega0,
            gamma_pole: 0.0,
            shift,
            error_estimate: 0.0,
        });
    }

    let se = SelfEnergy::new(*bath, eta).with_pv(numerics.pv);
    let t_max = times.last().copied().unwrap_or(0.0);
    let table = SpectralTable::build(&se, &pole, t_max, numerics)?;
    let pairs: Vec<(f64, f64)> = times.par_iter().map(|&t| table.cosine_transform(t)).collect();
    let values = pairs.iter().map(|p| p.0).collect();
    let error_estimate = pairs.iter().map(|p| (p.0 - p.1).abs()).fold(0.0, f64::max);
    Ok(DynamicsSeries {
        times: times.to_vec(),
        values,
        eta,
        omega0: pole.omega0,
        gamma_pole: pole.gamma_pole,
        shift,
        error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_classification() {
        assert_eq!(classify_shift(1.0225), Shift::Blue);
        assert_eq!(classify_shift(0.77221), Shift::Red);
        assert_eq!(classify_shift(1.0), Shift::None);
        assert_eq!(classify_shift(1.0 + 5e-7), Shift::None);
    }

    #[test]
    fn decoupled_qubit_oscillates_at_bare_splitting() {
        let bath = BathSpec::lorentzian(0.0, 0.09).unwrap();
        let times = [0.0, 0.5, 3.0, 40.0];
        let s = sigma_x_series(&bath, &times, &Numerics::default()).unwrap();
        for (t, v) in times.iter().zip(&s.values) {
            assert_eq!(*v, t.cos());
        }
        assert_eq!(s.shift, Shift::None);
    }

    #[test]
    fn reported_poles() {
        let n = Numerics::default();
        let cases = [
            (BathSpec::lorentzian(0.01, 0.09).unwrap(), 0.98336, 1.0225, 1e-3),
            (BathSpec::lorentzian(0.1, 0.3).unwrap(), 0.91444, 1.0868, 2e-3),
            (BathSpec::ohmic(0.01, 10.0).unwrap(), 0.98447, 0.97720, 1e-3),
        ];
        for (bath, eta, expected, tol) in cases {
            let p = find_pole(&bath, eta, &n).unwrap();
            assert!((p.omega0 - expected).abs() < tol, "{bath:?}: {}", p.omega0);
            assert!(!p.multiple);
        }
    }

    #[test]
    fn rejects_unsorted_times() {
        let bath = BathSpec::lorentzian(0.01, 0.09).unwrap();
        assert!(sigma_x_series(&bath, &[0.0, 2.0, 1.0], &Numerics::default()).is_err());
        assert!(sigma_x_series(&bath, &[-1.0, 2.0], &Numerics::default()).is_err());
    }

    #[test]
    fn weak_lorentzian_series_is_bounded() {
        let bath = BathSpec::lorentzian(0.01, 0.09).unwrap();
        let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.5).collect();
        let s = sigma_x_series(&bath, &times, &Numerics::default()).unwrap();
        assert!(s.values[0] > 0.97 && s.values[0] <= 1.001, "{}", s.values[0]);
        for v in &s.values[1..] {
            assert!(v.abs() <= s.values[0] + 1e-3);
        }
        assert_eq!(s.shift, Shift::Blue);
    }
}
