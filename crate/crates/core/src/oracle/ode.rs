//! Interaction-picture amplitude equations of the single-excitation sector,
//! integrated with an adaptive Dormand-Prince 5(4) pair:
//!
//! ```text
//! d chi/dt    = -i sum_j V_j beta_j exp(-i (w_j - eta) t)
//! d beta_j/dt = -i V_j chi exp(+i (w_j - eta) t)
//! ```

use nalgebra::Complex;

use crate::error::{Error, Result};

type C = Complex<f64>;

#[derive(Debug, Clone, Copy)]
pub struct OdeConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-13,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOutcome {
    /// `|chi(t_end)|^2`
    pub survival: f64,
    pub steps: usize,
    pub rejected: usize,
}

struct System<'a> {
    detuning: &'a [f64],
    coupling: &'a [f64],
}

impl System<'_> {
    fn rhs(&self, t: f64, y: &[C], out: &mut [C]) {
        let chi = y[0];
        let mut acc = C::new(0.0, 0.0);
        for j in 0..self.detuning.len() {
            let (s, c) = (self.detuning[j] * t).sin_cos();
            let phase = C::new(c, s);
            let v = self.coupling[j];
            acc += y[j + 1] * phase.conj() * v;
            out[j + 1] = C::new(0.0, -v) * chi * phase;
        }
        out[0] = C::new(0.0, -1.0) * acc;
    }
}

// Dormand-Prince tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate from `chi(0) = 1`, all bath amplitudes zero, to `t_end`.
pub fn survival(detuning: &[f64], coupling: &[f64], t_end: f64, cfg: &OdeConfig) -> Result<OdeOutcome> {
    let sys = System { detuning, coupling };
    let n = detuning.len() + 1;
    let mut y = vec![C::new(0.0, 0.0); n];
    y[0] = C::new(1.0, 0.0);
    if t_end <= 0.0 {
        return Ok(OdeOutcome {
            survival: 1.0,
            steps: 0,
            rejected: 0,
        });
    }
    let max_rate = detuning.iter().fold(1.0f64, |m, d| m.max(d.abs()));
    let mut h = (0.01 / max_rate).min(t_end);
    let mut t = 0.0;
    let mut k: Vec<Vec<C>> = vec![vec![C::new(0.0, 0.0); n]; 7];
    let mut tmp = vec![C::new(0.0, 0.0); n];
    let mut y5 = vec![C::new(0.0, 0.0); n];
    sys.rhs(t, &y, &mut k[0]);
    let (mut steps, mut rejected) = (0, 0);

    while t < t_end {
        if steps + rejected > cfg.max_steps {
            return Err(Error::numerical(format!(
                "amplitude integration exceeded {} steps at t = {t}",
                cfg.max_steps
            )));
        }
        if t + h > t_end {
            h = t_end - t;
        }
        let stage = |coeffs: &[(usize, f64)], k: &Vec<Vec<C>>, tmp: &mut Vec<C>| {
            for i in 0..n {
                let mut acc = y[i];
                for &(s, c) in coeffs {
                    acc += k[s][i] * (h * c);
                }
                tmp[i] = acc;
            }
        };
        stage(&[(0, A21)], &k, &mut tmp);
        sys.rhs(t + h / 5.0, &tmp, &mut k[1]);
        stage(&[(0, A31), (1, A32)], &k, &mut tmp);
        sys.rhs(t + 3.0 * h / 10.0, &tmp, &mut k[2]);
        stage(&[(0, A41), (1, A42), (2, A43)], &k, &mut tmp);
        sys.rhs(t + 4.0 * h / 5.0, &tmp, &mut k[3]);
        stage(&[(0, A51), (1, A52), (2, A53), (3, A54)], &k, &mut tmp);
        sys.rhs(t + 8.0 * h / 9.0, &tmp, &mut k[4]);
        stage(&[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], &k, &mut tmp);
        sys.rhs(t + h, &tmp, &mut k[5]);
        for i in 0..n {
            y5[i] = y[i] + (k[0][i] * B1 + k[2][i] * B3 + k[3][i] * B4 + k[4][i] * B5 + k[5][i] * B6) * h;
        }
        sys.rhs(t + h, &y5, &mut k[6]);

        let mut err: f64 = 0.0;
        for i in 0..n {
            let e = (k[0][i] * E1 + k[2][i] * E3 + k[3][i] * E4 + k[4][i] * E5 + k[5][i] * E6 + k[6][i] * E7) * h;
            let scale = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(y5[i].norm());
            err = err.max(e.norm() / scale);
        }
        if !err.is_finite() {
            return Err(Error::numerical(format!("amplitude integration blew up at t = {t}")));
        }
        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&y5);
            // First-same-as-last: the final stage is the next step's first.
            k.swap(0, 6);
            steps += 1;
        } else {
            rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-14 * t_end {
            return Err(Error::numerical(format!("step size underflow at t = {t}")));
        }
    }
    Ok(OdeOutcome {
        survival: y[0].norm_sqr(),
        steps,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_rabi() {
        // One resonant mode: chi(t) = cos(V t).
        let v = 0.3;
        let out = survival(&[0.0], &[v], 2.0, &OdeConfig::default()).unwrap();
        assert!((out.survival - (v * 2.0f64).cos().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn detuned_mode() {
        // Two-level detuned Rabi: |chi|^2 = 1 - (4V^2/W^2) sin^2(W t / 2), W = sqrt(d^2 + 4V^2).
        let (d, v, t) = (0.7f64, 0.2f64, 5.0f64);
        let w = (d * d + 4.0 * v * v).sqrt();
        let exact = 1.0 - 4.0 * v * v / (w * w) * (w * t / 2.0).sin().powi(2);
        let out = survival(&[d], &[v], t, &OdeConfig::default()).unwrap();
        assert!((out.survival - exact).abs() < 1e-10);
    }
}
