//! Least-squares fit of `A exp(-rate t) cos(freq t + phase)` to a sampled series.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use serde::{Deserialize, Serialize};

use super::DynamicsSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DampedCosineFit {
    pub freq: f64,
    pub rate: f64,
    pub amplitude: f64,
    pub phase: f64,
    /// Euclidean norm of the residual vector.
    pub residual_norm: f64,
    pub iterations: usize,
}

const MAX_ITER: usize = 200;

pub fn fit_damped_cosine(series: &DynamicsSeries) -> Result<DampedCosineFit> {
    fit_samples(&series.times, &series.values)
}

/// Fit raw `(t, y)` samples. The samples must span at least five periods.
pub fn fit_samples(t: &[f64], y: &[f64]) -> Result<DampedCosineFit> {
    if t.len() != y.len() || t.len() < 8 {
        return Err(Error::InvalidParameter(
            "need at least 8 samples of equal length".into(),
        ));
    }
    let freq0 = zero_crossing_frequency(t, y)
        .ok_or_else(|| Error::numerical("series has too few zero crossings to fit"))?;
    let span = t[t.len() - 1] - t[0];
    if span * freq0 / (2.0 * PI) < 5.0 - 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "series covers {:.2} periods, need at least 5",
            span * freq0 / (2.0 * PI)
        )));
    }
    let rate0 = envelope_rate(t, y).unwrap_or(0.0).max(0.0);
    let (amp0, phase0) = linear_amplitude(t, y, freq0, rate0);

    let mut p = Vector4::new(amp0, rate0, freq0, phase0);
    let mut cost = sum_sq(t, y, &p);
    let mut mu = 1e-3;
    let mut iterations = 0;
    for it in 1..=MAX_ITER {
        iterations = it;
        let (jtj, jtr) = normal_equations(t, y, &p);
        let mut improved = false;
        for _ in 0..30 {
            let mut damped = jtj;
            for i in 0..4 {
                damped[(i, i)] += mu * jtj[(i, i)].max(1e-12);
            }
            let Some(step) = damped.lu().solve(&jtr) else {
                mu *= 10.0;
                continue;
            };
            let trial = p + step;
            let trial_cost = sum_sq(t, y, &trial);
            if trial_cost.is_finite() && trial_cost < cost {
                let rel = (cost - trial_cost) / cost.max(f64::MIN_POSITIVE);
                p = trial;
                cost = trial_cost;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                if rel < 1e-14 || step.norm() < 1e-13 * (1.0 + p.norm()) {
                    return finish(p, cost, iterations);
                }
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            // No downhill step at any damping: at a minimum to machine precision.
            return finish(p, cost, iterations);
        }
    }
    if cost.is_finite() {
        finish(p, cost, iterations)
    } else {
        Err(Error::numerical("damped-cosine fit diverged"))
    }
}

fn finish(p: Vector4<f64>, cost: f64, iterations: usize) -> Result<DampedCosineFit> {
    let (mut amplitude, rate, mut freq, mut phase) = (p[0], p[1], p[2], p[3]);
    if !(amplitude.is_finite() && rate.is_finite() && freq.is_finite() && phase.is_finite()) {
        return Err(Error::numerical("damped-cosine fit produced non-finite parameters"));
    }
    if freq < 0.0 {
        freq = -freq;
        phase = -phase;
    }
    if amplitude < 0.0 {
        amplitude = -amplitude;
        phase += PI;
    }
    phase = (phase + PI).rem_euclid(2.0 * PI) - PI;
    Ok(DampedCosineFit {
        freq,
        rate,
        amplitude,
        phase,
        residual_norm: cost.sqrt(),
        iterations,
    })
}

fn model(p: &Vector4<f64>, t: f64) -> f64 {
    p[0] * (-p[1] * t).exp() * (p[2] * t + p[3]).cos()
}

fn sum_sq(t: &[f64], y: &[f64], p: &Vector4<f64>) -> f64 {
    t.iter().zip(y).map(|(&ti, &yi)| (yi - model(p, ti)).powi(2)).sum()
}

fn normal_equations(t: &[f64], y: &[f64], p: &Vector4<f64>) -> (Matrix4<f64>, Vector4<f64>) {
    let mut jtj = Matrix4::zeros();
    let mut jtr = Vector4::zeros();
    for (&ti, &yi) in t.iter().zip(y) {
        let e = (-p[1] * ti).exp();
        let arg = p[2] * ti + p[3];
        let (s, c) = arg.sin_cos();
        let g = Vector4::new(e * c, -ti * p[0] * e * c, -ti * p[0] * e * s, -p[0] * e * s);
        let r = yi - p[0] * e * c;
        jtj += g * g.transpose();
        jtr += g * r;
    }
    (jtj, jtr)
}

fn zero_crossing_frequency(t: &[f64], y: &[f64]) -> Option<f64> {
    let mut crossings = Vec::new();
    for i in 1..t.len() {
        let (a, b) = (y[i - 1], y[i]);
        if (a < 0.0) != (b < 0.0) && a != b {
            crossings.push(t[i - 1] + (t[i] - t[i - 1]) * a / (a - b));
        }
    }
    if crossings.len() < 3 {
        return None;
    }
    let spacing = (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
    Some(PI / spacing)
}

/// Decay rate from a log-linear regression of the local maxima of `|y|`.
fn envelope_rate(t: &[f64], y: &[f64]) -> Option<f64> {
    let mut pts = Vec::new();
    for i in 1..y.len() - 1 {
        let (a, b, c) = (y[i - 1].abs(), y[i].abs(), y[i + 1].abs());
        if b >= a && b >= c && b > 0.0 {
            pts.push((t[i], b.ln()));
        }
    }
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| -sxy / sxx)
}

/// With frequency and rate fixed, the model is linear in `(A cos phi, -A sin phi)`.
fn linear_amplitude(t: &[f64], y: &[f64], freq: f64, rate: f64) -> (f64, f64) {
    let mut m = Matrix2::zeros();
    let mut v = Vector2::zeros();
    for (&ti, &yi) in t.iter().zip(y) {
        let e = (-rate * ti).exp();
        let b = Vector2::new(e * (freq * ti).cos(), e * (freq * ti).sin());
        m += b * b.transpose();
        v += b * yi;
    }
    match m.lu().solve(&v) {
        Some(c) => (c[0].hypot(c[1]), (-c[1]).atan2(c[0])),
        None => (1.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        (0..=1000).map(|k| k as f64 * 0.05).collect()
    }

    #[test]
    fn exact_cosine() {
        let t = grid();
        let y: Vec<f64> = t.iter().map(|t| t.cos()).collect();
        let f = fit_samples(&t, &y).unwrap();
        assert!((f.freq - 1.0).abs() < 1e-9);
        assert!(f.rate.abs() < 1e-9);
        assert!((f.amplitude - 1.0).abs() < 1e-9);
        assert!(f.phase.abs() < 1e-9);
        assert!(f.residual_norm < 1e-8);
    }

    #[test]
    fn recovers_damped_parameters() {
        let t = grid();
        let y: Vec<f64> = t
            .iter()
            .map(|t| 0.8 * (-0.13 * t).exp() * (0.77 * t + 0.4).cos())
            .collect();
        let f = fit_samples(&t, &y).unwrap();
        assert!((f.freq - 0.77).abs() < 1e-8);
        assert!((f.rate - 0.13).abs() < 1e-8);
        assert!((f.amplitude - 0.8).abs() < 1e-8);
        assert!((f.phase - 0.4).abs() < 1e-8);
    }

    #[test]
    fn too_short_series_is_rejected() {
        let t: Vec<f64> = (0..=200).map(|k| k as f64 * 0.05).collect();
        let y: Vec<f64> = t.iter().map(|t| t.cos()).collect();
        assert!(fit_samples(&t, &y).is_err());
    }
}
