//! Eigen-decomposition of a real symmetric arrowhead matrix
//!
//! ```text
//! [ a   v_1 ... v_n ]
//! [ v_1 d_1         ]
//! [ ...     ...     ]
//! [ v_n         d_n ]
//! ```
//!
//! Eigenvalues are the roots of the secular function
//! `s(E) = E - a - sum_j v_j^2 / (E - d_j)`, one in each gap between
//! consecutive `d_j` plus one on either side. The squared first component of
//! the eigenvector at `E` is `1 / (1 + sum_j v_j^2 / (E - d_j)^2)`.

use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ArrowheadSpectrum {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Squared overlap of each eigenvector with the corner basis state.
    pub corner_weight: Vec<f64>,
}

const MAX_ITER: usize = 400;

/// `d` must be strictly increasing.
pub fn solve(a: f64, d: &[f64], v: &[f64]) -> Result<ArrowheadSpectrum> {
    if d.len() != v.len() {
        return Err(Error::InvalidParameter("diagonal and coupling lengths differ".into()));
    }
    if d.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("arrowhead diagonal must be strictly increasing".into()));
    }
    // Uncoupled entries are eigenvalues with no corner weight.
    let active: Vec<usize> = (0..d.len()).filter(|&j| v[j] != 0.0).collect();
    let dd: Vec<f64> = active.iter().map(|&j| d[j]).collect();
    let v2: Vec<f64> = active.iter().map(|&j| v[j] * v[j]).collect();

    let mut pairs: Vec<(f64, f64)> = (0..d.len())
        .filter(|&j| v[j] == 0.0)
        .map(|j| (d[j], 0.0))
        .collect();

    if dd.is_empty() {
        pairs.push((a, 1.0));
    } else {
        let n = dd.len();
        let norm_v = v2.iter().sum::<f64>().sqrt();
        let below = dd[0].min(a) - norm_v - 1.0;
        let above = dd[n - 1].max(a) + norm_v + 1.0;
        let roots = (0..=n)
            .into_par_iter()
            .map(|k| {
                let lo = if k == 0 { below } else { dd[k - 1] };
                let hi = if k == n { above } else { dd[k] };
                secular_root(a, &dd, &v2, lo, hi, k)
            })
            .collect::<Result<Vec<(f64, f64)>>>()?;
        pairs.extend(roots);
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (values, corner_weight) = pairs.into_iter().unzip();
    Ok(ArrowheadSpectrum {
        values,
        corner_weight,
    })
}

/// Root in `(lo, hi)`, interval index `k` (poles at `dd[k-1]` and `dd[k]`
/// where they exist). Returns `(E, corner weight)`.
fn secular_root(a: f64, dd: &[f64], v2: &[f64], lo: f64, hi: f64, k: usize) -> Result<(f64, f64)> {
    let n = dd.len();
    let has_left = k > 0;
    let has_right = k < n;
    // Work relative to the nearer pole for accuracy in E - d_j.
    let eval = |origin: f64, mu: f64| -> (f64, f64) {
        let mut s = origin + mu - a;
        let mut ds = 1.0;
        for j in 0..n {
            let diff = (origin - dd[j]) + mu;
            let q = v2[j] / diff;
            s -= q;
            ds += q / diff;
        }
        (s, ds)
    };
    let mid = 0.5 * (lo + hi);
    let (s_mid, _) = eval(0.0, mid);
    // s increases on the interval; s(mid) > 0 puts the root in the left half.
    let origin = if (s_mid > 0.0 && has_left) || !has_right { lo } else { hi };
    let (mut left, mut right) = (lo - origin, hi - origin);
    if s_mid > 0.0 {
        right = mid - origin;
    } else {
        left = mid - origin;
    }
    let mut mu = 0.5 * (left + right);
    for _ in 0..MAX_ITER {
        let (s, ds) = eval(origin, mu);
        if s == 0.0 {
            break;
        }
        if s > 0.0 {
            right = mu;
        } else {
            left = mu;
        }
        let mut next = mu - s / ds;
        if !(next > left && next < right) {
            next = 0.5 * (left + right);
        }
        let scale = mu.abs().max(f64::MIN_POSITIVE);
        if (next - mu).abs() <= 4.0 * f64::EPSILON * scale || right - left <= 4.0 * f64::EPSILON * scale {
            mu = next;
            break;
        }
        mu = next;
    }
    let e = origin + mu;
    if !e.is_finite() {
        return Err(Error::numerical(format!("secular root in ({lo}, {hi}) is not finite")));
    }
    let mut sum = 0.0;
    for j in 0..n {
        let diff = (origin - dd[j]) + mu;
        sum += v2[j] / (diff * diff);
    }
    Ok((e, 1.0 / (1.0 + sum)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn dense(a: f64, d: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = d.len() + 1;
        let mut m = DMatrix::zeros(n, n);
        m[(0, 0)] = a;
        for j in 0..d.len() {
            m[(j + 1, j + 1)] = d[j];
            m[(0, j + 1)] = v[j];
            m[(j + 1, 0)] = v[j];
        }
        let eig = m.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        pairs.into_iter().unzip()
    }

    #[test]
    fn matches_dense_solver() {
        let n = 60;
        let d: Vec<f64> = (0..n).map(|j| 0.05 * j as f64 - 0.4).collect();
        let v: Vec<f64> = (0..n).map(|j| 0.02 * (1.0 + (j as f64 * 0.7).sin())).collect();
        let s = solve(0.45, &d, &v).unwrap();
        let (ev, w) = dense(0.45, &d, &v);
        for i in 0..=n {
            assert!((s.values[i] - ev[i]).abs() < 1e-12, "{i}: {} vs {}", s.values[i], ev[i]);
            assert!((s.corner_weight[i] - w[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn completeness_and_trace() {
        let n = 500;
        let d: Vec<f64> = (0..n).map(|j| 0.01 * j as f64).collect();
        let v: Vec<f64> = (0..n).map(|j| 1e-3 / (1.0 + 0.01 * j as f64)).collect();
        let s = solve(1.0, &d, &v).unwrap();
        let total: f64 = s.corner_weight.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let trace = 1.0 + d.iter().sum::<f64>();
        let sum: f64 = s.values.iter().sum();
        assert!((sum - trace).abs() < 1e-9 * trace.abs());
    }

    #[test]
    fn uncoupled_entries_deflate() {
        let s = solve(0.5, &[0.1, 0.2, 0.9], &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(s.values, vec![0.1, 0.2, 0.5, 0.9]);
        assert_eq!(s.corner_weight, vec![0.0, 0.0, 1.0, 0.0]);
        let s = solve(0.5, &[0.1, 0.2], &[0.0, 0.1]).unwrap();
        assert_eq!(s.values.len(), 3);
        let total: f64 = s.corner_weight.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
    }
}
