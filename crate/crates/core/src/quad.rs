//! Globally adaptive Gauss-Kronrod quadrature (21-point rule) with
//! user-supplied breakpoints and a semi-infinite variant.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Abscissae of the 21-point Kronrod rule; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_067_515_198,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and limits for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            max_intervals: 20_000,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub evaluations: usize,
}

/// One Kronrod panel.
#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Apply the 21-point Kronrod rule on `[a, b]`. The error estimate is the
/// QUADPACK-scaled Gauss/Kronrod difference.
pub fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        err = f64::INFINITY;
    }
    Panel { a, b, value, err }
}

/// Visit the 21 Kronrod nodes of `[a, b]` as `(x, weight)` pairs, weights
/// already scaled by the half-width.
pub fn gk21_nodes(a: f64, b: f64, mut visit: impl FnMut(f64, f64)) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    visit(center, WGK[10] * half);
    for j in 0..10 {
        let dx = half * XGK[j];
        visit(center - dx, WGK[j] * half);
        visit(center + dx, WGK[j] * half);
    }
}

/// Embedded 10-point Gauss weights for the node order of [`gk21_nodes`]
/// (zero at Kronrod-only nodes), scaled by the half-width.
pub fn gauss10_weights(a: f64, b: f64) -> [f64; 21] {
    let half = 0.5 * (b - a);
    let mut w = [0.0; 21];
    for j in 0..10 {
        if j % 2 == 1 {
            w[1 + 2 * j] = WG[j / 2] * half;
            w[2 + 2 * j] = WG[j / 2] * half;
        }
    }
    w
}

/// Adaptive integration over `[points[0], points[last]]`, seeding one
/// panel per consecutive pair of breakpoints. Returns the final partition.
pub fn adaptive_partition<F: Fn(f64) -> f64>(
    f: &F,
    points: &[f64],
    cfg: &QuadConfig,
) -> Result<(QuadResult, Vec<Panel>)> {
    let mut pts: Vec<f64> = points.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return Ok((
            QuadResult {
                value: 0.0,
                abs_err: 0.0,
                evaluations: 0,
            },
            Vec::new(),
        ));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let (mut total, mut total_err) = (0.0, 0.0);
    for w in pts.windows(2) {
        let p = gk21(f, w[0], w[1]);
        evaluations += 21;
        total += p.value;
        total_err += p.err;
        heap.push(p);
    }
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            let worst = heap.peek().copied();
            return Err(Error::numerical(format!(
                "quadrature did not converge after {} subintervals (value {total:.6e}, error {total_err:.3e}, worst panel {:?})",
                heap.len(),
                worst.map(|p| (p.a, p.b))
            )));
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Interval cannot be split further in floating point.
            if !worst.value.is_finite() {
                return Err(Error::numerical(format!(
                    "non-finite integrand on panel [{}, {}]",
                    worst.a, worst.b
                )));
            }
            heap.push(Panel { err: 0.0, ..worst });
            total_err -= worst.err;
            continue;
        }
        let left = gk21(f, worst.a, mid);
        let right = gk21(f, mid, worst.b);
        evaluations += 42;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to avoid drift from incremental updates.
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let abs_err: f64 = panels.iter().map(|p| p.err).sum();
    if !value.is_finite() {
        return Err(Error::numerical("quadrature produced a non-finite value"));
    }
    Ok((
        QuadResult {
            value,
            abs_err,
            evaluations,
        },
        panels,
    ))
}

/// Integrate over a finite interval split at the given breakpoints.
pub fn integrate_points<F: Fn(f64) -> f64>(
    f: &F,
    points: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    adaptive_partition(f, points, cfg).map(|(r, _)| r)
}

pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    integrate_points(f, &[a, b], cfg)
}

/// `integral_a^inf f(x) dx` via `x = a + (1 - s) / s`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let g = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let x = a + (1.0 - s) / s;
        let v = f(x) / (s * s);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    // Split the unit interval geometrically so that the large-x region
    // (small s) gets its own panels.
    let points = [0.0, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0];
    integrate_points(&g, &points, cfg)
}

/// `integral over [points[0], inf)`, with finite breakpoints and an
/// unbounded last segment starting at `points[last]`.
pub fn integrate_points_to_infinity<F: Fn(f64) -> f64>(
    f: &F,
    points: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let mut pts: Vec<f64> = points.to_vec();
    pts.sort_by(f64::total_cmp);
    let last = *pts.last().ok_or_else(|| Error::numerical("no breakpoints"))?;
    let head = integrate_points(f, &pts, cfg)?;
    let tail = integrate_to_infinity(f, last, cfg)?;
    Ok(QuadResult {
        value: head.value + tail.value,
        abs_err: head.abs_err + tail.abs_err,
        evaluations: head.evaluations + tail.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kronrod_exact_for_degree_31() {
        // integral_{-1}^{1} x^30 = 2/31
        let p = gk21(&|x: f64| x.powi(30), -1.0, 1.0);
        assert_relative_eq!(p.value, 2.0 / 31.0, max_relative = 1e-13);
        let p = gk21(&|x: f64| x.powi(31) + 1.0, -1.0, 1.0);
        assert_relative_eq!(p.value, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn gauss_weights_integrate_degree_19() {
        let w = gauss10_weights(0.0, 2.0);
        let mut s = 0.0;
        let mut i = 0;
        gk21_nodes(0.0, 2.0, |x, _| {
            s += w[i] * x.powi(19);
            i += 1;
        });
        assert_relative_eq!(s, 2f64.powi(20) / 20.0, max_relative = 1e-13);
        let sum: f64 = w.iter().sum();
        assert_relative_eq!(sum, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn adaptive_peaked_integrand() {
        // Narrow Lorentzian, integral = atan((b-c)/g) - atan((a-c)/g)
        let g = 1e-4;
        let f = |x: f64| g / ((x - 0.3).powi(2) + g * g);
        let r = integrate(&f, 0.0, 1.0, &QuadConfig::default()).unwrap();
        let exact = (0.7f64 / g).atan() + (0.3f64 / g).atan();
        assert_relative_eq!(r.value, exact, max_relative = 1e-10);
    }

    #[test]
    fn semi_infinite() {
        let r = integrate_to_infinity(&|x: f64| 1.0 / (1.0 + x * x), 0.0, &QuadConfig::default())
            .unwrap();
        assert_relative_eq!(r.value, std::f64::consts::FRAC_PI_2, max_relative = 1e-11);
        let r = integrate_points_to_infinity(
            &|x: f64| (-x).exp(),
            &[0.0, 1.0, 5.0],
            &QuadConfig::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-11);
    }

    #[test]
    fn partition_covers_interval() {
        let (_, panels) =
            adaptive_partition(&|x: f64| x.sqrt(), &[0.0, 0.5, 1.0], &QuadConfig::default())
                .unwrap();
        assert_eq!(panels.first().unwrap().a, 0.0);
        assert_eq!(panels.last().unwrap().b, 1.0);
        for w in panels.windows(2) {
            assert_eq!(w[0].b, w[1].a);
        }
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadConfig {
            max_intervals: 10,
            ..Default::default()
        };
        let r = integrate(&|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &cfg);
        assert!(matches!(r, Err(Error::Numerical(_))));
    }
}
