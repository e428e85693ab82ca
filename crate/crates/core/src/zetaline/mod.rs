//! The Riemann zeta function on the critical line at desk-scale heights.
//!
//! `Z(t) = e^{i theta(t)} zeta(1/2 + it)` is real. Below `t = 30` it comes
//! from the Borwein-accelerated alternating (eta) series, above from the
//! Riemann–Siegel formula with as many remainder terms as the height needs,
//! capped at fifteen.

mod coefficients;

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::cuepoly::CovariancePoint;
use crate::ensemble::try_run_indexed;
use crate::error::{Error, Result};
use crate::extremes::model_mean_delta;
use crate::optimize::{golden_section_min, lowest_local_minima};
use crate::thermo::{check_betas, FreezeCurve, ThermoSample};

use coefficients::{F_TAYLOR_EVEN, RS_WEIGHTS};

const TWO_PI: f64 = 2.0 * PI;

/// Largest supported height.
pub const MAX_HEIGHT: f64 = 1e8;

/// Riemann–Siegel is used from here on, the eta series below.
pub const RS_MIN_HEIGHT: f64 = 30.0;

/// Smallest height accepted by [`rs_theta`].
pub const THETA_SERIES_MIN: f64 = 10.0;

/// Grid points per unit of `n_assoc` across one interval of length `2 pi`.
pub const DEFAULT_DENSITY: f64 = 16.0;

/// Smallest interval start accepted by [`interval_max`].
pub const MIN_INTERVAL_START: f64 = 100.0;

const REFINE_TOL: f64 = 1e-10;
const REFINED_CELLS: usize = 3;
/// Phasors are recomputed from scratch this often along a grid.
const PHASOR_RESTART: usize = 256;

fn check_window(t: f64) -> Result<()> {
    if !(0.0..=MAX_HEIGHT).contains(&t) {
        return Err(Error::Precision(format!(
            "height {t} is outside the supported window [0, {MAX_HEIGHT:e}]"
        )));
    }
    Ok(())
}

/// `theta(t) - (t/2) ln(t / 2 pi) + t/2 + pi/8`, the small part of the
/// asymptotic series.
fn theta_tail(t: f64) -> f64 {
    let u = 1.0 / (t * t);
    (1.0 / 48.0 + u * (7.0 / 5760.0 + u * (31.0 / 80640.0 + u * (127.0 / 430080.0 + u * (511.0 / 1216512.0)))))
        / t
}

/// Riemann–Siegel theta function from its asymptotic series.
pub fn rs_theta(t: f64) -> Result<f64> {
    if !(t >= THETA_SERIES_MIN) {
        return Err(Error::domain(format!("rs_theta needs t >= {THETA_SERIES_MIN}, got {t}")));
    }
    check_window(t)?;
    Ok(0.5 * t * (t / TWO_PI).ln() - 0.5 * t - PI / 8.0 + theta_tail(t))
}

/// `ln Gamma(z)` for `Re z > 0` by Stirling's series after an upward shift.
fn ln_gamma_complex(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    // B_{2k} / (2k (2k - 1)), k = 1..6
    let series = inv
        * (1.0 / 12.0
            + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0))))));
    (w - 0.5) * w.ln() - w + 0.5 * TWO_PI.ln() + series - shift
}

/// `theta(t)` at any height, through `Im ln Gamma(1/4 + it/2)` below the series range.
fn theta_any(t: f64) -> f64 {
    if t >= THETA_SERIES_MIN {
        0.5 * t * (t / TWO_PI).ln() - 0.5 * t - PI / 8.0 + theta_tail(t)
    } else {
        ln_gamma_complex(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
    }
}

/// `zeta(1/2 + it)` from the eta series with Borwein's weights.
fn zeta_eta_series(t: f64) -> Complex64 {
    let s = Complex64::new(0.5, t);
    // the weights converge like (3 + sqrt 8)^{-n} against a growth of e^{pi t}
    let n = (((PI * t + 40.0) / (3.0 + 8f64.sqrt()).ln()).ceil() as usize).max(30);
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / n as f64;
    let mut acc = term;
    d.push(n as f64 * acc);
    for i in 1..=n {
        let fi = i as f64;
        // ratio of consecutive (n + i - 1)! 4^i / ((n - i)! (2i)!)
        term *= 4.0 * (n as f64 + fi - 1.0) * (n as f64 - fi + 1.0) / ((2.0 * fi - 1.0) * 2.0 * fi);
        acc += term;
        d.push(n as f64 * acc);
    }
    let dn = d[n];
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, dk) in d.iter().take(n).enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let weight = sign * (dk - dn) / dn;
        sum += weight * (-s * ((k + 1) as f64).ln()).exp();
    }
    let factor = Complex64::new(1.0, 0.0) - (Complex64::new(1.0, 0.0) - s).scale(2f64.ln()).exp();
    -sum / factor
}

struct RsTables {
    /// `(ln n, n^{-1/2})` for `n = 1..`.
    terms: Vec<(f64, f64)>,
    /// `F^{(m)}` Taylor weights `c_{2j} (2j)! / (2j - m)!`.
    derivative: Vec<Vec<Complex64>>,
}

fn rs_tables() -> &'static RsTables {
    static TABLES: OnceLock<RsTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let n_max = (MAX_HEIGHT / TWO_PI).sqrt() as usize + 2;
        let terms = (1..=n_max)
            .map(|n| {
                let nf = n as f64;
                (nf.ln(), 1.0 / nf.sqrt())
            })
            .collect();
        let max_order = 3 * (RS_WEIGHTS.len() - 1);
        let derivative = (0..=max_order)
            .map(|m| {
                F_TAYLOR_EVEN
                    .iter()
                    .enumerate()
                    .map(|(j, &(re, im))| {
                        let power = 2 * j;
                        if power < m {
                            return Complex64::new(0.0, 0.0);
                        }
                        let falling: f64 = (0..m).map(|i| (power - i) as f64).product();
                        Complex64::new(re, im) * falling
                    })
                    .collect()
            })
            .collect();
        RsTables { terms, derivative }
    })
}

/// `F^{(m)}(p)` from the Taylor table, by Horner's rule in `p^2`.
fn f_derivative(tables: &RsTables, m: usize, p: f64) -> Complex64 {
    let row = &tables.derivative[m];
    let first = m.div_ceil(2);
    let p2 = p * p;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in (first..row.len()).rev() {
        acc = acc * p2 + row[j];
    }
    if m % 2 == 1 {
        acc * p
    } else {
        acc
    }
}

/// `2 (-1)^{N-1} a^{-1/2} Re(e^{i (theta - U)} R)` where `R` is the remainder
/// series in powers of `1/a`, `a = sqrt(t / 2 pi)`.
fn rs_remainder(tables: &RsTables, t: f64) -> f64 {
    let a = (t / TWO_PI).sqrt();
    let n = a.floor();
    let p = 1.0 - 2.0 * (a - n);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut a_power = 1.0;
    let minus_i = Complex64::new(0.0, -1.0);
    for (k, weights) in RS_WEIGHTS.iter().enumerate() {
        let mut term = Complex64::new(0.0, 0.0);
        let mut rotation = Complex64::new(1.0, 0.0);
        for (l, &w) in weights.iter().enumerate() {
            if w != 0.0 {
                term += rotation * w * f_derivative(tables, 3 * k - 2 * l, p);
            }
            rotation *= minus_i;
        }
        let term = term * a_power;
        sum += term;
        if k >= 2 && term.norm() < 1e-17 * sum.norm().max(1e-3) {
            break;
        }
        a_power /= a;
    }
    let sign = if (n as i64) % 2 == 1 { 1.0 } else { -1.0 };
    let rotated = Complex64::from_polar(1.0, theta_tail(t)) * sum;
    2.0 * sign * rotated.re / a.sqrt()
}

fn main_sum_length(t: f64) -> usize {
    (t / TWO_PI).sqrt().floor() as usize
}

/// `Z(t)` by the Riemann–Siegel formula; `t >= RS_MIN_HEIGHT`.
fn siegel_z_rs(t: f64) -> f64 {
    let tables = rs_tables();
    let theta = theta_any(t);
    let mut main = 0.0;
    for &(ln_n, w) in &tables.terms[..main_sum_length(t)] {
        main += w * (theta - t * ln_n).cos();
    }
    2.0 * main + rs_remainder(tables, t)
}

/// Hardy's function `Z(t)`, real with `|Z(t)| = |zeta(1/2 + it)|`.
pub fn siegel_z(t: f64) -> Result<f64> {
    check_window(t)?;
    if t >= RS_MIN_HEIGHT {
        Ok(siegel_z_rs(t))
    } else {
        let rotated = Complex64::from_polar(1.0, theta_any(t)) * zeta_eta_series(t);
        Ok(rotated.re)
    }
}

/// One evaluation on the critical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaPoint {
    pub t: f64,
    pub z_val: f64,
    pub theta_val: f64,
    pub zeta_abs: f64,
}

/// `|zeta(1/2 + it)|` together with `Z(t)` and `theta(t)`.
pub fn zeta_abs_halfline(t: f64) -> Result<ZetaPoint> {
    let z_val = siegel_z(t)?;
    Ok(ZetaPoint {
        t,
        z_val,
        theta_val: theta_any(t),
        zeta_abs: z_val.abs(),
    })
}

/// `Z(t0 + k step)` for `k = 0..count`. Above the Riemann–Siegel threshold
/// the terms `n^{-1/2} e^{-i t ln n}` are advanced by fixed rotations from
/// point to point, with a fresh start every few hundred points.
pub fn z_on_grid(t0: f64, step: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let t_end = t0 + step * (count - 1) as f64;
    check_window(t0)?;
    check_window(t_end)?;
    if !(step > 0.0) {
        return Err(Error::domain(format!("grid step must be positive, got {step}")));
    }
    if t0 < RS_MIN_HEIGHT {
        return (0..count).map(|k| siegel_z(t0 + step * k as f64)).collect();
    }
    let tables = rs_tables();
    let n_max = main_sum_length(t_end);
    let terms = &tables.terms[..n_max];
    let rotation: Vec<Complex64> = terms
        .iter()
        .map(|&(ln_n, _)| Complex64::from_polar(1.0, -step * ln_n))
        .collect();
    let mut phasor = vec![Complex64::new(0.0, 0.0); n_max];
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let t = t0 + step * k as f64;
        if k % PHASOR_RESTART == 0 {
            for (ph, &(ln_n, w)) in phasor.iter_mut().zip(terms) {
                *ph = Complex64::from_polar(w, -t * ln_n);
            }
        } else {
            for (ph, r) in phasor.iter_mut().zip(&rotation) {
                *ph *= r;
            }
        }
        let sum: Complex64 = phasor[..main_sum_length(t)].iter().sum();
        let main = (Complex64::from_polar(1.0, theta_any(t)) * sum).re;
        out.push(2.0 * main + rs_remainder(tables, t));
    }
    Ok(out)
}

/// Largest `|zeta|` over `[t_start, t_start + 2 pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaInterval {
    pub t_start: f64,
    pub max_abs: f64,
    pub argmax_t: f64,
    /// Nearest integer to `ln t_start`.
    pub n_assoc: usize,
    /// `N_T = ln(t_start / 2 pi)`.
    pub n_t: f64,
    /// Largest `|zeta|` on the grid before refinement.
    pub grid_max: f64,
}

fn n_assoc(t: f64) -> usize {
    t.ln().round() as usize
}

/// Grid used for an interval: `ceil(density n_assoc)` points spanning both ends.
fn interval_grid(t_start: f64, density: f64) -> Result<(f64, Vec<f64>)> {
    if !(t_start >= MIN_INTERVAL_START) {
        return Err(Error::domain(format!(
            "intervals start at t >= {MIN_INTERVAL_START}, got {t_start}"
        )));
    }
    if !(density > 0.0) {
        return Err(Error::domain(format!("grid density must be positive, got {density}")));
    }
    let count = ((density * n_assoc(t_start) as f64).ceil() as usize).max(3);
    let step = TWO_PI / (count - 1) as f64;
    Ok((step, z_on_grid(t_start, step, count)?))
}

/// [`interval_max`] with a configurable grid density.
pub fn interval_max_with_density(t_start: f64, density: f64) -> Result<ZetaInterval> {
    let (step, values) = interval_grid(t_start, density)?;
    let t_end = t_start + TWO_PI;
    check_window(t_end)?;
    let neg_abs: Vec<f64> = values.iter().map(|z| -z.abs()).collect();
    let (k_best, grid_best) = neg_abs
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, f64::NAN));
    let mut best = (t_start + step * k_best as f64, grid_best);
    let f = |t: f64| -siegel_z_rs(t).abs();
    for k in lowest_local_minima(&neg_abs, REFINED_CELLS) {
        let centre = t_start + step * k as f64;
        let lo = (centre - step).max(t_start);
        let hi = (centre + step).min(t_end);
        let (t, v) = golden_section_min(f, lo, hi, REFINE_TOL);
        if v < best.1 {
            best = (t, v);
        }
    }
    // grid values come from advanced phasors, so the endpoints are
    // evaluated directly as well
    for t in [t_start, t_end] {
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    Ok(ZetaInterval {
        t_start,
        max_abs: -best.1,
        argmax_t: best.0,
        n_assoc: n_assoc(t_start),
        n_t: (t_start / TWO_PI).ln(),
        grid_max: -grid_best,
    })
}

/// `zeta_max(2 pi; T)` over `[t_start, t_start + 2 pi]`: the default grid,
/// then golden-section refinement of the three best local cells.
pub fn interval_max(t_start: f64) -> Result<ZetaInterval> {
    interval_max_with_density(t_start, DEFAULT_DENSITY)
}

/// Start of interval `i` among `count` consecutive ones centred on `t_center`.
pub fn interval_start(t_center: f64, count: usize, i: u64) -> f64 {
    t_center - PI * count as f64 + TWO_PI * i as f64
}

/// Consecutive abutting intervals centred on `t_center`.
pub fn consecutive_intervals(t_center: f64, count: usize) -> Result<Vec<ZetaInterval>> {
    try_run_indexed(count, |i| interval_max(interval_start(t_center, count, i)))
}

/// Mean interval maximum against the model mean `delta` for `c = 3/2` and `c = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub t_center: f64,
    pub intervals: usize,
    pub n_assoc: usize,
    pub data_mean: f64,
    pub ratio_c32: f64,
    pub ratio_c12: f64,
}

/// Summarises interval maxima as one Table 1 row.
pub fn table1_from_intervals(t_center: f64, intervals: &[ZetaInterval]) -> Result<Table1Row> {
    if intervals.is_empty() {
        return Err(Error::Aggregation("no intervals".into()));
    }
    let n = n_assoc(t_center);
    let data_mean = intervals.iter().map(|i| i.max_abs).sum::<f64>() / intervals.len() as f64;
    Ok(Table1Row {
        t_center,
        intervals: intervals.len(),
        n_assoc: n,
        data_mean,
        ratio_c32: data_mean / model_mean_delta(n, 1.5)?,
        ratio_c12: data_mean / model_mean_delta(n, 0.5)?,
    })
}

/// Ratio of the mean interval maximum to the model mean over `intervals`
/// consecutive intervals centred on `t_center`.
pub fn table1_experiment(t_center: f64, intervals: usize) -> Result<Table1Row> {
    table1_from_intervals(t_center, &consecutive_intervals(t_center, intervals)?)
}

/// `ln` of the trapezoidal rule for `(scale / 2 pi) int |Z|^{2 beta}` on an
/// open grid of spacing `step`.
fn ln_trapezoid_open(values: &[f64], step: f64, beta: f64, scale: f64) -> f64 {
    let logs: Vec<f64> = values.iter().map(|z| 2.0 * beta * z.abs().ln()).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let last = logs.len() - 1;
    let sum: f64 = logs
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let w = if k == 0 || k == last { 0.5 } else { 1.0 };
            w * (l - top).exp()
        })
        .sum();
    top + sum.ln() + (scale * step / TWO_PI).ln()
}

/// [`zeta_partition`] at several temperatures and a given grid density.
pub fn zeta_partitions_with_density(t_start: f64, betas: &[f64], density: f64) -> Result<Vec<ThermoSample>> {
    check_betas(betas)?;
    let (step, values) = interval_grid(t_start, density)?;
    let n_t = (t_start / TWO_PI).ln();
    Ok(betas
        .iter()
        .map(|&b| {
            ThermoSample::from_ln_z(b, ln_trapezoid_open(&values, step, b, n_t), n_t.round() as usize, n_t)
        })
        .collect())
}

/// `z_beta(T) = (N_T / 2 pi) int_T^{T + 2 pi} |zeta(1/2 + iy)|^{2 beta} dy`.
pub fn zeta_partition(t_start: f64, beta: f64) -> Result<ThermoSample> {
    Ok(zeta_partitions_with_density(t_start, &[beta], DEFAULT_DENSITY)?[0])
}

/// Freezing curve over consecutive intervals, every interval reused at each beta.
pub fn zeta_freeze_scan(t_center: f64, intervals: usize, betas: &[f64]) -> Result<FreezeCurve> {
    check_betas(betas)?;
    if intervals == 0 {
        return Err(Error::Aggregation("no intervals requested".into()));
    }
    let rows = try_run_indexed(intervals, |i| {
        zeta_partitions_with_density(interval_start(t_center, intervals, i), betas, DEFAULT_DENSITY)
    })?;
    FreezeCurve::from_rows(betas, &rows)
}

/// Blocks of the window used for covariance standard errors.
const COVARIANCE_BLOCKS: usize = 32;

/// `<V(t) V(t + x)>` for `V = -2 log |zeta|` minus its window mean, over
/// `t` in `[t_center - window/2, t_center + window/2]`. The grid spacing is
/// that of [`interval_max`]; each separation is rounded to a whole number of
/// steps and the rounded value is reported. Standard errors come from the
/// spread over contiguous blocks of the window.
pub fn covariance_scan(t_center: f64, window: f64, separations: &[f64]) -> Result<Vec<CovariancePoint>> {
    if !(window > 0.0 && window < 0.01 * t_center) {
        return Err(Error::domain("the window must be positive and much shorter than t_center"));
    }
    if separations.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::domain("separations must be positive"));
    }
    let t0 = t_center - 0.5 * window;
    if t0 < RS_MIN_HEIGHT {
        return Err(Error::domain(format!("the window must lie above t = {RS_MIN_HEIGHT}")));
    }
    check_window(t0 + window)?;
    let count_per_interval = (DEFAULT_DENSITY * n_assoc(t_center) as f64).ceil() as usize;
    let step = TWO_PI / (count_per_interval - 1) as f64;
    let count = (window / step).floor() as usize + 1;
    let lags: Vec<usize> = separations
        .iter()
        .map(|&x| ((x / step).round() as usize).max(1))
        .collect();
    if lags.iter().any(|&l| l * COVARIANCE_BLOCKS >= count) {
        return Err(Error::domain("separations must be much shorter than the window"));
    }

    let chunk = 4096;
    let chunks = count.div_ceil(chunk);
    let pieces = try_run_indexed(chunks, |c| {
        let start = c as usize * chunk;
        let len = chunk.min(count - start);
        z_on_grid(t0 + step * start as f64, step, len)
    })?;
    let mut v: Vec<f64> = pieces.into_iter().flatten().map(|z| -2.0 * z.abs().ln()).collect();
    let mean = v.iter().sum::<f64>() / count as f64;
    for x in &mut v {
        *x -= mean;
    }

    Ok(lags
        .iter()
        .map(|&lag| {
            let pairs = count - lag;
            let block_estimates: Vec<f64> = (0..COVARIANCE_BLOCKS)
                .map(|b| {
                    let lo = b * pairs / COVARIANCE_BLOCKS;
                    let hi = (b + 1) * pairs / COVARIANCE_BLOCKS;
                    (lo..hi).map(|k| v[k] * v[k + lag]).sum::<f64>() / (hi - lo) as f64
                })
                .collect();
            let nb = COVARIANCE_BLOCKS as f64;
            let est = block_estimates.iter().sum::<f64>() / nb;
            let var = block_estimates.iter().map(|e| (e - est).powi(2)).sum::<f64>() / (nb - 1.0);
            CovariancePoint {
                separation: lag as f64 * step,
                estimate: est,
                stderr: (var / nb).sqrt(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests;
