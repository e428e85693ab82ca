//! Partition functions, free energies and moments of `Z_N(beta)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;

use crate::ensemble::try_run_indexed;
use crate::error::{Error, Result};
use crate::field::{FieldGrid, FieldSource, SampledField, TrigGrid};
use crate::rng::child_stream;
use crate::specialfn::{ln_abs_gamma_signed, ln_barnes_g, ln_gamma};

/// Dense determinant budget of [`toeplitz_moment`].
pub const MAX_TOEPLITZ_N: usize = 512;

const MIN_SYMBOL_FFT: usize = 4096;
const MAX_SYMBOL_FFT: usize = 1 << 18;
const SYMBOL_TOL: f64 = 1e-10;

const BOOTSTRAP_REPLICATES: usize = 200;

/// One partition-function value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoSample {
    pub beta: f64,
    /// `exp(ln_z)`, or `f64::MAX` when that overflows.
    pub z: f64,
    pub ln_z: f64,
    pub n_param: usize,
    /// The `N` entering `-f = mean(ln Z) / (beta ln N)`. Equal to `n_param`
    /// for matrix and Fourier landscapes, `N_T = ln(T / 2 pi)` for zeta.
    pub scale: f64,
    pub overflowed: bool,
}

impl ThermoSample {
    pub fn from_ln_z(beta: f64, ln_z: f64, n_param: usize, scale: f64) -> Self {
        let z = ln_z.exp();
        let overflowed = !z.is_finite();
        ThermoSample {
            beta,
            z: if overflowed { f64::MAX } else { z },
            ln_z,
            n_param,
            scale,
            overflowed,
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}

/// `ln( (scale / m) sum_k exp(-beta V_k) )` with the largest term factored out.
pub(crate) fn ln_trapezoid(values: &[f64], beta: f64, scale: f64) -> f64 {
    let v_min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let sum: f64 = values.iter().map(|v| (-beta * (v - v_min)).exp()).sum();
    -beta * v_min + sum.ln() + (scale / values.len() as f64).ln()
}

/// `Z = (N / m) sum_k exp(-beta V(theta_k))`, the periodic trapezoidal rule
/// for `(N / 2 pi) int |p|^{2 beta}`.
pub fn partition_function(grid: &FieldGrid, beta: f64) -> Result<ThermoSample> {
    check_beta(beta)?;
    let n = grid.n_param as f64;
    Ok(ThermoSample::from_ln_z(beta, ln_trapezoid(&grid.values, beta, n), grid.n_param, n))
}

/// [`partition_function`] at several temperatures of one landscape.
pub fn partition_functions(grid: &FieldGrid, betas: &[f64]) -> Result<Vec<ThermoSample>> {
    betas.iter().map(|&b| partition_function(grid, b)).collect()
}

/// `-f = mean(ln Z) / (beta ln N)` and its standard error.
pub fn scaled_free_energy(samples: &[ThermoSample]) -> Result<(f64, f64)> {
    let first = samples
        .first()
        .ok_or_else(|| Error::Aggregation("no samples".into()))?;
    if first.n_param < 3 || !(first.scale > 1.0) {
        return Err(Error::Aggregation(format!(
            "free energy needs N >= 3, got {}",
            first.n_param
        )));
    }
    if samples
        .iter()
        .any(|s| s.beta != first.beta || s.n_param != first.n_param)
    {
        return Err(Error::Aggregation("samples mix beta or N".into()));
    }
    let xs: Vec<f64> = samples
        .iter()
        .map(|s| s.ln_z / (s.beta * s.scale.ln()))
        .collect();
    let (mean, se) = mean_and_stderr(&xs);
    Ok((mean, se))
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// `-f(beta)` over a temperature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FreezeCurve {
    pub betas: Vec<f64>,
    pub minus_f: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n_param: usize,
    pub samples: usize,
}

impl FreezeCurve {
    /// Builds the curve from per-landscape rows of samples, one entry per beta.
    pub fn from_rows(betas: &[f64], rows: &[Vec<ThermoSample>]) -> Result<Self> {
        check_betas(betas)?;
        let mut minus_f = Vec::with_capacity(betas.len());
        let mut stderr = Vec::with_capacity(betas.len());
        for j in 0..betas.len() {
            let column: Vec<ThermoSample> = rows.iter().map(|r| r[j]).collect();
            let (f, se) = scaled_free_energy(&column)?;
            minus_f.push(f);
            stderr.push(se);
        }
        Ok(FreezeCurve {
            betas: betas.to_vec(),
            minus_f,
            stderr,
            n_param: rows[0][0].n_param,
            samples: rows.len(),
        })
    }

    /// The `beta + 1/beta` (below 1) and `2` (above 1) prediction.
    pub fn predicted(beta: f64) -> f64 {
        if beta < 1.0 {
            beta + 1.0 / beta
        } else {
            2.0
        }
    }
}

pub(crate) fn check_betas(betas: &[f64]) -> Result<()> {
    if betas.is_empty() {
        return Err(Error::domain("empty beta grid"));
    }
    for &b in betas {
        check_beta(b)?;
    }
    if betas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("betas must be strictly increasing"));
    }
    Ok(())
}

/// Partition functions of `samples` landscapes of the given kind, one row
/// per landscape and one entry per beta. Landscape `i` is drawn from
/// `child_stream(seed, tag, i)`.
pub fn partition_samples(
    model: FieldSource,
    n: usize,
    betas: &[f64],
    samples: usize,
    grid_factor: usize,
    seed: u64,
    tag: &str,
) -> Result<Vec<Vec<ThermoSample>>> {
    check_betas(betas)?;
    if samples == 0 {
        return Err(Error::Aggregation("no samples requested".into()));
    }
    let trig = TrigGrid::new(grid_factor * n);
    try_run_indexed(samples, |i| {
        let mut rng = child_stream(seed, tag, i);
        let grid = SampledField::sample(model, n, &mut rng)?.grid(&trig)?;
        partition_functions(&grid, betas)
    })
}

/// Freezing curve over [`partition_samples`]; each landscape is reused at
/// every beta.
pub fn freeze_scan(
    model: FieldSource,
    n: usize,
    betas: &[f64],
    samples: usize,
    grid_factor: usize,
    seed: u64,
    tag: &str,
) -> Result<FreezeCurve> {
    let rows = partition_samples(model, n, betas, samples, grid_factor, seed, tag)?;
    FreezeCurve::from_rows(betas, &rows)
}

/// `ln Z_e = (1 + beta^2) ln N + 2 ln G(1 + beta) - ln G(1 + 2 beta) - ln Gamma(1 - beta^2)`.
fn ln_z_e(n: usize, beta: f64) -> Result<f64> {
    Ok((1.0 + beta * beta) * (n as f64).ln() + 2.0 * ln_barnes_g(1.0 + beta)?
        - ln_barnes_g(1.0 + 2.0 * beta)?
        - ln_gamma(1.0 - beta * beta)?)
}

fn check_convergent(beta: f64, k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("moment order k must be at least 1"));
    }
    check_beta(beta)?;
    if k as f64 * beta * beta >= 1.0 {
        return Err(Error::Divergence { k, beta });
    }
    Ok(())
}

/// `ln <Z^k> = k ln Z_e + ln Gamma(1 - k beta^2)` for large `N`.
pub fn ln_moment_predicted(n: usize, beta: f64, k: u32) -> Result<f64> {
    check_convergent(beta, k)?;
    Ok(k as f64 * ln_z_e(n, beta)? + ln_gamma(1.0 - k as f64 * beta * beta)?)
}

/// `<Z^k> ~ Z_e^k Gamma(1 - k beta^2)`.
pub fn moment_predicted(n: usize, beta: f64, k: u32) -> Result<f64> {
    Ok(ln_moment_predicted(n, beta, k)?.exp())
}

/// Monte Carlo estimate of `<Z^k>`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub k: u32,
    pub beta: f64,
    pub n_param: usize,
    pub samples: usize,
    /// Sample mean for `k = 1`, else the median of `ceil(sqrt(samples))`
    /// block means.
    pub estimate: f64,
    /// Standard error of the mean for `k = 1`, else the bootstrap standard
    /// deviation of the median-of-means estimate.
    pub error_bar: f64,
    pub plain_mean: f64,
    pub plain_stderr: f64,
    /// `N D_N(beta) / D_N(0)`, for `k = 1` and `N <= 512`.
    pub exact_small_n: Option<f64>,
    /// [`moment_predicted`], when `k beta^2 < 1`.
    pub asymptotic: Option<f64>,
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Median of the means of `blocks` contiguous blocks.
pub fn median_of_means(xs: &[f64], blocks: usize) -> f64 {
    let blocks = blocks.clamp(1, xs.len().max(1));
    let mut means: Vec<f64> = (0..blocks)
        .map(|b| {
            let lo = b * xs.len() / blocks;
            let hi = (b + 1) * xs.len() / blocks;
            xs[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect();
    median(&mut means)
}

/// Moment estimate from a sample of partition functions. Block `b` holds
/// samples `b * count / B .. (b + 1) * count / B`, so the estimate depends
/// only on sample order. The bootstrap uses its own fixed stream.
pub fn moment_estimate(z_samples: &[ThermoSample], k: u32) -> Result<MomentReport> {
    if k == 0 {
        return Err(Error::domain("moment order k must be at least 1"));
    }
    let first = z_samples
        .first()
        .ok_or_else(|| Error::Aggregation("no samples".into()))?;
    if z_samples
        .iter()
        .any(|s| s.beta != first.beta || s.n_param != first.n_param)
    {
        return Err(Error::Aggregation("samples mix beta or N".into()));
    }
    let count = z_samples.len();
    let kf = k as f64;
    // z^k relative to the largest sample keeps every term representable
    let shift = z_samples.iter().map(|s| kf * s.ln_z).fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = z_samples.iter().map(|s| (kf * s.ln_z - shift).exp()).collect();
    let blocks = (count as f64).sqrt().ceil() as usize;
    let scale = shift.exp();
    let (plain, plain_se) = mean_and_stderr(&scaled);
    let (estimate, error_bar) = if k == 1 {
        (plain * scale, plain_se * scale)
    } else {
        let mut rng = child_stream(0, "moment-bootstrap", k as u64);
        let mut resample = vec![0.0; count];
        let replicates: Vec<f64> = (0..BOOTSTRAP_REPLICATES)
            .map(|_| {
                for slot in resample.iter_mut() {
                    *slot = scaled[rng.random_range(0..count)];
                }
                median_of_means(&resample, blocks)
            })
            .collect();
        let (_, boot_se) = mean_and_stderr(&replicates);
        let boot_sd = boot_se * (BOOTSTRAP_REPLICATES as f64).sqrt();
        (median_of_means(&scaled, blocks) * scale, boot_sd * scale)
    };

    let exact_small_n = if k == 1 && first.n_param <= MAX_TOEPLITZ_N {
        Some(first.n_param as f64 * toeplitz_moment(first.n_param, first.beta, &[0.0])?)
    } else {
        None
    };
    let asymptotic = ln_moment_predicted(first.n_param, first.beta, k).ok().map(f64::exp);
    Ok(MomentReport {
        k,
        beta: first.beta,
        n_param: first.n_param,
        samples: count,
        estimate,
        error_bar,
        plain_mean: plain * scale,
        plain_stderr: plain_se * scale,
        exact_small_n,
        asymptotic,
    })
}

/// `ln |1 / Gamma(x)|` and its sign; the sign is zero at the poles.
fn ln_recip_gamma(x: f64) -> (f64, f64) {
    let (ln_abs, sign) = ln_abs_gamma_signed(x);
    if sign == 0.0 {
        (f64::NEG_INFINITY, 0.0)
    } else {
        (-ln_abs, sign)
    }
}

/// Fourier coefficients `M_j`, `j = 0..n`, of `|1 - e^{i phi}|^{2 beta}`:
/// `(-1)^j Gamma(1 + 2 beta) / (Gamma(1 + beta + j) Gamma(1 + beta - j))`.
fn single_singularity_coefficients(n: usize, beta: f64) -> Result<Vec<f64>> {
    let ln_top = ln_gamma(1.0 + 2.0 * beta)?;
    Ok((0..n)
        .map(|j| {
            let jf = j as f64;
            let (a, sa) = ln_recip_gamma(1.0 + beta + jf);
            let (b, sb) = ln_recip_gamma(1.0 + beta - jf);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            if sa * sb == 0.0 {
                0.0
            } else {
                sign * sa * sb * (ln_top + a + b).exp()
            }
        })
        .collect())
}

/// Fourier coefficients `M_j`, `|j| < n`, of `prod_p |e^{i phi} - e^{i theta_p}|^{2 beta}`
/// by an FFT of the symbol, doubling the length until the coefficients settle.
fn symbol_coefficients_fft(n: usize, beta: f64, thetas: &[f64]) -> Result<Vec<Complex64>> {
    let mut planner = FftPlanner::<f64>::new();
    let mut len = MIN_SYMBOL_FFT.max((4 * n).next_power_of_two());
    let coefficients = |len: usize, planner: &mut FftPlanner<f64>| {
        let mut buf: Vec<Complex64> = (0..len)
            .map(|l| {
                let phi = 2.0 * PI * l as f64 / len as f64;
                let v: f64 = thetas
                    .iter()
                    .map(|&t| (2.0 - 2.0 * (phi - t).cos()).max(0.0).powf(beta))
                    .product();
                Complex64::new(v / len as f64, 0.0)
            })
            .collect();
        planner.plan_fft_forward(len).process(&mut buf);
        // index j + n - 1 holds M_j for j in -(n-1)..n
        (0..2 * n - 1)
            .map(|i| {
                let j = i as i64 - (n as i64 - 1);
                buf[j.rem_euclid(len as i64) as usize]
            })
            .collect::<Vec<_>>()
    };
    let mut current = coefficients(len, &mut planner);
    while len < MAX_SYMBOL_FFT {
        len *= 2;
        let next = coefficients(len, &mut planner);
        let change = current
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        current = next;
        if change <= SYMBOL_TOL {
            return Ok(current);
        }
    }
    Err(Error::Precision(format!(
        "symbol coefficients did not settle to {SYMBOL_TOL:e} with {MAX_SYMBOL_FFT} points"
    )))
}

/// `ln D_n` of the Hermitian Toeplitz matrix with entries `M_{i - j}`.
fn ln_toeplitz_det_real(coeffs: &[f64]) -> f64 {
    let n = coeffs.len();
    let m = DMatrix::<f64>::from_fn(n, n, |i, j| coeffs[i.abs_diff(j)]);
    let lu = m.lu();
    lu.u().diagonal().iter().map(|u| u.abs().ln()).sum()
}

fn ln_toeplitz_det_complex(n: usize, coeffs: &[Complex64]) -> f64 {
    let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| coeffs[i + n - 1 - j]);
    let lu = m.lu();
    lu.u().diagonal().iter().map(|u| u.norm().ln()).sum()
}

/// `ln( D_n(beta) / D_n(0) )`, see [`toeplitz_moment`].
pub fn ln_toeplitz_moment(n: usize, beta: f64, thetas: &[f64]) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("matrix dimension must be at least 1"));
    }
    if n > MAX_TOEPLITZ_N {
        return Err(Error::Size { n, limit: MAX_TOEPLITZ_N });
    }
    if thetas.is_empty() {
        return Err(Error::domain("at least one singularity is needed"));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::domain(format!("beta must be non-negative, got {beta}")));
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    if thetas.len() == 1 {
        // a rotation is a diagonal similarity and leaves the determinant alone
        return Ok(ln_toeplitz_det_real(&single_singularity_coefficients(n, beta)?));
    }
    Ok(ln_toeplitz_det_complex(n, &symbol_coefficients_fft(n, beta, thetas)?))
}

/// `<prod_p |p_n(theta_p)|^{2 beta}>` over `n x n` CUE, as the ratio of Toeplitz
/// determinants `D_n(beta) / D_n(0)` with symbol `prod_p |e^{i phi} - e^{i theta_p}|^{2 beta}`.
pub fn toeplitz_moment(n: usize, beta: f64, thetas: &[f64]) -> Result<f64> {
    Ok(ln_toeplitz_moment(n, beta, thetas)?.exp())
}

/// `<|p_n|^{2 beta}> / (n^{beta^2} G(1 + beta)^2 / G(1 + 2 beta))`.
pub fn fisher_hartwig_ratio(n: usize, beta: f64) -> Result<f64> {
    let exact = ln_toeplitz_moment(n, beta, &[0.0])?;
    let asymptotic = beta * beta * (n as f64).ln() + 2.0 * ln_barnes_g(1.0 + beta)?
        - ln_barnes_g(1.0 + 2.0 * beta)?;
    Ok((exact - asymptotic).exp())
}
