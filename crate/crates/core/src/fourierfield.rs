//! Truncated random Fourier series with the circular-logarithmic covariance
//! of `-2 log |p_N|`:
//!
//! `V(theta) = sum_{n=1}^{N} n^{-1/2} (v_n e^{-i n theta} + c.c.)`
//!
//! with `v_n` independent standard complex Gaussians.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::field::{FieldGrid, FieldSource, Landscape, TrigGrid};

/// Grid points per mode unless configured otherwise.
pub const DEFAULT_GRID_FACTOR: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct FourierField {
    pub n_modes: usize,
    /// `v_1 ..= v_N`.
    pub coefficients: Vec<Complex64>,
}

impl FourierField {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::domain("a Fourier field needs at least one mode"));
        }
        Ok(FourierField {
            n_modes: coefficients.len(),
            coefficients,
        })
    }

    /// Coefficients `v_n / sqrt(n)` indexed by frequency, with a zero
    /// constant term.
    fn weighted(&self) -> Vec<Complex64> {
        std::iter::once(Complex64::new(0.0, 0.0))
            .chain(
                self.coefficients
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v / ((i + 1) as f64).sqrt()),
            )
            .collect()
    }

    /// Exact covariance `sum_n (2/n) cos(n delta)` of the truncated series.
    pub fn exact_covariance(n_modes: usize, delta: f64) -> f64 {
        (1..=n_modes).map(|n| 2.0 / n as f64 * (n as f64 * delta).cos()).sum()
    }
}

impl Landscape for FourierField {
    fn n_param(&self) -> usize {
        self.n_modes
    }

    fn source(&self) -> FieldSource {
        FieldSource::Fourier
    }

    fn potential(&self, theta: f64) -> f64 {
        let sum: Complex64 = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let n = (i + 1) as f64;
                v * Complex64::from_polar(1.0 / n.sqrt(), -n * theta)
            })
            .sum();
        2.0 * sum.re
    }
}

pub fn sample_fourier_field<R: Rng + ?Sized>(n_modes: usize, rng: &mut R) -> Result<FourierField> {
    if n_modes == 0 {
        return Err(Error::domain("n_modes must be at least 1"));
    }
    let coefficients = (0..n_modes)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    Ok(FourierField { n_modes, coefficients })
}

/// `V` on the half-cell-offset grid of `grid.m()` points by one FFT.
pub fn fourier_field_on_grid(field: &FourierField, grid: &TrigGrid) -> Result<FieldGrid> {
    let required = 2 * field.n_modes + 2;
    if grid.m() < required {
        return Err(Error::Resolution { m: grid.m(), required });
    }
    let values = grid
        .evaluate(&field.weighted(), false)
        .into_iter()
        .map(|s| 2.0 * s.re)
        .collect();
    Ok(FieldGrid::with_offset(values, grid.offset(), FieldSource::Fourier, field.n_modes))
}
