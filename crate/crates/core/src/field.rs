//! Energy landscapes sampled on uniform circle grids.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rustfft::{Fft, FftPlanner};

use crate::cuepoly::{sample_cue_polynomial, CharPoly};
use crate::error::{Error, Result};
use crate::fourierfield::{fourier_field_on_grid, sample_fourier_field, FourierField};
use crate::optimize::{golden_section_min, lowest_local_minima_periodic};

const TWO_PI: f64 = 2.0 * PI;

/// Where a landscape came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSource {
    Cue,
    Fourier,
    ZetaSurrogate,
}

impl FieldSource {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldSource::Cue => "cue",
            FieldSource::Fourier => "fourier",
            FieldSource::ZetaSurrogate => "zeta-surrogate",
        }
    }
}

/// A random energy landscape `V(theta)` on the circle.
pub trait Landscape {
    /// The `N` of the source: matrix dimension or number of Fourier modes.
    fn n_param(&self) -> usize;

    fn source(&self) -> FieldSource;

    /// `V` at an arbitrary angle.
    fn potential(&self, theta: f64) -> f64;
}

/// Values of a landscape at `theta_k = offset + 2 pi k / m`, `k = 0..m`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub m: usize,
    pub offset: f64,
    pub values: Vec<f64>,
    pub source: FieldSource,
    pub n_param: usize,
}

impl FieldGrid {
    /// Grid with the default half-cell offset.
    pub fn new(values: Vec<f64>, source: FieldSource, n_param: usize) -> Self {
        let m = values.len();
        FieldGrid {
            m,
            offset: half_cell_offset(m),
            values,
            source,
            n_param,
        }
    }

    pub fn with_offset(values: Vec<f64>, offset: f64, source: FieldSource, n_param: usize) -> Self {
        FieldGrid {
            m: values.len(),
            offset,
            values,
            source,
            n_param,
        }
    }

    /// Angle of grid point `k`.
    pub fn theta(&self, k: usize) -> f64 {
        self.offset + TWO_PI * k as f64 / self.m as f64
    }

    pub fn spacing(&self) -> f64 {
        TWO_PI / self.m as f64
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.m as f64
    }

    /// Index and value of the grid minimum.
    pub fn argmin(&self) -> (usize, f64) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, f64::NAN))
    }

    /// Periodic linear interpolation between grid points.
    pub fn interpolate(&self, theta: f64) -> f64 {
        let u = (theta - self.offset).rem_euclid(TWO_PI) / self.spacing();
        let k = (u.floor() as usize) % self.m;
        let frac = u - u.floor();
        let next = (k + 1) % self.m;
        self.values[k] * (1.0 - frac) + self.values[next] * frac
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub(crate) fn check_compatible(&self, other: &FieldGrid) -> Result<()> {
        if self.m != other.m || self.n_param != other.n_param {
            return Err(Error::Shape(format!(
                "grids (m = {}, n = {}) and (m = {}, n = {}) differ",
                self.m, self.n_param, other.m, other.n_param
            )));
        }
        Ok(())
    }
}

pub(crate) fn half_cell_offset(m: usize) -> f64 {
    PI / m as f64
}

/// FFT evaluation of trigonometric polynomials `sum_j a_j e^{+-i j theta_k}`
/// on the half-cell-offset grid `theta_k = 2 pi (k + 1/2) / m`.
#[derive(Clone)]
pub struct TrigGrid {
    m: usize,
    positive: Arc<dyn Fft<f64>>,
    negative: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for TrigGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TrigGrid").field("m", &self.m).finish()
    }
}

impl TrigGrid {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        TrigGrid {
            m,
            positive: planner.plan_fft_inverse(m),
            negative: planner.plan_fft_forward(m),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn offset(&self) -> f64 {
        half_cell_offset(self.m)
    }

    /// Values of `sum_j coeffs[j] e^{s i j theta_k}` with `s = +1` when
    /// `positive`, else `-1`. Needs `coeffs.len() <= m`.
    pub fn evaluate(&self, coeffs: &[Complex64], positive: bool) -> Vec<Complex64> {
        assert!(coeffs.len() <= self.m, "more coefficients than grid points");
        let sign = if positive { 1.0 } else { -1.0 };
        let offset = self.offset();
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        for (j, (slot, c)) in buf.iter_mut().zip(coeffs).enumerate() {
            *slot = c * Complex64::from_polar(1.0, sign * offset * j as f64);
        }
        if positive {
            self.positive.process(&mut buf);
        } else {
            self.negative.process(&mut buf);
        }
        buf
    }
}

/// Minimum of a landscape over the circle: the `cells` best local minima of
/// the grid are each refined by golden-section search on the bracket formed
/// by their two neighbours. The result is never above the grid minimum.
pub fn minimize_landscape<L: Landscape + ?Sized>(
    landscape: &L,
    grid: &FieldGrid,
    tol: f64,
    cells: usize,
) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("refinement tolerance must be positive, got {tol}")));
    }
    if grid.m < 3 {
        return Err(Error::Resolution { m: grid.m, required: 3 });
    }
    let (k_min, v_min) = grid.argmin();
    let mut best = (grid.theta(k_min), v_min);
    let h = grid.spacing();
    for k in lowest_local_minima_periodic(&grid.values, cells.max(1)) {
        let centre = grid.theta(k);
        let (theta, v) = golden_section_min(|t| landscape.potential(t), centre - h, centre + h, tol);
        if v < best.1 {
            best = (theta, v);
        }
    }
    // golden section stalls at sqrt(eps) on a flat bottom; one parabolic
    // step through three points 1e-4 cells apart gets well below that
    let step = 1e-4 * h;
    let (theta, v0) = best;
    let vl = landscape.potential(theta - step);
    let vr = landscape.potential(theta + step);
    let curvature = vl - 2.0 * v0 + vr;
    if curvature > 0.0 {
        let shift = 0.5 * step * (vl - vr) / curvature;
        if shift.abs() < step {
            let polished = theta + shift;
            let v = landscape.potential(polished);
            if v <= v0 + 4.0 * f64::EPSILON * v0.abs().max(1.0) {
                best = (polished, v.min(v0));
            }
        }
    }
    Ok((best.0.rem_euclid(TWO_PI), best.1))
}

/// A sampled CUE characteristic polynomial or Fourier surrogate.
#[derive(Debug, Clone)]
pub enum SampledField {
    Cue(CharPoly),
    Fourier(FourierField),
}

impl SampledField {
    /// Draws one landscape of the given kind; `n` is the matrix dimension
    /// or the number of modes.
    pub fn sample<R: Rng + ?Sized>(source: FieldSource, n: usize, rng: &mut R) -> Result<Self> {
        match source {
            FieldSource::Cue => Ok(SampledField::Cue(sample_cue_polynomial(n, rng)?)),
            FieldSource::Fourier => Ok(SampledField::Fourier(sample_fourier_field(n, rng)?)),
            FieldSource::ZetaSurrogate => Err(Error::domain(
                "zeta landscapes are evaluated on the critical line, not sampled",
            )),
        }
    }

    /// Values on the half-cell-offset grid of `trig`.
    pub fn grid(&self, trig: &TrigGrid) -> Result<FieldGrid> {
        match self {
            SampledField::Cue(p) => p.field_on_grid(trig),
            SampledField::Fourier(f) => fourier_field_on_grid(f, trig),
        }
    }
}

impl Landscape for SampledField {
    fn n_param(&self) -> usize {
        match self {
            SampledField::Cue(p) => p.n_param(),
            SampledField::Fourier(f) => f.n_param(),
        }
    }

    fn source(&self) -> FieldSource {
        match self {
            SampledField::Cue(_) => FieldSource::Cue,
            SampledField::Fourier(_) => FieldSource::Fourier,
        }
    }

    fn potential(&self, theta: f64) -> f64 {
        match self {
            SampledField::Cue(p) => p.potential(theta),
            SampledField::Fourier(f) => f.potential(theta),
        }
    }
}
