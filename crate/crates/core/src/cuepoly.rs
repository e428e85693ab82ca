//! CUE eigenphases and the landscape `V(theta) = -2 log |p_N(theta)|`.
//!
//! Two samplers produce the same law:
//!
//! * [`sample_cue`] builds a Haar unitary from a complex Ginibre matrix
//!   (QR with the phases of `R`'s diagonal folded into `Q`) and
//!   diagonalises it. This is the reference route and yields eigenphases.
//! * [`sample_cue_polynomial`] draws independent Verblunsky coefficients
//!   with the CUE law (`|alpha_k|^2 ~ Beta(1, N - k - 1)`, uniform phase,
//!   and `|alpha_{N-1}| = 1`) and runs the Szegő recursion, which produces
//!   `det(z - U)` of a CMV matrix with CUE spectrum in `O(N^2)` work. The
//!   large ensembles use this route; grids are then one FFT away.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::field::{half_cell_offset, minimize_landscape, FieldGrid, FieldSource, Landscape, TrigGrid};

const TWO_PI: f64 = 2.0 * PI;

/// Grid points per unit of `N` unless configured otherwise.
pub const DEFAULT_GRID_FACTOR: usize = 16;

/// Angular tolerance of the max refinement.
pub const DEFAULT_REFINE_TOL: f64 = 1e-10;

/// Local grid minima refined per landscape.
pub(crate) const REFINED_CELLS: usize = 3;

/// Dense eigensolves are only attempted up to this size.
pub const MAX_DENSE_N: usize = 4096;

/// Eigenphases of one CUE matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenphaseSet {
    pub n: usize,
    /// Angles in `[0, 2 pi)`.
    pub phases: Vec<f64>,
    /// Largest `| |lambda| - 1 |` seen before projecting onto the circle.
    pub modulus_defect: f64,
    /// Where the sample came from, e.g. `seed/tag/index`.
    pub provenance: Option<String>,
}

impl EigenphaseSet {
    pub fn from_phases(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::domain("an eigenphase set needs at least one phase"));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain("eigenphases must be finite"));
        }
        let phases: Vec<f64> = phases.into_iter().map(|p| p.rem_euclid(TWO_PI)).collect();
        Ok(EigenphaseSet {
            n: phases.len(),
            phases,
            modulus_defect: 0.0,
            provenance: None,
        })
    }

    /// The same set rotated by `angle`.
    pub fn rotated(&self, angle: f64) -> Self {
        let mut out = self.clone();
        for p in &mut out.phases {
            *p = (*p + angle).rem_euclid(TWO_PI);
        }
        out
    }

    /// `log |p_N(theta)| = sum_j log |2 sin((theta - phi_j) / 2)|`.
    pub fn log_abs_p(&self, theta: f64) -> f64 {
        // products of up to 8 factors in (0, 2] cannot under- or overflow
        let mut total = 0.0;
        for chunk in self.phases.chunks(8) {
            let prod: f64 = chunk
                .iter()
                .map(|&phi| (2.0 * (0.5 * (theta - phi)).sin()).abs())
                .product();
            total += prod.ln();
        }
        total
    }
}

impl Landscape for EigenphaseSet {
    fn n_param(&self) -> usize {
        self.n
    }

    fn source(&self) -> FieldSource {
        FieldSource::Cue
    }

    fn potential(&self, theta: f64) -> f64 {
        -2.0 * self.log_abs_p(theta)
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Eigenphases of a Haar-distributed `n x n` unitary matrix.
pub fn sample_cue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<EigenphaseSet> {
    if n == 0 {
        return Err(Error::domain("CUE dimension must be at least 1"));
    }
    if n > MAX_DENSE_N {
        return Err(Error::Size { n, limit: MAX_DENSE_N });
    }
    let ginibre = DMatrix::<Complex64>::from_fn(n, n, |_, _| complex_gaussian(rng));
    let (mut q, r) = ginibre.qr().unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    let (_, triangular) = q.schur().unpack();
    let mut defect = 0.0f64;
    let phases = (0..n)
        .map(|j| {
            let lambda = triangular[(j, j)];
            defect = defect.max((lambda.norm() - 1.0).abs());
            lambda.arg().rem_euclid(TWO_PI)
        })
        .collect();
    Ok(EigenphaseSet {
        n,
        phases,
        modulus_defect: defect,
        provenance: None,
    })
}

fn check_oversampling(n: usize, m: usize) -> Result<()> {
    let required = 4 * n;
    if m < required {
        return Err(Error::Resolution { m, required });
    }
    Ok(())
}

/// `V` on `theta_k = offset + 2 pi k / m` by direct summation of log-sine
/// terms. The offset is half a cell unless an eigenphase lies within
/// `1e-14` of a grid point, in which case it is a quarter cell.
pub fn field_on_grid(phases: &EigenphaseSet, m: usize) -> Result<FieldGrid> {
    check_oversampling(phases.n, m)?;
    let h = TWO_PI / m as f64;
    let collides = |offset: f64| {
        phases.phases.iter().any(|&phi| {
            let u = (phi - offset).rem_euclid(TWO_PI) / h;
            (u - u.round()).abs() * h < 1e-14
        })
    };
    let mut offset = half_cell_offset(m);
    if collides(offset) {
        offset = 0.25 * h;
    }
    let values = (0..m)
        .map(|k| phases.potential(offset + h * k as f64))
        .collect();
    Ok(FieldGrid::with_offset(values, offset, FieldSource::Cue, phases.n))
}

/// `max_theta log |p_N(theta)|` and its location for any landscape with
/// `V = -2 log |p|`. Never below the grid estimate.
pub fn max_log_abs_p<L: Landscape + ?Sized>(
    landscape: &L,
    grid: &FieldGrid,
    refine: f64,
) -> Result<(f64, f64)> {
    if grid.n_param != landscape.n_param() {
        return Err(Error::Shape(format!(
            "grid built for N = {} used with a landscape of N = {}",
            grid.n_param,
            landscape.n_param()
        )));
    }
    let (theta, v_min) = minimize_landscape(landscape, grid, refine, REFINED_CELLS)?;
    Ok((theta, -0.5 * v_min))
}

/// Roots in Leja order: each next root maximises the product of distances
/// to those already taken. Expanding sorted roots instead builds partial
/// products over one arc, whose coefficients grow like binomials.
fn leja_order(phases: &[f64]) -> Vec<f64> {
    let mut rest = phases.to_vec();
    let mut out = Vec::with_capacity(rest.len());
    let mut score = vec![0.0; rest.len()];
    while !rest.is_empty() {
        let pick = if out.is_empty() {
            0
        } else {
            let mut best = 0;
            for j in 1..rest.len() {
                if score[j] > score[best] {
                    best = j;
                }
            }
            best
        };
        let phi = rest.swap_remove(pick);
        score.swap_remove(pick);
        for (s, &other) in score.iter_mut().zip(&rest) {
            *s += (2.0 * (0.5 * (other - phi)).sin()).abs().ln();
        }
        out.push(phi);
    }
    out
}

/// Characteristic polynomial `det(z - U) = sum_j coeffs[j] z^j` of a CUE
/// matrix, so that `|p_N(theta)| = |det(z - U)|` at `z = e^{i theta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    pub n: usize,
    pub coeffs: Vec<Complex64>,
}

impl CharPoly {
    /// Expands `prod_j (z - e^{i phi_j})`.
    pub fn from_eigenphases(set: &EigenphaseSet) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for phi in leja_order(&set.phases) {
            let root = Complex64::from_polar(1.0, phi);
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (j, c) in coeffs.iter().enumerate() {
                next[j + 1] += c;
                next[j] -= root * c;
            }
            coeffs = next;
        }
        CharPoly { n: set.n, coeffs }
    }

    /// `det(z - U)` at `z = e^{i theta}` by Horner's rule.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// `-Tr U`, the coefficient of `z^{N-1}`.
    pub fn minus_trace(&self) -> Complex64 {
        self.coeffs[self.n - 1]
    }

    /// `V` on the default half-cell-offset grid through one FFT.
    pub fn field_on_grid(&self, grid: &TrigGrid) -> Result<FieldGrid> {
        check_oversampling(self.n, grid.m())?;
        let values = grid
            .evaluate(&self.coeffs, true)
            .into_iter()
            .map(|p| -p.norm_sqr().ln())
            .collect();
        Ok(FieldGrid::with_offset(values, grid.offset(), FieldSource::Cue, self.n))
    }
}

impl Landscape for CharPoly {
    fn n_param(&self) -> usize {
        self.n
    }

    fn source(&self) -> FieldSource {
        FieldSource::Cue
    }

    fn potential(&self, theta: f64) -> f64 {
        -self.eval(theta).norm_sqr().ln()
    }
}

/// Characteristic polynomial of an `n x n` CUE matrix via Verblunsky
/// coefficients and the Szegő recursion
/// `Phi_{k+1}(z) = z Phi_k(z) - conj(alpha_k) Phi_k^*(z)`.
pub fn sample_cue_polynomial<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CharPoly> {
    if n == 0 {
        return Err(Error::domain("CUE dimension must be at least 1"));
    }
    let mut cur = Vec::with_capacity(n + 1);
    let mut next = Vec::with_capacity(n + 1);
    cur.push(Complex64::new(1.0, 0.0));
    for k in 0..n {
        let angle = TWO_PI * rng.random::<f64>();
        let radius = if k + 1 == n {
            1.0
        } else {
            // |alpha|^2 = 1 - U^{1 / (n - k - 1)}, U uniform on (0, 1]
            let u = 1.0 - rng.random::<f64>();
            (-(u.ln() / (n - k - 1) as f64).exp_m1()).sqrt()
        };
        let alpha_conj = Complex64::from_polar(radius, -angle);
        // Phi_k^* has coefficients conj(Phi_k[k - j])
        next.clear();
        next.resize(k + 2, Complex64::new(0.0, 0.0));
        for j in 0..=k + 1 {
            let shifted = if j > 0 { cur[j - 1] } else { Complex64::new(0.0, 0.0) };
            let reversed = if j <= k { cur[k - j].conj() } else { Complex64::new(0.0, 0.0) };
            next[j] = shifted - alpha_conj * reversed;
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(CharPoly { n, coeffs: cur })
}

/// One point of an ensemble covariance estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovariancePoint {
    pub separation: f64,
    pub estimate: f64,
    pub stderr: f64,
}

/// `<V(theta) V(theta + delta)>` averaged over the grid and the ensemble.
/// Separations must be multiples of the grid spacing.
pub fn covariance_estimate(ensemble: &[FieldGrid], separations: &[f64]) -> Result<Vec<CovariancePoint>> {
    let first = ensemble
        .first()
        .ok_or_else(|| Error::Shape("empty ensemble".into()))?;
    for g in ensemble {
        first.check_compatible(g)?;
    }
    let m = first.m;
    let h = first.spacing();
    let lags = separations
        .iter()
        .map(|&delta| {
            let u = delta / h;
            if !u.is_finite() || (u - u.round()).abs() > 1e-6 {
                return Err(Error::Shape(format!(
                    "separation {delta} is not a multiple of the grid spacing {h}"
                )));
            }
            Ok((u.round() as i64).rem_euclid(m as i64) as usize)
        })
        .collect::<Result<Vec<_>>>()?;

    let count = ensemble.len() as f64;
    Ok(separations
        .iter()
        .zip(&lags)
        .map(|(&separation, &lag)| {
            let per_sample: Vec<f64> = ensemble
                .iter()
                .map(|g| {
                    let v = &g.values;
                    (0..m).map(|k| v[k] * v[(k + lag) % m]).sum::<f64>() / m as f64
                })
                .collect();
            let mean = per_sample.iter().sum::<f64>() / count;
            let var = if per_sample.len() > 1 {
                per_sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0)
            } else {
                0.0
            };
            CovariancePoint {
                separation,
                estimate: mean,
                stderr: (var / count).sqrt(),
            }
        })
        .collect())
}
