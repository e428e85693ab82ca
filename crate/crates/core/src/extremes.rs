//! Extreme-value statistics: the limit law `p(x) = 2 e^x K0(2 e^{x/2})`,
//! recentering, goodness of fit and the `c = 3/2` versus `c = 1/2` test.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::cuepoly::{max_log_abs_p, DEFAULT_REFINE_TOL};
use crate::ensemble::try_run_indexed;
use crate::field::{FieldSource, SampledField, TrigGrid};
use crate::rng::child_stream;
use crate::specialfn::{bessel_k01_scaled, one_minus_x_k1, EULER_GAMMA, TARGET_VARIANCE};

/// Mean of the limit law, `-2 gamma`.
pub const TARGET_MEAN: f64 = -2.0 * EULER_GAMMA;

/// Histogram layout for plotting.
pub const HISTOGRAM_BIN: f64 = 0.25;
pub const HISTOGRAM_RANGE: (f64, f64) = (-12.0, 6.0);

/// Below this the density and the distribution function are zero in `f64`.
const LEFT_CUTOFF: f64 = -1400.0;

/// `ln p(x)`; finite far beyond the point where `p` itself underflows.
pub fn target_log_pdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < LEFT_CUTOFF {
        return f64::NEG_INFINITY;
    }
    let y = 2.0 * (0.5 * x).exp();
    if y.is_infinite() {
        return f64::NEG_INFINITY;
    }
    let (k0_scaled, _) = bessel_k01_scaled(y);
    LN_2 + x + k0_scaled.ln() - y
}

/// `p(x) = 2 e^x K0(2 e^{x/2})`; zero once it underflows (near `x = 11.8`).
pub fn target_pdf(x: f64) -> f64 {
    target_log_pdf(x).exp()
}

/// `F(x) = 1 - 2 e^{x/2} K1(2 e^{x/2})`.
pub fn target_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < LEFT_CUTOFF {
        return 0.0;
    }
    let y = 2.0 * (0.5 * x).exp();
    if y.is_infinite() {
        return 1.0;
    }
    one_minus_x_k1(y).clamp(0.0, 1.0)
}

/// `1 - F(x)`, accurate in the right tail.
pub fn target_survival(x: f64) -> f64 {
    if x < LEFT_CUTOFF {
        return 1.0;
    }
    let y = 2.0 * (0.5 * x).exp();
    if y.is_infinite() {
        return 0.0;
    }
    let (_, k1_scaled) = bessel_k01_scaled(y);
    (y * k1_scaled * (-y).exp()).clamp(0.0, 1.0)
}

/// Inverse of [`target_cdf`] by bisection to `1e-10`.
pub fn target_quantile(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("quantile level must lie in (0, 1), got {q}")));
    }
    let (mut lo, mut hi) = (-1.0, 1.0);
    while target_cdf(lo) > q {
        lo *= 2.0;
    }
    while target_cdf(hi) < q {
        hi *= 2.0;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if target_cdf(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One extreme statistic `y = -2 max log |p|` (or `-2 log max |zeta|`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremeSample {
    pub y: f64,
    pub n_param: usize,
    pub model: FieldSource,
}

impl ExtremeSample {
    pub fn from_max_log(max_log: f64, n_param: usize, model: FieldSource) -> Self {
        ExtremeSample {
            y: -2.0 * max_log,
            n_param,
            model,
        }
    }

    pub fn max_log(&self) -> f64 {
        -0.5 * self.y
    }
}

/// `a = -2 ln N + c ln ln N`, `b = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecenteringParams {
    pub n_param: usize,
    pub c: f64,
    pub a: f64,
    pub b: f64,
}

fn check_log_log(n_param: usize) -> Result<f64> {
    let ln_n = (n_param as f64).ln();
    if !(ln_n > 1.0) {
        return Err(Error::domain(format!("needs ln N > 1, got N = {n_param}")));
    }
    Ok(ln_n)
}

impl RecenteringParams {
    pub fn new(n_param: usize, c: f64) -> Result<Self> {
        let ln_n = check_log_log(n_param)?;
        Ok(RecenteringParams {
            n_param,
            c,
            a: -2.0 * ln_n + c * ln_n.ln(),
            b: 1.0,
        })
    }
}

/// `x_i = (y_i - a) / b`.
pub fn recenter(samples: &[ExtremeSample], params: &RecenteringParams) -> Result<Vec<f64>> {
    if samples.iter().any(|s| s.n_param != params.n_param) {
        return Err(Error::Aggregation(format!(
            "samples are not all at N = {}",
            params.n_param
        )));
    }
    Ok(samples.iter().map(|s| (s.y - params.a) / params.b).collect())
}

/// Sample mean and population variance.
pub fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

/// Affine map onto population variance `pi^2 / 3` and mean `-2 gamma`.
pub fn normalize_to_target_variance(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.len() < 2 {
        return Err(Error::Normalization("at least two samples are needed".into()));
    }
    let (mean, var) = mean_and_variance(xs);
    if !(var > 0.0 && var.is_finite()) {
        return Err(Error::Normalization(format!("sample variance is {var}")));
    }
    let scale = (TARGET_VARIANCE / var).sqrt();
    Ok(xs.iter().map(|x| TARGET_MEAN + (x - mean) * scale).collect())
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Kolmogorov–Smirnov distance between the ECDF of `xs` and `cdf`.
pub fn ks_distance(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let v = sorted(xs);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// KS distance of `xs` to the limit law.
pub fn ks_statistic(xs: &[f64]) -> Result<f64> {
    if xs.len() < 10 {
        return Err(Error::domain(format!("KS needs at least 10 samples, got {}", xs.len())));
    }
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::domain("KS input contains NaN"));
    }
    Ok(ks_distance(xs, target_cdf))
}

/// Two-sample KS distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let a = sorted(a);
    let b = sorted(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// `(x, F_n(x))` at each sorted sample.
pub fn ecdf(xs: &[f64]) -> Vec<(f64, f64)> {
    let v = sorted(xs);
    let n = v.len() as f64;
    v.into_iter()
        .enumerate()
        .map(|(i, x)| (x, (i + 1) as f64 / n))
        .collect()
}

/// One histogram bin next to the limit density at its centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub centre: f64,
    pub count: usize,
    pub density: f64,
    pub target: f64,
}

/// Fixed-width histogram over [`HISTOGRAM_RANGE`]; samples outside are
/// counted in the normalisation but not binned.
pub fn histogram(xs: &[f64]) -> Vec<HistogramBin> {
    let (lo, hi) = HISTOGRAM_RANGE;
    let bins = ((hi - lo) / HISTOGRAM_BIN).round() as usize;
    let mut counts = vec![0usize; bins];
    for &x in xs {
        if x >= lo && x < hi {
            counts[(((x - lo) / HISTOGRAM_BIN) as usize).min(bins - 1)] += 1;
        }
    }
    let total = xs.len().max(1) as f64;
    counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| {
            let centre = lo + (k as f64 + 0.5) * HISTOGRAM_BIN;
            HistogramBin {
                centre,
                count,
                density: count as f64 / (total * HISTOGRAM_BIN),
                target: target_pdf(centre),
            }
        })
        .collect()
}

/// `delta = e^gamma N / (ln N)^{c/2}`.
pub fn model_mean_delta(n_param: usize, c: f64) -> Result<f64> {
    let ln_n = check_log_log(n_param)?;
    Ok(EULER_GAMMA.exp() * n_param as f64 / ln_n.powf(0.5 * c))
}

/// Which log-log constant a family of ensembles supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CVerdict {
    C32,
    C12,
}

impl CVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CVerdict::C32 => "c32",
            CVerdict::C12 => "c12",
        }
    }
}

/// Least-squares slope of `mean(max log |p|) - ln n` against `ln ln n`
/// from `(n, mean max log |p|)` pairs.
pub fn c_discrimination_from_means(means: &[(usize, f64)]) -> Result<(f64, CVerdict)> {
    let mut ns: Vec<usize> = means.iter().map(|m| m.0).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 4 {
        return Err(Error::Design(format!("needs at least 4 distinct N, got {}", ns.len())));
    }
    if ns[0] < 3 || (ns[ns.len() - 1] as f64) < 4.0 * ns[0] as f64 {
        return Err(Error::Design("N values must be >= 3 and span two octaves".into()));
    }
    let pts: Vec<(f64, f64)> = means
        .iter()
        .map(|&(n, m)| {
            let ln_n = (n as f64).ln();
            (ln_n.ln(), m - ln_n)
        })
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let verdict = if (slope + 0.75).abs() < (slope + 0.25).abs() {
        CVerdict::C32
    } else {
        CVerdict::C12
    };
    Ok((slope, verdict))
}

/// [`c_discrimination_from_means`] on ensembles keyed by `n`.
pub fn c_discrimination(ensembles: &BTreeMap<usize, Vec<ExtremeSample>>) -> Result<(f64, CVerdict)> {
    let means = ensembles
        .iter()
        .map(|(&n, samples)| {
            if samples.is_empty() {
                return Err(Error::Aggregation(format!("empty ensemble at N = {n}")));
            }
            if samples.iter().any(|s| s.n_param != n) {
                return Err(Error::Aggregation(format!("ensemble keyed {n} holds other N")));
            }
            let mean = samples.iter().map(|s| s.max_log()).sum::<f64>() / samples.len() as f64;
            Ok((n, mean))
        })
        .collect::<Result<Vec<_>>>()?;
    c_discrimination_from_means(&means)
}

/// `samples` extreme statistics of the given model at size `n`, sample `i`
/// drawn from `child_stream(seed, tag, i)` and located on a grid of
/// `grid_factor * n` points before refinement.
pub fn extreme_samples(
    model: FieldSource,
    n: usize,
    samples: usize,
    grid_factor: usize,
    seed: u64,
    tag: &str,
) -> Result<Vec<ExtremeSample>> {
    if samples == 0 {
        return Err(Error::Aggregation("no samples requested".into()));
    }
    let trig = TrigGrid::new(grid_factor * n);
    try_run_indexed(samples, |i| {
        let mut rng = child_stream(seed, tag, i);
        let field = SampledField::sample(model, n, &mut rng)?;
        let grid = field.grid(&trig)?;
        let (_, max_log) = max_log_abs_p(&field, &grid, DEFAULT_REFINE_TOL)?;
        Ok(ExtremeSample::from_max_log(max_log, n, model))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::{gamma_fn, EULER_GAMMA};

    /// Composite Simpson on `[a, b]` with `2^k` panels.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut s = f(a) + f(b);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + h * i as f64);
        }
        s * h / 3.0
    }

    fn integral(f: impl Fn(f64) -> f64) -> f64 {
        simpson(f, -100.0, 40.0, 1 << 17)
    }

    #[test]
    fn density_is_normalised() {
        assert!((integral(target_pdf) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn second_moment_and_mean() {
        let m2 = integral(|x| x * x * target_pdf(x));
        let m1 = integral(|x| x * target_pdf(x));
        assert!((m1 - TARGET_MEAN).abs() < 1e-7);
        assert!((m1 + 1.154_431_329_8).abs() < 1e-9);
        // the variance quoted for the law
        assert!((m2 - m1 * m1 - 3.289_868_13).abs() < 1e-8);
        assert!((TARGET_VARIANCE - 3.289_868_133_696_453).abs() < 1e-15);
    }

    #[test]
    fn moment_generating_function() {
        for s in [-0.5, 0.5, 1.0] {
            let mgf = integral(|x| (s * x).exp() * target_pdf(x));
            let exact = gamma_fn(1.0 + s).unwrap().powi(2);
            assert!((mgf - exact).abs() < 1e-7, "s {s}: {mgf} vs {exact}");
        }
        assert!((gamma_fn(1.5).unwrap().powi(2) - std::f64::consts::FRAC_PI_4).abs() < 1e-13);
    }

    #[test]
    fn left_tail() {
        let ratio = |x: f64| target_pdf(x) / (x.abs() * x.exp());
        assert!((ratio(-25.0) - 1.0).abs() < 0.1);
        assert!((ratio(-35.0) - 1.0).abs() < (ratio(-25.0) - 1.0).abs());
        let logs: Vec<f64> = [-15.0, -20.0, -25.0, -30.0].iter().map(|&x| ratio(x).ln().abs()).collect();
        assert!(logs.windows(2).all(|w| w[1] < w[0]), "{logs:?}");
    }

    #[test]
    fn density_positive_while_representable() {
        let mut x = -60.0;
        while x <= 11.5 {
            assert!(target_pdf(x) > 0.0, "x {x}");
            assert!(target_log_pdf(x).is_finite());
            x += 0.125;
        }
        // the log density stays finite where the density underflows
        assert!(target_log_pdf(60.0).is_finite());
        assert!(target_log_pdf(60.0) < -1e12);
        assert_eq!(target_pdf(61.0), 0.0);
    }

    #[test]
    fn distribution_function() {
        assert!(target_cdf(-40.0) < 1e-10);
        assert!((1.0 - target_cdf(40.0)) < 1e-10);
        let f0 = target_cdf(0.0);
        assert!((f0 - 0.720_268_236_366_955_2).abs() < 1e-13);
        let oracle = simpson(target_pdf, -100.0, 0.0, 1 << 17);
        assert!((f0 - oracle).abs() < 1e-10);
        for q in [0.01, 0.5, 0.99] {
            assert!((target_cdf(target_quantile(q).unwrap()) - q).abs() < 1e-9);
        }
        for q in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(target_quantile(q).is_err());
        }
        for x in [-3.0, 0.5, 4.0] {
            assert!((target_cdf(x) + target_survival(x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cdf_derivative_is_pdf() {
        let h = 1e-5;
        let mut x = -10.0;
        while x <= 5.0 {
            let d = (target_cdf(x + h) - target_cdf(x - h)) / (2.0 * h);
            assert!((d - target_pdf(x)).abs() < 1e-6, "x {x}");
            x += 0.1;
        }
    }

    fn target_draws(n: usize) -> Vec<f64> {
        // van der Corput points in base 2
        (1..=n)
            .map(|i| {
                let (mut k, mut f, mut u) = (i, 0.5, 0.0);
                while k > 0 {
                    u += f * (k & 1) as f64;
                    k >>= 1;
                    f *= 0.5;
                }
                target_quantile(u).unwrap()
            })
            .collect()
    }

    #[test]
    fn ks_against_target() {
        let xs = target_draws(10_000);
        assert!(ks_statistic(&xs).unwrap() < 0.01);
        let shifted: Vec<f64> = xs.iter().map(|x| x + 1.0).collect();
        assert!(ks_statistic(&shifted).unwrap() > 0.2);
        assert!(ks_statistic(&xs[..9]).is_err());
        assert!(ks_statistic(&[]).is_err());
    }

    #[test]
    fn two_sample_ks() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        assert_eq!(ks_two_sample(&a, &[5.0, 6.0]), 1.0);
        assert!((ks_two_sample(&a, &[2.5]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn recentering() {
        let p = RecenteringParams::new(1024, 1.5).unwrap();
        assert!((p.a - (-10.958_835_352_580_334)).abs() < 1e-12);
        let p0 = RecenteringParams::new(1024, 0.0).unwrap();
        assert!((p0.a + 2.0 * 1024f64.ln()).abs() < 1e-12);
        assert!(RecenteringParams::new(2, 1.5).is_err());

        let samples: Vec<ExtremeSample> = [-9.0, -11.5, -10.2, -12.0]
            .iter()
            .map(|&y| ExtremeSample { y, n_param: 1024, model: FieldSource::Cue })
            .collect();
        let xs = recenter(&samples, &p).unwrap();
        assert!((xs[0] - (-9.0 - p.a)).abs() < 1e-15);
        let ys: Vec<f64> = samples.iter().map(|s| s.y).collect();
        assert!((mean_and_variance(&xs).1 - mean_and_variance(&ys).1).abs() < 1e-12);

        let mut mixed = samples.clone();
        mixed[1].n_param = 512;
        assert!(matches!(recenter(&mixed, &p), Err(Error::Aggregation(_))));
    }

    #[test]
    fn shift_equivariance_of_ks() {
        let xs = target_draws(500);
        let samples: Vec<ExtremeSample> = xs
            .iter()
            .map(|&x| ExtremeSample { y: x - 10.0, n_param: 100, model: FieldSource::Cue })
            .collect();
        let p = RecenteringParams::new(100, 1.5).unwrap();
        let mut q = p;
        q.a += 0.3;
        let a = ks_statistic(&recenter(&samples, &p).unwrap()).unwrap();
        let b = ks_distance(&recenter(&samples, &q).unwrap(), |x| target_cdf(x + 0.3));
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn normalisation() {
        let xs = target_draws(1000);
        let norm = normalize_to_target_variance(&xs).unwrap();
        let (m, v) = mean_and_variance(&norm);
        assert!((m - TARGET_MEAN).abs() < 1e-12);
        assert!((v - TARGET_VARIANCE).abs() < 1e-12);
        let again = normalize_to_target_variance(&norm).unwrap();
        for (a, b) in norm.iter().zip(&again) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((TARGET_MEAN + 1.154_431_329_8).abs() < 1e-10);
        assert!(normalize_to_target_variance(&[1.0, 1.0, 1.0]).is_err());
        assert!(normalize_to_target_variance(&[1.0]).is_err());
    }

    #[test]
    fn model_mean() {
        let d51 = model_mean_delta(51, 1.5).unwrap();
        assert!((d51 - 32.531_648_188_392_09).abs() < 1e-10);
        assert!((d51 - 32.54).abs() < 0.01);
        let d17 = model_mean_delta(17, 1.5).unwrap();
        assert!((d17 - 13.865_037_245_723_232).abs() < 1e-10);
        for n in [3usize, 17, 1000] {
            let r = model_mean_delta(n, 0.5).unwrap() / model_mean_delta(n, 1.5).unwrap();
            assert!((r - (n as f64).ln().sqrt()).abs() < 1e-12);
        }
        assert!(model_mean_delta(2, 1.5).is_err());
        assert!((EULER_GAMMA.exp() - 1.781_072_417_990_198).abs() < 1e-14);
    }

    #[test]
    fn discrimination_recovers_synthetic_slopes() {
        let ns = [64usize, 128, 256, 512, 1024, 2048, 4096];
        for (coef, verdict) in [(-0.75, CVerdict::C32), (-0.25, CVerdict::C12)] {
            let means: Vec<(usize, f64)> = ns
                .iter()
                .map(|&n| {
                    let l = (n as f64).ln();
                    (n, l + coef * l.ln() + 0.37)
                })
                .collect();
            let (slope, v) = c_discrimination_from_means(&means).unwrap();
            assert!((slope - coef).abs() < 1e-12);
            assert_eq!(v, verdict);
        }
        let few = [(64usize, 1.0), (128, 1.0), (256, 1.0)];
        assert!(matches!(c_discrimination_from_means(&few), Err(Error::Design(_))));
        let narrow = [(64usize, 1.0), (70, 1.1), (80, 1.2), (90, 1.3)];
        assert!(c_discrimination_from_means(&narrow).is_err());
    }

    #[test]
    fn discrimination_on_samples() {
        let mut map = BTreeMap::new();
        for n in [16usize, 32, 64, 128] {
            let l = (n as f64).ln();
            let m = l - 0.75 * l.ln();
            map.insert(
                n,
                vec![
                    ExtremeSample::from_max_log(m - 0.1, n, FieldSource::Cue),
                    ExtremeSample::from_max_log(m + 0.1, n, FieldSource::Cue),
                ],
            );
        }
        let (slope, v) = c_discrimination(&map).unwrap();
        assert!((slope + 0.75).abs() < 1e-12);
        assert_eq!(v, CVerdict::C32);
    }

    #[test]
    fn histogram_layout() {
        let xs = target_draws(4000);
        let h = histogram(&xs);
        assert_eq!(h.len(), 72);
        assert!((h[0].centre + 11.875).abs() < 1e-15);
        let mass: f64 = h.iter().map(|b| b.density * HISTOGRAM_BIN).sum();
        assert!(mass <= 1.0 + 1e-12 && mass > 0.99, "{mass}");
        let e = ecdf(&[3.0, 1.0, 2.0]);
        assert_eq!(e, vec![(1.0, 1.0 / 3.0), (2.0, 2.0 / 3.0), (3.0, 1.0)]);
    }
}
