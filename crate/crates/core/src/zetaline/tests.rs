#![allow(clippy::excessive_precision, clippy::inconsistent_digit_grouping)]

use super::*;
use crate::rng::child_stream;
use rand::Rng;

/// Reference values of `Z(t)` and `theta(t)` computed with mpmath at 40 digits.
const REFERENCE: [(f64, f64, f64); 15] = [
    (5.0, -0.738_863_428_275_264_76, -3.459_620_375_363_462_5),
    (10.0, -1.549_194_546_181_022_4, -3.067_074_396_289_895_3),
    (20.0, 1.147_842_412_185_197_3, 1.186_894_808_444_484),
    (25.5, 0.701_289_021_543_774_83, 4.718_335_653_469_457_6),
    (29.9, 0.744_276_126_695_661_05, 7.979_719_869_891_962_2),
    (30.1, 0.449_801_075_233_517_76, 8.136_047_085_649_605_3),
    (45.0, -3.256_289_204_079_574, 21.405_435_920_224_626),
    (77.7, -0.843_645_126_050_032_92, 58.464_471_765_121_569),
    (100.0, 2.692_697_056_664_463_5, f64::NAN),
    (500.0, 1.472_447_851_055_085_3, 843.790_100_588_189_23),
    (1000.0, 0.997_794_637_521_586_61, 2034.546_428_038_031_6),
    (12345.678, -0.878_561_599_346_814_79, 40636.543_815_330_354),
    (1e6, -2.806_133_878_430_698_5, f64::NAN),
    (3.6e7, -0.171_376_399_578_744_84, f64::NAN),
    (99_999_999.5, 1.150_134_175_673_545_9, 779_140_179.338_751),
];

/// Euler–Maclaurin summation of `zeta(1/2 + it)` with a cut at `n_cut`.
fn zeta_euler_maclaurin(t: f64) -> Complex64 {
    const BERNOULLI: [f64; 10] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
        43867.0 / 798.0,
        -174611.0 / 330.0,
    ];
    let s = Complex64::new(0.5, t);
    let n_cut = (t.ceil() as usize).max(20);
    let power = |n: usize| (-s * (n as f64).ln()).exp();
    let mut sum: Complex64 = (1..n_cut).map(power).sum();
    let nf = n_cut as f64;
    let n_s = power(n_cut);
    sum += n_s * nf / (s - 1.0) + 0.5 * n_s;
    // B_{2k} / (2k)! s (s + 1) ... (s + 2k - 2) N^{-s - 2k + 1}
    let mut rising = s;
    let mut factorial = 2.0;
    let mut n_pow = n_s / nf;
    for (k, &b) in BERNOULLI.iter().enumerate() {
        let k = k + 1;
        sum += rising * n_pow * (b / factorial);
        rising *= (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
        factorial *= ((2 * k + 1) * (2 * k + 2)) as f64;
        n_pow /= nf * nf;
    }
    sum
}

#[test]
fn theta_series_domain_and_values() {
    assert!(rs_theta(9.99).is_err());
    assert!(rs_theta(f64::NAN).is_err());
    assert!(rs_theta(17.845_599_540_5).unwrap().abs() < 1e-7);
    for &(t, _, theta) in &REFERENCE {
        if theta.is_nan() {
            continue;
        }
        let got = theta_any(t);
        assert!((got - theta).abs() < 1e-10 * theta.abs().max(1.0), "t {t}: {got} vs {theta}");
        if t >= THETA_SERIES_MIN {
            assert_eq!(rs_theta(t).unwrap(), got);
        }
    }
}

#[test]
fn theta_paths_agree_at_the_switch() {
    let series = 0.5 * 10.0 * (10.0 / TWO_PI).ln() - 5.0 - PI / 8.0 + theta_tail(10.0);
    let stirling = ln_gamma_complex(Complex64::new(0.25, 5.0)).im - 5.0 * PI.ln();
    assert!((series - stirling).abs() < 1e-10);
}

#[test]
fn theta_derivative_and_monotonicity() {
    let h = 1e-3;
    let d = (rs_theta(1000.0 + h).unwrap() - rs_theta(1000.0 - h).unwrap()) / (2.0 * h);
    assert!((d - 0.5 * (1000.0 / TWO_PI).ln()).abs() < 1e-6);
    let mut prev = rs_theta(TWO_PI * std::f64::consts::E).unwrap();
    let mut t = TWO_PI * std::f64::consts::E;
    while t < 5000.0 {
        t += 0.37;
        let next = rs_theta(t).unwrap();
        assert!(next > prev);
        prev = next;
    }
}

#[test]
fn reference_values() {
    for &(t, z, _) in &REFERENCE {
        let got = siegel_z(t).unwrap();
        let tol = if t <= 1e4 {
            1e-10 * z.abs().max(1.0)
        } else if t <= 1e6 {
            1e-6
        } else {
            1e-4
        };
        assert!((got - z).abs() < tol, "t {t}: {got} vs {z}");
    }
}

#[test]
fn value_at_one_half() {
    let p = zeta_abs_halfline(0.0).unwrap();
    assert!((p.z_val + 1.460_354_508_809_586_8).abs() < 1e-9);
    assert!((p.zeta_abs - 1.460_354_508_8).abs() < 1e-9);
    assert_eq!(p.zeta_abs, p.z_val.abs());
}

#[test]
fn first_zero() {
    let p = zeta_abs_halfline(14.134_725_141_734_695).unwrap();
    assert!(p.zeta_abs < 1e-3);
    assert!(zeta_abs_halfline(14.134_725).unwrap().zeta_abs < 1e-3);
    // a sign change brackets the zero
    assert!(siegel_z(14.13).unwrap() * siegel_z(14.14).unwrap() < 0.0);
}

#[test]
fn outside_window_is_an_error() {
    for t in [-1.0, 1e8 + 1.0, f64::NAN, f64::INFINITY] {
        assert!(matches!(siegel_z(t), Err(Error::Precision(_))));
    }
}

#[test]
fn riemann_siegel_matches_euler_maclaurin() {
    let mut rng = child_stream(41, "rs-vs-em", 0);
    for _ in 0..50 {
        let t = 50.0 + 950.0 * rng.random::<f64>();
        let rs = siegel_z(t).unwrap().abs();
        let em = zeta_euler_maclaurin(t).norm();
        assert!((rs - em).abs() < 1e-8 * em, "t {t}: {rs} vs {em}");
    }
}

#[test]
fn eta_series_matches_euler_maclaurin() {
    for t in [0.5, 3.0, 14.0, 22.2, 29.0] {
        let eta = zeta_eta_series(t);
        let em = zeta_euler_maclaurin(t);
        assert!((eta - em).norm() < 1e-10, "t {t}");
    }
}

#[test]
fn rotated_zeta_is_real() {
    for t in [3.0, 17.0, 28.0] {
        let rotated = Complex64::from_polar(1.0, theta_any(t)) * zeta_eta_series(t);
        assert!(rotated.im.abs() < 1e-9);
    }
    for t in [60.0, 400.0] {
        let rotated = Complex64::from_polar(1.0, theta_any(t)) * zeta_euler_maclaurin(t);
        assert!(rotated.im.abs() < 1e-9);
        assert!((rotated.re - siegel_z(t).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn grid_matches_pointwise() {
    // the main-sum length changes inside the second grid
    let k = 2394.0;
    for (t0, tol) in [(1000.0, 1e-10), (TWO_PI * k * k - 1.0, 1e-6), (35.0, 1e-10)] {
        let step = 0.013;
        let grid = z_on_grid(t0, step, 600).unwrap();
        for (i, z) in grid.iter().enumerate() {
            let direct = siegel_z(t0 + step * i as f64).unwrap();
            assert!((z - direct).abs() < tol, "t0 {t0} i {i}: {z} vs {direct}");
        }
    }
    assert!(z_on_grid(100.0, 0.0, 5).is_err());
    assert!(z_on_grid(1e8 - 1.0, 0.1, 100).is_err());
    assert!(z_on_grid(100.0, 0.1, 0).unwrap().is_empty());
}

#[test]
fn intervals_at_the_lowest_table_height() {
    let t_center = 3.6e7;
    let count = 100;
    let intervals = consecutive_intervals(t_center, count).unwrap();
    for (i, iv) in intervals.iter().enumerate() {
        assert_eq!(iv.n_assoc, 17);
        assert!(iv.max_abs >= iv.grid_max);
        assert!(iv.argmax_t >= iv.t_start && iv.argmax_t <= iv.t_start + TWO_PI);
        assert!(iv.max_abs >= siegel_z(iv.t_start).unwrap().abs());
        assert!(iv.max_abs >= siegel_z(iv.t_start + TWO_PI).unwrap().abs());
        if i > 0 {
            assert_eq!(iv.t_start, interval_start(t_center, count, i as u64));
            assert!((iv.t_start - intervals[i - 1].t_start - TWO_PI).abs() < 1e-6);
        }
    }
    assert!(interval_max(50.0).is_err());
}

#[test]
fn default_density_is_self_consistent() {
    let t_center = 3.6e7;
    let count = 1000;
    let stable: Vec<bool> = try_run_indexed(count, |i| {
        let t = interval_start(t_center, count, i);
        let a = interval_max(t)?;
        let b = interval_max_with_density(t, 2.0 * DEFAULT_DENSITY)?;
        Ok::<_, Error>(((a.max_abs - b.max_abs) / b.max_abs).abs() < 1e-4)
    })
    .unwrap();
    let share = stable.iter().filter(|&&s| s).count() as f64 / count as f64;
    assert!(share >= 0.99, "share {share}");
}

#[test]
fn table_row_ratios() {
    let row = table1_experiment(3.6e7, 50).unwrap();
    assert_eq!(row.n_assoc, 17);
    assert!((row.ratio_c12 - row.ratio_c32 / 17f64.ln().sqrt()).abs() < 1e-12);
    assert!(row.data_mean > 0.0);
    assert!(table1_from_intervals(3.6e7, &[]).is_err());
}

#[test]
fn partition_function_limits() {
    let t = 3.6e7;
    let s = zeta_partition(t, 1e-9).unwrap();
    let n_t = (t / TWO_PI).ln();
    assert!((s.z - n_t).abs() < 1e-6 * n_t);
    assert_eq!(s.n_param, 16);
    assert_eq!(s.scale, n_t);
    assert!(zeta_partition(t, 0.0).is_err());
}

#[test]
fn partition_function_density_is_converged() {
    let t_center = 3.6e7;
    let count = 100;
    for i in 0..count {
        let t = interval_start(t_center, count, i as u64);
        let a = zeta_partitions_with_density(t, &[1.0], DEFAULT_DENSITY).unwrap()[0];
        let b = zeta_partitions_with_density(t, &[1.0], 2.0 * DEFAULT_DENSITY).unwrap()[0];
        assert!((a.ln_z - b.ln_z).abs() < 1e-3, "interval {i}");
    }
}

#[test]
fn zeta_freezing_curve_shape() {
    let betas = [0.25, 0.5, 0.75, 1.0];
    let c = zeta_freeze_scan(3.6e7, 200, &betas).unwrap();
    assert_eq!(c.n_param, 16);
    assert!(c.minus_f.windows(2).all(|w| w[1] < w[0]), "{:?}", c.minus_f);
}

#[test]
fn covariance_shape() {
    let t = 3.6e7;
    let pts = covariance_scan(t, 4000.0, &[0.0232, 0.0464, 0.1, 0.2, 0.4, 0.6]).unwrap();
    // log branch, with the lower-order arithmetic terms left in
    for p in &pts[2..] {
        assert!((p.estimate + 2.0 * p.separation.ln()).abs() < 0.5, "{p:?}");
    }
    // below 1/ln T growth slows down against the logarithm ...
    assert!(pts[0].estimate - pts[1].estimate < 2.0 * 2f64.ln());
    // ... and levels off at the scale 2 ln ln T plus an order-one constant
    let plateau = 2.0 * t.ln().ln();
    assert!(pts[0].estimate > plateau && pts[0].estimate < 1.4 * plateau, "{pts:?}");
    assert!(covariance_scan(t, 4000.0, &[-0.1]).is_err());
    assert!(covariance_scan(t, 1e7, &[0.1]).is_err());
}
