//! Bracketed scalar minimisation.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping when
/// the bracket is narrower than `tol` or than a few ulps of its ends.
/// Returns the best point evaluated.
pub(crate) fn golden_section_min(
    mut f: impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    let floor = 8.0 * f64::EPSILON * lo.abs().max(hi.abs());
    let tol = tol.max(floor);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

/// Indices of the `count` lowest strict-or-flat local minima of a periodic
/// sequence, best first.
pub(crate) fn lowest_local_minima_periodic(values: &[f64], count: usize) -> Vec<usize> {
    let m = values.len();
    let mut minima: Vec<usize> = (0..m)
        .filter(|&k| {
            let prev = values[(k + m - 1) % m];
            let next = values[(k + 1) % m];
            values[k] <= prev && values[k] <= next
        })
        .collect();
    minima.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    minima.truncate(count);
    minima
}

/// Same as [`lowest_local_minima_periodic`] for an open sequence; the end
/// points qualify when they are below their single neighbour.
pub(crate) fn lowest_local_minima(values: &[f64], count: usize) -> Vec<usize> {
    let m = values.len();
    let mut minima: Vec<usize> = (0..m)
        .filter(|&k| {
            let left = k == 0 || values[k] <= values[k - 1];
            let right = k + 1 == m || values[k] <= values[k + 1];
            left && right
        })
        .collect();
    minima.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    minima.truncate(count);
    minima
}
