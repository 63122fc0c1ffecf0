//! Small shared numerical helpers.

use crate::math;
use alloc::vec::Vec;

/// Composite Simpson rule on a uniform grid. `values.len()` must be odd
/// (an even number of intervals); the tail interval of an even-length grid
/// falls back to the trapezoid rule.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let intervals = n - 1;
    let m = if intervals % 2 == 0 { n } else { n - 1 };
    let mut sum = values[0] + values[m - 1];
    let mut i = 1;
    while i < m - 1 {
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * values[i];
        i += 1;
    }
    let mut total = sum * h / 3.0;
    if intervals % 2 == 1 {
        total += 0.5 * h * (values[n - 2] + values[n - 1]);
    }
    total
}

/// Least-squares slope of `ln y` against `ln x`. Inputs must be positive.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|&x| math::ln(x)).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| math::ln(y)).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Maps indices `0..n` through `f`, in parallel when the `parallel` feature
/// is enabled. The output order is always the index order, so reductions over
/// the result are bit-reproducible regardless of worker count.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
