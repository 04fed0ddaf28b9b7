//! Small shared statistics helpers (population moments, quantiles, OLS).

/// Arithmetic mean; 0 for an empty slice.
pub fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().sum::<f64>() / x.len() as f64
}

/// Population variance (divide by n).
pub fn pop_var(x: &[f64]) -> f64 {
    let m = mean(x);
    mean(&x.iter().map(|v| (v - m) * (v - m)).collect::<Vec<_>>())
}

pub fn pop_std(x: &[f64]) -> f64 {
    pop_var(x).sqrt()
}

/// Pearson correlation on population moments.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let mx = mean(x);
    let my = mean(y);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y.iter()) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

/// Coefficient of determination of `sim` against `obs`.
pub fn r_squared(obs: &[f64], sim: &[f64]) -> f64 {
    let r = pearson(obs, sim);
    r * r
}

/// Root mean squared error of a residual series.
pub fn rmse(residuals: &[f64]) -> f64 {
    mean(&residuals.iter().map(|r| r * r).collect::<Vec<_>>()).sqrt()
}

/// Linear-interpolation quantile (type 7) of an unsorted sample.
pub fn quantile(sample: &[f64], q: f64) -> f64 {
    assert!(!sample.is_empty());
    let mut s = sample.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    quantile_sorted(&s, q)
}

/// Type-7 quantile of an already sorted sample.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = q.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Ordinary least squares of y on x with intercept: returns (intercept,
/// slope, residual sum of squares).
pub fn ols_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let mx = mean(x);
    let my = mean(y);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y.iter()) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rss = x
        .iter()
        .zip(y.iter())
        .map(|(a, b)| {
            let e = b - intercept - slope * a;
            e * e
        })
        .sum();
    (intercept, slope, rss)
}
