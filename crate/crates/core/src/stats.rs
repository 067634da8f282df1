//! Small summary statistics and the two-sample Kolmogorov–Smirnov test.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation over `count - 1`.
    pub sd: f64,
    /// `sd / sqrt(count)`.
    pub se: f64,
}

/// Mean and spread of the finite values in `xs`; `NaN` fields when empty.
pub fn summarize(xs: &[f64]) -> Summary {
    let vals: Vec<f64> = xs.iter().copied().filter(|x| x.is_finite()).collect();
    let count = vals.len();
    if count == 0 {
        return Summary { count, mean: f64::NAN, sd: f64::NAN, se: f64::NAN };
    }
    let mean = vals.iter().sum::<f64>() / count as f64;
    let sd = if count > 1 {
        (vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    Summary { count, mean, sd, se: sd / (count as f64).sqrt() }
}

/// Sample quantile by linear interpolation between order statistics.
pub fn quantile(xs: &[f64], p: f64) -> f64 {
    let mut v: Vec<f64> = xs.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let h = p.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub critical: f64,
    pub reject: bool,
}

/// Asymptotic critical coefficient `c(alpha) = sqrt(-ln(alpha / 2) / 2)`.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// Two-sample KS test at level `alpha` with the asymptotic critical value
/// `c(alpha) sqrt((n + m) / (n m))`.
pub fn ks_two_sample(a: &[f64], b: &[f64], alpha: f64) -> KsResult {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let critical = ks_coefficient(alpha) * ((n + m) / (n * m)).sqrt();
    KsResult { statistic: d, critical, reject: d > critical }
}
