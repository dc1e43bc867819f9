//! Small numeric helpers shared by the estimators: ordinary least squares
//! with slope standard error, log-spaced grids and moments.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least {needed} points for a line fit, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("abscissa has zero variance")]
    DegenerateAbscissa,
    #[error("non-finite value in fit input")]
    NonFinite,
}

/// Result of `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero for a two-point fit.
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub n: usize,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares of `y` on `x`.
///
/// Sums are accumulated in index order so results are reproducible.
pub fn ols(x: &[f64], y: &[f64]) -> Result<LinearFit, FitError> {
    assert_eq!(x.len(), y.len(), "ols: x and y differ in length");
    let n = x.len();
    if n < 2 {
        return Err(FitError::TooFewPoints { needed: 2, got: n });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(FitError::NonFinite);
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx <= 0.0 {
        return Err(FitError::DegenerateAbscissa);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ssr = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let r = yi - (intercept + slope * xi);
        ssr += r * r;
    }
    let slope_stderr = if n > 2 { (ssr / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    Ok(LinearFit { slope, intercept, slope_stderr, r_squared, n })
}

/// `count` logarithmically spaced reals covering `[lo, hi]` inclusive.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo, "log_space: need 0 < lo <= hi");
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let step = (b - a) / (count - 1) as f64;
            (0..count).map(|i| if i + 1 == count { hi } else { (a + step * i as f64).exp() }).collect()
        }
    }
}

/// Roughly `count` log-spaced integers in `[lo, hi]`, rounded and deduplicated.
pub fn log_space_int(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if lo == 0 || hi < lo {
        return Vec::new();
    }
    let mut out: Vec<usize> =
        log_space(lo as f64, hi as f64, count).into_iter().map(|v| (v.round() as usize).clamp(lo, hi)).collect();
    out.dedup();
    out
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population variance (divides by `n`).
pub fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64
}

/// Sample autocorrelation at `lag` using the biased (1/n) estimator.
pub fn autocorrelation(values: &[f64], lag: usize) -> f64 {
    let n = values.len();
    if lag >= n {
        return f64::NAN;
    }
    let m = mean(values);
    let c0: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    let ck: f64 = (0..n - lag).map(|i| (values[i] - m) * (values[i + lag] - m)).sum();
    ck / c0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ols_exact_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 0.5 * v).collect();
        let fit = ols(&x, &y).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-14);
        assert!((fit.intercept - 3.0).abs() < 1e-13);
        assert!(fit.slope_stderr < 1e-14);
        assert!((fit.r_squared - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ols_slope_stderr_matches_textbook() {
        // x = 1..5, y with residuals; stderr^2 = SSR/(n-2)/Sxx
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [2.0, 4.1, 5.9, 8.2, 9.8];
        let fit = ols(&x, &y).unwrap();
        assert!((fit.slope - 1.97).abs() < 1e-12);
        let ssr: f64 = x.iter().zip(&y).map(|(a, b)| (b - fit.predict(*a)).powi(2)).sum();
        assert!((fit.slope_stderr - (ssr / 3.0 / 10.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn ols_rejects_degenerate() {
        assert_eq!(ols(&[1.0], &[1.0]), Err(FitError::TooFewPoints { needed: 2, got: 1 }));
        assert_eq!(ols(&[2.0, 2.0], &[1.0, 3.0]), Err(FitError::DegenerateAbscissa));
        assert_eq!(ols(&[1.0, f64::NAN], &[1.0, 3.0]), Err(FitError::NonFinite));
    }

    #[test]
    fn log_space_endpoints() {
        let g = log_space(4.0, 400.0, 3);
        assert_eq!(g[0], 4.0);
        assert!((g[1] - 40.0).abs() < 1e-12);
        assert_eq!(g[2], 400.0);
        let gi = log_space_int(20, 25, 30);
        assert_eq!(gi, vec![20, 21, 22, 23, 24, 25]);
    }
}
