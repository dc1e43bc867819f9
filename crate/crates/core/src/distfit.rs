//! Empirical complementary CDFs of sentence lengths and stretched-exponential
//! tail fits `F(ℓ) = exp(−μ ℓ^b)`.
//!
//! The fit linearizes the model as `ln(−ln F) = ln μ + b ln ℓ` and runs OLS
//! over the distinct lengths in the tail, so every observed length weighs the
//! same regardless of how many samples share it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistError {
    #[error("no samples")]
    Empty,
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("only {got} usable CCDF points in ({lo}, {hi}], need {needed}")]
    InsufficientTail { got: usize, needed: usize, lo: f64, hi: f64 },
}

/// `F(ℓ) = Pr(l ≥ ℓ)` at each distinct observed length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ccdf {
    pub lengths: Vec<f64>,
    pub survival: Vec<f64>,
    pub n_samples: usize,
}

impl Ccdf {
    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }
}

/// CCDF of a single sample.
pub fn ccdf(samples: &[f64]) -> Result<Ccdf, DistError> {
    ccdf_pooled(&[samples])
}

/// CCDF of the pooled multiset of several samples (e.g. a group of texts).
pub fn ccdf_pooled(groups: &[&[f64]]) -> Result<Ccdf, DistError> {
    let mut all: Vec<f64> = Vec::with_capacity(groups.iter().map(|g| g.len()).sum());
    for g in groups {
        for &v in g.iter() {
            if !v.is_finite() {
                return Err(DistError::NonFinite(all.len()));
            }
            all.push(v);
        }
    }
    if all.is_empty() {
        return Err(DistError::Empty);
    }
    all.sort_by(f64::total_cmp);
    let n = all.len();
    let mut lengths = Vec::new();
    let mut survival = Vec::new();
    let mut i = 0;
    while i < n {
        let v = all[i];
        lengths.push(v);
        survival.push((n - i) as f64 / n as f64);
        while i < n && all[i] == v {
            i += 1;
        }
    }
    Ok(Ccdf { lengths, survival, n_samples: n })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub mu: f64,
    pub b: f64,
    /// Lengths `(lo, hi]` that were eligible for the fit.
    pub fit_range: (f64, f64),
    pub n_points: usize,
    /// Standard error of `b`.
    pub b_stderr: f64,
    /// `R²` of the linearized regression.
    pub r_squared: f64,
    /// Points with `F = 1` dropped because `ln(−ln 1)` is undefined.
    pub excluded_unit_points: usize,
}

impl TailFit {
    pub fn survival(&self, length: f64) -> f64 {
        (-self.mu * length.powf(self.b)).exp()
    }
}

/// Stretched-exponential fit over lengths `ℓ > tail_start`. The recorded
/// range ends at the largest observed length.
pub fn fit_stretched_exponential(c: &Ccdf, tail_start: f64) -> Result<TailFit, DistError> {
    let hi = c.lengths.last().copied().unwrap_or(tail_start).max(tail_start);
    fit_stretched_exponential_range(c, tail_start, hi)
}

/// Same fit restricted to `lo < ℓ ≤ hi`; e.g. `(10, 100)` checks the
/// pure-exponential (`b = 1`) regime below the tail.
pub fn fit_stretched_exponential_range(c: &Ccdf, lo: f64, hi: f64) -> Result<TailFit, DistError> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut excluded = 0;
    for (&l, &f) in c.lengths.iter().zip(&c.survival) {
        if !(l > lo && l <= hi) || l <= 0.0 {
            continue;
        }
        if f >= 1.0 {
            excluded += 1;
            continue;
        }
        x.push(l.ln());
        y.push((-f.ln()).ln());
    }
    if excluded > 0 {
        log::warn!("{excluded} CCDF point(s) with F = 1 excluded from the stretched-exponential fit");
    }
    if x.len() < 10 {
        return Err(DistError::InsufficientTail { got: x.len(), needed: 10, lo, hi });
    }
    let fit = stats::ols(&x, &y).map_err(|_| DistError::InsufficientTail { got: x.len(), needed: 10, lo, hi })?;
    Ok(TailFit {
        mu: fit.intercept.exp(),
        b: fit.slope,
        fit_range: (lo, hi),
        n_points: x.len(),
        b_stderr: fit.slope_stderr,
        r_squared: fit.r_squared,
        excluded_unit_points: excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    /// Inverse-transform sampling from `F(ℓ) = exp(−μ ℓ^b)`.
    fn stretched_samples(n: usize, mu: f64, b: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let u: f64 = 1.0 - rng.random::<f64>();
                (-u.ln() / mu).powf(1.0 / b)
            })
            .collect()
    }

    #[test]
    fn small_ccdf() {
        let c = ccdf(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(c.lengths, vec![1.0, 2.0, 3.0]);
        assert_eq!(c.survival, vec![1.0, 2.0 / 3.0, 1.0 / 3.0]);
        let d = ccdf(&[3.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(d.lengths, vec![1.0, 2.0, 3.0]);
        assert_eq!(d.survival, vec![1.0, 0.75, 0.5]);
        assert_eq!(ccdf(&[]), Err(DistError::Empty));
        assert_eq!(ccdf(&[1.0, f64::NAN]), Err(DistError::NonFinite(1)));
    }

    #[test]
    fn pooling_with_itself_is_idempotent() {
        let s = [4.0, 9.0, 1.0, 4.0, 7.0];
        let a = ccdf(&s).unwrap();
        let b = ccdf_pooled(&[&s, &s]).unwrap();
        assert_eq!(a.lengths, b.lengths);
        assert_eq!(a.survival, b.survival);
    }

    #[test]
    fn pooled_equals_weighted_combination() {
        let g1: Vec<f64> = (0..37).map(|i| ((i * 7) % 23) as f64).collect();
        let g2: Vec<f64> = (0..91).map(|i| ((i * 5) % 41) as f64 + 0.5).collect();
        let pooled = ccdf_pooled(&[&g1, &g2]).unwrap();
        // brute force: count samples >= l in each group and weight by size
        for (&l, &f) in pooled.lengths.iter().zip(&pooled.survival) {
            let c1 = g1.iter().filter(|&&v| v >= l).count() as f64;
            let c2 = g2.iter().filter(|&&v| v >= l).count() as f64;
            let f1 = c1 / g1.len() as f64;
            let f2 = c2 / g2.len() as f64;
            let want = (g1.len() as f64 * f1 + g2.len() as f64 * f2) / (g1.len() + g2.len()) as f64;
            assert!((f - want).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_stretched_exponential_values() {
        let (mu, b) = (0.1, 0.7);
        let lengths: Vec<f64> = (101..400).map(|l| l as f64).collect();
        let survival = lengths.iter().map(|&l| (-mu * f64::powf(l, b)).exp()).collect();
        let c = Ccdf { lengths, survival, n_samples: 0 };
        let fit = fit_stretched_exponential(&c, 100.0).unwrap();
        assert!((fit.b - b).abs() < 1e-9);
        assert!((fit.mu - mu).abs() < 1e-9);
        assert!((fit.survival(200.0) - (-mu * 200f64.powf(b)).exp()).abs() < 1e-12);
    }

    #[test]
    fn exponential_data_gives_b_one() {
        let samples = stretched_samples(50_000, 0.05, 1.0, 4);
        let c = ccdf(&samples).unwrap();
        let fit = fit_stretched_exponential_range(&c, 10.0, 100.0).unwrap();
        assert!((fit.b - 1.0).abs() < 0.05, "{}", fit.b);
    }

    #[test]
    fn recovers_sampled_stretched_exponential() {
        let samples = stretched_samples(100_000, 0.1, 0.7, 17);
        let c = ccdf(&samples).unwrap();
        let fit = fit_stretched_exponential(&c, 100.0).unwrap();
        assert!((fit.b - 0.7).abs() < 0.05, "b = {}", fit.b);
        assert!((fit.mu / 0.1 - 1.0).abs() < 0.2, "mu = {}", fit.mu);
        let half = ccdf(&samples[..50_000]).unwrap();
        let fh = fit_stretched_exponential(&half, 100.0).unwrap();
        assert!((fh.b - fit.b).abs() < 0.1);
    }

    #[test]
    fn duplicating_samples_changes_nothing() {
        let samples = stretched_samples(20_000, 0.1, 0.7, 5);
        let doubled: Vec<f64> = samples.iter().chain(&samples).cloned().collect();
        let a = fit_stretched_exponential(&ccdf(&samples).unwrap(), 100.0).unwrap();
        let b = fit_stretched_exponential(&ccdf(&doubled).unwrap(), 100.0).unwrap();
        assert_eq!(a.b, b.b);
        assert_eq!(a.mu, b.mu);
    }

    #[test]
    fn unit_points_are_excluded_and_short_tails_rejected() {
        let c = Ccdf { lengths: (1..=12).map(|v| v as f64).collect(), survival: vec![1.0; 12], n_samples: 12 };
        assert!(matches!(fit_stretched_exponential(&c, 0.0), Err(DistError::InsufficientTail { got: 0, .. })));
        let c = ccdf(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(fit_stretched_exponential(&c, 100.0), Err(DistError::InsufficientTail { .. })));
    }
}
