//! Real-valued series, their profiles, surrogates and synthetic generators.
//!
//! Every random draw comes from [`ChaCha20Rng`] seeded via
//! `SeedableRng::seed_from_u64`. ChaCha20 is a portable 64-bit-seeded
//! generator, so a `(parameters, seed)` pair reproduces bit-identical output
//! on every platform. RNG state is local to each call.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("parameter {name} = {value} outside {allowed}")]
    ParameterOutOfRange { name: &'static str, value: f64, allowed: &'static str },
}

/// Where a series came from; serialized next to every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Empirical { label: String },
    Shuffled { seed: u64, parent: Box<Provenance> },
    PhaseRandomized { seed: u64, parent: Box<Provenance> },
    Synthetic { generator: String, params: Vec<(String, f64)>, seed: Option<u64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    values: Vec<f64>,
    provenance: Provenance,
}

impl Series {
    /// Wraps `values`, rejecting NaN and infinities.
    pub fn new(values: Vec<f64>, provenance: Provenance) -> Result<Self, SeriesError> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SeriesError::NonFinite(i));
        }
        Ok(Self { values, provenance })
    }

    pub fn empirical(values: Vec<f64>, label: impl Into<String>) -> Result<Self, SeriesError> {
        Self::new(values, Provenance::Empirical { label: label.into() })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub(crate) fn require_len(&self, needed: usize) -> Result<(), SeriesError> {
        if self.values.len() < needed {
            Err(SeriesError::TooShort { needed, got: self.values.len() })
        } else {
            Ok(())
        }
    }
}

/// Cumulative sum of the demeaned series, `L(j) = Σ_{k≤j} (l(k) − ⟨l⟩)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    values: Vec<f64>,
    mean_removed: f64,
}

impl Profile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean_removed(&self) -> f64 {
        self.mean_removed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Builds a profile from already-integrated values. Used by tests and by
    /// callers that detrend something other than a demeaned series.
    pub fn from_raw(values: Vec<f64>) -> Self {
        Self { values, mean_removed: 0.0 }
    }
}

pub fn profile(s: &Series) -> Result<Profile, SeriesError> {
    s.require_len(2)?;
    let mean = s.values.iter().sum::<f64>() / s.len() as f64;
    let mut acc = 0.0;
    let values = s
        .values
        .iter()
        .map(|v| {
            acc += v - mean;
            acc
        })
        .collect();
    Ok(Profile { values, mean_removed: mean })
}

/// Random permutation of the values (Fisher–Yates). Destroys all temporal
/// correlations, keeps the value distribution exactly.
pub fn shuffle_surrogate(s: &Series, seed: u64) -> Series {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut values = s.values.clone();
    values.shuffle(&mut rng);
    Series { values, provenance: Provenance::Shuffled { seed, parent: Box::new(s.provenance.clone()) } }
}

/// Fourier-phase-randomized surrogate.
///
/// Every DFT amplitude is kept and the phases of the bins `1..⌈N/2⌉` are
/// replaced by uniform draws on `[0, 2π)`; bins `N−k` receive the complex
/// conjugate so the inverse transform is real. The DC bin and, for even `N`,
/// the Nyquist bin are left untouched. Linear correlations survive, any
/// nonlinear structure is scrambled.
pub fn phase_randomized_surrogate(s: &Series, seed: u64) -> Result<Series, SeriesError> {
    s.require_len(4)?;
    let n = s.len();
    let mut spectrum: Vec<Complex64> = s.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut spectrum);

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    // k < n - k excludes Nyquist for even n
    for k in 1..n {
        if k >= n - k {
            break;
        }
        let amplitude = spectrum[k].norm();
        let phase = rng.random::<f64>() * 2.0 * PI;
        let z = Complex64::from_polar(amplitude, phase);
        spectrum[k] = z;
        spectrum[n - k] = z.conj();
    }
    planner.plan_fft_inverse(n).process(&mut spectrum);
    let scale = 1.0 / n as f64;
    let values = spectrum.iter().map(|z| z.re * scale).collect();
    Ok(Series { values, provenance: Provenance::PhaseRandomized { seed, parent: Box::new(s.provenance.clone()) } })
}

/// Deterministic binomial multiplicative cascade of length `2^levels`.
///
/// The value at (0-based) index `k` is `p^n (1−p)^(levels−n)` with `n` the
/// number of set bits of `k`, so the values form a normalized measure summing
/// to one. Its generalized Hurst exponent is
/// `h(q) = 1/q − log2(p^q + (1−p)^q)/q`, see [`cascade_hurst`].
pub fn generate_binomial_cascade(p: f64, levels: u32) -> Result<Series, SeriesError> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(SeriesError::ParameterOutOfRange { name: "p", value: p, allowed: "(0, 0.5]" });
    }
    if !(1..=24).contains(&levels) {
        return Err(SeriesError::ParameterOutOfRange { name: "levels", value: levels as f64, allowed: "[1, 24]" });
    }
    let weights: Vec<f64> =
        (0..=levels).map(|ones| p.powi(ones as i32) * (1.0 - p).powi((levels - ones) as i32)).collect();
    let values = (0..1usize << levels).map(|k| weights[k.count_ones() as usize]).collect();
    Ok(Series {
        values,
        provenance: Provenance::Synthetic {
            generator: "binomial_cascade".into(),
            params: vec![("p".into(), p), ("levels".into(), levels as f64)],
            seed: None,
        },
    })
}

/// Analytic `h(q)` of the binomial cascade.
pub fn cascade_hurst(p: f64, q: f64) -> f64 {
    if q == 0.0 {
        // limit q -> 0 of 1/q − log2(p^q + (1−p)^q)/q
        let s = -(p.ln() + (1.0 - p).ln()) / (2.0 * std::f64::consts::LN_2);
        return s;
    }
    1.0 / q - (p.powf(q) + (1.0 - p).powf(q)).log2() / q
}

/// Analytic Hölder exponent `α(q) = τ'(q)` of the binomial cascade, with
/// `τ(q) = −log2(p^q + (1−p)^q)`.
pub fn cascade_alpha(p: f64, q: f64) -> f64 {
    let (a, b) = (p.powf(q), (1.0 - p).powf(q));
    -(a * p.log2() + b * (1.0 - p).log2()) / (a + b)
}

/// Stationary Gaussian series with power spectrum `∝ f^{−(2H−1)}`.
///
/// Spectral synthesis: complex Gaussian coefficients (Rayleigh amplitude,
/// uniform phase) are shaped by `f^{−(2H−1)/2}`, made Hermitian and
/// inverse-transformed. The output is standardized to zero mean and unit
/// variance. Plain power-law shaping slightly biases the exact fGn spectrum
/// near `H → 0` or `H → 1`, which is below the tolerances used here.
pub fn generate_fgn(hurst: f64, n: usize, seed: u64) -> Result<Series, SeriesError> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(SeriesError::ParameterOutOfRange { name: "H", value: hurst, allowed: "(0, 1)" });
    }
    if n < 64 {
        return Err(SeriesError::TooShort { needed: 64, got: n });
    }
    let beta = 2.0 * hurst - 1.0;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..=n / 2 {
        let f = k as f64 / n as f64;
        let amp = f.powf(-beta / 2.0);
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        if 2 * k == n {
            spectrum[k] = Complex64::new(amp * re * std::f64::consts::SQRT_2, 0.0);
        } else {
            let z = Complex64::new(amp * re, amp * im);
            spectrum[k] = z;
            spectrum[n - k] = z.conj();
        }
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(n).process(&mut spectrum);
    let raw: Vec<f64> = spectrum.iter().map(|z| z.re).collect();
    let values = standardize(&raw);
    Ok(Series {
        values,
        provenance: Provenance::Synthetic {
            generator: "fgn_spectral".into(),
            params: vec![("H".into(), hurst), ("n".into(), n as f64)],
            seed: Some(seed),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "snake_case")]
pub enum NoiseDistribution {
    Gaussian,
    /// Inclusive integer range, e.g. fake sentence lengths.
    UniformInteger {
        lo: i64,
        hi: i64,
    },
}

pub fn generate_white_noise(n: usize, seed: u64, dist: NoiseDistribution) -> Result<Series, SeriesError> {
    if n < 2 {
        return Err(SeriesError::TooShort { needed: 2, got: n });
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (values, params): (Vec<f64>, _) = match dist {
        NoiseDistribution::Gaussian => {
            ((0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect(), vec![("n".into(), n as f64)])
        }
        NoiseDistribution::UniformInteger { lo, hi } => {
            if hi < lo {
                return Err(SeriesError::ParameterOutOfRange { name: "hi", value: hi as f64, allowed: "hi >= lo" });
            }
            (
                (0..n).map(|_| rng.random_range(lo..=hi) as f64).collect(),
                vec![("n".into(), n as f64), ("lo".into(), lo as f64), ("hi".into(), hi as f64)],
            )
        }
    };
    Ok(Series {
        values,
        provenance: Provenance::Synthetic { generator: "white_noise".into(), params, seed: Some(seed) },
    })
}

fn standardize(raw: &[f64]) -> Vec<f64> {
    let n = raw.len() as f64;
    let mean = raw.iter().sum::<f64>() / n;
    let var = raw.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    raw.iter().map(|v| (v - mean) / sd).collect()
}
