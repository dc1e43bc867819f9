//! Continuous wavelet coefficient maps `T_ψ(s,k) = s^{-1/2} Σ_j l(j) ψ((j−k)/s)`
//! with the third derivative of a Gaussian as mother wavelet.
//!
//! `ψ` has three vanishing moments, so constant, linear and quadratic trends
//! drop out of the map. Evaluation is direct (no FFT); the wavelet is cut off
//! at `|x| > 8` where it is below `1e-11`. Coefficients whose cut-off support
//! reaches past either end of the series are flagged as inside the cone of
//! influence.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::Series;
use crate::stats::log_space;

/// Half-width of the wavelet support in units of the scale.
pub const SUPPORT: f64 = 8.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveletError {
    #[error("scale {0} must be positive and finite")]
    BadScale(f64),
    #[error("scales must be strictly increasing")]
    UnsortedScales,
    #[error("position {pos} outside series of length {len}")]
    BadPosition { pos: usize, len: usize },
    #[error("series of length {len} too short for scale {scale} (need {needed})")]
    TooShort { len: usize, scale: f64, needed: usize },
}

/// `ψ(x) = d³/dx³ e^{−x²/2} = (3x − x³) e^{−x²/2}`.
pub fn mother_wavelet(x: f64) -> f64 {
    (3.0 * x - x * x * x) * (-0.5 * x * x).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletMap {
    pub scales: Vec<f64>,
    pub positions: Vec<usize>,
    /// `coefficients[si][pi]`.
    pub coefficients: Vec<Vec<f64>>,
    /// `true` where the truncated support leaves the series.
    pub cone_of_influence: Vec<Vec<bool>>,
}

impl WaveletMap {
    pub fn max_abs(&self) -> f64 {
        self.coefficients.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// 50 log-spaced scales in `[4, len/10]`.
pub fn default_scales(len: usize) -> Vec<f64> {
    let hi = len as f64 / 10.0;
    if hi < 4.0 {
        return Vec::new();
    }
    log_space(4.0, hi, 50)
}

/// Evaluates the map on the given `scales` × `positions` grid. Positions are
/// 0-based sample indices.
pub fn wavelet_map(series: &Series, scales: &[f64], positions: &[usize]) -> Result<WaveletMap, WaveletError> {
    if let Some(&bad) = scales.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(WaveletError::BadScale(bad));
    }
    if scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(WaveletError::UnsortedScales);
    }
    let len = series.len();
    if let Some(&s0) = scales.first() {
        let needed = (4.0 * s0).ceil() as usize;
        if len < needed {
            return Err(WaveletError::TooShort { len, scale: s0, needed });
        }
    }
    if let Some(&pos) = positions.iter().find(|&&p| p >= len) {
        return Err(WaveletError::BadPosition { pos, len });
    }
    let v = series.values();
    let mut coefficients = Vec::with_capacity(scales.len());
    let mut cone = Vec::with_capacity(scales.len());
    for &s in scales {
        let reach = (SUPPORT * s).floor() as usize;
        let norm = 1.0 / s.sqrt();
        let mut row = Vec::with_capacity(positions.len());
        let mut flags = Vec::with_capacity(positions.len());
        for &k in positions {
            let lo = k.saturating_sub(reach);
            let hi = (k + reach).min(len - 1);
            let mut acc = 0.0;
            for (j, &x) in v.iter().enumerate().take(hi + 1).skip(lo) {
                acc += x * mother_wavelet((j as f64 - k as f64) / s);
            }
            row.push(norm * acc);
            flags.push(k < reach || k + reach > len - 1);
        }
        coefficients.push(row);
        cone.push(flags);
    }
    Ok(WaveletMap { scales: scales.to_vec(), positions: positions.to_vec(), coefficients, cone_of_influence: cone })
}
