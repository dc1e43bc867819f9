//! Periodogram of a series and `S(f) ∝ 1/f^β` scaling fits.
//!
//! The spectrum is the plain modulus-squared DFT, `S(f_k) = |Σ_j l(j) e^{−2πi f_k j}|²`
//! at `f_k = k/N`, `k = 1..⌊N/2⌋`, in cycles per sample (per sentence for
//! sentence-length series). No tapering is applied unless [`Window::Hann`]
//! is requested.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::Series;
use crate::stats::{self, FitError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("series too short for a spectrum: need {needed}, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("only {got} spectrum points in [{f_lo}, {f_hi}], need at least {needed}")]
    InsufficientPoints { got: usize, needed: usize, f_lo: f64, f_hi: f64 },
    #[error("invalid frequency range [{f_lo}, {f_hi}]")]
    InvalidRange { f_lo: f64, f_hi: f64 },
    #[error("non-positive power at f = {0}; cannot take logarithms")]
    NonPositivePower(f64),
    #[error("degenerate binning: {0}")]
    DegenerateBins(String),
    #[error("need at least {needed} spectra, got {got}")]
    TooFewSpectra { needed: usize, got: usize },
    #[error("frequency supports of the spectra do not overlap")]
    EmptyIntersection,
}

impl From<FitError> for SpectralError {
    fn from(e: FitError) -> Self {
        SpectralError::DegenerateBins(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    #[default]
    None,
    Hann,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSpectrum {
    pub freqs: Vec<f64>,
    pub power: Vec<f64>,
    pub n_samples: usize,
    /// `S(0)`; kept for Parseval checks, never part of a fit.
    pub dc_power: f64,
}

impl PowerSpectrum {
    /// Sum of `S` over all `N` DFT bins, reconstructed from the positive half.
    pub fn full_power_sum(&self) -> f64 {
        let n = self.n_samples;
        let mut total = self.dc_power;
        for (i, &p) in self.power.iter().enumerate() {
            let k = i + 1;
            total += if 2 * k == n { p } else { 2.0 * p };
        }
        total
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// Default fit range: whole positive support without its top half-decade,
    /// where text spectra tend to flatten.
    pub fn default_fit_range(&self) -> (f64, f64) {
        let lo = self.freqs.first().copied().unwrap_or(0.0);
        let hi = self.freqs.last().copied().unwrap_or(0.0) / 10f64.sqrt();
        (lo, hi)
    }
}

pub fn power_spectrum(s: &Series) -> Result<PowerSpectrum, SpectralError> {
    power_spectrum_windowed(s, Window::None)
}

pub fn power_spectrum_windowed(s: &Series, window: Window) -> Result<PowerSpectrum, SpectralError> {
    let n = s.len();
    if n < 8 {
        return Err(SpectralError::TooShort { needed: 8, got: n });
    }
    let mut buf: Vec<Complex64> = match window {
        Window::None => s.values().iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        Window::Hann => s
            .values()
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let w = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * j as f64 / (n - 1) as f64).cos();
                Complex64::new(v * w, 0.0)
            })
            .collect(),
    };
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    let freqs = (1..=half).map(|k| k as f64 / n as f64).collect();
    let power = (1..=half).map(|k| buf[k].norm_sqr()).collect();
    Ok(PowerSpectrum { freqs, power, n_samples: n, dc_power: buf[0].norm_sqr() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFit {
    pub beta: f64,
    pub sigma_beta: f64,
    pub fit_range: (f64, f64),
    /// e.g. `"log-binned, 20 bins/decade, geometric mean"`.
    pub binning: String,
    pub r_squared: f64,
    /// Number of occupied bins that entered the regression.
    pub n_bins: usize,
    /// `ln S` intercept of the fitted line at `ln f = 0`.
    pub log_intercept: f64,
}

/// Fits `S ∝ f^{−β}` over `[f_lo, f_hi]`.
///
/// Points are grouped into `bins_per_decade` logarithmic bins anchored at
/// `f = 1`; each occupied bin contributes the geometric means of its `f` and
/// `S` values. `β` is minus the OLS slope of `ln S` on `ln f`, `sigma_beta`
/// its standard error. `bins_per_decade = 0` disables binning.
pub fn fit_beta(ps: &PowerSpectrum, range: (f64, f64), bins_per_decade: usize) -> Result<SpectrumFit, SpectralError> {
    let (f_lo, f_hi) = range;
    if !(f_lo > 0.0 && f_hi > f_lo) {
        return Err(SpectralError::InvalidRange { f_lo, f_hi });
    }
    // half-ulp slack so k/N endpoints passed back in are kept
    let (lo, hi) = (f_lo * (1.0 - 1e-12), f_hi * (1.0 + 1e-12));
    let mut points = Vec::new();
    for (&f, &p) in ps.freqs.iter().zip(&ps.power) {
        if f >= lo && f <= hi {
            if !(p > 0.0) {
                return Err(SpectralError::NonPositivePower(f));
            }
            points.push((f.ln(), p.ln()));
        }
    }
    if points.len() < 8 {
        return Err(SpectralError::InsufficientPoints { got: points.len(), needed: 8, f_lo, f_hi });
    }

    let (x, y, binning) = if bins_per_decade == 0 {
        let (x, y): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        (x, y, "unbinned".to_string())
    } else {
        let width = std::f64::consts::LN_10 / bins_per_decade as f64;
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut current: Option<i64> = None;
        let (mut sx, mut sy, mut cnt) = (0.0, 0.0, 0usize);
        for (lf, ls) in points {
            let bin = (lf / width).floor() as i64;
            if current != Some(bin) {
                if cnt > 0 {
                    x.push(sx / cnt as f64);
                    y.push(sy / cnt as f64);
                }
                current = Some(bin);
                sx = 0.0;
                sy = 0.0;
                cnt = 0;
            }
            sx += lf;
            sy += ls;
            cnt += 1;
        }
        if cnt > 0 {
            x.push(sx / cnt as f64);
            y.push(sy / cnt as f64);
        }
        (x, y, format!("log-binned, {bins_per_decade} bins/decade, geometric mean"))
    };
    if x.len() < 3 {
        return Err(SpectralError::DegenerateBins(format!(
            "only {} occupied bins; widen the range or use more bins per decade",
            x.len()
        )));
    }
    let fit = stats::ols(&x, &y)?;
    Ok(SpectrumFit {
        beta: -fit.slope,
        sigma_beta: fit.slope_stderr,
        fit_range: (f_lo, f_hi),
        binning,
        r_squared: fit.r_squared,
        n_bins: x.len(),
        log_intercept: fit.intercept,
    })
}

/// Corpus-average spectrum.
///
/// Each spectrum is normalized to unit total power over its positive
/// frequencies, linearly interpolated in `(ln f, ln S)` onto `grid_bins`
/// log-spaced frequencies spanning the intersection of all supports, and the
/// spectra are averaged geometrically point by point.
pub fn average_spectrum(spectra: &[PowerSpectrum], grid_bins: usize) -> Result<PowerSpectrum, SpectralError> {
    if spectra.len() < 2 {
        return Err(SpectralError::TooFewSpectra { needed: 2, got: spectra.len() });
    }
    resampled_geometric_mean(spectra, grid_bins)
}

/// Normalizes a single spectrum and puts it on the log grid that
/// [`average_spectrum`] would use for it alone.
pub fn resample_normalized(ps: &PowerSpectrum, grid_bins: usize) -> Result<PowerSpectrum, SpectralError> {
    resampled_geometric_mean(std::slice::from_ref(ps), grid_bins)
}

fn resampled_geometric_mean(spectra: &[PowerSpectrum], grid_bins: usize) -> Result<PowerSpectrum, SpectralError> {
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for ps in spectra {
        if ps.is_empty() {
            return Err(SpectralError::EmptyIntersection);
        }
        lo = lo.max(ps.freqs[0]);
        hi = hi.min(*ps.freqs.last().unwrap());
    }
    if !(hi > lo) || grid_bins < 2 {
        return Err(SpectralError::EmptyIntersection);
    }
    let grid = stats::log_space(lo, hi, grid_bins);
    let mut acc = vec![0.0; grid.len()];
    for ps in spectra {
        let total: f64 = ps.power.iter().sum();
        let lf: Vec<f64> = ps.freqs.iter().map(|f| f.ln()).collect();
        let mut ls = Vec::with_capacity(ps.power.len());
        for (&f, &p) in ps.freqs.iter().zip(&ps.power) {
            if !(p > 0.0) {
                return Err(SpectralError::NonPositivePower(f));
            }
            ls.push((p / total).ln());
        }
        for (a, &g) in acc.iter_mut().zip(&grid) {
            *a += interp_sorted(&lf, &ls, g.ln());
        }
    }
    let m = spectra.len() as f64;
    Ok(PowerSpectrum {
        freqs: grid,
        power: acc.into_iter().map(|a| (a / m).exp()).collect(),
        n_samples: spectra.iter().map(|s| s.n_samples).min().unwrap_or(0),
        dc_power: 0.0,
    })
}

fn interp_sorted(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&v| v < x);
    if i == 0 {
        return ys[0];
    }
    if i >= xs.len() {
        return ys[xs.len() - 1];
    }
    if xs[i] == x {
        return ys[i];
    }
    let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    ys[i - 1] + t * (ys[i] - ys[i - 1])
}
