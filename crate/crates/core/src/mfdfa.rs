//! Multifractal detrended fluctuation analysis.
//!
//! Pipeline: profile `L(j)` → `2M_s` segments of length `s` taken from both
//! ends of the profile → per-segment detrended variance `F²(ν,s)` →
//! fluctuation function `F_q(s)` → generalized Hurst exponents `h(q)` from
//! `F_q(s) ~ s^{h(q)}` → singularity spectrum `α = h + q h'(q)`,
//! `f(α) = q[α − h(q)] + 1`.
//!
//! `F²(ν,s)` is the mean of the *squared* residuals after removing an
//! order-`m` least-squares polynomial, the usual MFDFA definition that the
//! `[F²]^{q/2}` moment presumes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{profile, Profile, Series, SeriesError};
use crate::stats::{self, log_space_int};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MfdfaError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("scale {s} too small for detrending order {m}: need s >= {min}")]
    DegenerateFit { s: usize, m: usize, min: usize },
    #[error("segment {nu} of scale {s} lies outside the profile (M_s = {segments})")]
    SegmentOutOfRange { nu: usize, s: usize, segments: usize },
    #[error("zero detrended variance in segment {nu} at scale {s}; q <= 0 moments are undefined")]
    SingularSegment { nu: usize, s: usize },
    #[error("series of length {len} is too short for scale {max_scale} (need length >= {needed})")]
    ScaleRange { len: usize, max_scale: usize, needed: usize },
    #[error("scales must be non-empty and strictly increasing")]
    BadScaleGrid,
    #[error("q grid must be non-empty with finite values")]
    BadQGrid,
    #[error("only {got} scales inside fit range [{lo}, {hi}], need {needed}")]
    InsufficientScales { got: usize, needed: usize, lo: usize, hi: usize },
    #[error("q grid is not uniform (step {0} differs at index {1})")]
    NonUniformQGrid(f64, usize),
    #[error("need at least {needed} q values, got {got}")]
    TooFewQ { needed: usize, got: usize },
    #[error("q = 2 is not on the q grid")]
    MissingQ2,
}

/// Default q grid: −4 to 4 in steps of 0.25, exactly representable.
pub fn default_q_grid() -> Vec<f64> {
    q_grid(-4.0, 4.0, 0.25)
}

/// Uniform grid `q_min, q_min + step, …, q_max` built from integer multiples
/// so that `0` and `2` land exactly when they are multiples of `step`.
pub fn q_grid(q_min: f64, q_max: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && q_max >= q_min, "q_grid: bad bounds");
    let lo = (q_min / step).round() as i64;
    let hi = (q_max / step).round() as i64;
    (lo..=hi).map(|i| i as f64 * step).collect()
}

/// About 30 log-spaced integer scales in `[20, len/5]`.
pub fn default_scales(len: usize) -> Vec<usize> {
    scale_grid(20, len / 5, 30)
}

pub fn scale_grid(s_min: usize, s_max: usize, count: usize) -> Vec<usize> {
    log_space_int(s_min, s_max, count)
}

/// Relative residual power below which a segment counts as an exact
/// polynomial (about 1e-10 in amplitude).
const POLY_ROUNDOFF: f64 = 1e-20;

/// Orthonormal basis of polynomials up to degree `m` sampled at `s` points,
/// built by modified Gram–Schmidt on centered, scaled monomials.
#[derive(Debug, Clone)]
struct PolyBasis {
    s: usize,
    vectors: Vec<Vec<f64>>,
}

impl PolyBasis {
    fn new(s: usize, m: usize) -> Self {
        let c = (s as f64 - 1.0) / 2.0;
        let half = c.max(1.0);
        let x: Vec<f64> = (0..s).map(|k| (k as f64 - c) / half).collect();
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        for d in 0..=m {
            let mut v: Vec<f64> = x.iter().map(|xi| xi.powi(d as i32)).collect();
            // two passes keep the basis orthogonal to machine precision
            for _ in 0..2 {
                for b in &vectors {
                    let dot: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
                    v.iter_mut().zip(b).for_each(|(a, c)| *a -= dot * c);
                }
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
            vectors.push(v);
        }
        Self { s, vectors }
    }

    /// Mean squared residual of `y` after projecting out the basis.
    ///
    /// Residuals at round-off level relative to the segment's own magnitude
    /// are reported as exactly zero: the segment is a polynomial of order `m`.
    fn residual_variance(&self, y: &[f64], scratch: &mut Vec<f64>) -> f64 {
        debug_assert_eq!(y.len(), self.s);
        scratch.clear();
        scratch.extend_from_slice(y);
        for b in &self.vectors {
            let dot: f64 = scratch.iter().zip(b).map(|(a, c)| a * c).sum();
            scratch.iter_mut().zip(b).for_each(|(a, c)| *a -= dot * c);
        }
        let var = scratch.iter().map(|r| r * r).sum::<f64>() / self.s as f64;
        let magnitude = y.iter().map(|v| v * v).sum::<f64>() / self.s as f64;
        if var <= POLY_ROUNDOFF * magnitude {
            0.0
        } else {
            var
        }
    }
}

fn check_order(s: usize, m: usize) -> Result<(), MfdfaError> {
    if s < m + 2 {
        return Err(MfdfaError::DegenerateFit { s, m, min: m + 2 });
    }
    Ok(())
}

/// Start offset (0-based) of segment `nu` (1-based, `1..=2M_s`).
///
/// Segments `1..=M_s` tile the profile from its start, `M_s+1..=2M_s` from
/// its end, so every point is covered even when `s` does not divide `N`.
fn segment_start(len: usize, s: usize, nu: usize) -> Option<usize> {
    let segments = len / s;
    if nu == 0 || nu > 2 * segments {
        return None;
    }
    Some(if nu <= segments { (nu - 1) * s } else { len - (nu - segments) * s })
}

/// Detrended variance `F²(ν, s)` of segment `nu` (1-based) with an order-`m`
/// polynomial trend.
pub fn detrended_variance(p: &Profile, nu: usize, s: usize, m: usize) -> Result<f64, MfdfaError> {
    check_order(s, m)?;
    let start =
        segment_start(p.len(), s, nu).ok_or(MfdfaError::SegmentOutOfRange { nu, s, segments: p.len() / s.max(1) })?;
    let basis = PolyBasis::new(s, m);
    Ok(basis.residual_variance(&p.values()[start..start + s], &mut Vec::with_capacity(s)))
}

/// All `2M_s` detrended variances at scale `s`, forward segments first.
pub fn segment_variances(p: &Profile, s: usize, m: usize) -> Result<Vec<f64>, MfdfaError> {
    check_order(s, m)?;
    let len = p.len();
    let segments = len / s;
    let basis = PolyBasis::new(s, m);
    let mut scratch = Vec::with_capacity(s);
    Ok((1..=2 * segments)
        .map(|nu| {
            let start = segment_start(len, s, nu).expect("segment in range");
            basis.residual_variance(&p.values()[start..start + s], &mut scratch)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSurface {
    pub q_values: Vec<f64>,
    pub scales: Vec<usize>,
    /// `f[qi][si] = F_q(s)`.
    pub f: Vec<Vec<f64>>,
    pub detrend_order: usize,
    /// `2M_s` per scale.
    pub n_segments: Vec<usize>,
    pub series_len: usize,
}

impl FluctuationSurface {
    pub fn column(&self, qi: usize) -> &[f64] {
        &self.f[qi]
    }
}

/// `F_q(s) = {(1/2M_s) Σ_ν [F²(ν,s)]^{q/2}}^{1/q}`, with the logarithmic
/// average `exp{(1/4M_s) Σ_ν ln F²(ν,s)}` at `q = 0`.
///
/// The moments are evaluated in log space so large `|q|` cannot overflow.
/// Scales are processed in parallel; each scale's reduction runs in fixed
/// segment order, so the result does not depend on scheduling.
pub fn fluctuation_surface(
    series: &Series,
    q_values: &[f64],
    scales: &[usize],
    m: usize,
) -> Result<FluctuationSurface, MfdfaError> {
    let prof = profile(series)?;
    fluctuation_surface_of_profile(&prof, q_values, scales, m)
}

/// [`fluctuation_surface`] for an already integrated profile.
pub fn fluctuation_surface_of_profile(
    prof: &Profile,
    q_values: &[f64],
    scales: &[usize],
    m: usize,
) -> Result<FluctuationSurface, MfdfaError> {
    if q_values.is_empty() || q_values.iter().any(|q| !q.is_finite()) {
        return Err(MfdfaError::BadQGrid);
    }
    if scales.is_empty() || scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MfdfaError::BadScaleGrid);
    }
    if scales[0] < m + 3 {
        return Err(MfdfaError::DegenerateFit { s: scales[0], m, min: m + 3 });
    }
    let max_scale = *scales.last().unwrap();
    if prof.len() < 4 * max_scale {
        return Err(MfdfaError::ScaleRange { len: prof.len(), max_scale, needed: 4 * max_scale });
    }
    let need_positive = q_values.iter().any(|&q| q <= 0.0);

    let per_scale: Vec<Result<Vec<f64>, MfdfaError>> = scales
        .par_iter()
        .map(|&s| {
            let vars = segment_variances(prof, s, m)?;
            let logs: Vec<f64> = vars.iter().map(|v| v.ln()).collect();
            if need_positive {
                if let Some(i) = vars.iter().position(|&v| !(v > 0.0)) {
                    return Err(MfdfaError::SingularSegment { nu: i + 1, s });
                }
            }
            Ok(q_values.iter().map(|&q| q_moment(&logs, q)).collect())
        })
        .collect();

    let mut f = vec![Vec::with_capacity(scales.len()); q_values.len()];
    for col in per_scale {
        for (qi, v) in col?.into_iter().enumerate() {
            f[qi].push(v);
        }
    }
    Ok(FluctuationSurface {
        q_values: q_values.to_vec(),
        scales: scales.to_vec(),
        f,
        detrend_order: m,
        n_segments: scales.iter().map(|s| 2 * (prof.len() / s)).collect(),
        series_len: prof.len(),
    })
}

fn q_moment(log_f2: &[f64], q: f64) -> f64 {
    let n = log_f2.len() as f64;
    if q == 0.0 {
        return (log_f2.iter().sum::<f64>() / (2.0 * n)).exp();
    }
    // log-sum-exp of (q/2) ln F², skipping zero variances (only allowed for q > 0)
    let terms = log_f2.iter().map(|l| 0.5 * q * l).filter(|t| t.is_finite());
    let peak = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return 0.0;
    }
    let sum: f64 = terms.map(|t| (t - peak).exp()).sum();
    ((peak + sum.ln() - n.ln()) / q).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedHurst {
    pub q_values: Vec<f64>,
    pub h: Vec<f64>,
    pub h_stderr: Vec<f64>,
    pub fit_scale_range: (usize, usize),
    /// Scales actually used in the regressions.
    pub n_scales: usize,
    /// `false` when `h(q)` increases somewhere, which no multifractal
    /// measure allows; reported, not rejected.
    pub monotone: bool,
}

impl GeneralizedHurst {
    pub fn at(&self, q: f64) -> Option<f64> {
        self.q_values.iter().position(|&v| (v - q).abs() < 1e-9).map(|i| self.h[i])
    }
}

/// Per-q OLS of `ln F_q(s)` on `ln s` over scales in `[s_lo, s_hi]`.
pub fn fit_generalized_hurst(
    surf: &FluctuationSurface,
    fit_range: (usize, usize),
) -> Result<GeneralizedHurst, MfdfaError> {
    let (lo, hi) = fit_range;
    let idx: Vec<usize> = (0..surf.scales.len()).filter(|&i| surf.scales[i] >= lo && surf.scales[i] <= hi).collect();
    if idx.len() < 6 {
        return Err(MfdfaError::InsufficientScales { got: idx.len(), needed: 6, lo, hi });
    }
    let x: Vec<f64> = idx.iter().map(|&i| (surf.scales[i] as f64).ln()).collect();
    let mut h = Vec::with_capacity(surf.q_values.len());
    let mut h_stderr = Vec::with_capacity(surf.q_values.len());
    for row in &surf.f {
        let y: Vec<f64> = idx.iter().map(|&i| row[i].ln()).collect();
        let fit =
            stats::ols(&x, &y).map_err(|_| MfdfaError::InsufficientScales { got: idx.len(), needed: 6, lo, hi })?;
        h.push(fit.slope);
        h_stderr.push(fit.slope_stderr);
    }
    let mut order: Vec<usize> = (0..h.len()).collect();
    order.sort_by(|&a, &b| surf.q_values[a].total_cmp(&surf.q_values[b]));
    let monotone = order.windows(2).all(|w| h[w[1]] <= h[w[0]] + 1e-9);
    if !monotone {
        log::debug!("h(q) is not non-increasing in q over scales [{lo}, {hi}]");
    }
    Ok(GeneralizedHurst {
        q_values: surf.q_values.clone(),
        h,
        h_stderr,
        fit_scale_range: (lo, hi),
        n_scales: idx.len(),
        monotone,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularitySpectrum {
    pub q_values: Vec<f64>,
    pub alphas: Vec<f64>,
    pub f_values: Vec<f64>,
    pub delta_alpha: f64,
    pub alpha_at_peak: f64,
}

/// Legendre transform of `h(q)` by finite differences: central in the
/// interior, one-sided at both ends of the (uniform) q grid.
pub fn singularity_spectrum(gh: &GeneralizedHurst) -> Result<SingularitySpectrum, MfdfaError> {
    let q = &gh.q_values;
    let n = q.len();
    if n < 5 {
        return Err(MfdfaError::TooFewQ { needed: 5, got: n });
    }
    let step = q[1] - q[0];
    if !(step > 0.0) {
        return Err(MfdfaError::NonUniformQGrid(step, 1));
    }
    for i in 2..n {
        if ((q[i] - q[i - 1]) - step).abs() > 1e-9 * step.max(1.0) {
            return Err(MfdfaError::NonUniformQGrid(step, i));
        }
    }
    let h = &gh.h;
    let dh: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => (h[1] - h[0]) / step,
            i if i == n - 1 => (h[n - 1] - h[n - 2]) / step,
            i => (h[i + 1] - h[i - 1]) / (2.0 * step),
        })
        .collect();
    let alphas: Vec<f64> = (0..n).map(|i| h[i] + q[i] * dh[i]).collect();
    let f_values: Vec<f64> = (0..n).map(|i| q[i] * (alphas[i] - h[i]) + 1.0).collect();
    let amax = alphas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let amin = alphas.iter().cloned().fold(f64::INFINITY, f64::min);
    let peak = (0..n).fold(0, |b, i| if f_values[i] > f_values[b] { i } else { b });
    Ok(SingularitySpectrum {
        q_values: q.clone(),
        alphas: alphas.clone(),
        f_values,
        delta_alpha: amax - amin,
        alpha_at_peak: alphas[peak],
    })
}

/// The classical Hurst exponent, `h(2)`.
pub fn hurst_exponent(gh: &GeneralizedHurst) -> Result<f64, MfdfaError> {
    gh.at(2.0).ok_or(MfdfaError::MissingQ2)
}

/// `β = 2H − 1` linking the Hurst exponent to the spectral exponent.
pub fn beta_from_hurst(hurst: f64) -> f64 {
    2.0 * hurst - 1.0
}

/// Parameters of one MFDFA run; `None` fields take the data-dependent
/// defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfdfaParams {
    pub q_values: Vec<f64>,
    pub scales: Option<Vec<usize>>,
    pub detrend_order: usize,
    pub fit_range: Option<(usize, usize)>,
}

impl Default for MfdfaParams {
    fn default() -> Self {
        Self { q_values: default_q_grid(), scales: None, detrend_order: 2, fit_range: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfdfaResult {
    pub surface: FluctuationSurface,
    pub hurst: GeneralizedHurst,
    pub spectrum: SingularitySpectrum,
}

impl MfdfaResult {
    /// `h(2)` when the grid has it.
    pub fn h2(&self) -> Option<f64> {
        self.hurst.at(2.0)
    }
}

/// Surface → `h(q)` → `f(α)` in one call.
pub fn analyze(series: &Series, params: &MfdfaParams) -> Result<MfdfaResult, MfdfaError> {
    let scales = params.scales.clone().unwrap_or_else(|| default_scales(series.len()));
    if scales.is_empty() {
        return Err(MfdfaError::ScaleRange { len: series.len(), max_scale: 20, needed: 100 });
    }
    let surface = fluctuation_surface(series, &params.q_values, &scales, params.detrend_order)?;
    let range = params.fit_range.unwrap_or((scales[0], *scales.last().unwrap()));
    let hurst = fit_generalized_hurst(&surface, range)?;
    let spectrum = singularity_spectrum(&hurst)?;
    Ok(MfdfaResult { surface, hurst, spectrum })
}

/// Range of `Δα` seen on shuffled surrogates: the lower edge is their mean,
/// the upper edge their maximum. A text whose `Δα` exceeds `upper` shows
/// multifractality beyond what its value distribution alone produces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurrogateBand {
    pub lower: f64,
    pub upper: f64,
    pub n: usize,
}

impl SurrogateBand {
    pub fn from_deltas(deltas: &[f64]) -> Option<Self> {
        if deltas.is_empty() {
            return None;
        }
        let upper = deltas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Some(Self { lower: stats::mean(deltas), upper, n: deltas.len() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{generate_binomial_cascade, generate_fgn, generate_white_noise, NoiseDistribution};
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    /// Independent least-squares oracle on raw (unscaled) monomials via SVD.
    fn oracle_variance(y: &[f64], m: usize) -> f64 {
        let s = y.len();
        let a = DMatrix::from_fn(s, m + 1, |r, c| ((r + 1) as f64).powi(c as i32));
        let b = DVector::from_column_slice(y);
        let coef = a.clone().svd(true, true).solve(&b, 1e-14).unwrap();
        let r = b - a * coef;
        r.iter().map(|v| v * v).sum::<f64>() / s as f64
    }

    #[test]
    fn quadratic_segment_is_annihilated() {
        let vals: Vec<f64> = (0..40).map(|k| 3.0 - 2.0 * k as f64 + 0.5 * (k * k) as f64).collect();
        let p = Profile::from_raw(vals);
        let v = detrended_variance(&p, 1, 20, 2).unwrap();
        assert!(v < 1e-20, "{v}");
        let v2 = detrended_variance(&p, 3, 20, 2).unwrap();
        assert!(v2 < 1e-20, "{v2}");
    }

    #[test]
    fn order_zero_is_plain_variance() {
        let vals = vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0];
        let p = Profile::from_raw(vals.clone());
        let v = detrended_variance(&p, 1, 6, 0).unwrap();
        assert!((v - stats::variance(&vals)).abs() < 1e-15);
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn matches_svd_oracle() {
        let s = generate_white_noise(400, 6, NoiseDistribution::Gaussian).unwrap();
        let p = profile(&s).unwrap();
        for &(scale, m) in &[(20usize, 1usize), (33, 2), (57, 3), (100, 2)] {
            let segs = p.len() / scale;
            for nu in [1, segs, segs + 1, 2 * segs] {
                let got = detrended_variance(&p, nu, scale, m).unwrap();
                let start = segment_start(p.len(), scale, nu).unwrap();
                let want = oracle_variance(&p.values()[start..start + scale], m);
                assert!((got - want).abs() <= 1e-10 * want, "s {scale} m {m} nu {nu}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn both_end_segmentation() {
        // N = 10, s = 4: forward [0,4) [4,8), backward [6,10) [2,6)
        assert_eq!(segment_start(10, 4, 1), Some(0));
        assert_eq!(segment_start(10, 4, 2), Some(4));
        assert_eq!(segment_start(10, 4, 3), Some(6));
        assert_eq!(segment_start(10, 4, 4), Some(2));
        assert_eq!(segment_start(10, 4, 5), None);
        assert_eq!(segment_start(10, 4, 0), None);
    }

    #[test]
    fn detrended_variance_errors() {
        let p = Profile::from_raw((0..50).map(|v| v as f64).collect());
        assert!(matches!(detrended_variance(&p, 1, 3, 2), Err(MfdfaError::DegenerateFit { .. })));
        assert!(matches!(detrended_variance(&p, 11, 10, 2), Err(MfdfaError::SegmentOutOfRange { .. })));
    }

    #[test]
    fn q2_is_classic_dfa() {
        let s = generate_fgn(0.7, 4096, 1).unwrap();
        let p = profile(&s).unwrap();
        let scales = [20usize, 40, 80, 160];
        let surf = fluctuation_surface(&s, &[2.0], &scales, 2).unwrap();
        for (si, &sc) in scales.iter().enumerate() {
            let v = segment_variances(&p, sc, 2).unwrap();
            let dfa = (v.iter().sum::<f64>() / v.len() as f64).sqrt();
            assert!((surf.f[0][si] - dfa).abs() <= 1e-12 * dfa);
        }
    }

    #[test]
    fn q0_is_log_average() {
        let s = generate_fgn(0.6, 2048, 2).unwrap();
        let p = profile(&s).unwrap();
        let surf = fluctuation_surface(&s, &[0.0], &[50], 2).unwrap();
        let v = segment_variances(&p, 50, 2).unwrap();
        let want = (v.iter().map(|x| x.ln()).sum::<f64>() / (2.0 * v.len() as f64)).exp();
        assert!((surf.f[0][0] - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn surface_errors() {
        let s = generate_fgn(0.6, 256, 2).unwrap();
        assert!(matches!(fluctuation_surface(&s, &[2.0], &[20, 80], 2), Err(MfdfaError::ScaleRange { .. })));
        assert_eq!(fluctuation_surface(&s, &[2.0], &[30, 20], 2), Err(MfdfaError::BadScaleGrid));
        assert_eq!(fluctuation_surface(&s, &[], &[20], 2), Err(MfdfaError::BadQGrid));
        assert!(matches!(fluctuation_surface(&s, &[2.0], &[4, 20], 2), Err(MfdfaError::DegenerateFit { .. })));
        // a piecewise-quadratic profile gives zero variance segments
        let lin = Series::empirical((0..400).map(|k| k as f64).collect(), "lin").unwrap();
        assert!(matches!(
            fluctuation_surface(&lin, &[-2.0, 2.0], &[20, 40], 2),
            Err(MfdfaError::SingularSegment { s: 20, .. })
        ));
        assert!(fluctuation_surface(&lin, &[1.0, 2.0], &[20, 40], 2).is_ok());
    }

    #[test]
    fn exact_power_surface_gives_constant_h() {
        let scales: Vec<usize> = (1..=10).map(|i| 10 * i).collect();
        let q = default_q_grid();
        let f = q.iter().map(|_| scales.iter().map(|&s| (s as f64).powf(0.6)).collect()).collect();
        let surf = FluctuationSurface {
            q_values: q.clone(),
            scales: scales.clone(),
            f,
            detrend_order: 2,
            n_segments: vec![2; 10],
            series_len: 1000,
        };
        let gh = fit_generalized_hurst(&surf, (10, 100)).unwrap();
        assert!(gh.h.iter().all(|h| (h - 0.6).abs() < 1e-12));
        assert!(matches!(fit_generalized_hurst(&surf, (10, 50)), Err(MfdfaError::InsufficientScales { got: 5, .. })));
        let sp = singularity_spectrum(&gh).unwrap();
        assert!(sp.delta_alpha < 1e-10);
        assert!(sp.alphas.iter().all(|a| (a - 0.6).abs() < 1e-10));
        assert!(sp.f_values.iter().all(|f| (f - 1.0).abs() < 1e-9));
        assert!((hurst_exponent(&gh).unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn singularity_spectrum_of_analytic_cascade() {
        let p = 0.3;
        let q = default_q_grid();
        let h: Vec<f64> = q.iter().map(|&v| crate::series::cascade_hurst(p, v)).collect();
        let gh = GeneralizedHurst {
            q_values: q.clone(),
            h,
            h_stderr: vec![0.0; q.len()],
            fit_scale_range: (0, 0),
            n_scales: 0,
            monotone: true,
        };
        let sp = singularity_spectrum(&gh).unwrap();
        // finite differences approximate tau'(q) at the grid points
        for (i, &qv) in q.iter().enumerate().skip(1).take(q.len() - 2) {
            let want = crate::series::cascade_alpha(p, qv);
            assert!((sp.alphas[i] - want).abs() < 0.01, "q {qv}: {} vs {want}", sp.alphas[i]);
        }
        let i0 = q.iter().position(|&v| v == 0.0).unwrap();
        assert!((sp.f_values[i0] - 1.0).abs() < 1e-12);
        assert!(sp.f_values.iter().all(|&f| f <= 1.0 + 1e-9));
        assert!(sp.delta_alpha > 1.0 && sp.delta_alpha < 0.7f64.log2().abs() + 0.3f64.log2().abs());
    }

    #[test]
    fn singularity_spectrum_errors() {
        let mk = |q: Vec<f64>| GeneralizedHurst {
            h: vec![0.5; q.len()],
            h_stderr: vec![0.0; q.len()],
            q_values: q,
            fit_scale_range: (0, 0),
            n_scales: 0,
            monotone: true,
        };
        assert!(matches!(singularity_spectrum(&mk(vec![0.0, 1.0, 2.0])), Err(MfdfaError::TooFewQ { .. })));
        assert!(matches!(
            singularity_spectrum(&mk(vec![0.0, 1.0, 2.0, 3.5, 4.0])),
            Err(MfdfaError::NonUniformQGrid(_, 3))
        ));
        assert_eq!(hurst_exponent(&mk(vec![0.0, 1.0, 3.0])), Err(MfdfaError::MissingQ2));
    }

    #[test]
    fn series_reversal_is_close() {
        // series reversal shifts the profile by one sample: equal up to O(1/s)
        let s = generate_fgn(0.65, 4000, 6).unwrap();
        let rev = Series::empirical(s.values().iter().rev().cloned().collect(), "rev").unwrap();
        let scales = [20usize, 50, 200, 800];
        let a = fluctuation_surface(&s, &[2.0], &scales, 2).unwrap();
        let b = fluctuation_surface(&rev, &[2.0], &scales, 2).unwrap();
        for (x, y) in a.f[0].iter().zip(&b.f[0]) {
            assert!((x - y).abs() < 0.1 * x);
        }
    }

    #[test]
    fn beta_bridge() {
        assert_eq!(beta_from_hurst(0.5), 0.0);
        assert_eq!(beta_from_hurst(0.75), 0.5);
        assert_eq!(beta_from_hurst(0.25), -0.5);
    }

    #[test]
    fn grids() {
        let q = default_q_grid();
        assert_eq!(q.len(), 33);
        assert!(q.contains(&0.0) && q.contains(&2.0) && q[0] == -4.0 && q[32] == 4.0);
        let s = default_scales(65536);
        assert_eq!(s[0], 20);
        assert_eq!(*s.last().unwrap(), 65536 / 5);
        assert!(s.len() >= 25 && s.len() <= 30);
        assert!(default_scales(50).is_empty());
    }

    #[test]
    fn monofractal_slopes_agree_across_q() {
        let s = generate_fgn(0.7, 1 << 15, 31).unwrap();
        let r = analyze(&s, &MfdfaParams { q_values: q_grid(-2.0, 4.0, 1.0), ..Default::default() }).unwrap();
        let (lo, hi) = r.hurst.h.iter().fold((f64::MAX, f64::MIN), |(a, b), &h| (a.min(h), b.max(h)));
        assert!(hi - lo < 0.05 * 2.0, "spread {}", hi - lo);
    }

    #[test]
    fn cascade_multifractal_ordering() {
        let s = generate_binomial_cascade(0.3, 14).unwrap();
        let r = analyze(&s, &MfdfaParams { q_values: q_grid(-4.0, 4.0, 1.0), ..Default::default() }).unwrap();
        assert!(r.hurst.h[8] < r.hurst.h[0]);
    }

    #[test]
    fn surrogate_band() {
        let b = SurrogateBand::from_deltas(&[0.1, 0.3, 0.2]).unwrap();
        assert!((b.lower - 0.2).abs() < 1e-15);
        assert_eq!(b.upper, 0.3);
        assert!(SurrogateBand::from_deltas(&[]).is_none());
    }

    #[test]
    fn reversal_symmetry() {
        // reversing the profile swaps forward and backward segments
        let s = generate_fgn(0.65, 3000, 5).unwrap();
        let p = profile(&s).unwrap();
        let rev = Profile::from_raw(p.values().iter().rev().cloned().collect());
        let q = [-3.0, 0.0, 2.0, 3.0];
        let scales = [20usize, 37, 64, 150, 600];
        let a = fluctuation_surface_of_profile(&p, &q, &scales, 2).unwrap();
        let b = fluctuation_surface_of_profile(&rev, &q, &scales, 2).unwrap();
        for (ra, rb) in a.f.iter().zip(&b.f) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x - y).abs() <= 1e-9 * x, "{x} vs {y}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn affine_invariance(c in 0.1f64..50.0, shift in -100.0f64..100.0, seed in 0u64..1000) {
            let s = generate_white_noise(600, seed, NoiseDistribution::Gaussian).unwrap();
            let q = [-2.0, 0.0, 1.0, 2.0];
            let scales = [20usize, 30, 45, 70, 100, 150];
            let base = fluctuation_surface(&s, &q, &scales, 2).unwrap();
            let scaled = Series::empirical(s.values().iter().map(|v| c * v).collect(), "c").unwrap();
            let shifted = Series::empirical(s.values().iter().map(|v| v + shift).collect(), "s").unwrap();
            let fs = fluctuation_surface(&scaled, &q, &scales, 2).unwrap();
            let ft = fluctuation_surface(&shifted, &q, &scales, 2).unwrap();
            for qi in 0..q.len() {
                for si in 0..scales.len() {
                    let b = base.f[qi][si];
                    prop_assert!((fs.f[qi][si] - c * b).abs() <= 1e-9 * c * b);
                    prop_assert!((ft.f[qi][si] - b).abs() <= 1e-7 * b);
                }
            }
            let hb = fit_generalized_hurst(&base, (20, 150)).unwrap();
            let hs = fit_generalized_hurst(&fs, (20, 150)).unwrap();
            for (a, b) in hb.h.iter().zip(&hs.h) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn f_q_non_decreasing_in_q(seed in 0u64..1000) {
            let s = generate_white_noise(500, seed, NoiseDistribution::UniformInteger { lo: 1, hi: 50 }).unwrap();
            let q = default_q_grid();
            let surf = fluctuation_surface(&s, &q, &[20, 40, 100], 2).unwrap();
            for si in 0..3 {
                for qi in 1..q.len() {
                    prop_assert!(surf.f[qi][si] >= surf.f[qi - 1][si] * (1.0 - 1e-12));
                }
            }
        }
    }
}
