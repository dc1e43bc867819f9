//! Per-text analysis: load, segment, then spectrum, MFDFA, surrogates and
//! tail fit. Results carry every parameter needed to reproduce them.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use textfract::corpus::{
    segment_sentences, sentence_length_series, tokenize, AbbreviationLexicon, Document, LengthUnit, SegmentationReport,
    Sentence, SentenceLengthSeries, TokenizerConfig,
};
use textfract::distfit::{self, Ccdf, TailFit};
use textfract::mfdfa::{self, MfdfaResult, SurrogateBand};
use textfract::series::{phase_randomized_surrogate, shuffle_surrogate, Series};
use textfract::spectral::{self, PowerSpectrum, SpectrumFit};
use textfract::stats;

use crate::config::AnalysisConfig;

/// A text (or a numeric series read from CSV) ready for analysis.
pub struct Input {
    pub name: String,
    pub path: String,
    pub source_hash: String,
    pub text: Option<TextInput>,
    pub series: Series,
}

pub struct TextInput {
    pub doc: Document,
    pub sentences: Vec<Sentence>,
    pub report: SegmentationReport,
    pub lengths: SentenceLengthSeries,
}

/// Output names: file stems, made unique in input order by a numeric suffix.
pub fn unique_names(paths: &[PathBuf]) -> Vec<String> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    paths
        .iter()
        .map(|p| {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into());
            let n = seen.entry(stem.clone()).or_insert(0);
            *n += 1;
            if *n == 1 {
                stem
            } else {
                format!("{stem}-{n}")
            }
        })
        .collect()
}

pub fn load_lexicon(cfg: &AnalysisConfig) -> Result<AbbreviationLexicon, String> {
    let lang = &cfg.segmentation.language;
    match &cfg.segmentation.lexicon {
        Some(path) => AbbreviationLexicon::load(lang, path).map_err(|e| e.to_string()),
        None => Ok(AbbreviationLexicon::builtin(lang)),
    }
}

pub fn load_text(
    path: &Path,
    name: &str,
    cfg: &AnalysisConfig,
    lexicon: &AbbreviationLexicon,
) -> Result<Input, String> {
    let raw = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc = tokenize(&raw, &TokenizerConfig::default())
        .map_err(|e| format!("{}: {e}", path.display()))?
        .with_title(name)
        .with_language(cfg.segmentation.language.clone());
    let seg = segment_sentences(&doc, lexicon, &cfg.segmentation_config());
    let mut lengths = sentence_length_series(&doc, &seg.sentences, cfg.segmentation.unit)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    lengths.min_sentences = cfg.segmentation.min_sentences;
    let series = lengths.to_series();
    Ok(Input {
        name: name.to_string(),
        path: path.display().to_string(),
        source_hash: doc.source_hash.clone(),
        text: Some(TextInput { doc, sentences: seg.sentences, report: seg.report, lengths }),
        series,
    })
}

pub fn load_series_csv(path: &Path, name: &str) -> Result<Input, String> {
    let raw = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let text = String::from_utf8(raw.clone()).map_err(|_| format!("{}: not UTF-8", path.display()))?;
    let values = textfract::io::read_series_csv(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let series = Series::empirical(values, name).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(Input {
        name: name.to_string(),
        path: path.display().to_string(),
        source_hash: textfract::io::sha256_hex(&raw),
        text: None,
        series,
    })
}

pub fn load(
    path: &Path,
    name: &str,
    series_csv: bool,
    cfg: &AnalysisConfig,
    lexicon: &AbbreviationLexicon,
) -> Result<Input, String> {
    if series_csv {
        load_series_csv(path, name)
    } else {
        load_text(path, name, cfg, lexicon)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MfdfaSummary {
    pub q_min: f64,
    pub q_max: f64,
    pub q_step: f64,
    pub detrend_order: usize,
    pub scales: Vec<usize>,
    pub fit_scale_range: (usize, usize),
    pub hurst: f64,
    pub hurst_stderr: f64,
    pub beta_from_hurst: f64,
    pub delta_alpha: f64,
    pub alpha_at_peak: f64,
    pub h_monotone: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SurrogateStats {
    pub seeds: Vec<u64>,
    pub delta_alpha: Vec<f64>,
    pub hurst: Vec<f64>,
    pub beta: Vec<f64>,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurrogateSummary {
    pub shuffled: SurrogateStats,
    pub phase_randomized: SurrogateStats,
    /// Band from this text's shuffled surrogates alone.
    pub shuffled_band: Option<SurrogateBand>,
    pub exceeds_shuffled_band: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailSummary {
    pub tail_start: f64,
    pub fit: Option<TailFit>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TextReport {
    pub name: String,
    pub path: String,
    pub source_hash: String,
    pub config_digest: String,
    pub input_kind: &'static str,
    pub unit: Option<LengthUnit>,
    pub j_max: usize,
    pub min_sentences: usize,
    pub meets_min_length: bool,
    pub mean: f64,
    pub variance: f64,
    pub segmentation: Option<SegmentationReport>,
    pub spectrum: SpectrumFit,
    pub mfdfa: MfdfaSummary,
    pub surrogates: SurrogateSummary,
    pub tail: TailSummary,
    pub warnings: Vec<String>,
}

pub struct TextAnalysis {
    pub report: TextReport,
    pub spectrum: PowerSpectrum,
    pub mfdfa: MfdfaResult,
    pub ccdf: Ccdf,
}

pub fn spectral_fit(ps: &PowerSpectrum, cfg: &AnalysisConfig) -> Result<SpectrumFit, String> {
    let (lo, hi) = ps.default_fit_range();
    let range = (cfg.spectral.fit_fmin.unwrap_or(lo), cfg.spectral.fit_fmax.unwrap_or(hi));
    spectral::fit_beta(ps, range, cfg.spectral.bins_per_decade).map_err(|e| format!("spectral fit: {e}"))
}

pub fn run_mfdfa(series: &Series, cfg: &AnalysisConfig) -> Result<MfdfaResult, String> {
    mfdfa::analyze(series, &cfg.mfdfa_params(series.len())).map_err(|e| format!("MFDFA: {e}"))
}

pub fn mfdfa_summary(r: &MfdfaResult, cfg: &AnalysisConfig) -> Result<MfdfaSummary, String> {
    let gh = &r.hurst;
    let qi = gh.q_values.iter().position(|&q| q == 2.0).ok_or("q = 2 missing from grid")?;
    Ok(MfdfaSummary {
        q_min: cfg.mfdfa.q_min,
        q_max: cfg.mfdfa.q_max,
        q_step: cfg.mfdfa.q_step,
        detrend_order: cfg.mfdfa.detrend_order,
        scales: r.surface.scales.clone(),
        fit_scale_range: gh.fit_scale_range,
        hurst: gh.h[qi],
        hurst_stderr: gh.h_stderr[qi],
        beta_from_hurst: mfdfa::beta_from_hurst(gh.h[qi]),
        delta_alpha: r.spectrum.delta_alpha,
        alpha_at_peak: r.spectrum.alpha_at_peak,
        h_monotone: gh.monotone,
    })
}

/// Surrogate `k` uses seed `base + k` for both the shuffled and the
/// phase-randomized series.
fn surrogate_stats(series: &Series, cfg: &AnalysisConfig, phase: bool) -> SurrogateStats {
    let base = cfg.surrogates.seed;
    type Fitted = Result<(f64, f64, f64), String>;
    let results: Vec<(u64, Fitted)> = (0..cfg.surrogates.count as u64)
        .into_par_iter()
        .map(|k| {
            let seed = base.wrapping_add(k);
            let run = || -> Result<(f64, f64, f64), String> {
                let s = if phase {
                    phase_randomized_surrogate(series, seed).map_err(|e| e.to_string())?
                } else {
                    shuffle_surrogate(series, seed)
                };
                let r = run_mfdfa(&s, cfg)?;
                let ps = spectral::power_spectrum(&s).map_err(|e| e.to_string())?;
                let fit = spectral_fit(&ps, cfg)?;
                Ok((r.spectrum.delta_alpha, r.h2().unwrap_or(f64::NAN), fit.beta))
            };
            (seed, run())
        })
        .collect();
    let mut out = SurrogateStats::default();
    for (seed, r) in results {
        match r {
            Ok((da, h, b)) => {
                out.seeds.push(seed);
                out.delta_alpha.push(da);
                out.hurst.push(h);
                out.beta.push(b);
            }
            Err(e) => {
                log::warn!("surrogate with seed {seed} failed: {e}");
                out.failures += 1;
            }
        }
    }
    out
}

pub fn analyze(input: &Input, cfg: &AnalysisConfig) -> Result<TextAnalysis, String> {
    let series = &input.series;
    let mut warnings = Vec::new();
    let min_sentences = cfg.segmentation.min_sentences;
    if series.len() < min_sentences {
        let w = format!("below {min_sentences} sentences ({} found)", series.len());
        log::warn!("{}: {w}", input.name);
        warnings.push(w);
    }
    let ps = spectral::power_spectrum(series).map_err(|e| format!("spectrum: {e}"))?;
    let fit = spectral_fit(&ps, cfg)?;
    let mf = run_mfdfa(series, cfg)?;
    let summary = mfdfa_summary(&mf, cfg)?;
    if !summary.h_monotone {
        warnings.push("h(q) is not non-increasing in q".into());
    }

    let shuffled = surrogate_stats(series, cfg, false);
    let phase = surrogate_stats(series, cfg, true);
    let band = SurrogateBand::from_deltas(&shuffled.delta_alpha);
    let exceeds = band.map(|b| summary.delta_alpha > b.upper);

    let ccdf = distfit::ccdf(series.values()).map_err(|e| format!("CCDF: {e}"))?;
    let tail = match distfit::fit_stretched_exponential(&ccdf, cfg.tail.tail_start) {
        Ok(t) => TailSummary { tail_start: cfg.tail.tail_start, fit: Some(t), error: None },
        Err(e) => {
            warnings.push(format!("tail fit skipped: {e}"));
            TailSummary { tail_start: cfg.tail.tail_start, fit: None, error: Some(e.to_string()) }
        }
    };

    let report = TextReport {
        name: input.name.clone(),
        path: input.path.clone(),
        source_hash: input.source_hash.clone(),
        config_digest: cfg.digest(),
        input_kind: if input.text.is_some() { "text" } else { "series_csv" },
        unit: input.text.as_ref().map(|t| t.lengths.unit),
        j_max: series.len(),
        min_sentences,
        meets_min_length: series.len() >= min_sentences,
        mean: stats::mean(series.values()),
        variance: stats::variance(series.values()),
        segmentation: input.text.as_ref().map(|t| t.report.clone()),
        spectrum: fit,
        mfdfa: summary,
        surrogates: SurrogateSummary {
            shuffled,
            phase_randomized: phase,
            shuffled_band: band,
            exceeds_shuffled_band: exceeds,
        },
        tail,
        warnings,
    };
    Ok(TextAnalysis { report, spectrum: ps, mfdfa: mf, ccdf })
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub name: String,
    pub j_max: usize,
    pub beta: f64,
    pub sigma_beta: f64,
    pub hurst: f64,
    pub hurst_stderr: f64,
    pub delta_alpha: f64,
    pub shuffled_delta_alpha_mean: Option<f64>,
    pub exceeds_band: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Skipped {
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusSummary {
    pub config_digest: String,
    pub config: AnalysisConfig,
    pub texts: Vec<SummaryRow>,
    /// Lower edge: mean shuffled Δα over all texts; upper edge: maximum.
    pub shuffled_band: Option<SurrogateBand>,
    pub average_spectrum_fit: Option<SpectrumFit>,
    pub skipped: Vec<Skipped>,
}

pub fn corpus_summary(
    analyses: &[TextAnalysis],
    skipped: Vec<Skipped>,
    cfg: &AnalysisConfig,
) -> (CorpusSummary, Option<PowerSpectrum>) {
    let texts = analyses
        .iter()
        .map(|a| {
            let r = &a.report;
            let sh = &r.surrogates.shuffled.delta_alpha;
            SummaryRow {
                name: r.name.clone(),
                j_max: r.j_max,
                beta: r.spectrum.beta,
                sigma_beta: r.spectrum.sigma_beta,
                hurst: r.mfdfa.hurst,
                hurst_stderr: r.mfdfa.hurst_stderr,
                delta_alpha: r.mfdfa.delta_alpha,
                shuffled_delta_alpha_mean: (!sh.is_empty()).then(|| stats::mean(sh)),
                exceeds_band: r.surrogates.exceeds_shuffled_band,
            }
        })
        .collect();
    let all: Vec<f64> =
        analyses.iter().flat_map(|a| a.report.surrogates.shuffled.delta_alpha.iter().cloned()).collect();
    let spectra: Vec<PowerSpectrum> = analyses.iter().map(|a| a.spectrum.clone()).collect();
    let avg = if spectra.len() >= 2 {
        match spectral::average_spectrum(&spectra, cfg.spectral.average_grid_bins) {
            Ok(s) => Some(s),
            Err(e) => {
                log::warn!("average spectrum: {e}");
                None
            }
        }
    } else {
        None
    };
    let avg_fit = avg.as_ref().and_then(|s| {
        let (lo, hi) = s.default_fit_range();
        spectral::fit_beta(s, (lo, hi), 0).ok()
    });
    let summary = CorpusSummary {
        config_digest: cfg.digest(),
        config: cfg.clone(),
        texts,
        shuffled_band: SurrogateBand::from_deltas(&all),
        average_spectrum_fit: avg_fit,
        skipped,
    };
    (summary, avg)
}
