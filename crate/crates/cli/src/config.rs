//! Analysis configuration: defaults, a `key = value` file format, and the
//! canonical JSON form whose digest is stamped on every output.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use textfract::corpus::{LengthUnit, SegmentationConfig, DEFAULT_MIN_SENTENCES};
use textfract::mfdfa::{q_grid, MfdfaParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationOptions {
    pub language: String,
    pub lexicon: Option<PathBuf>,
    pub require_capital_start: bool,
    pub bracket_rule: bool,
    pub keep_unterminated_tail: bool,
    pub unit: LengthUnit,
    pub min_sentences: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralOptions {
    /// `None`: lowest frequency of the spectrum.
    pub fit_fmin: Option<f64>,
    /// `None`: top frequency divided by √10.
    pub fit_fmax: Option<f64>,
    pub bins_per_decade: usize,
    pub average_grid_bins: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfdfaOptions {
    pub q_min: f64,
    pub q_max: f64,
    pub q_step: f64,
    /// `None`: 20.
    pub scale_min: Option<usize>,
    /// `None`: series length / 5.
    pub scale_max: Option<usize>,
    pub n_scales: usize,
    pub detrend_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateOptions {
    pub count: usize,
    /// Surrogate `k` uses seed `seed + k`.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailOptions {
    pub tail_start: f64,
}

/// Everything that influences a numeric result. Output location, formats
/// and thread count do not, and live in [`OutputOptions`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub segmentation: SegmentationOptions,
    pub spectral: SpectralOptions,
    pub mfdfa: MfdfaOptions,
    pub surrogates: SurrogateOptions,
    pub tail: TailOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputOptions {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
    pub jobs: Option<usize>,
}

impl OutputOptions {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self { dir: PathBuf::from("textfract-out"), formats: vec![Format::Csv, Format::Json, Format::Svg], jobs: None }
    }
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            segmentation: SegmentationOptions {
                language: "en".into(),
                lexicon: None,
                require_capital_start: true,
                bracket_rule: true,
                keep_unterminated_tail: false,
                unit: LengthUnit::Words,
                min_sentences: DEFAULT_MIN_SENTENCES,
            },
            spectral: SpectralOptions { fit_fmin: None, fit_fmax: None, bins_per_decade: 20, average_grid_bins: 200 },
            mfdfa: MfdfaOptions {
                q_min: -4.0,
                q_max: 4.0,
                q_step: 0.25,
                scale_min: None,
                scale_max: None,
                n_scales: 30,
                detrend_order: 2,
            },
            surrogates: SurrogateOptions { count: 10, seed: 1 },
            tail: TailOptions { tail_start: 100.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(ConfigError(format!("{key}: expected a boolean, got {value:?}"))),
    }
}

fn parse_opt<T: FromStr>(key: &str, value: &str) -> Result<Option<T>, ConfigError> {
    if value.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        parse(key, value).map(Some)
    }
}

pub fn parse_unit(value: &str) -> Result<LengthUnit, ConfigError> {
    match value {
        "words" | "word" => Ok(LengthUnit::Words),
        "chars" | "characters" => Ok(LengthUnit::Characters),
        _ => Err(ConfigError(format!("unit: expected words or chars, got {value:?}"))),
    }
}

pub fn parse_formats(value: &str) -> Result<Vec<Format>, ConfigError> {
    let mut out = Vec::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let f = match part {
            "csv" => Format::Csv,
            "json" => Format::Json,
            "svg" => Format::Svg,
            _ => return Err(ConfigError(format!("format: unknown {part:?}"))),
        };
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err(ConfigError("format: empty list".into()));
    }
    Ok(out)
}

impl AnalysisConfig {
    /// Applies one `key = value` setting. Output keys (`out`, `format`,
    /// `jobs`) go to `output`.
    pub fn set(&mut self, output: &mut OutputOptions, key: &str, value: &str) -> Result<(), ConfigError> {
        let s = &mut self.segmentation;
        match key {
            "language" => s.language = value.to_string(),
            "lexicon" => s.lexicon = Some(PathBuf::from(value)),
            "require_capital_start" => s.require_capital_start = parse_bool(key, value)?,
            "bracket_rule" => s.bracket_rule = parse_bool(key, value)?,
            "keep_unterminated_tail" => s.keep_unterminated_tail = parse_bool(key, value)?,
            "unit" => s.unit = parse_unit(value)?,
            "min_sentences" => s.min_sentences = parse(key, value)?,
            "fit_fmin" => self.spectral.fit_fmin = parse_opt(key, value)?,
            "fit_fmax" => self.spectral.fit_fmax = parse_opt(key, value)?,
            "bins_per_decade" => self.spectral.bins_per_decade = parse(key, value)?,
            "average_grid_bins" => self.spectral.average_grid_bins = parse(key, value)?,
            "q_min" => self.mfdfa.q_min = parse(key, value)?,
            "q_max" => self.mfdfa.q_max = parse(key, value)?,
            "q_step" => self.mfdfa.q_step = parse(key, value)?,
            "scale_min" => self.mfdfa.scale_min = parse_opt(key, value)?,
            "scale_max" => self.mfdfa.scale_max = parse_opt(key, value)?,
            "n_scales" => self.mfdfa.n_scales = parse(key, value)?,
            "detrend_order" => self.mfdfa.detrend_order = parse(key, value)?,
            "surrogates" => self.surrogates.count = parse(key, value)?,
            "seed" => self.surrogates.seed = parse(key, value)?,
            "tail_start" => self.tail.tail_start = parse(key, value)?,
            "out" => output.dir = PathBuf::from(value),
            "format" => output.formats = parse_formats(value)?,
            "jobs" => output.jobs = Some(parse(key, value)?),
            _ => return Err(ConfigError(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment, blank lines are
    /// ignored.
    pub fn apply_text(&mut self, output: &mut OutputOptions, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| ConfigError(format!("line {}: expected key = value", i + 1)))?;
            self.set(output, k.trim(), v.trim()).map_err(|e| ConfigError(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, output: &mut OutputOptions, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        self.apply_text(output, &text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let m = &self.mfdfa;
        if !(m.q_step > 0.0 && m.q_step.is_finite()) {
            return Err(ConfigError(format!("q_step must be positive, got {}", m.q_step)));
        }
        if !(m.q_min.is_finite() && m.q_max.is_finite() && m.q_min < m.q_max) {
            return Err(ConfigError(format!("need q_min < q_max, got {} and {}", m.q_min, m.q_max)));
        }
        let q = self.q_values();
        if q.len() < 5 {
            return Err(ConfigError(format!("q grid has {} points, need at least 5", q.len())));
        }
        if !q.contains(&2.0) {
            return Err(ConfigError("q grid must contain 2 (the Hurst exponent is h(2))".into()));
        }
        if let Some(lo) = m.scale_min {
            if lo < m.detrend_order + 3 {
                return Err(ConfigError(format!(
                    "scale_min must be at least detrend_order + 3 = {}",
                    m.detrend_order + 3
                )));
            }
        }
        if let (Some(lo), Some(hi)) = (m.scale_min, m.scale_max) {
            if hi <= lo {
                return Err(ConfigError(format!("need scale_min < scale_max, got {lo} and {hi}")));
            }
        }
        if m.n_scales < 6 {
            return Err(ConfigError("n_scales must be at least 6".into()));
        }
        let sp = &self.spectral;
        for f in [sp.fit_fmin, sp.fit_fmax].into_iter().flatten() {
            if !(f > 0.0 && f <= 0.5) {
                return Err(ConfigError(format!("fit frequencies must lie in (0, 0.5], got {f}")));
            }
        }
        if let (Some(lo), Some(hi)) = (sp.fit_fmin, sp.fit_fmax) {
            if hi <= lo {
                return Err(ConfigError(format!("need fit_fmin < fit_fmax, got {lo} and {hi}")));
            }
        }
        if sp.average_grid_bins < 2 {
            return Err(ConfigError("average_grid_bins must be at least 2".into()));
        }
        if !(self.tail.tail_start >= 0.0) {
            return Err(ConfigError("tail_start must be non-negative".into()));
        }
        Ok(())
    }

    pub fn q_values(&self) -> Vec<f64> {
        q_grid(self.mfdfa.q_min, self.mfdfa.q_max, self.mfdfa.q_step)
    }

    /// MFDFA parameters for a series of length `len`.
    pub fn mfdfa_params(&self, len: usize) -> MfdfaParams {
        let m = &self.mfdfa;
        let lo = m.scale_min.unwrap_or(20);
        let hi = m.scale_max.unwrap_or(len / 5).min(len / 4);
        let scales = if hi > lo { textfract::mfdfa::scale_grid(lo, hi, m.n_scales) } else { Vec::new() };
        MfdfaParams { q_values: self.q_values(), scales: Some(scales), detrend_order: m.detrend_order, fit_range: None }
    }

    pub fn segmentation_config(&self) -> SegmentationConfig {
        SegmentationConfig {
            require_capital_start: self.segmentation.require_capital_start,
            bracket_rule: self.segmentation.bracket_rule,
            keep_unterminated_tail: self.segmentation.keep_unterminated_tail,
        }
    }

    /// Compact JSON with fields in declaration order.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}
