//! Text ingestion: tokenization, orthographic sentence segmentation and the
//! series and tables derived from a segmented document.
//!
//! Everything here is a pure function of `(input bytes, config)`.

mod lexicon;
mod segment;
mod tokenize;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lexicon::AbbreviationLexicon;
pub use segment::{segment_sentences, Segmentation, SegmentationConfig, SegmentationReport, Sentence};
pub use tokenize::{tokenize, Document, Normalization, Token, TokenKind, TokenizerConfig};

use crate::series::{Provenance, Series};
use crate::stats::{self, LinearFit};

/// Texts shorter than this are flagged: multifractal estimates on fewer
/// sentences are unreliable.
pub const DEFAULT_MIN_SENTENCES: usize = 5000;

/// Name of the pooled terminator entry in rank-frequency tables.
pub const TERMINATOR_PSEUDO_WORD: &str = "\u{27e8}.\u{27e9}";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorpusError {
    #[error("input is not valid UTF-8 at byte offset {offset}")]
    Decode { offset: usize },
    #[error("no sentences to build a series from")]
    EmptyInput,
    #[error("word {target:?} occurs {count} time(s); at least 2 needed for recurrence gaps")]
    InsufficientOccurrences { target: String, count: usize },
    #[error("slice {from}..={to} outside 1..={len}")]
    Bounds { from: usize, to: usize, len: usize },
    #[error("lexicon: {0}")]
    Lexicon(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthUnit {
    #[default]
    Words,
    Characters,
}

/// Where a sentence-length series came from. `from`/`to` are 1-based,
/// inclusive sentence indices into the full segmentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSource {
    pub title: String,
    pub source_hash: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceLengthSeries {
    pub values: Vec<u32>,
    pub unit: LengthUnit,
    pub source: SeriesSource,
    pub min_sentences: usize,
}

impl SentenceLengthSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn meets_min_length(&self) -> bool {
        self.values.len() >= self.min_sentences
    }

    pub fn to_series(&self) -> Series {
        let label = format!("{} [{}..={}]", self.source.title, self.source.from, self.source.to);
        Series::new(self.values.iter().map(|&v| v as f64).collect(), Provenance::Empirical { label })
            .expect("integer lengths are finite")
    }
}

/// Lengths of consecutive sentences in words (Word tokens) or characters
/// (sum of word-surface character counts).
pub fn sentence_length_series(
    doc: &Document,
    sentences: &[Sentence],
    unit: LengthUnit,
) -> Result<SentenceLengthSeries, CorpusError> {
    if sentences.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    let values: Vec<u32> = sentences
        .iter()
        .map(|s| match unit {
            LengthUnit::Words => s.words(doc).count() as u32,
            LengthUnit::Characters => s.words(doc).map(|w| w.surface.chars().count() as u32).sum(),
        })
        .collect();
    if sentences.len() < DEFAULT_MIN_SENTENCES {
        log::warn!(
            "{}: {} sentences, below the {} recommended for multifractal analysis",
            if doc.title.is_empty() { "document" } else { &doc.title },
            sentences.len(),
            DEFAULT_MIN_SENTENCES
        );
    }
    Ok(SentenceLengthSeries {
        source: SeriesSource {
            title: doc.title.clone(),
            source_hash: doc.source_hash.clone(),
            from: 1,
            to: values.len(),
        },
        values,
        unit,
        min_sentences: DEFAULT_MIN_SENTENCES,
    })
}

/// Contiguous sub-series `from..=to` (1-based, relative to `series`).
pub fn slice_series(
    series: &SentenceLengthSeries,
    from: usize,
    to: usize,
) -> Result<SentenceLengthSeries, CorpusError> {
    let len = series.len();
    if from < 1 || from > to || to > len {
        return Err(CorpusError::Bounds { from, to, len });
    }
    let offset = series.source.from - 1;
    Ok(SentenceLengthSeries {
        values: series.values[from - 1..to].to_vec(),
        unit: series.unit,
        source: SeriesSource { from: offset + from, to: offset + to, ..series.source.clone() },
        min_sentences: series.min_sentences,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceSeries {
    pub target_word: String,
    /// Distances in words between consecutive occurrences.
    pub gaps: Vec<u32>,
    pub title: String,
    pub source_hash: String,
}

impl RecurrenceSeries {
    pub fn to_series(&self) -> Series {
        let label = format!("{} recurrence of {:?}", self.title, self.target_word);
        Series::new(self.gaps.iter().map(|&v| v as f64).collect(), Provenance::Empirical { label })
            .expect("integer gaps are finite")
    }
}

fn fold(s: &str, fold_case: bool) -> String {
    if fold_case {
        s.to_lowercase()
    } else {
        s.to_string()
    }
}

/// Recurrence times of `target`: differences of word indices (Word tokens
/// only) of consecutive occurrences. `[the, cat, the]` gives `[2]`.
pub fn word_recurrence_series(doc: &Document, target: &str, fold_case: bool) -> Result<RecurrenceSeries, CorpusError> {
    let target_key = fold(target, fold_case);
    let hits: Vec<usize> =
        doc.words().enumerate().filter(|(_, w)| fold(&w.surface, fold_case) == target_key).map(|(i, _)| i).collect();
    if hits.len() < 2 {
        return Err(CorpusError::InsufficientOccurrences { target: target.to_string(), count: hits.len() });
    }
    Ok(RecurrenceSeries {
        target_word: target.to_string(),
        gaps: hits.windows(2).map(|w| (w[1] - w[0]) as u32).collect(),
        title: doc.title.clone(),
        source_hash: doc.source_hash.clone(),
    })
}

/// Recurrence of sentence-ending full stops, with the start of the text
/// acting as a stop. The gap between two consecutive stops is the number of
/// words between them, so the result equals the words-unit sentence-length
/// series of the same segmentation.
pub fn terminator_recurrence_series(doc: &Document, sentences: &[Sentence]) -> Result<RecurrenceSeries, CorpusError> {
    if sentences.is_empty() {
        return Err(CorpusError::InsufficientOccurrences { target: TERMINATOR_PSEUDO_WORD.into(), count: 0 });
    }
    let mut gaps = Vec::with_capacity(sentences.len());
    let mut words_since_stop = 0u32;
    let mut ends = sentences.iter().map(|s| s.end).peekable();
    for (i, tok) in doc.tokens.iter().enumerate() {
        if ends.peek() == Some(&i) {
            gaps.push(words_since_stop);
            words_since_stop = 0;
            ends.next();
        }
        if tok.kind == TokenKind::Word {
            words_since_stop += 1;
        }
    }
    if ends.peek() == Some(&doc.tokens.len()) {
        gaps.push(words_since_stop);
    }
    Ok(RecurrenceSeries {
        target_word: TERMINATOR_PSEUDO_WORD.into(),
        gaps,
        title: doc.title.clone(),
        source_hash: doc.source_hash.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub rank: usize,
    pub surface: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFrequencyTable {
    pub entries: Vec<RankEntry>,
    pub include_terminators: bool,
}

impl RankFrequencyTable {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.count).sum()
    }

    pub fn find(&self, surface: &str) -> Option<&RankEntry> {
        self.entries.iter().find(|e| e.surface == surface)
    }
}

/// Word counts sorted by frequency, ties broken by first occurrence.
/// With `include_terminators`, every terminator token is counted as the
/// single pseudo-word `pseudo_word`.
pub fn rank_frequency(
    doc: &Document,
    include_terminators: bool,
    fold_case: bool,
    pseudo_word: &str,
) -> RankFrequencyTable {
    let mut counts: HashMap<String, (usize, usize)> = HashMap::new();
    for (i, tok) in doc.tokens.iter().enumerate() {
        let key = match tok.kind {
            TokenKind::Word => fold(&tok.surface, fold_case),
            TokenKind::Terminator if include_terminators => pseudo_word.to_string(),
            _ => continue,
        };
        counts.entry(key).or_insert((0, i)).0 += 1;
    }
    let mut rows: Vec<(String, usize, usize)> = counts.into_iter().map(|(k, (c, first))| (k, c, first)).collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    RankFrequencyTable {
        entries: rows
            .into_iter()
            .enumerate()
            .map(|(i, (surface, count, _))| RankEntry { rank: i + 1, surface, count })
            .collect(),
        include_terminators,
    }
}

/// OLS of `log10 count` on `log10 rank` over ranks `lo..=hi`; Zipf's law
/// gives a slope near −1.
pub fn zipf_fit(table: &RankFrequencyTable, lo: usize, hi: usize) -> Result<LinearFit, stats::FitError> {
    let (x, y): (Vec<f64>, Vec<f64>) = table
        .entries
        .iter()
        .filter(|e| e.rank >= lo && e.rank <= hi)
        .map(|e| ((e.rank as f64).log10(), (e.count as f64).log10()))
        .unzip();
    stats::ols(&x, &y)
}
