//! `textfract`: sentence-length correlation analysis from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod output;
mod pipeline;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use textfract::corpus::{
    rank_frequency, slice_series, terminator_recurrence_series, word_recurrence_series, zipf_fit, RankFrequencyTable,
    RecurrenceSeries, TERMINATOR_PSEUDO_WORD,
};
use textfract::distfit;
use textfract::io::to_csv;
use textfract::series::{
    generate_binomial_cascade, generate_fgn, generate_white_noise, phase_randomized_surrogate, shuffle_surrogate,
    NoiseDistribution, Series,
};
use textfract::spectral;
use textfract::stats::LinearFit;
use textfract::wavelet;

use config::{AnalysisConfig, ConfigError, OutputOptions};
use output::Writer;
use pipeline::Input;

#[derive(Parser, Debug)]
#[command(name = "textfract", version, about = "Long-range correlations and multifractality of sentence lengths")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

/// Analysis flags. Every flag overrides the matching key of `--config`.
#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Sentence length unit: words or chars.
    #[arg(long, global = true)]
    unit: Option<String>,
    /// Language of the built-in abbreviation lexicon.
    #[arg(long, global = true)]
    language: Option<String>,
    /// Abbreviation lexicon file, one entry per line.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Split even when the next sentence starts lowercase.
    #[arg(long, global = true)]
    no_capital_rule: bool,
    /// Ignore open brackets and quotes when splitting.
    #[arg(long, global = true)]
    no_bracket_rule: bool,
    /// Keep trailing text without a terminator as a sentence.
    #[arg(long, global = true)]
    keep_tail: bool,
    /// Smallest moment order q (default -4)
    #[arg(long, global = true, allow_hyphen_values = true)]
    q_min: Option<f64>,
    /// Largest moment order q (default 4)
    #[arg(long, global = true, allow_hyphen_values = true)]
    q_max: Option<f64>,
    /// Spacing of the q grid (default 0.25); the grid must contain q = 2
    #[arg(long, global = true)]
    q_step: Option<f64>,
    /// Smallest MFDFA segment size (default 20)
    #[arg(long, global = true)]
    scale_min: Option<usize>,
    /// Largest MFDFA segment size (default N/5)
    #[arg(long, global = true)]
    scale_max: Option<usize>,
    /// Order of the polynomial removed in each segment (default 2)
    #[arg(long, global = true)]
    detrend_order: Option<usize>,
    /// Lower edge of the spectral fit range (cycles per sentence).
    #[arg(long, global = true)]
    fit_fmin: Option<f64>,
    /// Upper edge of the spectral fit range (default: half a decade below 1/2)
    #[arg(long, global = true)]
    fit_fmax: Option<f64>,
    /// Logarithmic bins per decade for the spectral fit; 0 disables binning.
    #[arg(long, global = true)]
    bins_per_decade: Option<usize>,
    /// Number of shuffled and of phase-randomized surrogates per text.
    #[arg(long, global = true)]
    surrogates: Option<usize>,
    /// Seed of the first surrogate; surrogate k uses seed + k
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Stretched-exponential fits use lengths above this.
    #[arg(long, global = true)]
    tail_start: Option<f64>,
    /// Texts with fewer sentences get a warning.
    #[arg(long, global = true)]
    min_sentences: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Inputs are numeric series in CSV (last column) instead of texts.
    #[arg(long, global = true)]
    series_csv: bool,
    /// More logging (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full pipeline per text plus a corpus summary.
    Analyze { paths: Vec<PathBuf> },
    /// Power spectrum and 1/f^beta fit.
    Spectrum { paths: Vec<PathBuf> },
    /// Fluctuation functions, h(q) and f(alpha).
    Mfdfa { paths: Vec<PathBuf> },
    /// Wavelet coefficient map.
    Wavelet {
        paths: Vec<PathBuf>,
        /// Number of log-spaced scales between 4 and N/10.
        #[arg(long, default_value_t = 50)]
        n_scales: usize,
    },
    /// Write surrogate series.
    Surrogate {
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = SurrogateKind::Shuffle)]
        kind: SurrogateKind,
    },
    /// Rank-frequency table and Zipf slope.
    Zipf {
        paths: Vec<PathBuf>,
        /// Leave sentence terminators out of the table.
        #[arg(long)]
        no_terminators: bool,
        /// Count "The" and "the" as different words.
        #[arg(long)]
        case_sensitive: bool,
        /// First rank of the Zipf fit.
        #[arg(long, default_value_t = 10)]
        rank_min: usize,
        /// Last rank of the Zipf fit.
        #[arg(long, default_value_t = 1000)]
        rank_max: usize,
    },
    /// Sentence-length CCDF and stretched-exponential tail fit.
    Ccdf {
        paths: Vec<PathBuf>,
        /// Pool all inputs into one distribution.
        #[arg(long)]
        pool: bool,
    },
    /// Recurrence-time series of words, analysed like sentence lengths.
    Recurrence {
        paths: Vec<PathBuf>,
        /// Target word; repeatable.
        #[arg(long = "word")]
        words: Vec<String>,
        /// Use sentence ends as the target, which reproduces the word-unit
        /// sentence-length series.
        #[arg(long)]
        full_stop: bool,
        /// Match target words case-sensitively.
        #[arg(long)]
        case_sensitive: bool,
    },
    /// Analyse a contiguous part of a text, or all halves down to a depth.
    Slice {
        paths: Vec<PathBuf>,
        /// First sentence, 1-based.
        #[arg(long)]
        from: Option<usize>,
        /// Last sentence, inclusive.
        #[arg(long)]
        to: Option<usize>,
        /// Analyse the 2^k equal parts for k = 0..=depth.
        #[arg(long)]
        bisect: Option<u32>,
    },
    /// Write a synthetic series as CSV.
    Generate {
        #[arg(value_enum)]
        kind: GeneratorKind,
        /// Output CSV file.
        #[arg(long)]
        output: PathBuf,
        /// Cascade weight of the left half.
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        /// Cascade depth; the series has 2^levels points.
        #[arg(long, default_value_t = 16)]
        levels: u32,
        /// Hurst exponent of fractional Gaussian noise.
        #[arg(long, default_value_t = 0.8)]
        hurst: f64,
        /// Length of fGn and white-noise series.
        #[arg(long, default_value_t = 65536)]
        n: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum SurrogateKind {
    Shuffle,
    Phase,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum GeneratorKind {
    Cascade,
    Fgn,
    Noise,
}

type Fatal = Box<dyn std::error::Error>;

/// Per-input successes and failures of one run.
#[derive(Default)]
struct Tally {
    ok: usize,
    failed: usize,
}

impl Tally {
    fn record<T>(&mut self, what: &str, r: Result<T, String>) -> Option<T> {
        match r {
            Ok(v) => {
                self.ok += 1;
                Some(v)
            }
            Err(e) => {
                log::error!("{what}: {e}");
                self.failed += 1;
                None
            }
        }
    }

    fn exit_code(&self) -> ExitCode {
        match (self.ok, self.failed) {
            (_, 0) => ExitCode::SUCCESS,
            (0, _) => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }
}

fn build_config(c: &CommonArgs) -> Result<(AnalysisConfig, OutputOptions), ConfigError> {
    let mut cfg = AnalysisConfig::default();
    let mut out = OutputOptions::default();
    if let Some(path) = &c.config {
        cfg.apply_file(&mut out, path)?;
    }
    let mut set = |k: &str, v: Option<String>| match v {
        Some(v) => cfg.set(&mut out, k, &v),
        None => Ok(()),
    };
    let s = |v: &Option<f64>| v.map(|x| x.to_string());
    let u = |v: &Option<usize>| v.map(|x| x.to_string());
    set("unit", c.unit.clone())?;
    set("language", c.language.clone())?;
    set("lexicon", c.lexicon.as_ref().map(|p| p.display().to_string()))?;
    set("require_capital_start", c.no_capital_rule.then(|| "false".into()))?;
    set("bracket_rule", c.no_bracket_rule.then(|| "false".into()))?;
    set("keep_unterminated_tail", c.keep_tail.then(|| "true".into()))?;
    set("q_min", s(&c.q_min))?;
    set("q_max", s(&c.q_max))?;
    set("q_step", s(&c.q_step))?;
    set("scale_min", u(&c.scale_min))?;
    set("scale_max", u(&c.scale_max))?;
    set("detrend_order", u(&c.detrend_order))?;
    set("fit_fmin", s(&c.fit_fmin))?;
    set("fit_fmax", s(&c.fit_fmax))?;
    set("bins_per_decade", u(&c.bins_per_decade))?;
    set("surrogates", u(&c.surrogates))?;
    set("seed", c.seed.map(|x| x.to_string()))?;
    set("tail_start", s(&c.tail_start))?;
    set("min_sentences", u(&c.min_sentences))?;
    set("out", c.out.as_ref().map(|p| p.display().to_string()))?;
    set("format", c.format.clone())?;
    set("jobs", u(&c.jobs))?;
    cfg.validate()?;
    Ok((cfg, out))
}

struct Ctx {
    cfg: AnalysisConfig,
    out: OutputOptions,
    series_csv: bool,
}

type Loaded = (PathBuf, Result<Input, String>);

impl Ctx {
    /// Loads every input in parallel; results come back in input order.
    fn load_all(&self, paths: &[PathBuf]) -> Result<Vec<Loaded>, Fatal> {
        let lexicon = pipeline::load_lexicon(&self.cfg)?;
        let mut paths = paths.to_vec();
        paths.sort();
        let names = pipeline::unique_names(&paths);
        Ok(paths
            .par_iter()
            .zip(names.par_iter())
            .map(|(p, n)| (p.clone(), pipeline::load(p, n, self.series_csv, &self.cfg, &lexicon)))
            .collect())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.common.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            log::error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Fatal> {
    let (cfg, out) = build_config(&cli.common)?;
    if let Some(jobs) = out.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global()?;
    }
    let ctx = Ctx { cfg, out, series_csv: cli.common.series_csv };
    let tally = match cli.command {
        Command::Analyze { paths } => cmd_analyze(&ctx, &need(paths)?)?,
        Command::Spectrum { paths } => cmd_spectrum(&ctx, &need(paths)?)?,
        Command::Mfdfa { paths } => cmd_mfdfa(&ctx, &need(paths)?)?,
        Command::Wavelet { paths, n_scales } => cmd_wavelet(&ctx, &need(paths)?, n_scales)?,
        Command::Surrogate { paths, kind } => cmd_surrogate(&ctx, &need(paths)?, kind)?,
        Command::Zipf { paths, no_terminators, case_sensitive, rank_min, rank_max } => {
            cmd_zipf(&ctx, &need(paths)?, !no_terminators, !case_sensitive, rank_min, rank_max)?
        }
        Command::Ccdf { paths, pool } => cmd_ccdf(&ctx, &need(paths)?, pool)?,
        Command::Recurrence { paths, words, full_stop, case_sensitive } => {
            cmd_recurrence(&ctx, &need(paths)?, &words, full_stop, !case_sensitive)?
        }
        Command::Slice { paths, from, to, bisect } => cmd_slice(&ctx, &need(paths)?, from, to, bisect)?,
        Command::Generate { kind, output, p, levels, hurst, n } => {
            cmd_generate(&ctx, kind, &output, p, levels, hurst, n)?
        }
    };
    Ok(tally.exit_code())
}

fn need(paths: Vec<PathBuf>) -> Result<Vec<PathBuf>, Fatal> {
    if paths.is_empty() {
        return Err("no input files given".into());
    }
    Ok(paths)
}

fn cmd_analyze(ctx: &Ctx, paths: &[PathBuf]) -> Result<Tally, Fatal> {
    let loaded = ctx.load_all(paths)?;
    type Analyzed = Result<(Input, pipeline::TextAnalysis), String>;
    let results: Vec<(PathBuf, Analyzed)> = loaded
        .into_par_iter()
        .map(|(p, input)| {
            let r = input.and_then(|i| pipeline::analyze(&i, &ctx.cfg).map(|a| (i, a)));
            (p, r)
        })
        .collect();
    let mut w = Writer::new(&ctx.out)?;
    let mut tally = Tally::default();
    let mut analyses = Vec::new();
    let mut skipped = Vec::new();
    for (path, r) in results {
        let what = path.display().to_string();
        match r {
            Ok((input, a)) => {
                tally.ok += 1;
                output::write_text(&mut w, &a, &input.series, input.text.is_some())?;
                let rep = &a.report;
                println!(
                    "{}\tj_max={}\tbeta={:.4}+/-{:.4}\tH={:.4}+/-{:.4}\tdelta_alpha={:.4}",
                    rep.name,
                    rep.j_max,
                    rep.spectrum.beta,
                    rep.spectrum.sigma_beta,
                    rep.mfdfa.hurst,
                    rep.mfdfa.hurst_stderr,
                    rep.mfdfa.delta_alpha
                );
                analyses.push(a);
            }
            Err(e) => {
                log::error!("{what}: skipped: {e}");
                tally.failed += 1;
                skipped.push(pipeline::Skipped { path: what, reason: e });
            }
        }
    }
    let (summary, avg) = pipeline::corpus_summary(&analyses, skipped, &ctx.cfg);
    output::write_summary(&mut w, &summary, avg.as_ref())?;
    Ok(tally)
}

#[derive(Serialize)]
struct SpectrumReport<'a> {
    name: &'a str,
    path: &'a str,
    source_hash: &'a str,
    config_digest: String,
    j_max: usize,
    fit: spectral::SpectrumFit,
    beta_from_fit_hurst: f64,
}

fn cmd_spectrum(ctx: &Ctx, paths: &[PathBuf]) -> Result<Tally, Fatal> {
    let mut w = Writer::new(&ctx.out)?;
    let mut tally = Tally::default();
    for (path, input) in ctx.load_all(paths)? {
        let r = input.and_then(|i| {
            let ps = spectral::power_spectrum(&i.series).map_err(|e| e.to_string())?;
            let fit = pipeline::spectral_fit(&ps, &ctx.cfg)?;
            Ok((i, ps, fit))
        });
        if let Some((i, ps, fit)) = tally.record(&path.display().to_string(), r) {
            let n = &i.name;
            println!("{n}\tbeta={:.4}+/-{:.4}", fit.beta, fit.sigma_beta);
            w.csv(&format!("{n}.spectrum.csv"), &output::spectrum_csv(&ps))?;
            w.svg(&format!("{n}.spectrum.svg"), || output::spectrum_plot(n, &ps, Some(&fit)))?;
            let rep = SpectrumReport {
                name: n,
                path: &i.path,
                source_hash: &i.source_hash,
                config_digest: ctx.cfg.digest(),
                j_max: i.series.len(),
                beta_from_fit_hurst: (fit.beta + 1.0) / 2.0,
                fit,
            };
            w.json(&format!("{n}.spectrum.json"), &rep)?;
        }
    }
    Ok(tally)
}

#[derive(Serialize)]
struct MfdfaReport<'a> {
    name: &'a str,
    path: &'a str,
    source_hash: &'a str,
    config_digest: String,
    j_max: usize,
    summary: pipeline::MfdfaSummary,
}

fn cmd_mfdfa(ctx: &Ctx, paths: &[PathBuf]) -> Result<Tally, Fatal> {
    let mut w = Writer::new(&ctx.out)?;
    let mut tally = Tally::default();
    for (path, input) in ctx.load_all(paths)? {
        let r = input.and_then(|i| {
            let mf = pipeline::run_mfdfa(&i.series, &ctx.cfg)?;
            let s = pipeline::mfdfa_summary(&mf, &ctx.cfg)?;
            Ok((i, mf, s))
        });
        if let Some((i, mf, summary)) = tally.record(&path.display().to_string(), r) {
            let n = &i.name;
            println!(
                "{n}\tH={:.4}+/-{:.4}\tdelta_alpha={:.4}",
                summary.hurst, summary.hurst_stderr, summary.delta_alpha
            );
            w.csv(&format!("{n}.fluctuation.csv"), &output::fluctuation_csv(&mf))?;
            w.csv(&format!("{n}.hq.csv"), &output::hq_csv(&mf))?;
            w.svg(&format!("{n}.fluctuation.svg"), || output::fluctuation_plot(n, &mf))?;
            w.svg(&format!("{n}.falpha.svg"), || output::falpha_plot(n, &mf))?;
            let rep = MfdfaReport {
                name: n,
                path: &i.path,
                source_hash: &i.source_hash,
                config_digest: ctx.cfg.digest(),
                j_max: i.series.len(),
                summary,
            };
            w.json(&format!("{n}.mfdfa.json"), &rep)?;
        }
    }
    Ok(tally)
}

/// Positions: every index up to 10⁴ points, evenly thinned beyond.
fn wavelet_positions(len: usize, max: usize) -> Vec<usize> {
    let step = len.div_ceil(max).max(1);
    (0..len).step_by(step).collect()
}

fn cmd_wavelet(ctx: &Ctx, paths: &[PathBuf], n_scales: usize) -> Result<Tally, Fatal> {
    let mut w = Writer::new(&ctx.out)?;
    let mut tally = Tally::default();
    for (path, input) in ctx.load_all(paths)? {
        let r = input.and_then(|i| {
            let len = i.series.len();
            if len < 40 || n_scales < 2 {
                return Err(format!("series of length {len} too short for a wavelet map"));
            }
            let scales = textfract::stats::log_space(4.0, len as f64 / 10.0, n_scales);
            let map =
                wavelet::wavelet_map(&i.series, &scales, &wavelet_positions(len, 10_000)).map_err(|e| e.to_string())?;
            Ok((i, scales, map))
        });
        if let Some((i, scales, map)) = tally.record(&path.display().to_string(), r) {
            let n = &i.name;
            let rows = map.scales.iter().enumerate().flat_map(|(si, s)| {
                let map = &map;
                map.positions.iter().enumerate().map(move |(pi, k)| {
                    [
                        s.to_string(),
                        (k + 1).to_string(),
                        map.coefficients[si][pi].to_string(),
                        map.cone_of_influence[si][pi].to_string(),
                    ]
                })
            });
            w.csv(&format!("{n}.wavelet.csv"), &to_csv(&["scale", "index", "coefficient", "cone_of_influence"], rows))?;
            w.svg(&format!("{n}.wavelet.svg"), || {
                let coarse = wavelet::wavelet_map(&i.series, &scales, &wavelet_positions(i.series.len(), 400))
                    .expect("same scales, fewer positions");
                svg::wavelet_heatmap(n, &coarse)
            })?;
            println!(
                "{n}\tscales={}\tpositions={}\tmax|T|={:.4}",
                map.scales.len(),
                map.positions.len(),
                map.max_abs()
            );
        }
    }
    Ok(tally)
}

fn cmd_surrogate(ctx: &Ctx, paths: &[PathBuf], kind: SurrogateKind) -> Result<Tally, Fatal> {
    let mut w = Writer::new(&ctx.out)?;
    let mut tally = Tally::default();
    let count = ctx.cfg.surrogates.count.max(1);
    for (path, input) in ctx.load_all(paths)? {
        let Some(i) = tally.record(&path.display().to_string(), input) else { continue };
        for k in 0..count as u64 {
            let seed = ctx.cfg.surrogates.seed.wrapping_add(k);
            let s: Result<Series, String> = match kind {
                SurrogateKind::Shuffle => Ok(shuffle_surrogate(&i.series, seed)),
                SurrogateKind::Phase => phase_randomized_surrogate(&i.series, seed).map_err(|e| e.to_string()),
            };
            let tag = match kind {
                SurrogateKind::Shuffle => "shuffle",
                SurrogateKind::Phase => "phase",
            };
            match s {
                Ok(s) => w.csv(&format!("{}.{tag}-{seed}.csv", i.name), &output::series_csv(&s, "value"))?,
                Err(e) => {
                    log::error!("{}: {e}", i.name);
                    tally.failed += 1;
                    break;
                }
            }
        }
    }
    Ok(tally)
}

#[derive(Serialize)]
struct ZipfReport<'a> {
    name: &'a str,
    path: &'a str,
    source_hash: &'a str,
    include_terminators: bool,
    fold_case: bool,
    rank_range: (usize, usize),
    total_tokens: usize,
    distinct: usize,
    fit: LinearFit,
    terminator: Option<TerminatorPlacement>,
}

/// Where the pooled terminator pseudo-word falls relative to the Zipf line.
#[derive(Serialize)]
struct TerminatorPlacement {
    rank: usize,
    count: usize,
    predicted_count: f64,
    log10_residual: f64,
}

fn terminator_placement(table: &RankFrequencyTable, fit: &LinearFit) -> Option<TerminatorPlacement> {
    let e = table.find(TERMINATOR_PSEUDO_WORD)?;
    let predicted = fit.predict((e.rank as f64).log10());
    Some(TerminatorPlacement {
        rank: e.rank,
        count: e.count,
        predicted_count: 10f64.powf(predicted),
        log10_residual: (e.count as f64).log10() - predicted,
    })
}

fn cmd_zipf(
    ctx: &Ctx,
    paths: &[PathBuf],
    terminators: bool,
    fold_case: bool,
    rank_min: usize,
    rank_max: usize,
) -> Result<Tally, Fatal> {
    if ctx.series_csv {
        return Err("zipf needs texts, not --series-csv".into());
    }
    let mut w = Writer::new(&ctx.out)?;
    let mut tally = Tally::default();
    for (path, input) in ctx.load_all(paths)? {
        let r = input.and_then(|i| {
            let doc = &i.text.as_ref().expect("text input").doc;
            let table = rank_frequency(doc, terminators, fold_case, TERMINATOR_PSEUDO_WORD);
            let fit = zipf_fit(&table, rank_min, rank_max).map_err(|e| format!("Zipf fit: {e}"))?;
            Ok((i, table, fit))
        });
        let Some((i, table, fit)) = tally.record(&path.display().to_string(), r) else { continue };
        let n = &i.name;
        println!("{n}\tzipf_slope={:.4}+/-{:.4}", fit.slope, fit.slope_stderr);
        let rows = table.entries.iter().map(|e| [e.rank.to_string(), e.count.to_string(), e.surface.clone()]);
        w.csv(&format!("{n}.zipf.csv"), &to_csv(&["rank", "count", "word"], rows))?;
        w.svg(&format!("{n}.zipf.svg"), || {
            let pts = table.entries.iter().map(|e| (e.rank as f64, e.count as f64)).collect();
            let line = [rank_min as f64, rank_max as f64].map(|r| (r, 10f64.powf(fit.predict(r.log10()))));
            let mut plot = svg::Plot::new(n, "rank", "count")
                .log_log()
                .layer(svg::Layer::new("words", pts, svg::Mark::Dots, svg::PALETTE[0]))
                .layer(svg::Layer::new(
                    format!("slope {:.3}", fit.slope),
                    line.to_vec(),
                    svg::Mark::Line,
                    svg::PALETTE[1],
                ));
            if let Some(e) = table.find(TERMINATOR_PSEUDO_WORD) {
                plot = plot.layer(svg::Layer::new(
                    "full stops",
                    vec![(e.rank as f64, e.count as f64)],
                    svg::Mark::Dots,
                    svg::PALETTE[2],
                ));
            }
            plot.render()
        })?;
        let rep = ZipfReport {
            name: n,
            path: &i.path,
            source_hash: &i.source_hash,
            include_terminators: terminators,
            fold_case,
            rank_range: (rank_min, rank_max),
            total_tokens: table.total(),
            distinct: table.entries.len(),
            terminator: terminator_placement(&table, &fit),
            fit,
        };
        w.json(&format!("{n}.zipf.json"), &rep)?;
    }
    Ok(tally)
}

#[derive(Serialize)]
struct CcdfReport {
    name: String,
    inputs: Vec<String>,
    config_digest: String,
    n_samples: usize,
    tail: Option<distfit::TailFit>,
    tail_error: Option<String>,
    /// Fit over 10 < l <= 100, where b near 1 indicates an exponential body.
    body: Option<distfit::TailFit>,
}

fn cmd_ccdf(ctx: &Ctx, paths: &[PathBuf], pool: bool) -> Result<Tally, Fatal> {
    let mut w = Writer::new(&ctx.out)?;
    let mut tally = Tally::default();
    let mut inputs = Vec::new();
    for (path, input) in ctx.load_all(paths)? {
        if let Some(i) = tally.record(&path.display().to_string(), input) {
            inputs.push(i);
        }
    }
    let groups: Vec<(String, Vec<&Input>)> = if pool {
        if inputs.is_empty() {
            Vec::new()
        } else {
            vec![("pooled".to_string(), inputs.iter().collect())]
        }
    } else {
        inputs.iter().map(|i| (i.name.clone(), vec![i])).collect()
    };
    for (name, members) in groups {
        let slices: Vec<&[f64]> = members.iter().map(|i| i.series.values()).collect();
        let c = match distfit::ccdf_pooled(&slices) {
            Ok(c) => c,
            Err(e) => {
                log::error!("{name}: {e}");
                tally.failed += 1;
                continue;
            }
        };
        let tail = distfit::fit_stretched_exponential(&c, ctx.cfg.tail.tail_start);
        let body = distfit::fit_stretched_exponential_range(&c, 10.0, 100.0).ok();
        match &tail {
            Ok(t) => println!("{name}\tmu={:.4}\tb={:.4}\tpoints={}", t.mu, t.b, t.n_points),
            Err(e) => log::warn!("{name}: tail fit: {e}"),
        }
        w.csv(&format!("{name}.ccdf.csv"), &output::ccdf_csv(&c))?;
        w.svg(&format!("{name}.ccdf.svg"), || output::ccdf_plot(&name, &c, tail.as_ref().ok()))?;
        let rep = CcdfReport {
            inputs: members.iter().map(|i| i.path.clone()).collect(),
            config_digest: ctx.cfg.digest(),
            n_samples: c.n_samples,
            tail_error: tail.as_ref().err().map(|e| e.to_string()),
            tail: tail.ok(),
            body,
            name,
        };
        w.json(&format!("{}.ccdf.json", rep.name), &rep)?;
    }
    Ok(tally)
}

#[derive(Serialize)]
struct RecurrenceReport<'a> {
    name: &'a str,
    target: &'a str,
    path: &'a str,
    source_hash: &'a str,
    config_digest: String,
    n_gaps: usize,
    mean_gap: f64,
    /// Spectral exponent of the recurrence series (beta^w).
    spectrum: Option<spectral::SpectrumFit>,
    mfdfa: Option<pipeline::MfdfaSummary>,
    errors: Vec<String>,
}

fn file_safe(word: &str) -> String {
    word.chars().map(|c| if c.is_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

fn cmd_recurrence(
    ctx: &Ctx,
    paths: &[PathBuf],
    words: &[String],
    full_stop: bool,
    fold_case: bool,
) -> Result<Tally, Fatal> {
    if ctx.series_csv {
        return Err("recurrence needs texts, not --series-csv".into());
    }
    if words.is_empty() && !full_stop {
        return Err("give at least one --word or --full-stop".into());
    }
    let mut w = Writer::new(&ctx.out)?;
    let mut tally = Tally::default();
    for (path, input) in ctx.load_all(paths)? {
        let Some(i) = tally.record(&path.display().to_string(), input) else { continue };
        let text = i.text.as_ref().expect("text input");
        let mut targets: Vec<(String, Result<RecurrenceSeries, String>)> = words
            .iter()
            .map(|t| (file_safe(t), word_recurrence_series(&text.doc, t, fold_case).map_err(|e| e.to_string())))
            .collect();
        if full_stop {
            let r = terminator_recurrence_series(&text.doc, &text.sentences).map_err(|e| e.to_string());
            targets.push(("full-stop".into(), r));
        }
        for (tag, rec) in targets {
            let rec = match rec {
                Ok(r) => r,
                Err(e) => {
                    log::error!("{}: {e}", i.name);
                    tally.failed += 1;
                    continue;
                }
            };
            let series = rec.to_series();
            let mut errors = Vec::new();
            let ps = spectral::power_spectrum(&series).map_err(|e| e.to_string());
            let fit = ps.as_ref().map_err(Clone::clone).and_then(|ps| pipeline::spectral_fit(ps, &ctx.cfg));
            let mf = pipeline::run_mfdfa(&series, &ctx.cfg).and_then(|m| pipeline::mfdfa_summary(&m, &ctx.cfg));
            let fit = fit.map_err(|e| errors.push(e)).ok();
            let mf = mf.map_err(|e| errors.push(e)).ok();
            let stem = format!("{}.recurrence-{tag}", i.name);
            println!(
                "{}\t{}\tgaps={}\tbeta_w={}\tH={}\tdelta_alpha={}",
                i.name,
                rec.target_word,
                rec.gaps.len(),
                fit.as_ref().map_or("-".into(), |f| format!("{:.4}", f.beta)),
                mf.as_ref().map_or("-".into(), |m| format!("{:.4}", m.hurst)),
                mf.as_ref().map_or("-".into(), |m| format!("{:.4}", m.delta_alpha)),
            );
            w.csv(
                &format!("{stem}.csv"),
                &to_csv(
                    &["index", "gap"],
                    rec.gaps.iter().enumerate().map(|(k, g)| [(k + 1).to_string(), g.to_string()]),
                ),
            )?;
            if let (Ok(ps), Some(f)) = (&ps, &fit) {
                w.svg(&format!("{stem}.spectrum.svg"), || output::spectrum_plot(&stem, ps, Some(f)))?;
            }
            let rep = RecurrenceReport {
                name: &i.name,
                target: &rec.target_word,
                path: &i.path,
                source_hash: &i.source_hash,
                config_digest: ctx.cfg.digest(),
                n_gaps: rec.gaps.len(),
                mean_gap: textfract::stats::mean(series.values()),
                spectrum: fit,
                mfdfa: mf,
                errors,
            };
            w.json(&format!("{stem}.json"), &rep)?;
        }
    }
    Ok(tally)
}

#[derive(Serialize)]
struct SliceRow {
    level: u32,
    part: usize,
    from: usize,
    to: usize,
    beta: Option<f64>,
    hurst: Option<f64>,
    delta_alpha: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SliceReport<'a> {
    name: &'a str,
    path: &'a str,
    source_hash: &'a str,
    config_digest: String,
    j_max: usize,
    slices: Vec<SliceRow>,
}

fn analyze_slice(
    values: &[f64],
    name: &str,
    cfg: &AnalysisConfig,
) -> (Option<f64>, Option<f64>, Option<f64>, Option<String>) {
    let series = match Series::empirical(values.to_vec(), name) {
        Ok(s) => s,
        Err(e) => return (None, None, None, Some(e.to_string())),
    };
    let beta = spectral::power_spectrum(&series)
        .map_err(|e| e.to_string())
        .and_then(|ps| pipeline::spectral_fit(&ps, cfg))
        .map(|f| f.beta);
    let mf = pipeline::run_mfdfa(&series, cfg).and_then(|m| pipeline::mfdfa_summary(&m, cfg));
    let err = [beta.as_ref().err(), mf.as_ref().err()].into_iter().flatten().cloned().collect::<Vec<_>>();
    (
        beta.ok(),
        mf.as_ref().ok().map(|m| m.hurst),
        mf.as_ref().ok().map(|m| m.delta_alpha),
        (!err.is_empty()).then(|| err.join("; ")),
    )
}

fn cmd_slice(
    ctx: &Ctx,
    paths: &[PathBuf],
    from: Option<usize>,
    to: Option<usize>,
    bisect: Option<u32>,
) -> Result<Tally, Fatal> {
    let mut w = Writer::new(&ctx.out)?;
    let mut tally = Tally::default();
    for (path, input) in ctx.load_all(paths)? {
        let Some(i) = tally.record(&path.display().to_string(), input) else { continue };
        let len = i.series.len();
        let mut ranges: Vec<(u32, usize, usize, usize)> = Vec::new();
        if let Some(depth) = bisect {
            for level in 0..=depth {
                let parts = 1usize << level;
                for p in 0..parts {
                    let a = p * len / parts + 1;
                    let b = (p + 1) * len / parts;
                    if b >= a {
                        ranges.push((level, p + 1, a, b));
                    }
                }
            }
        } else {
            ranges.push((0, 1, from.unwrap_or(1), to.unwrap_or(len)));
        }
        let mut rows = Vec::new();
        for (level, part, a, b) in ranges {
            if a < 1 || a > b || b > len {
                let e = textfract::corpus::CorpusError::Bounds { from: a, to: b, len };
                log::error!("{}: {e}", i.name);
                tally.failed += 1;
                continue;
            }
            if let (Some(text), true) = (&i.text, bisect.is_none()) {
                let sliced = slice_series(&text.lengths, a, b)?;
                w.csv(&format!("{}.slice-{a}-{b}.csv", i.name), &textfract::io::series_csv(&sliced))?;
            }
            let (beta, hurst, delta_alpha, error) = analyze_slice(&i.series.values()[a - 1..b], &i.name, &ctx.cfg);
            println!(
                "{}\t{a}..={b}\tbeta={}\tH={}\tdelta_alpha={}",
                i.name,
                beta.map_or("-".into(), |v| format!("{v:.4}")),
                hurst.map_or("-".into(), |v| format!("{v:.4}")),
                delta_alpha.map_or("-".into(), |v| format!("{v:.4}"))
            );
            rows.push(SliceRow { level, part, from: a, to: b, beta, hurst, delta_alpha, error });
        }
        let csv_rows = rows.iter().map(|r| {
            let o = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            [
                r.level.to_string(),
                r.part.to_string(),
                r.from.to_string(),
                r.to.to_string(),
                o(r.beta),
                o(r.hurst),
                o(r.delta_alpha),
            ]
        });
        w.csv(
            &format!("{}.slices.csv", i.name),
            &to_csv(&["level", "part", "from", "to", "beta", "hurst", "delta_alpha"], csv_rows),
        )?;
        let rep = SliceReport {
            name: &i.name,
            path: &i.path,
            source_hash: &i.source_hash,
            config_digest: ctx.cfg.digest(),
            j_max: len,
            slices: rows,
        };
        w.json(&format!("{}.slices.json", i.name), &rep)?;
    }
    Ok(tally)
}

fn cmd_generate(
    ctx: &Ctx,
    kind: GeneratorKind,
    output: &Path,
    p: f64,
    levels: u32,
    hurst: f64,
    n: usize,
) -> Result<Tally, Fatal> {
    let seed = ctx.cfg.surrogates.seed;
    let series = match kind {
        GeneratorKind::Cascade => generate_binomial_cascade(p, levels)?,
        GeneratorKind::Fgn => generate_fgn(hurst, n, seed)?,
        GeneratorKind::Noise => generate_white_noise(n, seed, NoiseDistribution::Gaussian)?,
    };
    if let Some(dir) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(output, output::series_csv(&series, "value"))?;
    log::info!("wrote {} values to {}", series.len(), output.display());
    Ok(Tally { ok: 1, failed: 0 })
}
