//! Writes tables, reports and plots into the output directory.

use std::io;

use textfract::distfit::{Ccdf, TailFit};
use textfract::io::{to_csv, to_json};
use textfract::mfdfa::MfdfaResult;
use textfract::series::Series;
use textfract::spectral::{PowerSpectrum, SpectrumFit};

use crate::config::{Format, OutputOptions};
use crate::pipeline::{CorpusSummary, TextAnalysis};
use crate::svg::{Layer, Mark, Plot, PALETTE};

pub struct Writer<'a> {
    pub opts: &'a OutputOptions,
}

impl<'a> Writer<'a> {
    pub fn new(opts: &'a OutputOptions) -> io::Result<Self> {
        std::fs::create_dir_all(&opts.dir)?;
        Ok(Self { opts })
    }

    fn put(&mut self, format: Format, file: &str, content: &str) -> io::Result<()> {
        if !self.opts.wants(format) {
            return Ok(());
        }
        let path = self.opts.dir.join(file);
        std::fs::write(&path, content)?;
        log::info!("wrote {}", path.display());
        Ok(())
    }

    pub fn csv(&mut self, file: &str, content: &str) -> io::Result<()> {
        self.put(Format::Csv, file, content)
    }

    pub fn json<T: serde::Serialize>(&mut self, file: &str, value: &T) -> io::Result<()> {
        self.put(Format::Json, file, &to_json(value))
    }

    pub fn svg(&mut self, file: &str, content: impl FnOnce() -> String) -> io::Result<()> {
        if self.opts.wants(Format::Svg) {
            let c = content();
            self.put(Format::Svg, file, &c)?;
        }
        Ok(())
    }
}

pub fn series_csv(series: &Series, header: &str) -> String {
    to_csv(&["index", header], series.values().iter().enumerate().map(|(i, v)| [(i + 1).to_string(), v.to_string()]))
}

pub fn spectrum_csv(ps: &PowerSpectrum) -> String {
    to_csv(&["frequency", "power"], ps.freqs.iter().zip(&ps.power).map(|(f, p)| [f.to_string(), p.to_string()]))
}

pub fn spectrum_plot(title: &str, ps: &PowerSpectrum, fit: Option<&SpectrumFit>) -> String {
    let mut plot = Plot::new(title, "frequency f", "power S(f)").log_log().layer(Layer::new(
        "periodogram",
        ps.freqs.iter().cloned().zip(ps.power.iter().cloned()).collect(),
        Mark::Line,
        PALETTE[0],
    ));
    if let Some(fit) = fit {
        let (lo, hi) = fit.fit_range;
        let line = |f: f64| (fit.log_intercept - fit.beta * f.ln()).exp();
        plot = plot.layer(Layer::new(
            format!("beta = {:.3} +/- {:.3}", fit.beta, fit.sigma_beta),
            vec![(lo, line(lo)), (hi, line(hi))],
            Mark::Line,
            PALETTE[1],
        ));
    }
    plot.render()
}

pub fn fluctuation_csv(r: &MfdfaResult) -> String {
    let s = &r.surface;
    let rows = s.q_values.iter().enumerate().flat_map(|(qi, q)| {
        s.scales.iter().enumerate().map(move |(si, sc)| [sc.to_string(), q.to_string(), s.f[qi][si].to_string()])
    });
    to_csv(&["s", "q", "F"], rows)
}

pub fn hq_csv(r: &MfdfaResult) -> String {
    let (gh, sp) = (&r.hurst, &r.spectrum);
    let rows = (0..gh.q_values.len()).map(|i| {
        [
            gh.q_values[i].to_string(),
            gh.h[i].to_string(),
            gh.h_stderr[i].to_string(),
            sp.alphas[i].to_string(),
            sp.f_values[i].to_string(),
        ]
    });
    to_csv(&["q", "h", "h_stderr", "alpha", "f_alpha"], rows)
}

pub fn fluctuation_plot(title: &str, r: &MfdfaResult) -> String {
    let s = &r.surface;
    let mut plot = Plot::new(title, "scale s", "F_q(s)").log_log();
    let picks = [-4.0, -2.0, 0.0, 2.0, 4.0];
    let mut chosen: Vec<usize> = (0..s.q_values.len()).filter(|&i| picks.contains(&s.q_values[i])).collect();
    if chosen.is_empty() {
        chosen = vec![0, s.q_values.len() - 1];
    }
    for (color, &qi) in chosen.iter().enumerate() {
        let pts = s.scales.iter().zip(&s.f[qi]).map(|(&sc, &f)| (sc as f64, f)).collect();
        let label = format!("q = {}", s.q_values[qi]);
        plot = plot.layer(Layer::new(label, pts, Mark::Line, PALETTE[color % PALETTE.len()]));
    }
    plot.render()
}

pub fn falpha_plot(title: &str, r: &MfdfaResult) -> String {
    let sp = &r.spectrum;
    Plot::new(title, "alpha", "f(alpha)")
        .layer(Layer::new(
            format!("delta alpha = {:.3}", sp.delta_alpha),
            sp.alphas.iter().cloned().zip(sp.f_values.iter().cloned()).collect(),
            Mark::Line,
            PALETTE[0],
        ))
        .render()
}

pub fn ccdf_csv(c: &Ccdf) -> String {
    to_csv(&["length", "survival"], c.lengths.iter().zip(&c.survival).map(|(l, f)| [l.to_string(), f.to_string()]))
}

pub fn ccdf_plot(title: &str, c: &Ccdf, fit: Option<&TailFit>) -> String {
    let mut plot = Plot::new(title, "sentence length l", "F(l) = Pr(length >= l)").log_log().layer(Layer::new(
        "empirical",
        c.lengths.iter().cloned().zip(c.survival.iter().cloned()).collect(),
        Mark::Dots,
        PALETTE[0],
    ));
    if let Some(t) = fit {
        let lo = t.fit_range.0.max(1.0);
        let hi = c.lengths.last().copied().unwrap_or(lo).max(lo);
        let pts = (0..=50).map(|i| lo * (hi / lo).powf(i as f64 / 50.0)).map(|l| (l, t.survival(l))).collect();
        plot = plot.layer(Layer::new(format!("exp(-{:.3} l^{:.3})", t.mu, t.b), pts, Mark::Line, PALETTE[1]));
    }
    plot.render()
}

pub fn write_text(w: &mut Writer, a: &TextAnalysis, series: &Series, is_text: bool) -> io::Result<()> {
    let n = &a.report.name;
    w.json(&format!("{n}.report.json"), &a.report)?;
    w.csv(&format!("{n}.series.csv"), &series_csv(series, if is_text { "length" } else { "value" }))?;
    w.csv(&format!("{n}.spectrum.csv"), &spectrum_csv(&a.spectrum))?;
    w.csv(&format!("{n}.fluctuation.csv"), &fluctuation_csv(&a.mfdfa))?;
    w.csv(&format!("{n}.hq.csv"), &hq_csv(&a.mfdfa))?;
    w.csv(&format!("{n}.ccdf.csv"), &ccdf_csv(&a.ccdf))?;
    w.svg(&format!("{n}.spectrum.svg"), || spectrum_plot(n, &a.spectrum, Some(&a.report.spectrum)))?;
    w.svg(&format!("{n}.fluctuation.svg"), || fluctuation_plot(n, &a.mfdfa))?;
    w.svg(&format!("{n}.falpha.svg"), || falpha_plot(n, &a.mfdfa))?;
    w.svg(&format!("{n}.ccdf.svg"), || ccdf_plot(n, &a.ccdf, a.report.tail.fit.as_ref()))?;
    Ok(())
}

pub fn write_summary(w: &mut Writer, s: &CorpusSummary, avg: Option<&PowerSpectrum>) -> io::Result<()> {
    w.json("summary.json", s)?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let rows = s.texts.iter().map(|t| {
        [
            t.name.clone(),
            t.j_max.to_string(),
            t.beta.to_string(),
            t.sigma_beta.to_string(),
            t.hurst.to_string(),
            t.hurst_stderr.to_string(),
            t.delta_alpha.to_string(),
            opt(t.shuffled_delta_alpha_mean),
            t.exceeds_band.map(|b| b.to_string()).unwrap_or_default(),
        ]
    });
    w.csv(
        "summary.csv",
        &to_csv(
            &[
                "name",
                "j_max",
                "beta",
                "sigma_beta",
                "hurst",
                "hurst_stderr",
                "delta_alpha",
                "shuffled_delta_alpha_mean",
                "exceeds_band",
            ],
            rows,
        ),
    )?;
    w.svg("scatter.svg", || {
        let mut plot = Plot::new("delta alpha vs H", "H", "delta alpha").layer(Layer::new(
            "texts",
            s.texts.iter().map(|t| (t.hurst, t.delta_alpha)).collect(),
            Mark::Dots,
            PALETTE[0],
        ));
        plot.band = s.shuffled_band.map(|b| (b.lower, b.upper));
        plot.render()
    })?;
    if let Some(avg) = avg {
        w.csv("average_spectrum.csv", &spectrum_csv(avg))?;
        w.svg("average_spectrum.svg", || spectrum_plot("average spectrum", avg, s.average_spectrum_fit.as_ref()))?;
    }
    Ok(())
}
