//! Small hand-rolled SVG charts. Coordinates are printed with fixed
//! precision so files are byte-stable.

use std::fmt::Write as _;

use textfract::wavelet::WaveletMap;

const W: f64 = 640.0;
const H: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mark {
    Line,
    Dots,
}

#[derive(Debug, Clone)]
pub struct Layer {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub mark: Mark,
    pub color: &'static str,
}

impl Layer {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>, mark: Mark, color: &'static str) -> Self {
        Self { label: label.into(), points, mark, color }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub layers: Vec<Layer>,
    /// Shaded horizontal band `(y_lo, y_hi)`.
    pub band: Option<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        let p = 10f64.powf(v);
        if (1e-3..1e4).contains(&p.abs()) {
            format!("{}", (p * 1000.0).round() / 1000.0)
        } else {
            format!("{p:.1e}")
        }
    } else {
        format!("{}", (v * 1000.0).round() / 1000.0)
    }
}

impl Plot {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Self { title: title.into(), x_label: x_label.into(), y_label: y_label.into(), ..Default::default() }
    }

    pub fn log_log(mut self) -> Self {
        self.log_x = true;
        self.log_y = true;
        self
    }

    pub fn layer(mut self, layer: Layer) -> Self {
        self.layers.push(layer);
        self
    }

    fn transform(&self, (x, y): (f64, f64)) -> Option<(f64, f64)> {
        let x = if self.log_x { (x > 0.0).then(|| x.log10())? } else { x };
        let y = if self.log_y { (y > 0.0).then(|| y.log10())? } else { y };
        (x.is_finite() && y.is_finite()).then_some((x, y))
    }

    pub fn render(&self) -> String {
        let pts: Vec<Vec<(f64, f64)>> =
            self.layers.iter().map(|l| l.points.iter().filter_map(|&p| self.transform(p)).collect()).collect();
        let mut xs: Vec<f64> = pts.iter().flatten().map(|p| p.0).collect();
        let mut ys: Vec<f64> = pts.iter().flatten().map(|p| p.1).collect();
        if let Some((lo, hi)) = self.band {
            ys.extend(self.transform((1.0, lo)).map(|p| p.1));
            ys.extend(self.transform((1.0, hi)).map(|p| p.1));
        }
        if xs.is_empty() {
            xs.push(0.0);
            ys.push(0.0);
        }
        let range = |v: &[f64]| {
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let pad = if hi > lo { 0.04 * (hi - lo) } else { 0.5 };
            (lo - pad, hi + pad)
        };
        let (x0, x1) = range(&xs);
        let (y0, y1) = range(&ys);
        let pw = W - LEFT - RIGHT;
        let ph = H - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            W / 2.0,
            escape(&self.title)
        );
        if let Some((lo, hi)) = self.band {
            if let (Some(a), Some(b)) = (self.transform((1.0, lo)), self.transform((1.0, hi))) {
                let _ = writeln!(
                    out,
                    r##"<rect x="{LEFT:.1}" y="{:.2}" width="{pw:.1}" height="{:.2}" fill="#cccccc" fill-opacity="0.5"/>"##,
                    sy(b.1),
                    (sy(a.1) - sy(b.1)).max(0.5)
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<rect x="{LEFT:.1}" y="{TOP:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="black"/>"#
        );
        for i in 0..=4 {
            let t = i as f64 / 4.0;
            let xv = x0 + t * (x1 - x0);
            let yv = y0 + t * (y1 - y0);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.1}" text-anchor="middle">{}</text>"#,
                sx(xv),
                TOP + ph + 18.0,
                tick_label(xv, self.log_x)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 6.0,
                sy(yv) + 4.0,
                tick_label(yv, self.log_y)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            H - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );
        for (li, (layer, p)) in self.layers.iter().zip(&pts).enumerate() {
            match layer.mark {
                Mark::Line => {
                    let path: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                    let _ = writeln!(
                        out,
                        r#"<polyline fill="none" stroke="{}" stroke-width="1.2" points="{}"/>"#,
                        layer.color,
                        path.join(" ")
                    );
                }
                Mark::Dots => {
                    for &(x, y) in p {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{}"/>"#,
                            sx(x),
                            sy(y),
                            layer.color
                        );
                    }
                }
            }
            if !layer.label.is_empty() {
                let ly = TOP + 14.0 + 15.0 * li as f64;
                let _ = writeln!(
                    out,
                    r#"<text x="{:.1}" y="{ly:.1}" text-anchor="end" fill="{}">{}</text>"#,
                    LEFT + pw - 8.0,
                    layer.color,
                    escape(&layer.label)
                );
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Heat map of `|T(s,k)|`, scale on a log axis growing upward, linear grey
/// scale from min (white) to max (black). Cone-of-influence cells are drawn
/// at half opacity.
pub fn wavelet_heatmap(title: &str, map: &WaveletMap) -> String {
    let cols = map.positions.len().max(1);
    let rows = map.scales.len().max(1);
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let cw = pw / cols as f64;
    let rh = ph / rows as f64;
    let (lo, hi) = map
        .coefficients
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v.abs()), b.max(v.abs())));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12" shape-rendering="crispEdges">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    for (si, (row, cone)) in map.coefficients.iter().zip(&map.cone_of_influence).enumerate() {
        let y = TOP + ph - (si + 1) as f64 * rh;
        for (pi, (c, &edge)) in row.iter().zip(cone).enumerate() {
            let g = (255.0 * (1.0 - (c.abs() - lo) / span)).round() as u8;
            let opacity = if edge { " fill-opacity=\"0.5\"" } else { "" };
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="rgb({g},{g},{g})"{opacity}/>"#,
                LEFT + pi as f64 * cw,
                cw + 0.05,
                rh + 0.05
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT:.1}" y="{TOP:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="black"/>"#
    );
    if let (Some(first), Some(last)) = (map.positions.first(), map.positions.last()) {
        let _ = writeln!(out, r#"<text x="{LEFT:.1}" y="{:.1}">{first}</text>"#, TOP + ph + 18.0);
        let _ =
            writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{last}</text>"#, LEFT + pw, TOP + ph + 18.0);
    }
    if let (Some(s0), Some(s1)) = (map.scales.first(), map.scales.last()) {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{s0:.1}</text>"#, LEFT - 6.0, TOP + ph);
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{s1:.1}</text>"#, LEFT - 6.0, TOP + 10.0);
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">sentence index j</text>"#,
        LEFT + pw / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">scale s (|T| white = {lo:.3e}, black = {hi:.3e})</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );
    out.push_str("</svg>\n");
    out
}
