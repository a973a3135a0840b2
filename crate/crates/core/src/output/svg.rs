//! Minimal SVG 1.1 line charts with byte-stable output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::OutputError;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const DASHES: [&str; 3] = ["", "6,3", "2,2"];
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const TARGET_TICKS: f64 = 6.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub width: u32,
    pub height: u32,
}

impl Default for PlotStyle {
    fn default() -> Self {
        Self { title: String::new(), x_label: "t".into(), y_label: String::new(), width: 640, height: 400 }
    }
}

/// Tick positions on a 1-2-5 grid covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> (Vec<f64>, f64) {
    let raw = (hi - lo) / TARGET_TICKS;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), step)
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{v:.decimals$}");
    // avoid "-0"
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn bounds(series: &[Series]) -> (f64, f64, f64, f64) {
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in series.iter().flat_map(|s| s.points.iter()) {
        b = (b.0.min(*x), b.1.max(*x), b.2.min(*y), b.3.max(*y));
    }
    let (mut x0, mut x1, mut y0, mut y1) = b;
    if x1 - x0 <= 0.0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 <= 0.0 {
        let pad = if y0 == 0.0 { 1.0 } else { 0.1 * y0.abs() };
        y0 -= pad;
        y1 += pad;
    } else {
        let pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
    }
    (x0, x1, y0, y1)
}

/// Renders the chart to a string.
pub fn render_svg(series: &[Series], style: &PlotStyle) -> Result<String, OutputError> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(OutputError::EmptySeries);
    }
    for s in series {
        if let Some(index) = s.points.iter().position(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(OutputError::NonFinite { label: s.label.clone(), index });
        }
    }
    let (w, h) = (style.width as f64, style.height as f64);
    let (x0, x1, y0, y1) = bounds(series);
    let (pl, pr, pt, pb) = (MARGIN_LEFT, w - MARGIN_RIGHT, MARGIN_TOP, h - MARGIN_BOTTOM);
    let sx = |x: f64| pl + (x - x0) / (x1 - x0) * (pr - pl);
    let sy = |y: f64| pb - (y - y0) / (y1 - y0) * (pb - pt);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        style.width, style.height, style.width, style.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !style.title.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
            w / 2.0,
            escape(&style.title)
        );
    }

    // axes frame
    let _ = writeln!(
        out,
        r#"<rect x="{pl:.2}" y="{pt:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black" stroke-width="1"/>"#,
        pr - pl,
        pb - pt
    );
    let (xt, xstep) = ticks(x0, x1);
    for v in xt {
        let x = sx(v);
        let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{pb:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, pb + 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            pb + 18.0,
            tick_label(v, xstep)
        );
    }
    let (yt, ystep) = ticks(y0, y1);
    for v in yt {
        let y = sy(v);
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{y:.2}" x2="{pl:.2}" y2="{y:.2}" stroke="black"/>"#, pl - 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            pl - 8.0,
            y + 4.0,
            tick_label(v, ystep)
        );
    }
    if y0 < 0.0 && y1 > 0.0 {
        let y = sy(0.0);
        let _ = writeln!(
            out,
            r##"<line x1="{pl:.2}" y1="{y:.2}" x2="{pr:.2}" y2="{y:.2}" stroke="#888888" stroke-dasharray="3,3"/>"##
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        (pl + pr) / 2.0,
        h - 12.0,
        escape(&style.x_label)
    );
    if !style.y_label.is_empty() {
        let (cx, cy) = (18.0, (pt + pb) / 2.0);
        let _ = writeln!(
            out,
            r#"<text x="{cx:.2}" y="{cy:.2}" transform="rotate(-90 {cx:.2} {cy:.2})" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
            escape(&style.y_label)
        );
    }

    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let dash = DASHES[(k / PALETTE.len()) % DASHES.len()];
        let mut pts = String::with_capacity(s.points.len() * 16);
        for (i, (x, y)) in s.points.iter().enumerate() {
            if i > 0 {
                pts.push(' ');
            }
            let _ = write!(pts, "{:.2},{:.2}", sx(*x), sy(*y));
        }
        let dash_attr = if dash.is_empty() { String::new() } else { format!(r#" stroke-dasharray="{dash}""#) };
        let _ =
            writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} points="{pts}"/>"#);
    }

    // legend, top right inside the frame
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let y = pt + 16.0 + 16.0 * k as f64;
        let x = pr - 150.0;
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            x + 24.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
            x + 30.0,
            y + 4.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn write_svg_plot(series: &[Series], style: &PlotStyle, path: impl AsRef<Path>) -> Result<(), OutputError> {
    let path = path.as_ref();
    let text = render_svg(series, style)?;
    fs::write(path, text).map_err(|e| OutputError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(label: &str, f: impl Fn(f64) -> f64) -> Series {
        Series::new(label, (0..=10).map(|k| (k as f64, f(k as f64))).collect())
    }

    #[test]
    fn deterministic_bytes() {
        let s = [line("a", |x| x.sin()), line("b", |x| 0.1 * x)];
        let style = PlotStyle { title: "demo".into(), ..PlotStyle::default() };
        assert_eq!(render_svg(&s, &style).unwrap(), render_svg(&s, &style).unwrap());
    }

    #[test]
    fn structure() {
        let s = [line("a", |x| x.sin()), line("b <&>", |x| 0.1 * x)];
        let svg = render_svg(&s, &PlotStyle::default()).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("b &lt;&amp;&gt;"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn constant_zero_is_flat_on_zero_axis() {
        let svg = render_svg(&[line("zero", |_| 0.0)], &PlotStyle::default()).unwrap();
        let poly = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        let pts = poly.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
        let ys: Vec<&str> = pts.split(' ').map(|p| p.split(',').nth(1).unwrap()).collect();
        assert!(ys.iter().all(|y| *y == ys[0]));
        // y range is [-1, 1] so zero sits mid-frame
        let mid = (MARGIN_TOP + 400.0 - MARGIN_BOTTOM) / 2.0;
        assert_eq!(ys[0], format!("{mid:.2}"));
        assert!(svg.contains("stroke-dasharray=\"3,3\""));
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(matches!(render_svg(&[], &PlotStyle::default()), Err(OutputError::EmptySeries)));
        let bad = Series::new("bad", vec![(0.0, 1.0), (1.0, f64::NAN)]);
        assert!(matches!(render_svg(&[bad], &PlotStyle::default()), Err(OutputError::NonFinite { index: 1, .. })));
    }

    #[test]
    fn tick_grid() {
        let (t, step) = ticks(0.0, 50.0);
        assert_eq!(step, 10.0);
        assert_eq!(t, vec![0.0, 10.0, 20.0, 30.0, 40.0, 50.0]);
        assert_eq!(tick_label(-0.0, 0.5), "0.0");
        assert_eq!(tick_label(0.25, 0.05), "0.25");
    }
}
