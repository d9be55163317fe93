//! Static SVG 1.1 plots of orbits.
//!
//! Output depends only on the steps and options: fixed canvas, fixed number
//! formatting, no timestamps.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::map::{OrbitStep, Symbol};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotStyle {
    Timeseries,
    Cobweb,
}

#[derive(Clone, Debug)]
pub struct PlotOptions {
    pub style: PlotStyle,
    /// Half-width of the plotted window. Cobwebs default to 4; time series
    /// fit the finite values when unset.
    pub bound: Option<f64>,
    pub title: Option<String>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            style: PlotStyle::Timeseries,
            bound: None,
            title: None,
        }
    }
}

/// Linear map from a data window onto the plotting frame.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn clamp_y(&self, y: f64) -> f64 {
        y.clamp(self.y0, self.y1)
    }
}

/// Coordinates are printed with two decimals; `-0.00` is normalised.
fn n(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn color(sym: Symbol) -> &'static str {
    match sym {
        Symbol::S0 => "#1b6ca8",
        Symbol::S2 => "#2e8b57",
        Symbol::S4 => "#b5442c",
    }
}

fn finite(step: &OrbitStep) -> Option<f64> {
    if step.value.is_infinite() {
        return None;
    }
    let v = step.value.to_f64();
    v.is_finite().then_some(v)
}

/// Renders the orbit as an SVG document.
pub fn emit_plot(steps: &[OrbitStep], opts: &PlotOptions) -> Result<String> {
    let finite_count = steps.iter().filter(|s| finite(s).is_some()).count();
    if finite_count < 2 {
        return Err(Error::NothingToPlot);
    }
    if let Some(b) = opts.bound {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidArgument(format!("plot bound must be positive, got {b}")));
        }
    }
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = WIDTH,
        h = HEIGHT
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if let Some(t) = &opts.title {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="30" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
            n(WIDTH / 2.0),
            escape(t)
        );
    }
    match opts.style {
        PlotStyle::Timeseries => timeseries(&mut svg, steps, opts.bound),
        PlotStyle::Cobweb => cobweb(&mut svg, steps, opts.bound.unwrap_or(4.0)),
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn axes(svg: &mut String, f: &Frame, x_label: &str) {
    let (l, r) = (MARGIN, WIDTH - MARGIN);
    let (t, b) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        n(l),
        n(t),
        n(r - l),
        n(b - t)
    );
    if f.y0 < 0.0 && f.y1 > 0.0 {
        let y = f.py(0.0);
        let _ = writeln!(
            svg,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999999" stroke-width="0.5"/>"##,
            n(l),
            n(y),
            n(r),
            n(y)
        );
    }
    let text = |svg: &mut String, x: f64, y: f64, anchor: &str, s: &str| {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{}</text>"#,
            n(x),
            n(y),
            escape(s)
        );
    };
    text(svg, l - 4.0, b, "end", &label(f.y0));
    text(svg, l - 4.0, t + 8.0, "end", &label(f.y1));
    text(svg, l, b + 16.0, "middle", &label(f.x0));
    text(svg, r, b + 16.0, "middle", &label(f.x1));
    text(svg, WIDTH / 2.0, b + 32.0, "middle", x_label);
}

fn timeseries(svg: &mut String, steps: &[OrbitStep], bound: Option<f64>) {
    let values: Vec<f64> = steps.iter().filter_map(finite).collect();
    let (mut y0, mut y1) = match bound {
        Some(b) => (-b, b),
        None => values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v))),
    };
    if y1 - y0 < 1e-9 {
        y0 -= 1.0;
        y1 += 1.0;
    } else {
        let pad = (y1 - y0) * 0.05;
        y0 -= pad;
        y1 += pad;
    }
    let first = steps.first().map_or(0, |s| s.index) as f64;
    let last = steps.last().map_or(1, |s| s.index) as f64;
    let f = Frame {
        x0: first,
        x1: if last > first { last } else { first + 1.0 },
        y0,
        y1,
    };
    axes(svg, &f, "step");

    // the polyline breaks at infinite steps
    let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for s in steps {
        match finite(s) {
            Some(v) => runs.last_mut().unwrap().push((f.px(s.index as f64), f.py(f.clamp_y(v)))),
            None => runs.push(Vec::new()),
        }
    }
    for run in runs.iter().filter(|r| r.len() >= 2) {
        let pts: Vec<String> = run.iter().map(|(x, y)| format!("{},{}", n(*x), n(*y))).collect();
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#555555" stroke-width="1"/>"##,
            pts.join(" ")
        );
    }
    for s in steps {
        let x = f.px(s.index as f64);
        match finite(s) {
            Some(v) if v < f.y0 || v > f.y1 => clipped_marker(svg, x, f.py(f.clamp_y(v)), v > 0.0),
            Some(v) => {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{}" cy="{}" r="2.5" fill="{}"/>"#,
                    n(x),
                    n(f.py(v)),
                    color(s.symbol)
                );
            }
            None => clipped_marker(svg, x, MARGIN, true),
        }
    }
}

/// A triangle on the frame edge pointing outward.
fn clipped_marker(svg: &mut String, x: f64, y: f64, up: bool) {
    let d = if up { -6.0 } else { 6.0 };
    let _ = writeln!(
        svg,
        r#"<polygon points="{},{} {},{} {},{}" fill="black"/>"#,
        n(x - 4.0),
        n(y),
        n(x + 4.0),
        n(y),
        n(x),
        n(y + d)
    );
}

fn cobweb(svg: &mut String, steps: &[OrbitStep], b: f64) {
    let f = Frame {
        x0: -b,
        x1: b,
        y0: -b,
        y1: b,
    };
    axes(svg, &f, "x");
    let line = |svg: &mut String, (ax, ay): (f64, f64), (bx, by): (f64, f64), style: &str| {
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
            n(f.px(ax)),
            n(f.py(ay)),
            n(f.px(bx)),
            n(f.py(by))
        );
    };
    line(svg, (-b, -b), (b, b), r##"stroke="#999999" stroke-width="0.5""##);
    // translation branches
    let lo = (-b).min(-1.0);
    let hi = b.max(1.0);
    let seg = |svg: &mut String, x0: f64, x1: f64, g: &dyn Fn(f64) -> f64, sym: Symbol| {
        let pts = sample(x0, x1, g, &f);
        if pts.len() >= 2 {
            let s: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", n(*x), n(*y))).collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                s.join(" "),
                color(sym)
            );
        }
    };
    seg(svg, lo.max(-b), -1.0, &|x| x + 1.0, Symbol::S2);
    seg(svg, -1.0, -1e-9, &|x| -1.0 / x, Symbol::S0);
    seg(svg, 1e-9, 1.0, &|x| -1.0 / x, Symbol::S0);
    seg(svg, 1.0, hi.min(b), &|x| x - 1.0, Symbol::S4);

    // orbit: (x0, x0) -> (x0, x1) -> (x1, x1) -> ...
    let mut path: Vec<String> = Vec::new();
    let flush = |svg: &mut String, path: &mut Vec<String>| {
        if path.len() >= 2 {
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="black" stroke-width="0.75"/>"#,
                path.join(" ")
            );
        }
        path.clear();
    };
    let pt = |x: f64, y: f64| format!("{},{}", n(f.px(x.clamp(-b, b))), n(f.py(y.clamp(-b, b))));
    for w in steps.windows(2) {
        match (finite(&w[0]), finite(&w[1])) {
            (Some(x), Some(y)) => {
                if path.is_empty() {
                    path.push(pt(x, x));
                }
                path.push(pt(x, y));
                path.push(pt(y, y));
            }
            _ => flush(svg, &mut path),
        }
    }
    flush(svg, &mut path);
    for s in steps {
        match finite(s) {
            Some(v) if v.abs() > b => {
                let c = v.clamp(-b, b);
                clipped_marker(svg, f.px(c), f.py(c), v > 0.0);
            }
            Some(_) => {}
            None => clipped_marker(svg, WIDTH - MARGIN, MARGIN, true),
        }
    }
}

/// Samples `g` on `[x0, x1]`, keeping only points inside the window.
fn sample(x0: f64, x1: f64, g: &dyn Fn(f64) -> f64, f: &Frame) -> Vec<(f64, f64)> {
    if x1 <= x0 {
        return Vec::new();
    }
    const N: usize = 200;
    (0..=N)
        .map(|i| x0 + (x1 - x0) * i as f64 / N as f64)
        .filter_map(|x| {
            let y = g(x);
            (y >= f.y0 && y <= f.y1 && x >= f.x0 && x <= f.x1).then(|| (f.px(x), f.py(y)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_literal, ExtReal};
    use crate::map::{orbit, OrbitConfig};

    fn steps(lit: &str, n: usize) -> Vec<OrbitStep> {
        orbit(&parse_literal(lit).unwrap(), n, &OrbitConfig::default()).unwrap()
    }

    #[test]
    fn deterministic_and_well_formed() {
        let s = steps("sqrt(2)", 12);
        for style in [PlotStyle::Timeseries, PlotStyle::Cobweb] {
            let o = PlotOptions {
                style,
                ..Default::default()
            };
            let a = emit_plot(&s, &o).unwrap();
            assert_eq!(a, emit_plot(&s, &o).unwrap());
            assert!(a.starts_with("<?xml"));
            assert!(a.contains(r#"viewBox="0 0 800 500""#));
            assert!(a.trim_end().ends_with("</svg>"));
            assert!(!a.contains("NaN"));
        }
    }

    #[test]
    fn rational_orbit_marks_infinity() {
        let s = steps("9/7", 12);
        let svg = emit_plot(&s, &PlotOptions::default()).unwrap();
        // steps 9..=12 are infinite
        assert_eq!(svg.matches("<polygon").count(), 4);
    }

    #[test]
    fn all_infinite_is_an_error() {
        let s = orbit(&ExtReal::Infinity, 3, &OrbitConfig::default()).unwrap();
        assert!(matches!(
            emit_plot(&s, &PlotOptions::default()),
            Err(Error::NothingToPlot)
        ));
    }

    #[test]
    fn two_point_minimal_plot() {
        let s = steps("1/2", 1);
        let svg = emit_plot(&s, &PlotOptions::default()).unwrap();
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn timeseries_fits_spikes() {
        let cfg = OrbitConfig::with_bits(512);
        let s = orbit(&parse_literal("pi").unwrap(), 30, &cfg).unwrap();
        let svg = emit_plot(&s, &PlotOptions::default()).unwrap();
        let top: f64 = svg
            .lines()
            .find(|l| l.contains(r#"text-anchor="end">"#) && l.contains(r#"y="58.00""#))
            .and_then(|l| l.split('>').nth(1)?.split('<').next()?.parse().ok())
            .unwrap();
        assert!(top > 292.63 && top < 320.0);
        assert_eq!(svg.matches("<polygon").count(), 0);
    }
}
