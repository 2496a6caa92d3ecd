//! Minimal SVG line plots: one `<polyline>` per series.

use std::fmt::Write;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];
const REFERENCE_COLOR: &str = "#888888";
const MARGIN: f64 = 40.0;

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub color: String,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>, index: usize) -> Self {
        Self {
            name: name.into(),
            points,
            color: PALETTE[index % PALETTE.len()].to_string(),
        }
    }

    pub fn reference(points: Vec<(f64, f64)>) -> Self {
        Self {
            name: "reference".into(),
            points,
            color: REFERENCE_COLOR.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub series: Vec<Series>,
    /// Same scale on both axes (for x/y maps).
    pub equal_aspect: bool,
    pub height: f64,
}

/// Keeps at most `max` points, evenly strided, always including the last.
pub fn decimate(points: &[(f64, f64)], max: usize) -> Vec<(f64, f64)> {
    if points.len() <= max || max < 2 {
        return points.to_vec();
    }
    let stride = points.len().div_ceil(max - 1);
    let mut out: Vec<_> = points.iter().step_by(stride).copied().collect();
    if out.last() != points.last() {
        out.push(*points.last().unwrap());
    }
    out
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn bounds(panel: &Panel) -> (f64, f64, f64, f64) {
    let mut b = (
        f64::INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    for s in &panel.series {
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                b = (b.0.min(x), b.1.min(y), b.2.max(x), b.3.max(y));
            }
        }
    }
    if !b.0.is_finite() {
        return (0.0, 0.0, 1.0, 1.0);
    }
    let pad = |lo: f64, hi: f64| {
        if hi - lo < 1e-9 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = pad(b.0, b.2);
    let (y0, y1) = pad(b.1, b.3);
    (x0, y0, x1, y1)
}

/// Renders panels stacked vertically into one SVG document.
pub fn render(panels: &[Panel], width: f64) -> String {
    let total_h: f64 = panels.iter().map(|p| p.height).sum();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = width,
        h = total_h
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut top = 0.0;
    for panel in panels {
        render_panel(&mut out, panel, top, width);
        top += panel.height;
    }
    out.push_str("</svg>\n");
    out
}

fn render_panel(out: &mut String, panel: &Panel, top: f64, width: f64) {
    let (x0, y0, x1, y1) = bounds(panel);
    let plot_w = width - 2.0 * MARGIN;
    let plot_h = panel.height - 2.0 * MARGIN;
    let mut sx = plot_w / (x1 - x0);
    let mut sy = plot_h / (y1 - y0);
    let (mut ox, mut oy) = (0.0, 0.0);
    if panel.equal_aspect {
        let s = sx.min(sy);
        sx = s;
        sy = s;
        // center the unused extent
        ox = 0.5 * (plot_w - (x1 - x0) * s);
        oy = 0.5 * (plot_h - (y1 - y0) * s);
    }
    let map = |x: f64, y: f64| {
        (
            MARGIN + ox + (x - x0) * sx,
            top + MARGIN + plot_h - oy - (y - y0) * sy,
        )
    };

    let _ = writeln!(out, r#"<g class="panel">"#);
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{:.1}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="#cccccc"/>"##,
        top + MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{:.1}" font-family="sans-serif" font-size="14">{}</text>"#,
        top + MARGIN - 12.0,
        escape(&panel.title)
    );
    for (i, s) in panel.series.iter().enumerate() {
        let mut pts = String::with_capacity(s.points.len() * 16);
        for &(x, y) in &s.points {
            if !(x.is_finite() && y.is_finite()) {
                continue;
            }
            let (px, py) = map(x, y);
            if !pts.is_empty() {
                pts.push(' ');
            }
            let _ = write!(pts, "{px:.2},{py:.2}");
        }
        let _ = writeln!(
            out,
            r#"<polyline data-series="{name}" fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>"#,
            name = escape(&s.name),
            color = s.color,
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" fill="{}">{}</text>"#,
            width - MARGIN - 120.0,
            top + MARGIN + 14.0 * (i as f64 + 1.0),
            s.color,
            escape(&s.name)
        );
    }
    let _ = writeln!(out, "</g>");
}
