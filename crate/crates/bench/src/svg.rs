//! Minimal self-contained SVG line charts with optional log axes.

use std::fmt::Write;

const PANEL_WIDTH: f64 = 520.0;
const PANEL_HEIGHT: f64 = 380.0;
const TITLE_HEIGHT: f64 = 34.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
const GUIDE_COLOR: &str = "#7f7f7f";

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Dashed gray reference line instead of a colored data curve.
    pub guide: bool,
}

impl Series {
    pub fn data(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series { label: label.into(), points, guide: false }
    }

    pub fn guide(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series { label: label.into(), points, guide: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub label: String,
    pub log: bool,
}

impl Axis {
    pub fn linear(label: impl Into<String>) -> Self {
        Axis { label: label.into(), log: false }
    }

    pub fn log(label: impl Into<String>) -> Self {
        Axis { label: label.into(), log: true }
    }
}

/// Corner holding the legend box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Legend {
    #[default]
    TopRight,
    BottomLeft,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub title: String,
    pub x: Axis,
    pub y: Axis,
    pub series: Vec<Series>,
    pub legend: Legend,
}

/// Panels laid out side by side under a common title.
pub fn render(title: &str, panels: &[Panel]) -> String {
    let width = PANEL_WIDTH * panels.len().max(1) as f64;
    let height = PANEL_HEIGHT + TITLE_HEIGHT;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    for (k, panel) in panels.iter().enumerate() {
        render_panel(&mut s, panel, k as f64 * PANEL_WIDTH, TITLE_HEIGHT);
    }
    s.push_str("</svg>\n");
    s
}

struct Scale {
    lo: f64,
    hi: f64,
    log: bool,
    from: f64,
    to: f64,
}

impl Scale {
    fn map(&self, v: f64) -> f64 {
        let t = if self.log { v.log10() } else { v };
        self.from + (t - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let span = (self.hi - self.lo).round() as i64;
            let stride = (span / 8 + 1).max(1);
            (self.lo.round() as i64..=self.hi.round() as i64)
                .filter(|e| (e - self.lo.round() as i64) % stride == 0)
                .map(|e| (10f64.powi(e as i32), format!("1e{e}")))
                .collect()
        } else {
            let step = nice_step((self.hi - self.lo) / 5.0);
            let decimals = (-step.log10().floor()).max(0.0) as usize;
            let first = (self.lo / step).ceil() as i64;
            let last = (self.hi / step).floor() as i64;
            (first..=last)
                .map(|k| {
                    let v = k as f64 * step;
                    (v, format!("{v:.decimals$}"))
                })
                .collect()
        }
    }
}

fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn usable(v: f64, log: bool) -> bool {
    v.is_finite() && (!log || v > 0.0)
}

/// Data range in axis units (decades for log axes), padded when degenerate.
fn range(values: impl Iterator<Item = f64>, log: bool) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        let t = if log { v.log10() } else { v };
        lo = lo.min(t);
        hi = hi.max(t);
    }
    if !lo.is_finite() {
        return None;
    }
    if log {
        lo = lo.floor();
        hi = hi.ceil();
        if hi <= lo {
            hi = lo + 1.0;
        }
    } else if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        lo -= 0.5;
        hi += 0.5;
    }
    Some((lo, hi))
}

fn render_panel(s: &mut String, panel: &Panel, left: f64, top: f64) {
    let x0 = left + MARGIN_LEFT;
    let x1 = left + PANEL_WIDTH - MARGIN_RIGHT;
    let y0 = top + PANEL_HEIGHT - MARGIN_BOTTOM;
    let y1 = top + MARGIN_TOP;
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"#,
        (x0 + x1) / 2.0,
        top + 18.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{x0:.1}" y="{y1:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        y0 + 38.0,
        escape(&panel.x.label)
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate({:.1},{:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
        left + 16.0,
        (y0 + y1) / 2.0,
        escape(&panel.y.label)
    );

    let points = || {
        panel
            .series
            .iter()
            .flat_map(|sr| sr.points.iter().copied())
            .filter(|&(x, y)| usable(x, panel.x.log) && usable(y, panel.y.log))
    };
    let (Some((xl, xh)), Some((yl, yh))) = (range(points().map(|p| p.0), panel.x.log), range(points().map(|p| p.1), panel.y.log))
    else {
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" fill="{GUIDE_COLOR}">no data</text>"#,
            (x0 + x1) / 2.0,
            (y0 + y1) / 2.0
        );
        return;
    };
    let sx = Scale { lo: xl, hi: xh, log: panel.x.log, from: x0, to: x1 };
    let sy = Scale { lo: yl, hi: yh, log: panel.y.log, from: y0, to: y1 };

    for (v, label) in sx.ticks() {
        let px = sx.map(v);
        let _ = writeln!(s, r##"<line x1="{px:.1}" y1="{y0:.1}" x2="{px:.1}" y2="{y1:.1}" stroke="#e5e5e5"/>"##);
        let _ = writeln!(s, r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{label}</text>"#, y0 + 16.0);
    }
    for (v, label) in sy.ticks() {
        let py = sy.map(v);
        let _ = writeln!(s, r##"<line x1="{x0:.1}" y1="{py:.1}" x2="{x1:.1}" y2="{py:.1}" stroke="#e5e5e5"/>"##);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#, x0 - 6.0, py + 4.0);
    }

    let mut color = 0;
    let mut legend = Vec::new();
    for series in &panel.series {
        let (stroke, dash) = if series.guide {
            (GUIDE_COLOR, r#" stroke-dasharray="6 4""#)
        } else {
            color += 1;
            (PALETTE[(color - 1) % PALETTE.len()], "")
        };
        let coords: Vec<String> = series
            .points
            .iter()
            .filter(|&&(x, y)| usable(x, panel.x.log) && usable(y, panel.y.log))
            .map(|&(x, y)| format!("{:.2},{:.2}", sx.map(x), sy.map(y)))
            .collect();
        if coords.is_empty() {
            continue;
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{stroke}" stroke-width="1.5"{dash} points="{}"/>"#,
            coords.join(" ")
        );
        legend.push((series.label.as_str(), stroke, dash));
    }
    let (lx, first_row) = match panel.legend {
        Legend::TopRight => (x1 - 150.0, y1 + 14.0),
        Legend::BottomLeft => (x0 + 12.0, y0 - 10.0 - 16.0 * legend.len().saturating_sub(1) as f64),
    };
    for (k, (label, stroke, dash)) in legend.iter().enumerate() {
        let ly = first_row + 16.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{stroke}" stroke-width="2"{dash}/>"#,
            lx + 22.0
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, lx + 28.0, ly + 4.0, escape(label));
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
