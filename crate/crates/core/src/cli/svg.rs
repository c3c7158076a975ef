//! Static SVG figures: log-axis histograms, paired overlays and heatmaps.

use std::fmt::Write as _;

use crate::harness::{LogHistogram, ProfileGrid};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;
/// Horizontal room reserved left of the log axis for the special bars.
const SPECIAL: f64 = 90.0;

const FILLS: [&str; 2] = ["#4a6fa5", "#d9822b"];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Shared geometry so that paired figures use identical axes.
struct Axes {
    log_lo: f64,
    log_hi: f64,
    y_max: usize,
}

impl Axes {
    fn of(hists: &[&LogHistogram]) -> Self {
        let mut log_lo = f64::INFINITY;
        let mut log_hi = f64::NEG_INFINITY;
        for h in hists {
            if let (Some(first), Some(last)) = (h.bins.first(), h.bins.last()) {
                log_lo = log_lo.min(first.left.log10());
                log_hi = log_hi.max(last.right.log10());
            }
        }
        if !log_lo.is_finite() {
            log_lo = -1.0;
            log_hi = 1.0;
        }
        let y_max = hists.iter().map(|h| h.max_count()).max().unwrap_or(0).max(1);
        Self { log_lo, log_hi, y_max }
    }

    fn x0(&self) -> f64 {
        LEFT + SPECIAL
    }

    fn x(&self, v: f64) -> f64 {
        let span = (self.log_hi - self.log_lo).max(1e-9);
        self.x0() + (v.log10() - self.log_lo) / span * (WIDTH - RIGHT - self.x0())
    }

    fn y(&self, count: usize) -> f64 {
        HEIGHT - BOTTOM - count as f64 / self.y_max as f64 * (HEIGHT - TOP - BOTTOM)
    }
}

fn open(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        esc(title)
    )
    .unwrap();
}

fn frame(out: &mut String, ax: &Axes, x_label: &str, special: &[&str]) {
    let base = HEIGHT - BOTTOM;
    writeln!(
        out,
        r#"<line x1="{LEFT}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#,
        WIDTH - RIGHT
    )
    .unwrap();
    writeln!(out, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{base}" stroke="black"/>"#).unwrap();
    for t in 0..=4 {
        let c = (ax.y_max * t + 2) / 4;
        let y = ax.y(c);
        writeln!(
            out,
            r#"<line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{c}</text>"#,
            LEFT - 4.0,
            LEFT - 6.0,
            y + 4.0
        )
        .unwrap();
    }
    let first = ax.log_lo.ceil() as i64;
    let last = ax.log_hi.floor() as i64;
    for k in first..=last {
        let x = ax.x(10f64.powi(k as i32));
        writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{base}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">1e{k}</text>"#,
            base + 4.0,
            base + 18.0
        )
        .unwrap();
    }
    for (i, label) in special.iter().enumerate() {
        let x = LEFT + 10.0 + 40.0 * i as f64 + 15.0;
        writeln!(
            out,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle" font-size="10">{}</text>"#,
            base + 18.0,
            esc(label)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (ax.x0() + WIDTH - RIGHT) / 2.0,
        HEIGHT - 25.0,
        esc(x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">runs</text>"#,
        (TOP + base) / 2.0,
        (TOP + base) / 2.0
    )
    .unwrap();
}

fn bars(out: &mut String, ax: &Axes, h: &LogHistogram, fill: &str, opacity: f64, with_better: bool) {
    let base = HEIGHT - BOTTOM;
    let mut rect = |x0: f64, x1: f64, count: usize, class: &str| {
        if count == 0 {
            return;
        }
        let y = ax.y(count);
        writeln!(
            out,
            r#"<rect class="{class}" data-count="{count}" x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{fill}" fill-opacity="{opacity}" stroke="black" stroke-width="0.5"/>"#,
            (x1 - x0).max(0.5),
            base - y
        )
        .unwrap();
    };
    let mut slot = 0.0;
    if with_better {
        rect(LEFT + 10.0, LEFT + 40.0, h.better_than_reference, "better");
        slot = 1.0;
    }
    let ux = LEFT + 10.0 + 40.0 * slot;
    rect(ux, ux + 30.0, h.underflow, "underflow");
    for b in &h.bins {
        rect(ax.x(b.left), ax.x(b.right), b.count, "bin");
    }
}

fn special_labels(with_better: bool) -> Vec<&'static str> {
    if with_better {
        vec!["better", "< 1e-12"]
    } else {
        vec!["< 1e-12"]
    }
}

/// One histogram. With `with_better`, negative values are drawn as a bar at
/// the left margin.
pub fn histogram(h: &LogHistogram, title: &str, x_label: &str, with_better: bool) -> String {
    let ax = Axes::of(&[h]);
    let mut out = String::new();
    open(&mut out, title);
    frame(&mut out, &ax, x_label, &special_labels(with_better));
    bars(&mut out, &ax, h, FILLS[0], 0.85, with_better);
    out.push_str("</svg>\n");
    out
}

/// Two histograms overlaid on identical axes.
pub fn paired_histogram(
    a: &LogHistogram,
    b: &LogHistogram,
    legend: [&str; 2],
    title: &str,
    x_label: &str,
    with_better: bool,
) -> String {
    let ax = Axes::of(&[a, b]);
    let mut out = String::new();
    open(&mut out, title);
    frame(&mut out, &ax, x_label, &special_labels(with_better));
    bars(&mut out, &ax, a, FILLS[0], 0.6, with_better);
    bars(&mut out, &ax, b, FILLS[1], 0.6, with_better);
    for (i, (label, fill)) in legend.iter().zip(FILLS).enumerate() {
        let y = TOP + 6.0 + 18.0 * i as f64;
        writeln!(
            out,
            r#"<rect x="{}" y="{y}" width="12" height="12" fill="{fill}" fill-opacity="0.6"/><text x="{}" y="{}">{}</text>"#,
            WIDTH - RIGHT - 160.0,
            WIDTH - RIGHT - 142.0,
            y + 10.0,
            esc(label)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn ramp(t: f64) -> (u8, u8, u8) {
    // Dark blue through teal to yellow.
    let stops = [(0.0, (48, 18, 59)), (0.5, (33, 145, 140)), (1.0, (253, 231, 37))];
    let t = t.clamp(0.0, 1.0);
    let (i, j) = if t <= 0.5 { (0, 1) } else { (1, 2) };
    let (t0, c0) = stops[i];
    let (t1, c1) = stops[j];
    let u = (t - t0) / (t1 - t0);
    let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * u).round() as u8;
    (mix(c0.0, c1.0), mix(c0.1, c1.1), mix(c0.2, c1.2))
}

/// Heatmap of a profile grid; clipped cells are drawn grey.
pub fn heatmap(g: &ProfileGrid, title: &str) -> String {
    let (j1, j2) = g.index_pair;
    let (rows, cols) = (g.axis1.len(), g.axis2.len());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (row, mask) in g.values.iter().zip(&g.clipped) {
        for (&v, &c) in row.iter().zip(mask) {
            if !c {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    let size = 400.0;
    let (x0, y0) = (LEFT, TOP);
    let cw = size / cols as f64;
    let ch = size / rows as f64;
    let mut out = String::new();
    let w = LEFT + size + 160.0;
    let h = TOP + size + 60.0;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        x0 + size / 2.0,
        esc(title)
    )
    .unwrap();
    // axis1 runs bottom to top, axis2 left to right.
    for i in 0..rows {
        for j in 0..cols {
            let fill = if g.clipped[i][j] {
                "#bdbdbd".to_string()
            } else {
                let t = if hi > lo { (g.values[i][j] - lo) / (hi - lo) } else { 1.0 };
                let (r, gg, b) = ramp(t);
                format!("#{r:02x}{gg:02x}{b:02x}")
            };
            writeln!(
                out,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"#,
                x0 + j as f64 * cw,
                y0 + (rows - 1 - i) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            )
            .unwrap();
        }
    }
    let fmt = |v: f64| format!("{v:.3}");
    let labels = [
        (x0, y0 + size + 16.0, "start", fmt(g.axis2[0])),
        (x0 + size, y0 + size + 16.0, "end", fmt(g.axis2[cols - 1])),
    ];
    for (x, y, anchor, text) in labels {
        writeln!(out, r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}">{text}</text>"#).unwrap();
    }
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
        x0 - 4.0,
        y0 + size,
        fmt(g.axis1[0]),
        x0 - 4.0,
        y0 + 10.0,
        fmt(g.axis1[rows - 1])
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">gamma[{j2}]</text>"#,
        x0 + size / 2.0,
        y0 + size + 36.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="20" y="{0:.2}" text-anchor="middle" transform="rotate(-90 20 {0:.2})">gamma[{j1}]</text>"#,
        y0 + size / 2.0
    )
    .unwrap();
    // Colour bar.
    let bx = x0 + size + 30.0;
    for s in 0..50 {
        let t = 1.0 - s as f64 / 49.0;
        let (r, gg, b) = ramp(t);
        writeln!(
            out,
            r##"<rect x="{bx}" y="{:.2}" width="16" height="{:.2}" fill="#{r:02x}{gg:02x}{b:02x}"/>"##,
            y0 + s as f64 * size / 50.0,
            size / 50.0 + 0.05
        )
        .unwrap();
    }
    let (top, bottom) = if lo.is_finite() { (fmt(hi), fmt(lo)) } else { ("-".into(), "-".into()) };
    writeln!(
        out,
        r#"<text x="{0}" y="{1:.2}">{top}</text><text x="{0}" y="{2:.2}">{bottom}</text>"#,
        bx + 22.0,
        y0 + 10.0,
        y0 + size
    )
    .unwrap();
    writeln!(
        out,
        r##"<rect x="{bx}" y="{:.2}" width="16" height="12" fill="#bdbdbd"/><text x="{}" y="{:.2}">&lt; {}</text>"##,
        y0 + size + 20.0,
        bx + 22.0,
        y0 + size + 30.0,
        g.clip_floor
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}
