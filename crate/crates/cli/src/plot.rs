//! Self-contained SVG plots: log-log curves and a heat map.
//!
//! Coordinates are printed with fixed precision so identical data gives
//! byte-identical files.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const COLOURS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    /// `(x, y)` with `x, y > 0`; other points are skipped.
    pub points: Vec<(f64, f64)>,
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatMap {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_max: f64,
    pub y_max: f64,
    /// `values[j][i]` is the cell at column `i`, row `j` (row 0 at the bottom).
    pub values: Vec<Vec<f64>>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        escape(title)
    );
}

fn frame(out: &mut String, x_label: &str, y_label: &str) {
    let (w, h) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{w}" height="{h}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + w / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
        TOP + h / 2.0,
        TOP + h / 2.0,
        escape(y_label)
    );
}

/// Log-log plot, one polyline per series, legend with the fitted slopes.
pub fn loglog(title: &str, series: &[Series]) -> String {
    let finite = |&(x, y): &(f64, f64)| x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite();
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied().filter(finite))
        .collect();
    let mut out = String::new();
    header(&mut out, title);
    frame(&mut out, "N", "|bound|");
    if all.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">no nonzero values</text>"#,
            WIDTH / 2.0,
            HEIGHT / 2.0
        );
        out.push_str("</svg>\n");
        return out;
    }
    let decades = |f: fn(f64, f64) -> f64, pick: fn(&(f64, f64)) -> f64, init: f64| {
        all.iter().map(pick).map(f64::log10).fold(init, f)
    };
    let (x0, x1) = (
        decades(f64::min, |p| p.0, f64::INFINITY).floor(),
        decades(f64::max, |p| p.0, f64::NEG_INFINITY).ceil(),
    );
    let (y0, y1) = (
        decades(f64::min, |p| p.1, f64::INFINITY).floor(),
        decades(f64::max, |p| p.1, f64::NEG_INFINITY).ceil(),
    );
    let (x1, y1) = (x1.max(x0 + 1.0), y1.max(y0 + 1.0));
    let (w, h) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |x: f64| LEFT + (x.log10() - x0) / (x1 - x0) * w;
    let py = |y: f64| TOP + h - (y.log10() - y0) / (y1 - y0) * h;

    let x_step = ((x1 - x0) / 8.0).ceil().max(1.0);
    let mut d = x0;
    while d <= x1 {
        let x = LEFT + (d - x0) / (x1 - x0) * w;
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{TOP}" stroke="#dddddd"/>"##,
            TOP + h
        );
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{d}</text>"#,
            TOP + h + 16.0
        );
        d += x_step;
    }
    let y_step = ((y1 - y0) / 8.0).ceil().max(1.0);
    let mut d = y0;
    while d <= y1 {
        let y = TOP + h - (d - y0) / (y1 - y0) * h;
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            LEFT + w
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
        d += y_step;
    }

    for (k, s) in series.iter().enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .copied()
            .filter(finite)
            .map(|(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        if !pts.is_empty() {
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
                pts.join(" ")
            );
        }
        let ly = TOP + 14.0 + 34.0 * k as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
        let slope = match s.slope {
            Some(v) => format!("slope {v:.4}"),
            None => "slope undefined".into(),
        };
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11">{slope}</text>"#,
            lx + 26.0,
            ly + 18.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Blue-to-red colour for `t` in `[0, 1]`.
fn ramp(t: f64) -> String {
    let t = if t.is_finite() {
        t.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let r = (40.0 + 215.0 * t).round() as u8;
    let g = (60.0 + 120.0 * (1.0 - (2.0 * t - 1.0).abs())).round() as u8;
    let b = (255.0 - 215.0 * t).round() as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Heat map over `[0, x_max] x [0, y_max]` with the line `y = sqrt(2) x`.
pub fn heatmap(map: &HeatMap) -> String {
    let mut out = String::new();
    header(&mut out, &map.title);
    let (w, h) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let rows = map.values.len();
    let cols = map.values.first().map_or(0, Vec::len);
    let finite: Vec<f64> = map
        .values
        .iter()
        .flatten()
        .copied()
        .filter(|v| v.is_finite())
        .collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (cw, ch) = (w / cols.max(1) as f64, h / rows.max(1) as f64);
    for (j, row) in map.values.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                LEFT + i as f64 * cw,
                TOP + h - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05,
                ramp((v - lo) / span)
            );
        }
    }
    frame(&mut out, &map.x_label, &map.y_label);

    // sqrt(2) alpha = U, clipped to the frame
    let x_end = map.x_max.min(map.y_max / std::f64::consts::SQRT_2);
    let (ex, ey) = (
        LEFT + x_end / map.x_max * w,
        TOP + h - std::f64::consts::SQRT_2 * x_end / map.y_max * h,
    );
    let _ = writeln!(
        out,
        r#"<line x1="{LEFT}" y1="{:.2}" x2="{ex:.2}" y2="{ey:.2}" stroke="black" stroke-width="2" stroke-dasharray="6 4"/>"#,
        TOP + h
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="11">U = sqrt(2) alpha</text>"#,
        ex - 110.0,
        ey + 16.0
    );

    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + f * w,
            TOP + h + 16.0,
            tick(f * map.x_max)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            TOP + h - f * h + 4.0,
            tick(f * map.y_max)
        );
    }

    let (lx, bar_h) = (WIDTH - RIGHT + 20.0, h * 0.6);
    for k in 0..20 {
        let t = k as f64 / 19.0;
        let _ = writeln!(
            out,
            r#"<rect x="{lx}" y="{:.2}" width="18" height="{:.2}" fill="{}"/>"#,
            TOP + bar_h - (k + 1) as f64 * bar_h / 20.0,
            bar_h / 20.0 + 0.05,
            ramp(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.2}">{}</text>"#,
        lx + 24.0,
        TOP + 10.0,
        tick(hi)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.2}">{}</text>"#,
        lx + 24.0,
        TOP + bar_h,
        tick(lo)
    );
    out.push_str("</svg>\n");
    out
}

fn tick(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.2}")
    } else {
        "n/a".into()
    }
}
