//! Minimal static SVG scatter plots.

use std::fmt::Write;

const W: f64 = 420.0;
const H: f64 = 320.0;
const M: f64 = 48.0;

pub struct Panel<'a> {
    pub title: &'a str,
    pub xlabel: &'a str,
    pub ylabel: &'a str,
    pub log_y: bool,
    pub points: Vec<(f64, f64)>,
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in v {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn panel(out: &mut String, p: &Panel, dx: f64) {
    let ys = |y: f64| if p.log_y { y.log10() } else { y };
    let pts: Vec<(f64, f64)> = p
        .points
        .iter()
        .filter(|(x, y)| x.is_finite() && ys(*y).is_finite())
        .map(|&(x, y)| (x, ys(y)))
        .collect();
    let (x0, x1) = range(pts.iter().map(|q| q.0));
    let (y0, y1) = range(pts.iter().map(|q| q.1));
    let sx = |x: f64| dx + M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let _ = writeln!(
        out,
        r#"<rect x="{:.1}" y="{M}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        dx + M,
        W - 2.0 * M,
        H - 2.0 * M
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle">{}</text>"#,
        dx + W / 2.0,
        p.title
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        dx + W / 2.0,
        H - 12.0,
        p.xlabel
    );
    let ylab = if p.log_y {
        format!("log10 {}", p.ylabel)
    } else {
        p.ylabel.to_string()
    };
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{ylab}</text>"#,
        dx + 14.0,
        H / 2.0,
        dx + 14.0,
        H / 2.0
    );
    for (v, anchor, x, y) in [
        (x0, "start", sx(x0), H - M + 14.0),
        (x1, "end", sx(x1), H - M + 14.0),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{y:.1}" text-anchor="{anchor}" font-size="10">{v:.3}</text>"#
        );
    }
    for (v, y) in [(y0, sy(y0)), (y1, sy(y1) + 10.0)] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{y:.1}" text-anchor="end" font-size="10">{v:.3}</text>"#,
            dx + M - 3.0
        );
    }
    for (x, y) in pts {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#,
            sx(x),
            sy(y)
        );
    }
}

/// Panels side by side in one document.
pub fn scatter_svg(panels: &[Panel]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{H:.0}" font-family="sans-serif" font-size="12">"#,
        W * panels.len() as f64
    );
    for (i, p) in panels.iter().enumerate() {
        panel(&mut out, p, W * i as f64);
    }
    out.push_str("</svg>\n");
    out
}
