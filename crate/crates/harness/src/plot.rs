//! Static SVG line charts of relative error against `l`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::experiment::ResultRow;
use crate::timing::median;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

/// One series per `(method, d)`: the median relative error across seeds
/// at each `l`.
pub fn series(rows: &[ResultRow]) -> BTreeMap<(String, usize), Vec<(usize, f64)>> {
    let mut acc: BTreeMap<(String, usize), BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for r in rows {
        if let Some(v) = r.relative_error.filter(|v| v.is_finite()) {
            acc.entry((r.method.clone(), r.d)).or_default().entry(r.l).or_default().push(v);
        }
    }
    acc.into_iter()
        .map(|(k, by_l)| (k, by_l.into_iter().map(|(l, v)| (l, median(&v))).collect()))
        .collect()
}

/// Renders the series of [`series`] with a dashed line at 1.
pub fn relative_error_svg(rows: &[ResultRow], title: &str) -> String {
    let data = series(rows);
    let points = data.values().flatten();
    let (mut lmin, mut lmax, mut ymax) = (usize::MAX, 0usize, 1.0f64);
    for &(l, v) in points {
        lmin = lmin.min(l);
        lmax = lmax.max(l);
        ymax = ymax.max(v);
    }
    if lmin > lmax {
        (lmin, lmax) = (0, 1);
    }
    if lmin == lmax {
        lmax = lmin + 1;
    }
    let ymax = ymax * 1.05;
    let sx = |l: usize| MARGIN + (l - lmin) as f64 / (lmax - lmin) as f64 * (WIDTH - 2.0 * MARGIN);
    let sy = |v: f64| HEIGHT - MARGIN - v / ymax * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let v = ymax * i as f64 / 4.0;
        let y = sy(v);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{v:.2}</text>"#, x0 - 6.0, y + 4.0);
    }
    for l in [lmin, (lmin + lmax) / 2, lmax] {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{l}</text>"#, sx(l), y0 + 18.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">l</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    let _ = writeln!(s, r#"<text x="16" y="{}" transform="rotate(-90 16 {})" text-anchor="middle">relative error</text>"#, HEIGHT / 2.0, HEIGHT / 2.0);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{0}" x2="{x1}" y2="{0}" stroke="gray" stroke-dasharray="4 3"/>"#, sy(1.0));

    for (i, ((method, d), pts)) in data.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(l, v)| format!("{:.2},{:.2}", sx(l), sy(v))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" "));
        for &(l, v) in pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, sx(l), sy(v));
        }
        let ly = y1 + 16.0 * i as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" fill="{color}">{} (d = {d})</text>"#, x1 - 110.0, escape(method));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
