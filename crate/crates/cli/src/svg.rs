//! Barcode plots with a fixed style, so output can be diffed.

use std::fmt::Write as _;

use musitopo::Barcode;

const WIDTH: f64 = 720.0;
const LEFT: f64 = 48.0;
const RIGHT: f64 = 24.0;
const TITLE: f64 = 28.0;
const ROW: f64 = 8.0;
const AXIS: f64 = 34.0;
const TICKS: usize = 5;

const STYLE: &str = "\
text{font-family:monospace;font-size:11px;fill:#222}\
.title{font-size:13px;font-weight:bold}\
.axis{stroke:#222;stroke-width:1}\
.grid{stroke:#ddd;stroke-width:1}\
.bar{stroke:#1f5fa8;stroke-width:4}\
.bar.infinite{stroke:#a8321f}";

/// One panel per dimension, ε on the horizontal axis, bars ordered by birth
/// then death. Every bar is a `<line class="bar">` carrying its dimension,
/// birth and death (`inf` for infinite bars) as data attributes.
pub fn render(barcode: &Barcode) -> String {
    let span = if barcode.eps_max > 0.0 { barcode.eps_max } else { 1.0 };
    let x = |eps: f64| LEFT + (WIDTH - LEFT - RIGHT) * (eps / span).min(1.0);

    let panels: Vec<(usize, Vec<_>)> = (0..=barcode.max_dim).map(|d| (d, barcode.in_dim(d).collect())).collect();
    let heights: Vec<f64> = panels.iter().map(|(_, bars)| TITLE + ROW * bars.len().max(1) as f64 + AXIS).collect();
    let total: f64 = heights.iter().sum();

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{total}" viewBox="0 0 {WIDTH} {total}">"#
    );
    let _ = writeln!(out, "<style>{STYLE}</style>");
    let mut top = 0.0;
    for ((dim, bars), height) in panels.iter().zip(&heights) {
        let _ = writeln!(out, r#"<g class="panel" data-dim="{dim}" transform="translate(0,{top})">"#);
        let _ = writeln!(out, r#"<text class="title" x="{LEFT}" y="18">H{dim} ({} bars)</text>"#, bars.len());
        let axis_y = height - AXIS + 6.0;
        for t in 0..=TICKS {
            let eps = span * t as f64 / TICKS as f64;
            let tx = x(eps);
            let _ = writeln!(out, r#"<line class="grid" x1="{tx:.2}" y1="{TITLE}" x2="{tx:.2}" y2="{axis_y}"/>"#);
            let _ = writeln!(out, r#"<text x="{tx:.2}" y="{:.2}" text-anchor="middle">{eps:.3}</text>"#, axis_y + 16.0);
        }
        let _ = writeln!(
            out,
            r#"<line class="axis" x1="{LEFT}" y1="{axis_y}" x2="{:.2}" y2="{axis_y}"/>"#,
            WIDTH - RIGHT
        );
        for (row, bar) in bars.iter().enumerate() {
            let y = TITLE + ROW * row as f64 + ROW / 2.0;
            let (class, end, death) = match bar.death {
                Some(d) => ("bar", x(d), d.to_string()),
                None => ("bar infinite", x(span), "inf".to_string()),
            };
            let _ = writeln!(
                out,
                r#"<line class="{class}" data-dim="{dim}" data-birth="{}" data-death="{death}" x1="{:.2}" y1="{y:.2}" x2="{end:.2}" y2="{y:.2}"/>"#,
                bar.birth,
                x(bar.birth),
            );
        }
        out.push_str("</g>\n");
        top += height;
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end">ε</text>"#,
        WIDTH - 4.0,
        total - 4.0
    );
    out.push_str("</svg>\n");
    out
}
