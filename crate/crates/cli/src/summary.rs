//! Plain-text report of an analysis.

use std::fmt::Write as _;

use musitopo::metrics::ZERO_TOLERANCE;
use musitopo::{EulerCheck, Interval};

use crate::pipeline::Analysis;

/// Longest-lived bars listed per dimension.
const LISTED: usize = 10;

pub fn render(a: &Analysis) -> String {
    let b = &a.barcode;
    let mut out = String::new();
    let metric = a.metric.map_or("precomputed".to_string(), |m| m.to_string());
    let _ = writeln!(out, "input: {} ({} mode, {} points, metric {metric})", a.source, a.mode, a.input_points);
    let merged: Vec<&String> = a.labels.iter().zip(&a.multiplicities).filter(|(_, &m)| m > 1).map(|(l, _)| l).collect();
    if !merged.is_empty() {
        let names: Vec<&str> = merged.iter().map(|s| s.as_str()).collect();
        let _ = writeln!(out, "merged duplicates: {}", names.join(", "));
    }
    let _ = writeln!(
        out,
        "complex: {} simplices, eps_max {}, field GF({})",
        a.complex_size, b.eps_max, b.field
    );
    out.push('\n');

    let h0: Vec<&Interval> = b.in_dim(0).collect();
    let _ = writeln!(out, "H0: {} bars", h0.len());
    let mut deaths: Vec<f64> = h0.iter().filter_map(|i| i.death).collect();
    deaths.sort_by(f64::total_cmp);
    if !deaths.is_empty() {
        let groups: Vec<String> = group_values(&deaths)
            .into_iter()
            .map(|(v, n)| if n > 1 { format!("{v:.4} (x{n})") } else { format!("{v:.4}") })
            .collect();
        let _ = writeln!(out, "  merge thresholds: {}", groups.join(", "));
    }
    let survivors = h0.iter().filter(|i| i.is_infinite()).count();
    let _ = writeln!(out, "  components at eps_max: {survivors}");

    for dim in 1..=b.max_dim {
        let mut bars: Vec<&Interval> = b.in_dim(dim).collect();
        if bars.is_empty() {
            let _ = writeln!(out, "H{dim}: none");
            continue;
        }
        let _ = writeln!(out, "H{dim}: {} bars", bars.len());
        bars.sort_by(|x, y| y.persistence().total_cmp(&x.persistence()).then(Interval::order(x, y)));
        for bar in bars.iter().take(LISTED) {
            let death = bar.death.map_or("inf".to_string(), |d| format!("{d:.4}"));
            let _ = writeln!(out, "  [{:.4}, {death})  persistence {:.4}", bar.birth, bar.persistence());
        }
        if bars.len() > LISTED {
            let _ = writeln!(out, "  ... {} shorter bars", bars.len() - LISTED);
        }
    }

    out.push('\n');
    let e = &a.euler;
    let checked = format!("{} of {} edge scales", e.conclusive, e.conclusive + e.inconclusive);
    match &e.failure {
        None => {
            let _ = writeln!(out, "euler check: holds at {checked}");
        }
        Some((eps, EulerCheck::Fails { simplices, betti })) => {
            let _ = writeln!(out, "euler check: FAILS at eps {eps:.4} (simplices {simplices}, betti {betti}), {checked} checked");
        }
        Some((eps, other)) => {
            let _ = writeln!(out, "euler check: {other:?} at eps {eps:.4}");
        }
    }
    if e.inconclusive > 0 {
        let _ = writeln!(out, "  the remaining scales have classes alive at the dimension cap");
    }
    if a.field_disagreements.is_empty() {
        out.push_str("field check: GF(2) and GF(3) agree\n");
    } else {
        let dims: Vec<String> = a.field_disagreements.iter().map(|d| d.dim.to_string()).collect();
        let _ = writeln!(out, "field check: GF(2) and GF(3) differ in dimension {} (torsion)", dims.join(", "));
    }
    if let Some(report) = &a.comparison {
        out.push('\n');
        out.push_str(&report.to_text());
    }
    out
}

/// Runs of equal values (within the zero tolerance) as (value, count).
fn group_values(sorted: &[f64]) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((first, n)) if v - *first <= ZERO_TOLERANCE => *n += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}
