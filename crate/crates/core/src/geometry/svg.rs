use std::fmt::Write;

use super::{DiameterGraph, Polygon};

const CANVAS: f64 = 512.0;

/// Standalone SVG drawing of a polygon and, optionally, its diameter graph.
///
/// Vertices are `<circle class="vertex">`, chords `<line class="chord">`.
/// The y axis is flipped so the picture matches the usual math orientation.
pub fn render_svg(p: &Polygon, g: Option<&DiameterGraph>) -> String {
    let v = p.vertices();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for q in v {
        xmin = xmin.min(q.x);
        xmax = xmax.max(q.x);
        ymin = ymin.min(q.y);
        ymax = ymax.max(q.y);
    }
    let span = (xmax - xmin).max(ymax - ymin).max(f64::MIN_POSITIVE);
    let margin = 0.05 * span;
    let scale = CANVAS / (span + 2.0 * margin);
    let cx = 0.5 * (xmin + xmax);
    let cy = 0.5 * (ymin + ymax);
    let map = |x: f64, y: f64| -> (f64, f64) {
        (
            CANVAS / 2.0 + (x - cx) * scale,
            CANVAS / 2.0 - (y - cy) * scale,
        )
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    );
    let _ = writeln!(s, r#"  <rect width="100%" height="100%" fill="white"/>"#);

    if let Some(g) = g {
        for &(a, b) in &g.edges {
            let (x1, y1) = map(v[a].x, v[a].y);
            let (x2, y2) = map(v[b].x, v[b].y);
            let _ = writeln!(
                s,
                r#"  <line class="chord" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="gray" stroke-width="0.75" stroke-dasharray="3,3"/>"#
            );
        }
    }

    let pts: Vec<String> = v
        .iter()
        .map(|q| {
            let (x, y) = map(q.x, q.y);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        s,
        r#"  <polygon class="outline" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        pts.join(" ")
    );
    for q in v {
        let (x, y) = map(q.x, q.y);
        let _ = writeln!(
            s,
            r#"  <circle class="vertex" cx="{x:.3}" cy="{y:.3}" r="3.5" fill="black"/>"#
        );
    }
    s.push_str("</svg>\n");
    s
}
