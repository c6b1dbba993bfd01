//! Plain SVG rendering of regions: the support-sampled boundary as a closed polyline, the
//! generating ellipses and points on top, and the coordinate axes.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::regions::{ConvexRegion, GeneratorKind, Primitive};

const WIDTH: f64 = 640.0;
const OUTLINE_POINTS: usize = 128;
const PALETTE: [&str; 4] = ["#1f4e9c", "#b5472b", "#2d7d46", "#6b3fa0"];

fn coord(z: Complex64) -> String {
    // SVG's y axis points down
    format!("{:.6},{:.6}", z.re, -z.im)
}

fn polyline(points: &[Complex64]) -> String {
    points.iter().map(|&z| coord(z)).collect::<Vec<_>>().join(" ")
}

/// Regions drawn in order; generators are overlaid for every region.
pub fn render_svg(regions: &[&ConvexRegion]) -> String {
    let mut everything: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
    let mut overlays: Vec<(usize, Primitive)> = Vec::new();
    for (i, region) in regions.iter().enumerate() {
        everything.extend(region.boundary_points());
        for g in &region.generators {
            if let GeneratorKind::Primitive(p) = g.kind {
                match p {
                    Primitive::Ellipse(e) => everything.extend(e.outline(OUTLINE_POINTS)),
                    Primitive::Point(z) => everything.push(z),
                }
                overlays.push((i, p));
            }
        }
    }
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = everything.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), z| (a.min(z.re), b.max(z.re), c.min(-z.im), d.max(-z.im)),
    );
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-3);
    let margin = 0.05 * span;
    lo_x -= margin;
    hi_x += margin;
    lo_y -= margin;
    hi_y += margin;
    let (w, h) = ((hi_x - lo_x).max(2.0 * margin), (hi_y - lo_y).max(2.0 * margin));
    let stroke = span / 300.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{:.0}" viewBox="{lo_x:.6} {lo_y:.6} {w:.6} {h:.6}">"#,
        WIDTH * h / w
    );
    let _ = writeln!(
        svg,
        r##"<g stroke="#999999" stroke-width="{stroke:.6}"><line x1="{lo_x:.6}" y1="0" x2="{:.6}" y2="0"/><line x1="0" y1="{lo_y:.6}" x2="0" y2="{:.6}"/></g>"##,
        lo_x + w,
        lo_y + h
    );
    for (i, region) in regions.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="{:.6}"/>"#,
            polyline(&region.boundary_points()),
            2.0 * stroke
        );
    }
    for (i, p) in overlays {
        let color = PALETTE[i % PALETTE.len()];
        match p {
            Primitive::Ellipse(e) => {
                let _ = writeln!(
                    svg,
                    r#"<polygon points="{}" fill="none" stroke="{color}" stroke-dasharray="{:.6}" stroke-width="{stroke:.6}"/>"#,
                    polyline(&e.outline(OUTLINE_POINTS)),
                    4.0 * stroke
                );
            }
            Primitive::Point(z) => {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="{color}"/>"#,
                    z.re,
                    -z.im,
                    3.0 * stroke
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}
