//! SVG and CSV output for point clouds and drawn graphs.

use std::fmt::Write;

use num_complex::Complex64;
use thiserror::Error;

use crate::graph::io::round_sig;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("image size must be positive, got {0}x{1}")]
    Size(u32, u32),
    #[error("point radius must be positive and finite")]
    Radius,
    #[error("viewport must have positive width and height")]
    Viewport,
    #[error("non-finite coordinate in input")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorBy {
    #[default]
    Depth,
    Branch,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Viewport {
    #[default]
    Auto,
    Rect { min: Complex64, max: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSpec {
    pub width: u32,
    pub height: u32,
    pub point_radius: f64,
    pub color_by: ColorBy,
    pub viewport: Viewport,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            width: 800,
            height: 800,
            point_radius: 2.0,
            color_by: ColorBy::Depth,
            viewport: Viewport::Auto,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<(), RenderError> {
        if self.width == 0 || self.height == 0 {
            return Err(RenderError::Size(self.width, self.height));
        }
        if !(self.point_radius > 0.0 && self.point_radius.is_finite()) {
            return Err(RenderError::Radius);
        }
        if let Viewport::Rect { min, max } = self.viewport {
            if !(max.re > min.re && max.im > min.im) {
                return Err(RenderError::Viewport);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub z: Complex64,
    pub depth: usize,
    pub branch: Option<u8>,
}

impl Point {
    pub fn new(z: Complex64, depth: usize) -> Self {
        Self { z, depth, branch: None }
    }
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Twelve significant digits, shortest form.
pub fn fmt_num(x: f64) -> String {
    format!("{}", round_sig(x, 12))
}

fn bounds(points: &[Point], segments: &[(Complex64, Complex64)]) -> (Complex64, Complex64) {
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let all = points.iter().map(|p| p.z).chain(segments.iter().flat_map(|s| [s.0, s.1]));
    for z in all {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    if !lo.re.is_finite() {
        return (Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
    let pad = 0.05 * span;
    let c = (lo + hi) / 2.0;
    let half = span / 2.0 + pad;
    (c - Complex64::new(half, half), c + Complex64::new(half, half))
}

/// One `<circle>` per point, optional `<line>` segments beneath them.
/// The imaginary axis points up.
pub fn render_svg(points: &[Point], segments: &[(Complex64, Complex64)], spec: &RenderSpec) -> Result<String, RenderError> {
    spec.validate()?;
    let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
    if !points.iter().all(|p| finite(p.z)) || !segments.iter().all(|s| finite(s.0) && finite(s.1)) {
        return Err(RenderError::NonFinite);
    }
    let (min, max) = match spec.viewport {
        Viewport::Auto => bounds(points, segments),
        Viewport::Rect { min, max } => (min, max),
    };
    let (w, h) = (spec.width as f64, spec.height as f64);
    let sx = w / (max.re - min.re);
    let sy = h / (max.im - min.im);
    let to_px = |z: Complex64| ((z.re - min.re) * sx, (max.im - z.im) * sy);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !segments.is_empty() {
        let _ = writeln!(out, r##"<g stroke="#888888" stroke-width="0.6">"##);
        for &(a, b) in segments {
            let (x1, y1) = to_px(a);
            let (x2, y2) = to_px(b);
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                fmt_num(x1),
                fmt_num(y1),
                fmt_num(x2),
                fmt_num(y2)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    for p in points {
        let (x, y) = to_px(p.z);
        let color = match spec.color_by {
            ColorBy::Depth => PALETTE[p.depth % PALETTE.len()],
            ColorBy::Branch => PALETTE[p.branch.unwrap_or(0) as usize % PALETTE.len()],
            ColorBy::None => "#000000",
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#,
            fmt_num(x),
            fmt_num(y),
            fmt_num(spec.point_radius),
            color
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// `re,im,depth` rows under a header.
pub fn cloud_csv(points: &[Point]) -> String {
    let mut out = String::from("re,im,depth\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", fmt_num(p.z.re), fmt_num(p.z.im), p.depth);
    }
    out
}

/// Reads what [`cloud_csv`] writes.
pub fn parse_cloud_csv(text: &str) -> Result<Vec<Point>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "re,im,depth" => {}
        other => return Err(format!("expected header re,im,depth, found {other:?}")),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let cols: Vec<&str> = l.split(',').collect();
            let bad = || format!("line {}: expected three columns", i + 2);
            if cols.len() != 3 {
                return Err(bad());
            }
            let re: f64 = cols[0].trim().parse().map_err(|_| bad())?;
            let im: f64 = cols[1].trim().parse().map_err(|_| bad())?;
            let depth: usize = cols[2].trim().parse().map_err(|_| bad())?;
            Ok(Point::new(Complex64::new(re, im), depth))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_has_one_circle_per_point() {
        let pts: Vec<Point> = (0..10).map(|k| Point::new(Complex64::from_polar(1.0, k as f64), k)).collect();
        let seg = [(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))];
        let svg = render_svg(&pts, &seg, &RenderSpec::default()).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let circles = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
        assert_eq!(circles, 10);
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("line")).count(), 1);
        assert_eq!(svg, render_svg(&pts, &seg, &RenderSpec::default()).unwrap());
    }

    #[test]
    fn empty_and_single_point_clouds_render() {
        assert!(render_svg(&[], &[], &RenderSpec::default()).is_ok());
        let one = [Point::new(Complex64::new(2.0, 3.0), 0)];
        let svg = render_svg(&one, &[], &RenderSpec::default()).unwrap();
        assert!(svg.contains(r#"cx="400" cy="400""#), "{svg}");
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = RenderSpec::default();
        s.width = 0;
        assert!(render_svg(&[], &[], &s).is_err());
        let s = RenderSpec {
            viewport: Viewport::Rect { min: Complex64::new(1.0, 0.0), max: Complex64::new(0.0, 1.0) },
            ..RenderSpec::default()
        };
        assert_eq!(s.validate(), Err(RenderError::Viewport));
        let nan = [Point::new(Complex64::new(f64::NAN, 0.0), 0)];
        assert_eq!(render_svg(&nan, &[], &RenderSpec::default()), Err(RenderError::NonFinite));
    }

    #[test]
    fn csv_round_trip() {
        let pts = vec![Point::new(Complex64::new(0.1, -2.0), 3), Point::new(Complex64::new(1.0 / 3.0, 0.0), 0)];
        let csv = cloud_csv(&pts);
        assert_eq!(csv.lines().nth(2).unwrap(), "0.333333333333,0,0");
        let back = parse_cloud_csv(&csv).unwrap();
        assert_eq!(back[0], pts[0]);
        assert!(parse_cloud_csv("x,y\n").is_err());
        assert!(parse_cloud_csv("re,im,depth\n1,2\n").is_err());
    }

    #[test]
    fn numbers_have_twelve_digits() {
        assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1e-20), "0.00000000000000000001");
    }
}
