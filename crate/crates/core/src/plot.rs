//! SVG rendering of numerical-range estimates.

use std::fmt::Write;
use std::path::Path;

use crate::error::Result;
use crate::geometry::{angle_grid, Polygon};
use crate::linalg::C64;
use crate::states::NumericalRangeEstimate;

const SIZE: f64 = 480.0;
const PALETTE: [&str; 4] = ["#1f5fa8", "#c4472b", "#2e8b57", "#7a4ea3"];

/// One drawn body: its outer polygon and optional sample points.
pub struct Layer<'a> {
    pub label: &'a str,
    pub outer: Polygon,
    pub points: &'a [C64],
}

impl<'a> Layer<'a> {
    /// Outer body resampled at 360 directions, with the inner cloud.
    pub fn from_estimate(label: &'a str, est: &'a NumericalRangeEstimate) -> Self {
        let poly = est.polygon();
        let angles = angle_grid(360);
        let values: Vec<f64> = angles.iter().map(|&t| poly.support(t)).collect();
        Layer { label, outer: Polygon::from_support(&angles, &values), points: &est.inner }
    }
}

struct Frame {
    lo: C64,
    scale: f64,
}

impl Frame {
    fn new(layers: &[Layer]) -> Frame {
        // The unit circle is always in view.
        let (mut lo, mut hi) = (C64::new(-1.0, -1.0), C64::new(1.0, 1.0));
        for z in layers.iter().flat_map(|l| l.outer.vertices.iter().chain(l.points)) {
            lo = C64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = C64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im) * 1.1;
        let mid = (lo + hi) / 2.0;
        Frame { lo: mid - C64::new(span, span) / 2.0, scale: SIZE / span }
    }

    fn x(&self, z: C64) -> f64 {
        (z.re - self.lo.re) * self.scale
    }

    fn y(&self, z: C64) -> f64 {
        SIZE - (z.im - self.lo.im) * self.scale
    }
}

pub fn render_svg(layers: &[Layer]) -> String {
    let f = Frame::new(layers);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let o = C64::new(0.0, 0.0);
    let _ = writeln!(
        s,
        r##"<g stroke="#999" stroke-width="1"><line x1="0" y1="{y:.2}" x2="{SIZE}" y2="{y:.2}"/><line x1="{x:.2}" y1="0" x2="{x:.2}" y2="{SIZE}"/></g>"##,
        x = f.x(o),
        y = f.y(o)
    );
    let _ = writeln!(
        s,
        r##"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#bbb" stroke-dasharray="4 3"/>"##,
        f.x(o),
        f.y(o),
        f.scale
    );
    for (k, layer) in layers.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        if !layer.outer.vertices.is_empty() {
            let pts: Vec<String> =
                layer.outer.vertices.iter().map(|&z| format!("{:.2},{:.2}", f.x(z), f.y(z))).collect();
            let _ = writeln!(
                s,
                r#"<polygon points="{}" fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="1.5"/>"#,
                pts.join(" ")
            );
        }
        for &z in layer.points {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="{color}"/>"#, f.x(z), f.y(z));
        }
        let _ = writeln!(
            s,
            r#"<text x="10" y="{}" font-family="sans-serif" font-size="13" fill="{color}">{}</text>"#,
            20 + 18 * k,
            escape(layer.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn emit_plot(est: &NumericalRangeEstimate, label: &str, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(&[Layer::from_estimate(label, est)]))?;
    Ok(())
}

pub fn emit_overlay(layers: &[Layer], path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(layers))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::group_algebra;
    use crate::sample;
    use crate::states::{numerical_range, numrange_outer, WilliamsGrid};
    use crate::Element;

    fn polygon_points(svg: &str) -> Vec<(f64, f64)> {
        let start = svg.find("points=\"").unwrap() + 8;
        let end = start + svg[start..].find('"').unwrap();
        svg[start..end]
            .split(' ')
            .map(|p| {
                let (x, y) = p.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn disk_rendering_matches_support_data() {
        let a = group_algebra(2);
        let p = Element::from_reals(&a, &[0.5, 0.5]).unwrap();
        let est = numrange_outer(&p, WilliamsGrid::default()).unwrap();
        let layer = Layer::from_estimate("W(p)", &est);
        let svg = render_svg(std::slice::from_ref(&layer));
        let f = Frame::new(std::slice::from_ref(&layer));
        // Invert the frame map and compare with the outer support values.
        let pts: Vec<C64> = polygon_points(&svg)
            .into_iter()
            .map(|(x, y)| C64::new(x / f.scale + f.lo.re, (SIZE - y) / f.scale + f.lo.im))
            .collect();
        let drawn = Polygon { vertices: pts };
        for (&t, &h) in est.angles.iter().zip(&est.outer) {
            // Coordinates are rounded to hundredths of a pixel.
            assert!((drawn.support(t) - h).abs() < 0.01 / f.scale, "{t}");
        }
        assert!(!svg.contains("r=\"1.5\""));
    }

    #[test]
    fn inner_cloud_is_drawn() {
        let a = group_algebra(2);
        let p = Element::from_reals(&a, &[0.5, 0.5]).unwrap();
        let mut rng = sample::rng(sample::SEED);
        let est = numerical_range(&p, WilliamsGrid::default(), 25, &mut rng).unwrap();
        let svg = render_svg(&[Layer::from_estimate("W(p)", &est)]);
        assert_eq!(svg.matches("r=\"1.5\"").count(), est.inner.len());
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }
}
