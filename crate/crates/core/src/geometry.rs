//! Convex bodies in the plane described by support-function samples.

use std::f64::consts::PI;

use serde::Serialize;

use crate::linalg::C64;

/// Equally spaced directions `θ_k = 2πk/n`.
pub fn angle_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

/// `Re(z ū)` for `u = e^{iθ}`.
pub fn project(z: C64, theta: f64) -> f64 {
    z.re * theta.cos() + z.im * theta.sin()
}

/// Support function of a disk.
pub fn disk_support(center: C64, radius: f64, theta: f64) -> f64 {
    project(center, theta) + radius
}

/// Convex polygon, vertices counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polygon {
    pub vertices: Vec<C64>,
}

impl Polygon {
    /// Intersection of the half-planes `Re(z e^{-iθ_k}) ≤ h_k`.
    pub fn from_support(angles: &[f64], values: &[f64]) -> Polygon {
        let big = values.iter().fold(1.0f64, |m, v| m.max(v.abs())) * 4.0 + 1.0;
        let mut poly = vec![C64::new(-big, -big), C64::new(big, -big), C64::new(big, big), C64::new(-big, big)];
        // Relative slack keeps point-like bodies from vanishing under rounding.
        let slack = 1e-13 * big;
        for (&theta, &h) in angles.iter().zip(values) {
            poly = clip(&poly, theta, h + slack);
            if poly.is_empty() {
                break;
            }
        }
        Polygon { vertices: dedup(poly) }
    }

    pub fn support(&self, theta: f64) -> f64 {
        self.vertices.iter().map(|&v| project(v, theta)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                a.re * b.im - b.re * a.im
            })
            .sum::<f64>()
            / 2.0
    }

    /// Area centroid, or the vertex mean for degenerate polygons.
    pub fn centroid(&self) -> C64 {
        let n = self.vertices.len();
        if n == 0 {
            return C64::new(0.0, 0.0);
        }
        let area = self.area();
        let mean = self.vertices.iter().sum::<C64>() / n as f64;
        if area.abs() < 1e-14 {
            return mean;
        }
        let mut c = C64::new(0.0, 0.0);
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let cross = a.re * b.im - b.re * a.im;
            c += (a + b) * cross;
        }
        c / (6.0 * area)
    }

    pub fn min_re(&self) -> f64 {
        self.vertices.iter().map(|v| v.re).fold(f64::INFINITY, f64::min)
    }

    /// Hausdorff distance to a convex body given by its support function,
    /// sampled at `n` directions plus every vertex normal of this polygon
    /// relative to `center`.
    pub fn hausdorff_to(&self, other: impl Fn(f64) -> f64, center: C64, n: usize) -> f64 {
        let mut thetas = angle_grid(n);
        thetas.extend(self.vertices.iter().map(|v| (v - center).arg()));
        thetas.into_iter().map(|t| (self.support(t) - other(t)).abs()).fold(0.0, f64::max)
    }
}

/// Keeps the part of a convex polygon with `Re(z e^{-iθ}) ≤ h`.
fn clip(poly: &[C64], theta: f64, h: f64) -> Vec<C64> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let (fa, fb) = (project(a, theta) - h, project(b, theta) - h);
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            out.push(a + (b - a) * (fa / (fa - fb)));
        }
    }
    out
}

fn dedup(poly: Vec<C64>) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::with_capacity(poly.len());
    for v in poly {
        if out.last().is_none_or(|w| (v - w).norm() > 1e-13) {
            out.push(v);
        }
    }
    while out.len() > 1 && (out[0] - out[out.len() - 1]).norm() <= 1e-13 {
        out.pop();
    }
    out
}

/// Smallest width `h(θ) + h(θ + π)` over a symmetric angle grid of even size.
pub fn min_width(values: &[f64]) -> f64 {
    let n = values.len();
    (0..n / 2).map(|k| values[k] + values[k + n / 2]).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_from_four_support_values() {
        let angles = angle_grid(4);
        let p = Polygon::from_support(&angles, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(p.vertices.len(), 4);
        assert!((p.area() - 4.0 * 6.0).abs() < 1e-10);
        let c = p.centroid();
        assert!((c - C64::new(-1.0, -1.0)).norm() < 1e-10);
    }

    #[test]
    fn disk_polygon_converges() {
        let angles = angle_grid(360);
        let (c, r) = (C64::new(0.5, 0.0), 0.5);
        let values: Vec<f64> = angles.iter().map(|&t| disk_support(c, r, t)).collect();
        let p = Polygon::from_support(&angles, &values);
        let gap = p.hausdorff_to(|t| disk_support(c, r, t), c, 720);
        // Circumscribed regular 360-gon overshoots by r(sec(π/360) − 1).
        let expect = r * (1.0 / (PI / 360.0).cos() - 1.0);
        assert!((gap - expect).abs() < 1e-9, "{gap} vs {expect}");
        assert!((p.min_re()).abs() < 1e-4);
    }

    #[test]
    fn degenerate_point() {
        let angles = angle_grid(8);
        let z = C64::new(0.3, -0.7);
        let values: Vec<f64> = angles.iter().map(|&t| project(z, t)).collect();
        let p = Polygon::from_support(&angles, &values);
        assert!(p.hausdorff_to(|t| project(z, t), z, 16) < 1e-9);
        assert!(min_width(&values).abs() < 1e-12);
    }
}
