//! Planar regions bounded by circles or sampled Jordan curves.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::analytic::{DiskGrid, TaylorSeries};

/// A Jordan domain. Curves are closed polylines whose true boundary lies
/// within `slack` of the samples.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Disk { center: Complex64, radius: f64 },
    Curve { curve: Vec<Complex64>, slack: f64 },
}

impl Region {
    /// Image of the circle `|z| = r` under `g`, with the slack covering the
    /// series tail and the chord error between samples.
    pub fn image_of_circle(g: &TaylorSeries, r: f64, n: usize) -> Region {
        let curve = DiskGrid::circle(r, n).map(|z| g.horner(z)).collect();
        // |d²g(re^{iθ})/dθ²| <= Σ k²|c_k| r^k
        let second = g.z_derivative().z_derivative();
        let curvature = second.coeffs().iter().enumerate().map(|(k, c)| c.norm() * r.powi(k as i32)).sum::<f64>()
            + second.tail_at(r);
        let step = 2.0 * PI / n as f64;
        Region::Curve { curve, slack: g.tail_at(r) + step * step / 8.0 * curvature }
    }

    /// Signed distance to the sampled boundary, positive inside. Does not
    /// include the slack.
    pub fn depth(&self, w: Complex64) -> f64 {
        match self {
            Region::Disk { center, radius } => radius - (w - center).norm(),
            Region::Curve { curve, .. } => {
                let d = polyline_distance(curve, w);
                if winding_number(curve, w) != 0 {
                    d
                } else {
                    -d
                }
            }
        }
    }

    /// `w ± err` lies inside the true region.
    pub fn surely_contains(&self, w: Complex64, err: f64) -> bool {
        self.depth(w) > self.slack() + err
    }

    /// `w ± err` lies outside the closure of the true region.
    pub fn surely_excludes(&self, w: Complex64, err: f64) -> bool {
        self.depth(w) < -(self.slack() + err)
    }

    pub fn slack(&self) -> f64 {
        match self {
            Region::Disk { .. } => 0.0,
            Region::Curve { slack, .. } => *slack,
        }
    }

    /// Whether the boundary samples form a simple closed curve.
    pub fn is_simple(&self) -> bool {
        match self {
            Region::Disk { radius, .. } => *radius > 0.0,
            Region::Curve { curve, .. } => is_simple_polyline(curve),
        }
    }
}

/// Winding number of the closed polyline `curve` around `w`.
pub fn winding_number(curve: &[Complex64], w: Complex64) -> i64 {
    let mut total = 0.0;
    for j in 0..curve.len() {
        let a = curve[j] - w;
        let b = curve[(j + 1) % curve.len()] - w;
        total += (b / a).arg();
    }
    (total / (2.0 * PI)).round() as i64
}

/// Euclidean distance from `w` to the closed polyline `curve`.
pub fn polyline_distance(curve: &[Complex64], w: Complex64) -> f64 {
    (0..curve.len())
        .map(|j| segment_distance(curve[j], curve[(j + 1) % curve.len()], w))
        .fold(f64::INFINITY, f64::min)
}

fn segment_distance(a: Complex64, b: Complex64, w: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let t = (((w - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (w - (a + d * t)).norm()
}

/// Whether the closed polyline has no self-intersections.
pub fn is_simple_polyline(curve: &[Complex64]) -> bool {
    let n = curve.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let (p1, p2) = (curve[i], curve[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(p1, p2, curve[j], curve[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    ((a - o).conj() * (b - o)).im
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}
#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polyline_tools() {
        let square = [c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, -1.0), c(1.0, -1.0)];
        assert_eq!(winding_number(&square, c(0.0, 0.0)), 1);
        assert_eq!(winding_number(&square, c(3.0, 0.0)), 0);
        assert!((polyline_distance(&square, c(0.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!(is_simple_polyline(&square));
        let bow = [c(1.0, 1.0), c(-1.0, -1.0), c(-1.0, 1.0), c(1.0, -1.0)];
        assert!(!is_simple_polyline(&bow));
    }

    #[test]
    fn circle_image_region() {
        let g = TaylorSeries::from_real(&[0.0, 1.0, 0.2]);
        let region = Region::image_of_circle(&g, 0.9, 512);
        assert!(region.is_simple());
        assert!(region.depth(c(0.0, 0.0)) > 0.6);
        assert!(region.depth(c(1.2, 0.0)) < 0.0);
        assert!(region.slack() < 1e-3);
    }
}
