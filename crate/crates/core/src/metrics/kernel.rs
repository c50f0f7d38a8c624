//! Polygon kernel by sequential half-plane clipping.

use crate::geometry::{self, Point};
use crate::prelude::*;

/// Relative tolerance for classifying points against an edge line.
const LINE_TOL: f64 = 1e-12;

/// Clips a convex counterclockwise polygon against the closed left half-plane
/// of the directed line `a -> b`.
pub fn clip_half_plane(convex: &[Point], a: Point, b: Point) -> Vec<Point> {
    let d = b - a;
    let len = d.norm();
    if convex.is_empty() || len == 0.0 {
        return convex.to_vec();
    }
    let side = |p: Point| d.cross(p - a) / len;
    let scale = {
        let (lo, hi) = geometry::bounding_box(convex);
        (hi - lo).norm().max(len)
    };
    let tol = LINE_TOL * scale;
    let n = convex.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (p, q) = (convex[i], convex[(i + 1) % n]);
        let (sp, sq) = (side(p), side(q));
        let p_in = sp >= -tol;
        let q_in = sq >= -tol;
        if p_in {
            out.push(p);
        }
        if (sp > tol && sq < -tol) || (sp < -tol && sq > tol) {
            let t = sp / (sp - sq);
            out.push(p.lerp(q, t));
        } else if p_in != q_in {
            // One endpoint sits on the line within tolerance; it is kept as is.
        }
    }
    dedup_ring(&mut out, tol);
    if out.len() < 3 || geometry::signed_area(&out) <= tol * tol {
        out.clear();
    }
    out
}

fn dedup_ring(ring: &mut Vec<Point>, tol: f64) {
    ring.dedup_by(|a, b| a.dist(*b) <= tol);
    while ring.len() > 1 && ring[0].dist(ring[ring.len() - 1]) <= tol {
        ring.pop();
    }
}

/// Kernel of a simple counterclockwise polygon: the convex set of points from
/// which the whole polygon is visible. Empty when the polygon is not
/// star-shaped.
pub fn kernel(poly: &[Point]) -> Vec<Point> {
    let (lo, hi) = geometry::bounding_box(poly);
    let mut k = vec![lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)];
    for (a, b) in geometry::edges(poly) {
        k = clip_half_plane(&k, a, b);
        if k.is_empty() {
            break;
        }
    }
    k
}

pub fn kernel_area(poly: &[Point]) -> f64 {
    let k = kernel(poly);
    if k.is_empty() {
        0.0
    } else {
        geometry::signed_area(&k).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn convex_kernel_is_polygon() {
        let hex: Vec<Point> = (0..6)
            .map(|i| {
                let t = i as f64 * core::f64::consts::PI / 3.0;
                Point::new(t.cos(), t.sin())
            })
            .collect();
        assert_relative_eq!(kernel_area(&hex), geometry::signed_area(&hex), epsilon = 1e-12);
    }

    #[test]
    fn l_shape_kernel_is_unit_square() {
        let l = pts(&[(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)]);
        assert_relative_eq!(kernel_area(&l), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn u_shape_has_empty_kernel() {
        // The two inner walls of the notch face opposite ways: x >= 2 and x <= 1.
        let u = pts(&[(0., 0.), (3., 0.), (3., 3.), (2., 3.), (2., 1.), (1., 1.), (1., 3.), (0., 3.)]);
        assert!(geometry::is_simple(&u));
        assert_eq!(kernel_area(&u), 0.0);
    }
}
