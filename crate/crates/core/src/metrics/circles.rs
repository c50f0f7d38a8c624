//! Enclosing and inscribed circles of polygons.

use crate::geometry::{self, Location, Point};
use crate::metrics::lp;
use crate::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    fn from_two(a: Point, b: Point) -> Circle {
        Circle {
            center: (a + b) * 0.5,
            radius: a.dist(b) * 0.5,
        }
    }

    /// Circle through three points, or the widest two-point circle when they
    /// are (nearly) collinear.
    fn from_three(a: Point, b: Point, c: Point) -> Circle {
        let (ab, ac) = (b - a, c - a);
        let d = 2.0 * ab.cross(ac);
        let scale = ab.norm2().max(ac.norm2());
        if d.abs() <= 1e-14 * scale {
            let candidates = [Circle::from_two(a, b), Circle::from_two(a, c), Circle::from_two(b, c)];
            return candidates
                .into_iter()
                .max_by(|x, y| x.radius.total_cmp(&y.radius))
                .unwrap();
        }
        let ux = (ac.y * ab.norm2() - ab.y * ac.norm2()) / d;
        let uy = (ab.x * ac.norm2() - ac.x * ab.norm2()) / d;
        let off = Point::new(ux, uy);
        Circle {
            center: a + off,
            radius: off.norm(),
        }
    }

    fn contains(&self, p: Point) -> bool {
        p.dist(self.center) <= self.radius * (1.0 + 1e-12) + 1e-300
    }
}

/// Smallest circle containing all points (Welzl's algorithm in its iterative
/// move-to-front form).
pub fn min_enclosing_circle(points: &[Point]) -> Circle {
    let Some(&first) = points.first() else {
        return Circle {
            center: Point::default(),
            radius: 0.0,
        };
    };
    let mut c = Circle {
        center: first,
        radius: 0.0,
    };
    for i in 1..points.len() {
        if c.contains(points[i]) {
            continue;
        }
        c = Circle {
            center: points[i],
            radius: 0.0,
        };
        for j in 0..i {
            if c.contains(points[j]) {
                continue;
            }
            c = Circle::from_two(points[i], points[j]);
            for k in 0..j {
                if !c.contains(points[k]) {
                    c = Circle::from_three(points[i], points[j], points[k]);
                }
            }
        }
    }
    c
}

/// Largest circle inscribed in a convex counterclockwise polygon, solved as
/// the linear program `max r` subject to `n_i . x + r <= b_i` per edge.
pub fn chebyshev_circle(convex: &[Point]) -> Option<Circle> {
    if convex.len() < 3 {
        return None;
    }
    let c0 = convex.iter().fold(Point::default(), |s, &p| s + p) / convex.len() as f64;
    let mut a = Vec::with_capacity(convex.len());
    let mut b = Vec::with_capacity(convex.len());
    for (p, q) in geometry::edges(convex) {
        let d = q - p;
        let len = d.norm();
        if len == 0.0 {
            continue;
        }
        let n = Point::new(d.y, -d.x) / len;
        // Variables (p_x, q_x, p_y, q_y, r), x = c0 + (p_x - q_x, p_y - q_y).
        a.push(vec![n.x, -n.x, n.y, -n.y, 1.0]);
        b.push((n.dot(p) - n.dot(c0)).max(0.0));
    }
    let z = lp::maximize(&[0.0, 0.0, 0.0, 0.0, 1.0], &a, &b)?;
    Some(Circle {
        center: c0 + Point::new(z[0] - z[1], z[2] - z[3]),
        radius: z[4],
    })
}

/// Grid resolution used to seed the inscribed-circle search.
const SEED_GRID: usize = 64;
const SEEDS_REFINED: usize = 8;

/// Largest circle contained in a simple polygon.
///
/// Distance-to-boundary is sampled on a 64x64 grid over the bounding box; the
/// best samples are refined by a trust-region ascent in which each step solves
/// a small linear program on the linearized distances to nearby edges.
pub fn max_inscribed_circle(poly: &[Point]) -> Circle {
    // Convex polygons are their own kernel: the linear program is exact.
    if is_convex(poly) {
        if let Some(c) = chebyshev_circle(poly) {
            return c;
        }
    }
    let (lo, hi) = geometry::bounding_box(poly);
    let h = (hi - lo).norm();
    let mut seeds: Vec<(f64, Point)> = Vec::with_capacity(SEED_GRID * SEED_GRID);
    for j in 0..SEED_GRID {
        for i in 0..SEED_GRID {
            let p = Point::new(
                lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / SEED_GRID as f64,
                lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / SEED_GRID as f64,
            );
            if geometry::locate(poly, p, 0.0) == Location::Inside {
                seeds.push((geometry::boundary_distance(poly, p), p));
            }
        }
    }
    if seeds.is_empty() {
        // Extremely thin polygon: fall back to ear centroids.
        for t in geometry::ear_clip(poly) {
            let p = (poly[t[0]] + poly[t[1]] + poly[t[2]]) / 3.0;
            if geometry::locate(poly, p, 0.0) == Location::Inside {
                seeds.push((geometry::boundary_distance(poly, p), p));
            }
        }
    }
    seeds.sort_by(|a, b| b.0.total_cmp(&a.0));
    seeds.truncate(SEEDS_REFINED);
    seeds
        .into_iter()
        .map(|(_, p)| refine_inscribed(poly, p, h))
        .max_by(|a, b| a.radius.total_cmp(&b.radius))
        .unwrap_or(Circle {
            center: lo,
            radius: 0.0,
        })
}

fn is_convex(poly: &[Point]) -> bool {
    let n = poly.len();
    (0..n).all(|i| geometry::orient(poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]) >= 0.0)
}

fn refine_inscribed(poly: &[Point], start: Point, h: f64) -> Circle {
    let mut x = start;
    let mut fx = geometry::boundary_distance(poly, x);
    let mut delta = fx / core::f64::consts::SQRT_2;
    let stop = 1e-12 * h;
    for _ in 0..500 {
        if delta < stop {
            break;
        }
        // Linearize distances to edges that can become the nearest within the box.
        let reach = fx + 2.0 * delta * core::f64::consts::SQRT_2;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (p, q) in geometry::edges(poly) {
            let c = geometry::closest_point_on_segment(x, p, q);
            let d = x.dist(c);
            if d > reach || d == 0.0 {
                continue;
            }
            let g = (x - c) / d;
            // Variables (p_x, q_x, p_y, q_y, t): t - g . s <= d, s = p - q.
            a.push(vec![-g.x, g.x, -g.y, g.y, 1.0]);
            b.push(d);
        }
        for k in 0..4 {
            let mut row = vec![0.0; 5];
            row[k] = 1.0;
            a.push(row);
            b.push(delta);
        }
        let step = lp::maximize(&[0.0, 0.0, 0.0, 0.0, 1.0], &a, &b)
            .map(|z| Point::new(z[0] - z[1], z[2] - z[3]))
            .unwrap_or_default();
        let y = x + step;
        let fy = geometry::boundary_distance(poly, y);
        if step.norm() > 0.0 && fy > fx * (1.0 + 1e-15) && geometry::locate(poly, y, 0.0) == Location::Inside
        {
            x = y;
            fx = fy;
            delta = (delta * 2.0).min(fx / core::f64::consts::SQRT_2);
        } else {
            delta *= 0.5;
        }
    }
    Circle {
        center: x,
        radius: fx,
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
    fn enclosing_circle_of_square() {
        let c = min_enclosing_circle(&pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]));
        assert_relative_eq!(c.center.x, 0.5, epsilon = 1e-14);
        assert_relative_eq!(c.center.y, 0.5, epsilon = 1e-14);
        assert_relative_eq!(c.radius, 2f64.sqrt() / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn skinny_triangle_uses_longest_edge() {
        let c = min_enclosing_circle(&pts(&[(0., 0.), (2., 0.), (1., 0.1)]));
        assert_relative_eq!(c.radius, 1.0, epsilon = 1e-14);
        assert_relative_eq!(c.center.x, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn two_point_fan() {
        let c = min_enclosing_circle(&pts(&[(0., 0.), (1., 0.), (0., 0.), (1., 0.), (0.5, 0.)]));
        assert_relative_eq!(c.radius, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn inscribed_circles() {
        let sq = pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]);
        let c = max_inscribed_circle(&sq);
        assert!((c.radius - 0.5).abs() <= 1e-6);
        let rect = pts(&[(0., 0.), (2., 0.), (2., 1.), (0., 1.)]);
        assert!((max_inscribed_circle(&rect).radius - 0.5).abs() <= 1e-6 * 5f64.sqrt());
    }

    #[test]
    fn chebyshev_of_square_and_triangle() {
        let sq = pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]);
        assert_relative_eq!(chebyshev_circle(&sq).unwrap().radius, 0.5, epsilon = 1e-12);
        // Right triangle with legs 3, 4: inradius (3 + 4 - 5) / 2 = 1.
        let tri = pts(&[(0., 0.), (4., 0.), (0., 3.)]);
        let c = chebyshev_circle(&tri).unwrap();
        assert_relative_eq!(c.radius, 1.0, epsilon = 1e-12);
        assert_relative_eq!(c.center.x, 1.0, epsilon = 1e-12);
    }
}
