//! Points and simple-polygon primitives.
//!
//! Polygons are plain slices of [`Point`] in counterclockwise order, without a
//! repeated closing vertex. Consecutive collinear vertices (hanging nodes) are
//! allowed everywhere.

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::prelude::*;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Rotation by +90 degrees.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, s: f64) -> Point {
        Point::new(self.x / s, self.y / s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Orientation of `c` relative to the directed line `a -> b` (twice the signed
/// triangle area).
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Iterator over the directed edges `(p_i, p_{i+1})` of a closed polygon.
pub fn edges(poly: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    let n = poly.len();
    (0..n).map(move |i| (poly[i], poly[(i + 1) % n]))
}

/// Shoelace signed area; positive for counterclockwise polygons.
pub fn signed_area(poly: &[Point]) -> f64 {
    // Shifting by the first vertex keeps the sum well conditioned far from the origin.
    let o = match poly.first() {
        Some(&p) => p,
        None => return 0.0,
    };
    0.5 * edges(poly).map(|(a, b)| (a - o).cross(b - o)).sum::<f64>()
}

fn check_len(poly: &[Point]) -> Result<()> {
    if poly.len() < 3 {
        return Err(Error::InvalidPolygon(alloc::format!(
            "{} vertices, at least 3 required",
            poly.len()
        )));
    }
    Ok(())
}

/// Area of a counterclockwise polygon.
pub fn area(poly: &[Point]) -> Result<f64> {
    check_len(poly)?;
    let a = signed_area(poly);
    if a <= 0.0 {
        return Err(Error::Orientation(a));
    }
    Ok(a)
}

/// Largest distance between two points of the polygon, attained at vertices.
pub fn diameter(poly: &[Point]) -> Result<f64> {
    check_len(poly)?;
    let mut d2: f64 = 0.0;
    for (i, &p) in poly.iter().enumerate() {
        for &q in &poly[i + 1..] {
            d2 = d2.max((p - q).norm2());
        }
    }
    Ok(d2.sqrt())
}

pub fn perimeter(poly: &[Point]) -> f64 {
    edges(poly).map(|(a, b)| a.dist(b)).sum()
}

pub fn edge_lengths(poly: &[Point]) -> Vec<f64> {
    edges(poly).map(|(a, b)| a.dist(b)).collect()
}

/// Center of gravity of a polygon with nonzero area.
pub fn centroid(poly: &[Point]) -> Point {
    let o = poly[0];
    let mut c = Point::default();
    let mut a2 = 0.0;
    for (p, q) in edges(poly) {
        let (p, q) = (p - o, q - o);
        let w = p.cross(q);
        a2 += w;
        c += (p + q) * w;
    }
    o + c / (3.0 * a2)
}

pub fn bounding_box(points: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    (p - closest_point_on_segment(p, a, b)).norm()
}

pub fn closest_point_on_segment(p: Point, a: Point, b: Point) -> Point {
    let d = b - a;
    let l2 = d.norm2();
    if l2 == 0.0 {
        return a;
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    a + d * t
}

/// Distance from `p` to the polygon boundary.
pub fn boundary_distance(poly: &[Point], p: Point) -> f64 {
    edges(poly)
        .map(|(a, b)| point_segment_distance(p, a, b))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Outside,
    Boundary,
}

/// Point location with an absolute boundary tolerance.
pub fn locate(poly: &[Point], p: Point, tol: f64) -> Location {
    if boundary_distance(poly, p) <= tol {
        return Location::Boundary;
    }
    // Crossing number.
    let mut inside = false;
    for (a, b) in edges(poly) {
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if x > p.x {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

pub fn contains(poly: &[Point], p: Point) -> bool {
    locate(poly, p, 0.0) != Location::Outside
}

/// True when the open segments `(a, b)` and `(c, d)` cross at a single
/// interior point of both, or overlap collinearly with positive length.
/// Touching at endpoints does not count.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point, tol: f64) -> bool {
    let scale = (b - a).norm().max((d - c).norm()).max(f64::MIN_POSITIVE);
    let o1 = orient(a, b, c) / scale;
    let o2 = orient(a, b, d) / scale;
    let o3 = orient(c, d, a) / scale;
    let o4 = orient(c, d, b) / scale;
    let strict = |v: f64| v.abs() > tol;
    if strict(o1) && strict(o2) && strict(o3) && strict(o4) {
        return (o1 > 0.0) != (o2 > 0.0) && (o3 > 0.0) != (o4 > 0.0);
    }
    if !strict(o1) && !strict(o2) {
        // Collinear: overlap of the projections onto the common direction.
        let dir = (b - a) / (b - a).norm().max(f64::MIN_POSITIVE);
        let (s0, s1) = (0.0_f64, (b - a).dot(dir));
        let (mut t0, mut t1) = ((c - a).dot(dir), (d - a).dot(dir));
        if t0 > t1 {
            core::mem::swap(&mut t0, &mut t1);
        }
        return s1.min(t1) - s0.max(t0) > tol;
    }
    // One endpoint touches the other segment: interior touch counts as a
    // crossing only if it is not shared endpoint contact.
    let touches = |p: Point, s: Point, e: Point| {
        point_segment_distance(p, s, e) <= tol * scale
            && p.dist(s) > tol * scale
            && p.dist(e) > tol * scale
    };
    let side_change = |o_a: f64, o_b: f64| strict(o_a) && strict(o_b) && (o_a > 0.0) != (o_b > 0.0);
    (touches(c, a, b) && side_change(o3, o4))
        || (touches(d, a, b) && side_change(o3, o4))
        || (touches(a, c, d) && side_change(o1, o2))
        || (touches(b, c, d) && side_change(o1, o2))
}

/// True when the boundary of `poly` does not intersect itself.
pub fn is_simple(poly: &[Point]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let scale = diameter(poly).unwrap_or(1.0);
    let tol = 1e-12;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if a.dist(b) <= tol * scale {
            return false;
        }
        for j in i + 1..n {
            let (c, d) = (poly[j], poly[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Adjacent edges may only share their common vertex: reject folds back.
                let (p, q, r) = if j == i + 1 { (a, b, d) } else { (c, a, b) };
                if orient(p, q, r).abs() <= tol * scale * scale && (q - p).dot(r - q) < 0.0 {
                    return false;
                }
                continue;
            }
            if segments_intersect(a, b, c, d, tol) {
                return false;
            }
            // Vertex of one edge lying on the other (non-adjacent) edge.
            for &(p, s, e) in &[(a, c, d), (b, c, d), (c, a, b), (d, a, b)] {
                if point_segment_distance(p, s, e) <= tol * scale {
                    return false;
                }
            }
        }
    }
    true
}

/// Triangulates a simple counterclockwise polygon by ear clipping. Returns
/// vertex index triples; every triangle is counterclockwise with nonnegative
/// area.
pub fn ear_clip(poly: &[Point]) -> Vec<[usize; 3]> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n.saturating_sub(2));
    if n < 3 {
        return out;
    }
    let scale = diameter(poly).unwrap_or(1.0).max(f64::MIN_POSITIVE);
    let eps = 1e-14 * scale * scale;
    let mut idx: Vec<usize> = (0..n).collect();
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = None;
        for k in 0..m {
            let (ip, ic, inx) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (poly[ip], poly[ic], poly[inx]);
            if orient(a, b, c) <= eps {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                if j == ip || j == ic || j == inx {
                    return false;
                }
                let p = poly[j];
                orient(a, b, p) >= -eps && orient(b, c, p) >= -eps && orient(c, a, p) >= -eps
            });
            if !blocked {
                clipped = Some(k);
                break;
            }
        }
        // Degenerate remainder (only collinear runs left): drop the flattest vertex.
        let k = clipped.unwrap_or_else(|| {
            (0..m)
                .max_by(|&i, &j| {
                    let f = |k: usize| {
                        orient(poly[idx[(k + m - 1) % m]], poly[idx[k]], poly[idx[(k + 1) % m]])
                    };
                    f(i).total_cmp(&f(j))
                })
                .unwrap_or(0)
        });
        out.push([idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]]);
        idx.remove(k);
    }
    out.push([idx[0], idx[1], idx[2]]);
    out
}

/// Interior angles in radians, counterclockwise convention: reflex angles
/// exceed `pi`, collinear (hanging) vertices give exactly `pi`.
pub fn interior_angles(poly: &[Point]) -> Vec<f64> {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let din = poly[i] - poly[(i + n - 1) % n];
            let dout = poly[(i + 1) % n] - poly[i];
            core::f64::consts::PI - din.cross(dout).atan2(din.dot(dout))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn l_shape() -> Vec<Point> {
        pts(&[(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)])
    }

    #[test]
    fn diameters() {
        let sq = pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]);
        assert_relative_eq!(diameter(&sq).unwrap(), 2f64.sqrt());
        let tri = pts(&[(0., 0.), (1., 0.), (0., 1.)]);
        assert_relative_eq!(diameter(&tri).unwrap(), 2f64.sqrt());
        let needle = pts(&[(0., 0.), (1., 0.), (0.5, 1e-9)]);
        assert_relative_eq!(diameter(&needle).unwrap(), 1.0);
        assert!(matches!(diameter(&sq[..2]), Err(Error::InvalidPolygon(_))));
    }

    #[test]
    fn areas() {
        let sq = pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]);
        assert_relative_eq!(area(&sq).unwrap(), 1.0);
        let tri = pts(&[(0., 0.), (1., 0.), (0., 1.)]);
        assert_relative_eq!(area(&tri).unwrap(), 0.5);
        assert_relative_eq!(area(&l_shape()).unwrap(), 3.0);
        let mut cw = sq.clone();
        cw.reverse();
        assert!(matches!(area(&cw), Err(Error::Orientation(_))));
    }

    #[test]
    fn centroid_of_l_shape() {
        // Two rectangles [0,2]x[0,1] (c=(1,.5), A=2) and [0,1]x[1,2] (c=(.5,1.5), A=1).
        let c = centroid(&l_shape());
        assert_relative_eq!(c.x, 2.5 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(c.y, 2.5 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bowtie = pts(&[(0., 0.), (1., 1.), (1., 0.), (0., 1.)]);
        assert!(!is_simple(&bowtie));
        assert!(is_simple(&l_shape()));
        // Hanging vertex on an edge keeps the polygon simple.
        let hang = pts(&[(0., 0.), (0.5, 0.), (1., 0.), (1., 1.), (0., 1.)]);
        assert!(is_simple(&hang));
    }

    #[test]
    fn ear_clip_covers_area() {
        let l = l_shape();
        let tris = ear_clip(&l);
        assert_eq!(tris.len(), 4);
        let total: f64 = tris
            .iter()
            .map(|t| signed_area(&[l[t[0]], l[t[1]], l[t[2]]]))
            .sum();
        assert_relative_eq!(total, 3.0, epsilon = 1e-14);
        assert!(tris
            .iter()
            .all(|t| signed_area(&[l[t[0]], l[t[1]], l[t[2]]]) >= 0.0));
    }

    #[test]
    fn angles_of_l_shape() {
        let a = interior_angles(&l_shape());
        let pi = core::f64::consts::PI;
        assert_relative_eq!(a[3], 1.5 * pi, epsilon = 1e-14);
        assert_relative_eq!(a.iter().sum::<f64>(), 4.0 * pi, epsilon = 1e-12);
    }

    #[test]
    fn point_location() {
        let l = l_shape();
        assert_eq!(locate(&l, Point::new(0.5, 0.5), 1e-12), Location::Inside);
        assert_eq!(locate(&l, Point::new(1.5, 1.5), 1e-12), Location::Outside);
        assert_eq!(locate(&l, Point::new(1.0, 1.5), 1e-12), Location::Boundary);
    }
}
