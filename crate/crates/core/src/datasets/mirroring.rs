//! Datasets refined by mirroring: Jenga, Slices, Ulike and their
//! four-insertions-per-level variants.

use crate::geometry::Point;
use crate::mesh::Mesh;
use crate::prelude::*;

/// Tiles four half-scale copies of `mesh` into the unit square. Interface
/// vertices are merged and hanging nodes inserted; the level is kept.
pub fn mirror(mesh: &Mesh) -> Mesh {
    let mut polys = Vec::with_capacity(4 * mesh.num_elements());
    for (dx, dy) in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)] {
        let shift = Point::new(dx, dy);
        polys.extend(mesh.polygons().map(|p| p.into_iter().map(|q| q * 0.5 + shift).collect::<Vec<_>>()));
    }
    Mesh::from_polygons(&polys, mesh.level)
}

fn mirrored(base: &[Vec<Point>], n: usize) -> Mesh {
    let mut mesh = Mesh::from_polygons(base, n);
    for _ in 0..n {
        mesh = mirror(&mesh);
    }
    mesh
}

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point> {
    vec![Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)]
}

/// Bottom and top bars of height 1/4 and a middle band whose left-most
/// rectangle has been halved `splits` times (starting from two halves).
pub(crate) fn jenga_base(splits: usize) -> Vec<Vec<Point>> {
    let mut polys = vec![rect(0.0, 0.0, 1.0, 0.25), rect(0.0, 0.75, 1.0, 1.0)];
    let mut right = 1.0;
    for _ in 0..=splits {
        let left = right / 2.0;
        polys.push(rect(left, 0.25, right, 0.75));
        right = left;
    }
    polys.push(rect(0.0, 0.25, right, 0.75));
    polys
}

/// Fan of "slices" through the diagonal `(0,0)-(1,1)`: the antidiagonal is
/// cut at `(2^-i, 1 - 2^-i)` and `(1 - 2^-i, 2^-i)` for `i = 1..=cuts`, and
/// each consecutive pair of cut points spans a quadrilateral with both
/// diagonal corners.
pub(crate) fn slices_base(cuts: usize) -> Vec<Vec<Point>> {
    let mut anti = vec![Point::new(0.0, 1.0)];
    for i in (2..=cuts).rev() {
        let s = 0.5f64.powi(i as i32);
        anti.push(Point::new(s, 1.0 - s));
    }
    anti.push(Point::new(0.5, 0.5));
    for i in 2..=cuts {
        let s = 0.5f64.powi(i as i32);
        anti.push(Point::new(1.0 - s, s));
    }
    anti.push(Point::new(1.0, 0.0));
    anti.windows(2)
        .map(|w| vec![Point::new(0.0, 0.0), w[1], Point::new(1.0, 1.0), w[0]])
        .collect()
}

/// `m` nested U-shaped polylines hanging from the top side with spacing
/// `d = 1 / (2 (m + 1))`. The bottom side of the outermost element is split
/// under every U arm so the mirrored copies stay conforming.
pub(crate) fn ulike_base(m: usize) -> Vec<Vec<Point>> {
    let d = 0.5 / (m + 1) as f64;
    let a = |i: usize| i as f64 * d;
    let mut polys = Vec::with_capacity(m + 1);

    let mut outer = vec![Point::new(0.0, 0.0)];
    outer.extend((1..=m).map(|i| Point::new(a(i), 0.0)));
    outer.extend((1..=m).rev().map(|i| Point::new(1.0 - a(i), 0.0)));
    outer.extend([Point::new(1.0, 0.0), Point::new(1.0, 1.0)]);
    if m == 0 {
        outer.push(Point::new(0.0, 1.0));
        polys.push(outer);
        return polys;
    }
    outer.extend(u_inner(a(1)));
    outer.push(Point::new(0.0, 1.0));
    polys.push(outer);

    for i in 1..m {
        let (ai, aj) = (a(i), a(i + 1));
        let mut p = vec![Point::new(ai, 1.0), Point::new(ai, ai), Point::new(1.0 - ai, ai), Point::new(1.0 - ai, 1.0)];
        p.extend(u_inner(aj));
        polys.push(p);
    }
    let am = a(m);
    polys.push(rect(am, am, 1.0 - am, 1.0));
    polys
}

/// The U at offset `a`, traversed right arm down, bottom, left arm up.
fn u_inner(a: f64) -> [Point; 4] {
    [Point::new(1.0 - a, 1.0), Point::new(1.0 - a, a), Point::new(a, a), Point::new(a, 1.0)]
}

pub fn gen_jenga(n: usize) -> Mesh {
    mirrored(&jenga_base(n), n)
}

pub fn gen_slices(n: usize) -> Mesh {
    mirrored(&slices_base(n + 2), n)
}

pub fn gen_ulike(n: usize) -> Mesh {
    mirrored(&ulike_base(1 << n), n)
}

pub fn gen_jenga4(n: usize) -> Mesh {
    mirrored(&jenga_base(4 * n), n)
}

pub fn gen_slices4(n: usize) -> Mesh {
    mirrored(&slices_base(4 * n + 2), n)
}

/// `16^n` U lines, so the element count explodes: level 2 already has
/// over a million elements.
pub fn gen_ulike4(n: usize) -> Mesh {
    mirrored(&ulike_base(1 << (4 * n)), n)
}
