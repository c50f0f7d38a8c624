//! Hybrid meshes: prescribed polygons whose complement in the unit square
//! is filled by a refined constrained Delaunay triangulation.

use core::f64::consts::PI;

use spade::{AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation};

use crate::geometry::{self, Point};
use crate::mesh::Mesh;
use crate::prelude::*;
use crate::{Error, Result};

/// Minimum angle requested from the refinement. Angles already present in
/// the input (sharp spikes, slits) are left alone.
const MIN_ANGLE_DEG: f64 = 20.0;
const MAX_STEINER: usize = 400_000;

/// Meshes the unit square with `polys` as elements and triangles of area
/// below `max_area` everywhere else. Refinement may split polygon edges;
/// the new vertices become hanging nodes of the polygons.
pub fn fill_complement(polys: &[Vec<Point>], max_area: f64, level: usize) -> Result<Mesh> {
    type Cdt = ConstrainedDelaunayTriangulation<Point2<f64>>;
    let fail = |polygon: usize, reason: &str| Error::Generation {
        polygon,
        reason: reason.to_string(),
    };
    let mut cdt = Cdt::new();
    let add_loop = |cdt: &mut Cdt, poly: &[Point], id: usize| -> Result<()> {
        let handles = poly
            .iter()
            .map(|p| cdt.insert(Point2::new(p.x, p.y)).map_err(|_| fail(id, "non-finite vertex")))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..handles.len() {
            let (a, b) = (handles[i], handles[(i + 1) % handles.len()]);
            if a == b || !cdt.can_add_constraint(a, b) {
                return Err(fail(id, "boundary touches or crosses another polygon"));
            }
            cdt.add_constraint(a, b);
        }
        Ok(())
    };
    let square = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
    add_loop(&mut cdt, &square, usize::MAX)?;
    for (id, poly) in polys.iter().enumerate() {
        if poly.len() < 3 || !geometry::is_simple(poly) {
            return Err(fail(id, "polygon is not simple"));
        }
        if poly.iter().any(|p| p.x <= 0.0 || p.x >= 1.0 || p.y <= 0.0 || p.y >= 1.0) {
            return Err(fail(id, "polygon must lie strictly inside the unit square"));
        }
        add_loop(&mut cdt, poly, id)?;
    }

    let params = RefinementParameters::<f64>::new()
        .exclude_outer_faces(true)
        .with_max_allowed_area(max_area)
        .with_angle_limit(AngleLimit::from_deg(MIN_ANGLE_DEG))
        .with_max_additional_vertices(MAX_STEINER);
    let result = cdt.refine(params);

    let mut excluded = vec![false; cdt.num_all_faces()];
    for f in &result.excluded_faces {
        excluded[f.index()] = true;
    }
    let mut elements: Vec<Vec<Point>> = polys.to_vec();
    for face in cdt.inner_faces() {
        if excluded[face.fix().index()] {
            continue;
        }
        let tri: Vec<Point> = face.positions().iter().map(|p| Point::new(p.x, p.y)).collect();
        if geometry::signed_area(&tri).abs() > max_area {
            // Blame the polygon that set the area bound.
            let smallest = (0..polys.len())
                .min_by(|&a, &b| geometry::signed_area(&polys[a]).total_cmp(&geometry::signed_area(&polys[b])))
                .unwrap_or(usize::MAX);
            return Err(fail(smallest, "refinement stopped before reaching the area bound"));
        }
        elements.push(tri);
    }
    Ok(Mesh::from_polygons(&elements, level))
}

/// Places one copy of `shape` (given on the unit cell) in the middle of each
/// cell of a `c x c` grid, scaled to `fill` of the cell width.
pub(crate) fn tile(shape: &[Point], c: usize, fill: f64) -> Vec<Vec<Point>> {
    let w = 1.0 / c as f64;
    let margin = (1.0 - fill) / 2.0;
    let mut out = Vec::with_capacity(c * c);
    for j in 0..c {
        for i in 0..c {
            let o = Point::new(i as f64 * w, j as f64 * w);
            out.push(shape.iter().map(|&p| o + (p * fill + Point::new(margin, margin)) * w).collect());
        }
    }
    out
}

/// Axis-aligned 10-gon on the unit cell: a ring of corridor width `t`
/// around the cell centre, cut open by a notch of width `g` at the top.
/// The centre lies outside the polygon, which is never star-shaped.
pub fn spiral(t: f64, g: f64) -> Vec<Point> {
    [
        (0.0, 1.0),
        (0.0, 0.0),
        (1.0, 0.0),
        (1.0, 1.0),
        (t + g, 1.0),
        (t + g, 1.0 - t),
        (1.0 - t, 1.0 - t),
        (1.0 - t, t),
        (t, t),
        (t, 1.0),
    ]
    .iter()
    .map(|&(x, y)| Point::new(x, y))
    .collect()
}

/// Star `2s`-gon centred in the unit cell: outer radius `outer`, inner
/// (concave) vertices at radius `inner`.
pub fn star(s: usize, outer: f64, inner: f64) -> Vec<Point> {
    (0..2 * s)
        .map(|i| {
            let r = if i % 2 == 0 { outer } else { inner };
            let a = PI * i as f64 / s as f64 + PI / 2.0;
            Point::new(0.5 + r * a.cos(), 0.5 + r * a.sin())
        })
        .collect()
}

const CELL_FILL: f64 = 0.6;

fn hybrid(shape: Vec<Point>, n: usize) -> Result<Mesh> {
    let polys = tile(&shape, n + 1, CELL_FILL);
    let min_area = polys.iter().map(|p| geometry::signed_area(p)).fold(f64::INFINITY, f64::min);
    fill_complement(&polys, 0.99 * min_area, n)
}

/// Level `n`: an `(n+1) x (n+1)` array of spirals with corridor width
/// `2^-(n+2)` of the polygon size.
pub fn gen_maze(n: usize) -> Result<Mesh> {
    let t = 0.25 / (1u64 << n) as f64;
    hybrid(spiral(t, t), n)
}

/// Level `n`: an `(n+1) x (n+1)` array of stars with `4 + 2n` spikes whose
/// inner vertices sit at radius `R / (n + 2)`.
pub fn gen_star(n: usize) -> Result<Mesh> {
    let outer = 0.5;
    hybrid(star(4 + 2 * n, outer, outer / (n + 2) as f64), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::validate;
    use crate::metrics::kernel_area;

    #[test]
    fn spiral_is_simple_and_ccw() {
        let s = spiral(0.25, 0.25);
        assert!(geometry::is_simple(&s));
        // 1 - (1 - 2t)^2 - t g
        assert!((geometry::signed_area(&s) - 0.6875).abs() < 1e-15);
        assert_eq!(kernel_area(&s), 0.0);
    }

    #[test]
    fn complement_triangles_are_small() {
        for n in 0..3 {
            for mesh in [gen_maze(n).unwrap(), gen_star(n).unwrap()] {
                assert!(validate(&mesh).is_empty(), "{:?}", validate(&mesh));
                let polys: Vec<Vec<Point>> = mesh.polygons().collect();
                let big = polys.iter().filter(|p| p.len() > 3).map(|p| geometry::signed_area(p)).fold(f64::INFINITY, f64::min);
                assert!(polys.iter().filter(|p| p.len() == 3).all(|p| geometry::signed_area(p) < big));
                assert_eq!(polys.iter().filter(|p| p.len() > 3).count(), (n + 1) * (n + 1));
            }
        }
    }

    #[test]
    fn crossing_polygons_are_rejected() {
        let a = vec![Point::new(0.1, 0.1), Point::new(0.6, 0.1), Point::new(0.6, 0.6), Point::new(0.1, 0.6)];
        let b: Vec<Point> = a.iter().map(|&p| p + Point::new(0.2, 0.2)).collect();
        assert!(matches!(fill_complement(&[a.clone(), b], 0.1, 0), Err(Error::Generation { polygon: 1, .. })));
        let outside = vec![Point::new(0.5, 0.5), Point::new(1.5, 0.5), Point::new(0.5, 0.9)];
        assert!(matches!(fill_complement(&[outside], 0.1, 0), Err(Error::Generation { polygon: 0, .. })));
    }
}
