//! The polygonal mesh record, its construction helpers and validation.

use alloc::collections::BTreeMap;

use crate::geometry::{self, Location, Point};
use crate::prelude::*;
use crate::{Error, Result};

/// Tolerance used to merge coincident vertices and detect hanging nodes.
pub const SNAP_TOL: f64 = 1e-12;
/// Absolute tolerance for area bookkeeping and overlap tests on the unit square.
pub const AREA_TOL: f64 = 1e-9;

/// Polygonal mesh of the unit square. Elements are counterclockwise vertex
/// cycles; a vertex sitting in the middle of a geometric edge (hanging node)
/// must appear in the cycle of every element owning that edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    pub elements: Vec<Vec<usize>>,
    pub boundary: Vec<bool>,
    pub level: usize,
}

/// Ordered refinement sequence of meshes with decreasing mesh size.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub meshes: Vec<Mesh>,
}

impl Dataset {
    /// Checks that mesh sizes strictly decrease along the sequence.
    pub fn is_monotone(&self) -> bool {
        self.meshes
            .windows(2)
            .all(|w| match (mesh_size(&w[0]), mesh_size(&w[1])) {
                (Ok(a), Ok(b)) => b < a,
                _ => false,
            })
    }
}

pub fn on_domain_boundary(p: Point) -> bool {
    p.x.abs() <= SNAP_TOL
        || p.y.abs() <= SNAP_TOL
        || (p.x - 1.0).abs() <= SNAP_TOL
        || (p.y - 1.0).abs() <= SNAP_TOL
}

impl Mesh {
    /// Builds a mesh from raw parts, flipping clockwise cycles.
    pub fn new(vertices: Vec<Point>, mut elements: Vec<Vec<usize>>, level: usize) -> Self {
        for el in &mut elements {
            let poly: Vec<Point> = el.iter().map(|&i| vertices[i]).collect();
            if geometry::signed_area(&poly) < 0.0 {
                el.reverse();
            }
        }
        let boundary = vertices.iter().map(|&p| on_domain_boundary(p)).collect();
        Self {
            vertices,
            elements,
            boundary,
            level,
        }
    }

    /// Builds a conforming mesh from independent polygons: coincident vertices
    /// are merged and vertices lying inside foreign edges are inserted into
    /// those edges.
    pub fn from_polygons(polys: &[Vec<Point>], level: usize) -> Self {
        let mut merger = VertexMerger::default();
        let elements = polys
            .iter()
            .map(|poly| {
                let mut el: Vec<usize> = poly.iter().map(|&p| merger.insert(p)).collect();
                el.dedup();
                if el.len() > 1 && el.first() == el.last() {
                    el.pop();
                }
                el
            })
            .collect();
        let mut mesh = Mesh::new(merger.points, elements, level);
        mesh.conformize();
        mesh
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn polygon(&self, e: usize) -> Vec<Point> {
        self.elements[e].iter().map(|&i| self.vertices[i]).collect()
    }

    pub fn polygons(&self) -> impl Iterator<Item = Vec<Point>> + '_ {
        (0..self.elements.len()).map(move |e| self.polygon(e))
    }

    /// Unique undirected edges `(min, max)` with their owning element count.
    pub fn edges(&self) -> BTreeMap<(usize, usize), usize> {
        let mut map = BTreeMap::new();
        for el in &self.elements {
            let n = el.len();
            for i in 0..n {
                let (a, b) = (el[i], el[(i + 1) % n]);
                *map.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        map
    }

    /// Inserts every mesh vertex lying strictly inside an element edge into
    /// that element's cycle.
    pub fn conformize(&mut self) {
        let grid = PointGrid::new(&self.vertices);
        let tol = SNAP_TOL;
        for el in &mut self.elements {
            let n = el.len();
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let (ia, ib) = (el[i], el[(i + 1) % n]);
                let (a, b) = (self.vertices[ia], self.vertices[ib]);
                out.push(ia);
                let d = b - a;
                let len2 = d.norm2();
                let mut hits: Vec<(f64, usize)> = grid
                    .near_segment(a, b, tol)
                    .filter(|&j| j != ia && j != ib)
                    .filter_map(|j| {
                        let p = self.vertices[j];
                        let t = (p - a).dot(d) / len2;
                        let inside = t > 0.0 && t < 1.0;
                        (inside && geometry::point_segment_distance(p, a, b) <= tol).then_some((t, j))
                    })
                    .collect();
                hits.sort_by(|x, y| x.0.total_cmp(&y.0));
                hits.dedup_by_key(|h| h.1);
                out.extend(hits.into_iter().map(|h| h.1));
            }
            *el = out;
        }
    }

    /// Returns a copy scaled by `s` about the origin. Boundary flags are kept
    /// from the unscaled mesh.
    pub fn scaled(&self, s: f64) -> Mesh {
        let mut m = self.clone();
        for p in &mut m.vertices {
            *p = *p * s;
        }
        m
    }
}

#[derive(Default)]
struct VertexMerger {
    points: Vec<Point>,
    index: BTreeMap<(i64, i64), usize>,
}

impl VertexMerger {
    fn key(p: Point) -> (i64, i64) {
        ((p.x / SNAP_TOL).round() as i64, (p.y / SNAP_TOL).round() as i64)
    }

    fn insert(&mut self, p: Point) -> usize {
        let (kx, ky) = Self::key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(&i) = self.index.get(&(kx + dx, ky + dy)) {
                    if (self.points[i] - p).norm() <= SNAP_TOL {
                        return i;
                    }
                }
            }
        }
        let i = self.points.len();
        self.points.push(p);
        self.index.insert((kx, ky), i);
        i
    }
}

/// Uniform bucket grid over a point set.
struct PointGrid {
    lo: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl PointGrid {
    fn new(points: &[Point]) -> Self {
        let (lo, hi) = geometry::bounding_box(points);
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-300);
        let side = (points.len() as f64).sqrt().ceil().max(1.0) as usize;
        let cell = span / side as f64;
        let nx = ((hi.x - lo.x) / cell) as usize + 1;
        let ny = ((hi.y - lo.y) / cell) as usize + 1;
        let mut buckets = vec![Vec::new(); nx * ny];
        let mut g = Self {
            lo,
            cell,
            nx,
            ny,
            buckets: Vec::new(),
        };
        for (i, &p) in points.iter().enumerate() {
            let (cx, cy) = g.cell_of(p);
            buckets[cy * nx + cx].push(i);
        }
        g.buckets = buckets;
        g
    }

    fn cell_of(&self, p: Point) -> (usize, usize) {
        let cx = ((p.x - self.lo.x) / self.cell).floor().max(0.0) as usize;
        let cy = ((p.y - self.lo.y) / self.cell).floor().max(0.0) as usize;
        (cx.min(self.nx - 1), cy.min(self.ny - 1))
    }

    /// Candidate points within the padded bounding box of a segment.
    fn near_segment(&self, a: Point, b: Point, pad: f64) -> impl Iterator<Item = usize> + '_ {
        let lo = Point::new(a.x.min(b.x) - pad, a.y.min(b.y) - pad);
        let hi = Point::new(a.x.max(b.x) + pad, a.y.max(b.y) + pad);
        let (x0, y0) = self.cell_of(lo);
        let (x1, y1) = self.cell_of(hi);
        (y0..=y1).flat_map(move |cy| {
            (x0..=x1).flat_map(move |cx| self.buckets[cy * self.nx + cx].iter().copied())
        })
    }
}

pub fn element_diameter(poly: &[Point]) -> Result<f64> {
    geometry::diameter(poly)
}

pub fn element_area(poly: &[Point]) -> Result<f64> {
    geometry::area(poly)
}

/// Largest element diameter.
pub fn mesh_size(mesh: &Mesh) -> Result<f64> {
    if mesh.elements.is_empty() {
        return Err(Error::EmptyMesh);
    }
    mesh.polygons()
        .map(|p| geometry::diameter(&p))
        .try_fold(0.0f64, |acc, d| Ok(acc.max(d?)))
}

/// Mean element diameter.
pub fn mean_diameter(mesh: &Mesh) -> Result<f64> {
    if mesh.elements.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let sum = mesh
        .polygons()
        .map(|p| geometry::diameter(&p))
        .try_fold(0.0f64, |acc, d| Ok::<f64, Error>(acc + d?))?;
    Ok(sum / mesh.elements.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    TooFewVertices { element: usize },
    IndexOutOfRange { element: usize, index: usize },
    Orientation { element: usize, signed_area: f64 },
    SelfIntersection { element: usize },
    Overlap { first: usize, second: usize },
    CoverageGap { total_area: f64 },
    OutsideDomain { vertex: usize },
    HangingVertex { element: usize, vertex: usize },
}

/// Lists every structural problem of the mesh; empty iff the mesh is valid.
pub fn validate(mesh: &Mesh) -> Vec<Violation> {
    let mut out = Vec::new();
    for (v, p) in mesh.vertices.iter().enumerate() {
        let inside = |c: f64| (-SNAP_TOL..=1.0 + SNAP_TOL).contains(&c);
        if !inside(p.x) || !inside(p.y) {
            out.push(Violation::OutsideDomain { vertex: v });
        }
    }
    let mut usable = vec![true; mesh.elements.len()];
    for (e, el) in mesh.elements.iter().enumerate() {
        if el.len() < 3 {
            out.push(Violation::TooFewVertices { element: e });
            usable[e] = false;
            continue;
        }
        if let Some(&index) = el.iter().find(|&&i| i >= mesh.vertices.len()) {
            out.push(Violation::IndexOutOfRange { element: e, index });
            usable[e] = false;
            continue;
        }
        let poly = mesh.polygon(e);
        let a = geometry::signed_area(&poly);
        if a <= 0.0 {
            out.push(Violation::Orientation {
                element: e,
                signed_area: a,
            });
            usable[e] = false;
        }
        if !geometry::is_simple(&poly) {
            out.push(Violation::SelfIntersection { element: e });
            usable[e] = false;
        }
    }

    let polys: Vec<Option<Vec<Point>>> = (0..mesh.elements.len())
        .map(|e| usable[e].then(|| mesh.polygon(e)))
        .collect();
    let overlaps = find_overlaps(&polys);
    let found_overlap = !overlaps.is_empty();
    out.extend(overlaps);

    let total: f64 = polys
        .iter()
        .flatten()
        .map(|p| geometry::signed_area(p))
        .sum();
    if !found_overlap && (total - 1.0).abs() > AREA_TOL {
        out.push(Violation::CoverageGap { total_area: total });
    }

    // Conformity: no vertex may sit strictly inside an element edge.
    let grid = PointGrid::new(&mesh.vertices);
    for (e, el) in mesh.elements.iter().enumerate() {
        if !usable[e] {
            continue;
        }
        let n = el.len();
        for i in 0..n {
            let (ia, ib) = (el[i], el[(i + 1) % n]);
            let (a, b) = (mesh.vertices[ia], mesh.vertices[ib]);
            for j in grid.near_segment(a, b, SNAP_TOL) {
                if j == ia || j == ib {
                    continue;
                }
                let p = mesh.vertices[j];
                let t = (p - a).dot(b - a) / (b - a).norm2();
                if t > 0.0 && t < 1.0 && geometry::point_segment_distance(p, a, b) <= SNAP_TOL {
                    out.push(Violation::HangingVertex { element: e, vertex: j });
                }
            }
        }
    }
    out
}

/// Pairs of elements whose interiors intersect: either edges cross properly or
/// an interior sample point of one lies inside the other.
fn find_overlaps(polys: &[Option<Vec<Point>>]) -> Vec<Violation> {
    let boxes: Vec<Option<(Point, Point)>> = polys
        .iter()
        .map(|p| p.as_ref().map(|p| geometry::bounding_box(p)))
        .collect();
    let centers: Vec<Point> = boxes
        .iter()
        .map(|b| b.map_or(Point::default(), |(lo, hi)| (lo + hi) * 0.5))
        .collect();
    let grid = PointGrid::new(&centers);
    let max_half = boxes
        .iter()
        .flatten()
        .map(|(lo, hi)| (hi.x - lo.x).max(hi.y - lo.y))
        .fold(0.0, f64::max);

    let mut pairs = alloc::collections::BTreeSet::new();
    for (e, poly) in polys.iter().enumerate() {
        let Some(poly) = poly else { continue };
        let (lo, hi) = boxes[e].unwrap();
        let sample = interior_sample(poly);
        for f in grid.near_segment(lo, hi, max_half) {
            if f == e {
                continue;
            }
            let Some(other) = &polys[f] else { continue };
            let (olo, ohi) = boxes[f].unwrap();
            let eps = AREA_TOL;
            if olo.x >= hi.x - eps || lo.x >= ohi.x - eps || olo.y >= hi.y - eps || lo.y >= ohi.y - eps {
                continue;
            }
            let key = (e.min(f), e.max(f));
            if pairs.contains(&key) {
                continue;
            }
            let hit = geometry::locate(other, sample, AREA_TOL) == Location::Inside
                || proper_crossing(poly, other);
            if hit {
                pairs.insert(key);
            }
        }
    }
    pairs
        .into_iter()
        .map(|(first, second)| Violation::Overlap { first, second })
        .collect()
}

fn proper_crossing(p: &[Point], q: &[Point]) -> bool {
    for (a, b) in geometry::edges(p) {
        for (c, d) in geometry::edges(q) {
            let o1 = geometry::orient(a, b, c);
            let o2 = geometry::orient(a, b, d);
            let o3 = geometry::orient(c, d, a);
            let o4 = geometry::orient(c, d, b);
            let s = AREA_TOL * AREA_TOL;
            if o1.abs() > s && o2.abs() > s && o3.abs() > s && o4.abs() > s
                && (o1 > 0.0) != (o2 > 0.0)
                && (o3 > 0.0) != (o4 > 0.0)
            {
                return true;
            }
        }
    }
    false
}

/// A point strictly inside the polygon: centroid of its largest ear.
pub fn interior_sample(poly: &[Point]) -> Point {
    geometry::ear_clip(poly)
        .into_iter()
        .map(|t| [poly[t[0]], poly[t[1]], poly[t[2]]])
        .max_by(|a, b| geometry::signed_area(a).total_cmp(&geometry::signed_area(b)))
        .map(|t| (t[0] + t[1] + t[2]) / 3.0)
        .unwrap_or(poly[0])
}

/// Uniform `nx` by `ny` grid of axis-aligned rectangles.
pub fn uniform_grid(nx: usize, ny: usize) -> Mesh {
    let polys: Vec<Vec<Point>> = (0..ny)
        .flat_map(|j| {
            (0..nx).map(move |i| {
                let (x0, x1) = (i as f64 / nx as f64, (i + 1) as f64 / nx as f64);
                let (y0, y1) = (j as f64 / ny as f64, (j + 1) as f64 / ny as f64);
                vec![
                    Point::new(x0, y0),
                    Point::new(x1, y0),
                    Point::new(x1, y1),
                    Point::new(x0, y1),
                ]
            })
        })
        .collect();
    Mesh::from_polygons(&polys, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mesh_sizes() {
        assert_relative_eq!(mesh_size(&uniform_grid(1, 1)).unwrap(), 2f64.sqrt());
        assert_relative_eq!(mesh_size(&uniform_grid(2, 2)).unwrap(), 2f64.sqrt() / 2.0);
        let empty = Mesh::new(vec![], vec![], 0);
        assert_eq!(mesh_size(&empty), Err(Error::EmptyMesh));
    }

    #[test]
    fn valid_grid_has_no_violations() {
        assert!(validate(&uniform_grid(2, 2)).is_empty());
        assert!(validate(&uniform_grid(3, 5)).is_empty());
    }

    #[test]
    fn two_overlapping_squares() {
        let sq = vec![
            Point::new(0., 0.),
            Point::new(1., 0.),
            Point::new(1., 1.),
            Point::new(0., 1.),
        ];
        let mesh = Mesh::from_polygons(&[sq.clone(), sq], 0);
        let v = validate(&mesh);
        assert_eq!(v, vec![Violation::Overlap { first: 0, second: 1 }]);
    }

    #[test]
    fn bowtie_reports_self_intersection() {
        let verts = vec![
            Point::new(0., 0.),
            Point::new(1., 1.),
            Point::new(1., 0.),
            Point::new(0., 1.),
        ];
        let mesh = Mesh {
            vertices: verts,
            elements: vec![vec![0, 1, 2, 3]],
            boundary: vec![true; 4],
            level: 0,
        };
        let v = validate(&mesh);
        assert!(v.contains(&Violation::SelfIntersection { element: 0 }));
    }

    #[test]
    fn hanging_vertex_is_inserted() {
        // Left column split in two, right column whole: (1/2,1/2) hangs on the right square.
        let r = |x0: f64, y0: f64, x1: f64, y1: f64| {
            vec![
                Point::new(x0, y0),
                Point::new(x1, y0),
                Point::new(x1, y1),
                Point::new(x0, y1),
            ]
        };
        let polys = [r(0., 0., 0.5, 0.5), r(0., 0.5, 0.5, 1.), r(0.5, 0., 1., 1.)];
        let mesh = Mesh::from_polygons(&polys, 0);
        assert_eq!(mesh.elements[2].len(), 5);
        assert!(validate(&mesh).is_empty());

        let mut broken = mesh.clone();
        broken.elements[2].retain(|&v| mesh.vertices[v] != Point::new(0.5, 0.5));
        assert!(matches!(
            validate(&broken).as_slice(),
            [Violation::HangingVertex { element: 2, .. }]
        ));
    }

    #[test]
    fn clockwise_input_is_flipped() {
        let verts = vec![
            Point::new(0., 0.),
            Point::new(0., 1.),
            Point::new(1., 1.),
            Point::new(1., 0.),
        ];
        let mesh = Mesh::new(verts, vec![vec![0, 1, 2, 3]], 0);
        assert!(geometry::signed_area(&mesh.polygon(0)) > 0.0);
        assert!(validate(&mesh).is_empty());
    }

    #[test]
    fn gap_is_reported() {
        let tri = vec![Point::new(0., 0.), Point::new(1., 0.), Point::new(0., 1.)];
        let mesh = Mesh::from_polygons(&[tri], 0);
        assert!(matches!(validate(&mesh).as_slice(), [Violation::CoverageGap { .. }]));
    }
}
