//! The geometry-only mesh quality indicator `rho`.
//!
//! Per element, `rho1` measures star-shapedness (kernel over area), `rho2`
//! size uniformity of edges against the element, `rho3` the edge count and
//! `rho4` the quasi-uniformity of every maximal run of collinear edges.
//! The mesh value is `sqrt(mean((r1 r2 + r1 r3 + r1 r4) / 3))`.

use crate::geometry::{self, Point};
use crate::mesh::Mesh;
use crate::metrics::kernel_area;
use crate::prelude::*;
use crate::{Error, Result};

/// Relative tolerance of the collinearity test `|e x e'| <= tol |e| |e'|`.
pub const COLLINEAR_TOL: f64 = 1e-9;

pub fn rho1(poly: &[Point]) -> Result<f64> {
    let area = geometry::area(poly)?;
    Ok((kernel_area(poly) / area).clamp(0.0, 1.0))
}

pub fn rho2(poly: &[Point]) -> Result<f64> {
    let area = geometry::area(poly)?;
    let h = geometry::diameter(poly)?;
    let min_edge = geometry::edge_lengths(poly).into_iter().fold(f64::INFINITY, f64::min);
    let s = area.sqrt();
    Ok(s.min(min_edge) / s.max(h))
}

pub fn rho3(poly: &[Point]) -> f64 {
    3.0 / poly.len() as f64
}

/// Splits the boundary into maximal runs of consecutive collinear,
/// same-direction edges and returns, over the runs, the smallest ratio of
/// shortest to longest edge.
pub fn rho4(poly: &[Point]) -> f64 {
    let n = poly.len();
    let edges: Vec<Point> = (0..n).map(|i| poly[(i + 1) % n] - poly[i]).collect();
    let joined = |a: Point, b: Point| a.cross(b).abs() <= COLLINEAR_TOL * a.norm() * b.norm() && a.dot(b) > 0.0;
    // Start a run at an edge that does not continue its predecessor.
    let Some(start) = (0..n).find(|&i| !joined(edges[(i + n - 1) % n], edges[i])) else {
        // Every edge continues the previous one: degenerate, treat as one run.
        return ratio(edges.iter().map(|e| e.norm()));
    };
    let mut best: f64 = 1.0;
    let mut run = vec![edges[start].norm()];
    for step in 1..=n {
        let i = (start + step) % n;
        if step < n && joined(edges[(i + n - 1) % n], edges[i]) {
            run.push(edges[i].norm());
        } else {
            best = best.min(ratio(run.iter().copied()));
            run.clear();
            run.push(edges[i].norm());
        }
    }
    best
}

fn ratio(lengths: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = lengths.fold((f64::INFINITY, 0.0_f64), |(lo, hi), l| (lo.min(l), hi.max(l)));
    if hi > 0.0 {
        lo / hi
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementIndicator {
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    pub rho4: f64,
}

impl ElementIndicator {
    pub fn of(poly: &[Point]) -> Result<Self> {
        Ok(Self {
            rho1: rho1(poly)?,
            rho2: rho2(poly)?,
            rho3: rho3(poly),
            rho4: rho4(poly),
        })
    }

    fn combined(&self) -> f64 {
        self.rho1 * (self.rho2 + self.rho3 + self.rho4) / 3.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub elements: Vec<ElementIndicator>,
    pub rho: f64,
}

impl QualityReport {
    /// Means of `rho1..rho4` over the elements.
    pub fn means(&self) -> [f64; 4] {
        let n = self.elements.len().max(1) as f64;
        let mut m = [0.0; 4];
        for e in &self.elements {
            m[0] += e.rho1;
            m[1] += e.rho2;
            m[2] += e.rho3;
            m[3] += e.rho4;
        }
        m.map(|v| v / n)
    }
}

pub fn quality_report(mesh: &Mesh) -> Result<QualityReport> {
    if mesh.elements.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let elements = mesh.polygons().map(|p| ElementIndicator::of(&p)).collect::<Result<Vec<_>>>()?;
    let mean = elements.iter().map(ElementIndicator::combined).sum::<f64>() / elements.len() as f64;
    Ok(QualityReport {
        rho: mean.max(0.0).sqrt(),
        elements,
    })
}

pub fn rho_mesh(mesh: &Mesh) -> Result<f64> {
    quality_report(mesh).map(|r| r.rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::uniform_grid;
    use approx::assert_relative_eq;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn components_on_simple_shapes() {
        let sq = pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]);
        assert_eq!(rho1(&sq).unwrap(), 1.0);
        assert_relative_eq!(rho2(&sq).unwrap(), 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(rho3(&sq), 0.75);
        assert_eq!(rho4(&sq), 1.0);
        let big: Vec<Point> = sq.iter().map(|&p| p * 2.0).collect();
        assert_relative_eq!(rho2(&big).unwrap(), rho2(&sq).unwrap(), epsilon = 1e-15);

        let l = pts(&[(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)]);
        assert_relative_eq!(rho1(&l).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        let tri = pts(&[(0., 0.), (1., 0.), (0., 1.)]);
        assert_eq!(rho3(&tri), 1.0);
        let hex: Vec<Point> = (0..6)
            .map(|i| {
                let t = core::f64::consts::PI / 3.0 * i as f64;
                Point::new(t.cos(), t.sin())
            })
            .collect();
        assert_eq!(rho3(&hex), 0.5);
        assert_relative_eq!(rho4(&hex), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn non_star_shaped_has_zero_rho1() {
        let u = pts(&[(0., 0.), (3., 0.), (3., 3.), (2., 3.), (2., 1.), (1., 1.), (1., 3.), (0., 3.)]);
        assert_eq!(rho1(&u).unwrap(), 0.0);
    }

    #[test]
    fn collinear_runs() {
        // Top bar whose bottom edge is split at 1/2 and 3/4 (lengths 1/2, 1/4, 1/4).
        let bar = pts(&[(0., 0.75), (0.5, 0.75), (0.75, 0.75), (1., 0.75), (1., 1.), (0., 1.)]);
        // Runs: bottom {1/2, 1/4, 1/4}, right, top, left -> min ratio 1/2.
        assert_relative_eq!(rho4(&bar), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn single_square_mesh_value() {
        let mesh = uniform_grid(1, 1);
        let expected = ((1.0 / 2f64.sqrt() + 0.75 + 1.0) / 3.0).sqrt();
        assert_relative_eq!(rho_mesh(&mesh).unwrap(), expected, epsilon = 1e-15);
        assert!((expected - 0.905006).abs() < 1e-6);
    }

    #[test]
    fn scale_invariance() {
        let mesh = uniform_grid(3, 2);
        assert_relative_eq!(rho_mesh(&mesh).unwrap(), rho_mesh(&mesh.scaled(7.0)).unwrap(), epsilon = 1e-14);
    }
}
