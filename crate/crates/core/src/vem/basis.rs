//! Scaled monomials `((x - x_P) / h_P)^a ((y - y_P) / h_P)^b` and their
//! integrals over polygons.

use crate::geometry::{self, Point};
use crate::prelude::*;
use crate::quadrature::gauss_legendre;

/// Number of monomials of degree at most `k`.
pub const fn dim_pk(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

/// Exponents `(a, b)` ordered by degree, then by decreasing power of `x`:
/// `1, x, y, x^2, xy, y^2, ...`.
pub fn exponents(k: usize) -> Vec<(usize, usize)> {
    (0..=k).flat_map(|d| (0..=d).map(move |b| (d - b, b))).collect()
}

#[derive(Debug, Clone)]
pub struct ScaledMonomials {
    pub degree: usize,
    pub center: Point,
    pub h: f64,
    pub exps: Vec<(usize, usize)>,
}

impl ScaledMonomials {
    pub fn new(degree: usize, center: Point, h: f64) -> Self {
        Self {
            degree,
            center,
            h,
            exps: exponents(degree),
        }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    fn local(&self, p: Point) -> (f64, f64) {
        ((p.x - self.center.x) / self.h, (p.y - self.center.y) / self.h)
    }

    pub fn eval(&self, p: Point) -> Vec<f64> {
        let (x, y) = self.local(p);
        self.exps.iter().map(|&(a, b)| powi(x, a) * powi(y, b)).collect()
    }

    /// Gradients in physical coordinates.
    pub fn grad(&self, p: Point) -> Vec<Point> {
        let (x, y) = self.local(p);
        self.exps
            .iter()
            .map(|&(a, b)| {
                let gx = if a > 0 { a as f64 * powi(x, a - 1) * powi(y, b) } else { 0.0 };
                let gy = if b > 0 { b as f64 * powi(x, a) * powi(y, b - 1) } else { 0.0 };
                Point::new(gx, gy) / self.h
            })
            .collect()
    }
}

/// Index of the monomial with exponents `(a, b)` in [`exponents`] order.
pub fn index_of(a: usize, b: usize) -> usize {
    let d = a + b;
    dim_pk(d) - d - 1 + b
}

pub(crate) fn powi(x: f64, n: usize) -> f64 {
    let mut r = 1.0;
    for _ in 0..n {
        r *= x;
    }
    r
}

/// `I[a][b] = int_P xi^a eta^b` for `a + b <= max_deg`, with `(xi, eta)` the
/// scaled coordinates around `center`.
///
/// A monomial `q` homogeneous of degree `d` in `x - center` satisfies
/// `div((x - center) q) = (d + 2) q`, so its integral reduces to edge
/// integrals of `q (x - center) . n`, where the second factor is constant
/// per edge. Gauss–Legendre with `d / 2 + 1` points integrates each edge
/// exactly, for convex and nonconvex polygons alike.
pub fn polygon_moments(poly: &[Point], center: Point, h: f64, max_deg: usize) -> Vec<Vec<f64>> {
    let mut table: Vec<Vec<f64>> = (0..=max_deg).map(|a| vec![0.0; max_deg + 1 - a]).collect();
    let rule = gauss_legendre(max_deg / 2 + 1);
    for (p, q) in geometry::edges(poly) {
        let (p, q) = ((p - center) / h, (q - center) / h);
        // (x - c) . n |e| in scaled units: the cross product p x q.
        let flux = p.cross(q);
        if flux == 0.0 {
            continue;
        }
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let s = p.lerp(q, (t + 1.0) / 2.0);
            let wt = w / 2.0 * flux;
            let mut xa = 1.0;
            for (a, row) in table.iter_mut().enumerate() {
                let mut yb = 1.0;
                for (b, v) in row.iter_mut().enumerate() {
                    *v += wt * xa * yb / (a + b + 2) as f64;
                    yb *= s.y;
                }
                xa *= s.x;
            }
        }
    }
    let h2 = h * h;
    for row in &mut table {
        for v in row.iter_mut() {
            *v *= h2;
        }
    }
    table
}
