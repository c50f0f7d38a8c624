//! One-dimensional Gauss rules and quadrature over triangles and polygons.

use core::f64::consts::PI;

use crate::geometry::{self, Point};
use crate::prelude::*;

/// Nodes and weights of a rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        // Endpoint value P_n'(+-1) = (+-1)^{n-1} n(n+1)/2.
        x.signum().powi(n as i32 - 1) * n * (n + 1.0) / 2.0
    } else {
        n * (x * p1 - p0) / (x * x - 1.0)
    };
    (p1, dp)
}

/// `n`-point Gauss–Legendre rule, exact for degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// `(k + 1)`-point Gauss–Lobatto rule (endpoints included), exact for degree
/// `2k - 1`. Nodes are sorted increasingly.
pub fn gauss_lobatto(k: usize) -> Rule {
    assert!(k >= 1, "Gauss-Lobatto rule needs k >= 1");
    let n = k + 1;
    let mut nodes = vec![0.0; n];
    nodes[0] = -1.0;
    nodes[k] = 1.0;
    // Interior nodes: roots of P_k', found by Newton on P_k' with
    // (1 - x^2) P_k'' = 2x P_k' - k(k+1) P_k.
    for i in 1..k {
        let mut x = -(PI * i as f64 / k as f64).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(k, x);
            let ddp = (2.0 * x * dp - (k * (k + 1)) as f64 * p) / (1.0 - x * x);
            let dx = dp / ddp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, _) = legendre(k, x);
            2.0 / ((k * (k + 1)) as f64 * p * p)
        })
        .collect();
    Rule { nodes, weights }
}

/// Points and weights of a triangle rule exact for polynomials of degree
/// `degree`, built by collapsing a tensor Gauss rule onto the triangle.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    /// Barycentric-like reference coordinates `(s, t)` on the unit triangle
    /// `{s, t >= 0, s + t <= 1}`.
    pub points: Vec<(f64, f64)>,
    /// Weights summing to 1/2 (the reference area).
    pub weights: Vec<f64>,
}

impl TriangleRule {
    pub fn new(degree: usize) -> Self {
        // The Duffy map adds one degree in the collapsed direction.
        let n = degree / 2 + 1;
        let g = gauss_legendre(n);
        let gc = gauss_legendre(n + 1);
        let mut points = Vec::with_capacity(n * (n + 1));
        let mut weights = Vec::with_capacity(n * (n + 1));
        for (&u, &wu) in g.nodes.iter().zip(&g.weights) {
            for (&v, &wv) in gc.nodes.iter().zip(&gc.weights) {
                let (a, b) = ((u + 1.0) / 2.0, (v + 1.0) / 2.0);
                // (a, b) in unit square -> (s, t) = (a (1 - b), b), Jacobian (1 - b).
                points.push((a * (1.0 - b), b));
                weights.push(wu * wv / 4.0 * (1.0 - b));
            }
        }
        Self { points, weights }
    }

    /// Integrates `f` over the triangle `(p0, p1, p2)` (any orientation; the
    /// absolute area is used).
    pub fn integrate<F: FnMut(Point) -> f64>(&self, tri: [Point; 3], mut f: F) -> f64 {
        let (e1, e2) = (tri[1] - tri[0], tri[2] - tri[0]);
        let jac = e1.cross(e2).abs();
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&(s, t), &w)| w * f(tri[0] + e1 * s + e2 * t))
            .sum::<f64>()
            * jac
    }

    /// Physical quadrature points and weights on a triangle.
    pub fn map(&self, tri: [Point; 3]) -> impl Iterator<Item = (Point, f64)> + '_ {
        let (e1, e2) = (tri[1] - tri[0], tri[2] - tri[0]);
        let jac = e1.cross(e2).abs();
        self.points
            .iter()
            .zip(&self.weights)
            .map(move |(&(s, t), &w)| (tri[0] + e1 * s + e2 * t, w * jac))
    }
}

/// Quadrature points and weights over a simple polygon, obtained by ear
/// clipping and a triangle rule of the given degree.
pub fn polygon_rule(poly: &[Point], degree: usize) -> Vec<(Point, f64)> {
    let rule = TriangleRule::new(degree);
    geometry::ear_clip(poly)
        .into_iter()
        .flat_map(|t| {
            let tri = [poly[t[0]], poly[t[1]], poly[t[2]]];
            rule.map(tri).collect::<Vec<_>>()
        })
        .collect()
}

pub fn integrate_polygon<F: FnMut(Point) -> f64>(poly: &[Point], degree: usize, mut f: F) -> f64 {
    polygon_rule(poly, degree)
        .into_iter()
        .map(|(p, w)| w * f(p))
        .sum()
}
