//! Element-level virtual element matrices.
//!
//! Local DOF order: vertex values (in cycle order), then the `k - 1` interior
//! Gauss–Lobatto values of each edge `v_e -> v_{e+1}` (in that direction),
//! then the scaled moments `(1/|P|) int_P v m_a` for `|a| <= k - 2`.

use core::fmt;
use core::str::FromStr;

use nalgebra::{DMatrix, DVector};

use super::basis::{dim_pk, exponents, index_of, polygon_moments, ScaledMonomials};
use crate::geometry::{self, Point};
use crate::prelude::*;
use crate::quadrature::{gauss_legendre, gauss_lobatto, polygon_rule};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Stabilization {
    #[default]
    DRecipe,
    DofiDofi,
    Trace,
}

impl Stabilization {
    pub const ALL: [Stabilization; 3] = [Stabilization::DRecipe, Stabilization::DofiDofi, Stabilization::Trace];

    pub fn name(self) -> &'static str {
        match self {
            Stabilization::DRecipe => "d-recipe",
            Stabilization::DofiDofi => "dofi-dofi",
            Stabilization::Trace => "trace",
        }
    }
}

impl fmt::Display for Stabilization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stabilization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stabilization::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown stabilization '{s}' (expected d-recipe, dofi-dofi or trace)")))
    }
}

/// Everything the method needs from one element.
#[derive(Debug, Clone)]
pub struct LocalData {
    pub k: usize,
    pub ns: usize,
    pub area: f64,
    pub diameter: f64,
    pub perimeter: f64,
    pub basis: ScaledMonomials,
    /// Physical positions of the vertex and edge DOFs, in local order.
    pub nodes: Vec<Point>,
    pub d: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub g: DMatrix<f64>,
    pub h: DMatrix<f64>,
    /// Coefficients of the elliptic projection: `Pi_nabla phi_i = sum_a P[a, i] m_a`.
    pub pi_nabla: DMatrix<f64>,
    /// Coefficients of the L2 projection onto `P_k`.
    pub pi0: DMatrix<f64>,
    /// Consistency part of the local stiffness.
    pub consistency: DMatrix<f64>,
    /// Edge lengths, used by the trace stabilization.
    edge_lengths: Vec<f64>,
}

pub const fn dof_count(ns: usize, k: usize) -> usize {
    ns * k + k * (k - 1) / 2
}

/// 2-norm condition number of a small dense matrix.
pub fn cond2(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Builds the local matrices of a counterclockwise polygon for order `k`.
pub fn build_local(poly: &[Point], k: usize) -> Result<LocalData> {
    if !(1..=3).contains(&k) {
        return Err(Error::Parameter(format!("polynomial order k = {k} is not in 1..=3")));
    }
    let ns = poly.len();
    let area = geometry::area(poly)?;
    let diameter = geometry::diameter(poly)?;
    let perimeter = geometry::perimeter(poly);
    let center = geometry::centroid(poly);
    let basis = ScaledMonomials::new(k, center, diameter);
    let nk = dim_pk(k);
    let n_int = k * (k - 1) / 2; // dim P_{k-2}
    let ndof = dof_count(ns, k);
    debug_assert_eq!(ns + ns * (k - 1) + n_int, ndof);

    let moments = polygon_moments(poly, center, diameter, 2 * k);
    let exps = exponents(k);
    let mut h = DMatrix::zeros(nk, nk);
    for (i, &(a1, b1)) in exps.iter().enumerate() {
        for (j, &(a2, b2)) in exps.iter().enumerate() {
            h[(i, j)] = moments[a1 + a2][b1 + b2];
        }
    }

    let gl = gauss_lobatto(k);
    let mut nodes = Vec::with_capacity(ns * k);
    nodes.extend_from_slice(poly);
    for e in 0..ns {
        let (p, q) = (poly[e], poly[(e + 1) % ns]);
        for &t in &gl.nodes[1..k] {
            nodes.push(p.lerp(q, (t + 1.0) / 2.0));
        }
    }
    let edge_node = |e: usize, j: usize| -> usize {
        // j in 0..=k along edge e; 0 and k are its vertices.
        match j {
            0 => e,
            j if j == k => (e + 1) % ns,
            j => ns + e * (k - 1) + (j - 1),
        }
    };

    let mut d = DMatrix::zeros(ndof, nk);
    for (i, &p) in nodes.iter().enumerate() {
        for (a, v) in basis.eval(p).into_iter().enumerate() {
            d[(i, a)] = v;
        }
    }
    for beta in 0..n_int {
        for a in 0..nk {
            d[(ns * k + beta, a)] = h[(beta, a)] / area;
        }
    }

    let mut b = DMatrix::zeros(nk, ndof);
    let edge_lengths = geometry::edge_lengths(poly);
    if k == 1 {
        for i in 0..ns {
            b[(0, i)] = 1.0 / ns as f64;
        }
    }
    for e in 0..ns {
        let (p, q) = (poly[e], poly[(e + 1) % ns]);
        let len = edge_lengths[e];
        if len == 0.0 {
            continue;
        }
        let normal = Point::new(q.y - p.y, p.x - q.x) / len;
        for j in 0..=k {
            let node = edge_node(e, j);
            let w = gl.weights[j] * len / 2.0;
            if k >= 2 {
                b[(0, node)] += w / perimeter;
            }
            for (a, g) in basis.grad(nodes[node]).into_iter().enumerate().skip(1) {
                b[(a, node)] += w * g.dot(normal);
            }
        }
    }
    // -int_P lap(m_a) phi_i, with lap(m_a) expanded in P_{k-2} and read off
    // the moment DOFs.
    for (a, &(ea, eb)) in exps.iter().enumerate() {
        let h2 = diameter * diameter;
        if ea >= 2 {
            let c = (ea * (ea - 1)) as f64 / h2;
            b[(a, ns * k + index_of(ea - 2, eb))] -= c * area;
        }
        if eb >= 2 {
            let c = (eb * (eb - 1)) as f64 / h2;
            b[(a, ns * k + index_of(ea, eb - 2))] -= c * area;
        }
    }

    let g = &b * &d;
    let lu = g.clone().lu();
    let pi_nabla = lu.solve(&b).filter(|m| m.iter().all(|v| v.is_finite())).ok_or_else(|| Error::ElementConditioning {
        element: 0,
        cond: cond2(&g),
    })?;
    let mut g_tilde = g.clone();
    g_tilde.row_mut(0).fill(0.0);
    let consistency = pi_nabla.transpose() * &g_tilde * &pi_nabla;

    let mut c = &h * &pi_nabla;
    for beta in 0..n_int {
        c.row_mut(beta).fill(0.0);
        c[(beta, ns * k + beta)] = area;
    }
    let pi0 = h
        .clone()
        .lu()
        .solve(&c)
        .filter(|m| m.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::ElementConditioning {
            element: 0,
            cond: cond2(&h),
        })?;

    Ok(LocalData {
        k,
        ns,
        area,
        diameter,
        perimeter,
        basis,
        nodes,
        d,
        b,
        g,
        h,
        pi_nabla,
        pi0,
        consistency,
        edge_lengths,
    })
}

impl LocalData {
    pub fn dof_count(&self) -> usize {
        self.d.nrows()
    }

    pub fn num_internal(&self) -> usize {
        self.dof_count() - self.ns * self.k
    }

    /// `Pi` in DOF space: the DOF vector of the elliptic projection.
    pub fn projector_dofs(&self) -> DMatrix<f64> {
        &self.d * &self.pi_nabla
    }

    /// `max |Pi_nabla D - I|`.
    pub fn pi_nabla_discrepancy(&self) -> f64 {
        identity_gap(&(&self.pi_nabla * &self.d))
    }

    /// `max |Pi_0 D - I|`.
    pub fn pi0_discrepancy(&self) -> f64 {
        identity_gap(&(&self.pi0 * &self.d))
    }

    /// The stabilization matrix `S` (before composition with `I - Pi`).
    pub fn stabilization(&self, scheme: Stabilization) -> DMatrix<f64> {
        let n = self.dof_count();
        match scheme {
            Stabilization::DofiDofi => DMatrix::identity(n, n),
            Stabilization::DRecipe => {
                let a = &self.consistency;
                let floor = a.trace() / n as f64 * 1e-10;
                DMatrix::from_diagonal(&DVector::from_iterator(n, (0..n).map(|i| a[(i, i)].max(floor))))
            }
            Stabilization::Trace => {
                let k = self.k;
                let (ns, mut s) = (self.ns, DMatrix::zeros(n, n));
                let edge_k = lobatto_edge_stiffness(k);
                for e in 0..ns {
                    let len = self.edge_lengths[e];
                    if len == 0.0 {
                        continue;
                    }
                    let idx: Vec<usize> = (0..=k)
                        .map(|j| match j {
                            0 => e,
                            j if j == k => (e + 1) % ns,
                            j => ns + e * (k - 1) + (j - 1),
                        })
                        .collect();
                    let scale = self.diameter * 2.0 / len;
                    for (i, &gi) in idx.iter().enumerate() {
                        for (j, &gj) in idx.iter().enumerate() {
                            s[(gi, gj)] += scale * edge_k[(i, j)];
                        }
                    }
                }
                for i in ns * k..n {
                    s[(i, i)] = 1.0;
                }
                s
            }
        }
    }

    /// Local stiffness `K = Pi*^T G~ Pi* + (I - Pi)^T S (I - Pi)`.
    pub fn stiffness(&self, scheme: Stabilization) -> DMatrix<f64> {
        let n = self.dof_count();
        let ip = DMatrix::identity(n, n) - self.projector_dofs();
        let s = self.stabilization(scheme);
        let mut k = &self.consistency + ip.transpose() * s * &ip;
        // Symmetrize away round-off.
        let kt = k.transpose();
        k = (k + kt) * 0.5;
        k
    }

    /// `b_a = int_P f m_a` by ear-clip quadrature of degree `2k + 2`, then
    /// `Pi_0^T b`.
    pub fn load<F: Fn(Point) -> f64>(&self, poly: &[Point], f: F) -> DVector<f64> {
        let nk = self.basis.len();
        let mut bvec = DVector::zeros(nk);
        for (p, w) in polygon_rule(poly, 2 * self.k + 2) {
            let fw = f(p) * w;
            if fw == 0.0 {
                continue;
            }
            for (a, m) in self.basis.eval(p).into_iter().enumerate() {
                bvec[a] += fw * m;
            }
        }
        self.pi0.transpose() * bvec
    }

    /// DOF vector of a function: point values at the boundary nodes and the
    /// scaled moments by quadrature of degree `2k + 2`.
    pub fn interpolate<F: Fn(Point) -> f64>(&self, poly: &[Point], u: F) -> DVector<f64> {
        let n = self.dof_count();
        let nb = self.ns * self.k;
        let mut v = DVector::zeros(n);
        for (i, &p) in self.nodes.iter().enumerate() {
            v[i] = u(p);
        }
        if n > nb {
            for (p, w) in polygon_rule(poly, 2 * self.k + 2) {
                let uw = u(p) * w / self.area;
                for (beta, m) in self.basis.eval(p).into_iter().take(n - nb).enumerate() {
                    v[nb + beta] += uw * m;
                }
            }
        }
        v
    }

    /// Coefficients of the L2 projection of `u` onto `P_k`, from exact
    /// quadrature moments: `H^{-1} (int_P u m_a)_a`.
    pub fn l2_projection<F: Fn(Point) -> f64>(&self, poly: &[Point], u: F) -> DVector<f64> {
        let nk = self.basis.len();
        let mut rhs = DVector::zeros(nk);
        for (p, w) in polygon_rule(poly, 2 * self.k + 2) {
            let uw = u(p) * w;
            for (a, m) in self.basis.eval(p).into_iter().enumerate() {
                rhs[a] += uw * m;
            }
        }
        self.h.clone().lu().solve(&rhs).unwrap_or_else(|| DVector::zeros(nk))
    }
}

fn identity_gap(m: &DMatrix<f64>) -> f64 {
    let mut gap: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let e = if i == j { 1.0 } else { 0.0 };
            gap = gap.max((m[(i, j)] - e).abs());
        }
    }
    gap
}

/// `int_{-1}^{1} L_i' L_j'` for the Lagrange basis on the `k + 1`
/// Gauss–Lobatto nodes. A physical edge of length `|e|` scales this by
/// `2 / |e|`.
pub fn lobatto_edge_stiffness(k: usize) -> DMatrix<f64> {
    let nodes = gauss_lobatto(k).nodes;
    let quad = gauss_legendre(k.max(1));
    let n = k + 1;
    let deriv = |i: usize, t: f64| -> f64 {
        let mut s = 0.0;
        for m in 0..n {
            if m == i {
                continue;
            }
            let mut p = 1.0 / (nodes[i] - nodes[m]);
            for l in 0..n {
                if l != i && l != m {
                    p *= (t - nodes[l]) / (nodes[i] - nodes[l]);
                }
            }
            s += p;
        }
        s
    };
    let mut out = DMatrix::zeros(n, n);
    for (&t, &w) in quad.nodes.iter().zip(&quad.weights) {
        for i in 0..n {
            let di = deriv(i, t);
            for j in 0..n {
                out[(i, j)] += w * di * deriv(j, t);
            }
        }
    }
    out
}
