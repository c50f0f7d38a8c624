//! Error norms, element diagnostics and the performance indexes P1..P8.

use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::geometry::Point;
use crate::linalg::{cond1_estimate, preconditioned_cond1, Ic0};
use crate::mesh::{self, Mesh};
use crate::prelude::*;
use crate::vem::{cond2, Discretization, LocalData, VemConfig};
use crate::{Error, Result};

/// A manufactured problem: exact solution and forcing `f = -lap u`. The
/// Dirichlet data is the trace of `u`.
#[derive(Clone, Copy)]
pub struct Problem {
    pub name: &'static str,
    pub u: fn(Point) -> f64,
    pub f: fn(Point) -> f64,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestCase {
    Test1,
    Test2,
}

impl TestCase {
    pub fn name(self) -> &'static str {
        match self {
            TestCase::Test1 => "test1",
            TestCase::Test2 => "test2",
        }
    }
}

impl FromStr for TestCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "test1" => Ok(TestCase::Test1),
            "test2" => Ok(TestCase::Test2),
            _ => Err(Error::Parameter(format!("unknown test '{s}' (expected test1 or test2)"))),
        }
    }
}

fn u1(p: Point) -> f64 {
    (PI * p.x).sin() * (PI * p.y).sin() / (2.0 * PI * PI)
}

fn f1(p: Point) -> f64 {
    (PI * p.x).sin() * (PI * p.y).sin()
}

/// The four Gaussian bumps of the Franke function, as
/// `(c, Q, dQ/dx, dQ/dy, lap Q)` with the bump being `c exp(-Q)`.
fn franke_terms(p: Point) -> [(f64, f64, f64, f64, f64); 4] {
    let (x, y) = (9.0 * p.x, 9.0 * p.y);
    [
        (
            0.75,
            ((x - 2.0).powi(2) + (y - 2.0).powi(2)) / 4.0,
            4.5 * (x - 2.0),
            4.5 * (y - 2.0),
            81.0,
        ),
        (
            0.75,
            (x + 1.0).powi(2) / 49.0 + (y + 1.0) / 10.0,
            18.0 * (x + 1.0) / 49.0,
            0.9,
            162.0 / 49.0,
        ),
        (
            0.5,
            ((x - 7.0).powi(2) + (y - 3.0).powi(2)) / 4.0,
            4.5 * (x - 7.0),
            4.5 * (y - 3.0),
            81.0,
        ),
        (
            -0.2,
            (x - 4.0).powi(2) + (y - 7.0).powi(2),
            18.0 * (x - 4.0),
            18.0 * (y - 7.0),
            324.0,
        ),
    ]
}

fn u2(p: Point) -> f64 {
    franke_terms(p).iter().map(|&(c, q, ..)| c * (-q).exp()).sum()
}

/// `lap(c e^{-Q}) = c e^{-Q} (|grad Q|^2 - lap Q)`.
fn f2(p: Point) -> f64 {
    -franke_terms(p)
        .iter()
        .map(|&(c, q, qx, qy, lq)| c * (-q).exp() * (qx * qx + qy * qy - lq))
        .sum::<f64>()
}

pub fn ground_truth(test: TestCase) -> Problem {
    match test {
        TestCase::Test1 => Problem {
            name: "test1",
            u: u1,
            f: f1,
        },
        TestCase::Test2 => Problem {
            name: "test2",
            u: u2,
            f: f2,
        },
    }
}

fn q1(p: Point) -> f64 {
    1.0 + 2.0 * p.x - 3.0 * p.y
}

fn q2(p: Point) -> f64 {
    q1(p) + p.x * p.x - p.x * p.y + 2.0 * p.y * p.y
}

fn q3(p: Point) -> f64 {
    q2(p) + p.x.powi(3) - 2.0 * p.x * p.y * p.y + p.y.powi(3)
}

/// Polynomial solution of degree exactly `k` (patch test).
pub fn patch_problem(k: usize) -> Problem {
    match k {
        1 => Problem {
            name: "patch1",
            u: q1,
            f: |_| 0.0,
        },
        2 => Problem {
            name: "patch2",
            u: q2,
            f: |_| -6.0,
        },
        _ => Problem {
            name: "patch3",
            u: q3,
            f: |p| -(6.0 + 2.0 * p.x + 6.0 * p.y),
        },
    }
}

/// Element-wise maxima of the conditioning diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ElementDiagnostics {
    pub max_cond_g: f64,
    pub max_cond_h: f64,
    pub max_pi_nabla_discrepancy: f64,
    pub max_pi0_discrepancy: f64,
}

pub fn element_diagnostics(locals: &[LocalData]) -> ElementDiagnostics {
    locals.iter().fold(ElementDiagnostics::default(), |acc, l| ElementDiagnostics {
        max_cond_g: acc.max_cond_g.max(cond2(&l.g)),
        max_cond_h: acc.max_cond_h.max(cond2(&l.h)),
        max_pi_nabla_discrepancy: acc.max_pi_nabla_discrepancy.max(l.pi_nabla_discrepancy()),
        max_pi0_discrepancy: acc.max_pi0_discrepancy.max(l.pi0_discrepancy()),
    })
}

/// Everything measured on one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub k: usize,
    pub dof_count: usize,
    pub h_max: f64,
    pub h_av: f64,
    /// P1: relative discrete energy error.
    pub rel_h1_energy: f64,
    /// P2: relative max-norm DOF error.
    pub rel_linf_dofs: f64,
    /// P3: relative L2 error of the polynomial projections.
    pub rel_l2: f64,
    /// P4: 1-norm condition estimate of the solved matrix (NaN if skipped).
    pub cond1_stiffness: f64,
    /// P5: same for the IC(0)-preconditioned operator.
    pub cond1_preconditioned: f64,
    /// P6 = P1 / h_av^k.
    pub err_const: f64,
    /// P7 = P2 / (h_av P1).
    pub aubin_nitsche: f64,
    /// P8 = P5 / P4.
    pub precond_effectiveness: f64,
    pub diagnostics: ElementDiagnostics,
    pub iterations: usize,
    pub direct: bool,
    /// Diagonal shift the IC(0) factorization needed.
    pub ic_shift: f64,
}

impl SolveReport {
    /// `P1..P8` in order.
    pub fn indexes(&self) -> [f64; 8] {
        [
            self.rel_h1_energy,
            self.rel_linf_dofs,
            self.rel_l2,
            self.cond1_stiffness,
            self.cond1_preconditioned,
            self.err_const,
            self.aubin_nitsche,
            self.precond_effectiveness,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Estimate P4, P5 and P8 (several extra solves).
    pub conditioning: bool,
    /// Compute the element diagnostics (SVDs of every G and H).
    pub diagnostics: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            conditioning: true,
            diagnostics: true,
        }
    }
}

/// `sqrt(a_h(e, e)) / sqrt(a_h(u_I, u_I))` with `e = u_h - u_I`.
pub fn perf1_energy(d: &Discretization, u_h: &[f64], u_i: &[f64]) -> Result<f64> {
    let e: Vec<f64> = u_h.iter().zip(u_i).map(|(a, b)| a - b).collect();
    let den = d.energy(u_i, u_i);
    if den <= 0.0 {
        return Err(Error::Undefined("a_h(u_I, u_I) = 0".into()));
    }
    Ok(d.energy(&e, &e).max(0.0).sqrt() / den.sqrt())
}

/// `max_i |DOF_i(u_h - u)| / max_i |DOF_i(u)|`.
pub fn perf2_linf(u_h: &[f64], u_i: &[f64]) -> Result<f64> {
    let den = u_i.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if den == 0.0 {
        return Err(Error::Undefined("max |DOF(u)| = 0".into()));
    }
    Ok(u_h.iter().zip(u_i).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())) / den)
}

/// `|Pi0 u_h - Pi0 u| / |Pi0 u|`, summed element by element with the mass
/// matrices `H`. `Pi0 u` is the exact L2 projection of `u` (quadrature
/// moments), `Pi0 u_h` the computable projection of the discrete solution.
/// Returns 0 when both projections vanish.
pub fn perf3_l2<U: Fn(Point) -> f64>(d: &Discretization, mesh: &Mesh, u_h: &[f64], u: U) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (e, loc) in d.locals.iter().enumerate() {
        let poly = mesh.polygon(e);
        let ch = &loc.pi0 * d.local_dofs(e, u_h);
        let cu = loc.l2_projection(&poly, &u);
        let diff = &ch - &cu;
        num += (diff.transpose() * &loc.h * &diff)[(0, 0)];
        den += (cu.transpose() * &loc.h * &cu)[(0, 0)];
    }
    if den <= 0.0 {
        return if num <= 0.0 { 0.0 } else { f64::INFINITY };
    }
    (num.max(0.0) / den).sqrt()
}

/// Assembles, solves and measures one problem on one mesh.
pub fn analyze(mesh: &Mesh, config: VemConfig, problem: &Problem, opts: AnalysisOptions) -> Result<SolveReport> {
    let d = Discretization::new(mesh, config, problem.f)?;
    let solver = d.solver()?;
    let sol = d.solve_with(&solver, problem.u)?;
    let u_i = d.interpolate(mesh, problem.u);
    let p1 = perf1_energy(&d, &sol.u, &u_i)?;
    let p2 = perf2_linf(&sol.u, &u_i)?;
    let p3 = perf3_l2(&d, mesh, &sol.u, problem.u);
    let h_max = mesh::mesh_size(mesh)?;
    let h_av = mesh::mean_diameter(mesh)?;
    let (mut p4, mut p5, mut shift) = (f64::NAN, f64::NAN, 0.0);
    if opts.conditioning && d.reduced.dim() > 0 {
        p4 = cond1_estimate(&d.reduced, &solver)?;
        let ic = Ic0::factor(&d.reduced)?;
        shift = ic.shift;
        p5 = preconditioned_cond1(&d.reduced, &ic, &solver)?;
    }
    let diagnostics = if opts.diagnostics {
        element_diagnostics(&d.locals)
    } else {
        ElementDiagnostics::default()
    };
    Ok(SolveReport {
        k: config.k,
        dof_count: d.dofs.count,
        h_max,
        h_av,
        rel_h1_energy: p1,
        rel_linf_dofs: p2,
        rel_l2: p3,
        cond1_stiffness: p4,
        cond1_preconditioned: p5,
        err_const: p1 / h_av.powi(config.k as i32),
        aubin_nitsche: p2 / (h_av * p1),
        precond_effectiveness: p5 / p4,
        diagnostics,
        iterations: sol.iterations,
        direct: sol.direct,
        ic_shift: shift,
    })
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::EmptyInput);
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Undefined("all abscissae equal".into()));
    }
    Ok(sxy / sxx)
}
