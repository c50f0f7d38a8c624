//! Sparse symmetric linear algebra: storage, direct and iterative solvers,
//! and 1-norm condition estimates.

pub mod condest;
pub mod direct;
pub mod iterative;
pub mod sparse;

pub use condest::norm1_estimate;
pub use direct::SkylineCholesky;
pub use iterative::{pcg, CgOutcome, Ic0};
pub use sparse::{reverse_cuthill_mckee, CsrMatrix};

use crate::prelude::*;
use crate::Result;

/// Systems up to this many unknowns are factored directly.
pub const DIRECT_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    #[default]
    Auto,
    Direct,
    Cg,
}

#[derive(Debug, Clone)]
enum Backend {
    Direct(SkylineCholesky),
    Iterative { precond: Ic0, tol: f64 },
}

/// A prepared solver for one SPD matrix.
#[derive(Debug, Clone)]
pub struct SpdSolver<'a> {
    a: &'a CsrMatrix,
    backend: Backend,
}

impl<'a> SpdSolver<'a> {
    pub fn new(a: &'a CsrMatrix, kind: SolverKind, cg_tol: f64) -> Result<Self> {
        let direct = match kind {
            SolverKind::Auto => a.dim() <= DIRECT_LIMIT,
            SolverKind::Direct => true,
            SolverKind::Cg => false,
        };
        let backend = if direct {
            Backend::Direct(SkylineCholesky::factor(a)?)
        } else {
            Backend::Iterative {
                precond: Ic0::factor(a)?,
                tol: cg_tol,
            }
        };
        Ok(Self { a, backend })
    }

    pub fn is_direct(&self) -> bool {
        matches!(self.backend, Backend::Direct(_))
    }

    /// Solves `A x = b`, returning the CG iteration count (0 when direct).
    pub fn solve(&self, b: &[f64]) -> Result<(Vec<f64>, usize)> {
        match &self.backend {
            Backend::Direct(f) => Ok((f.solve(b), 0)),
            Backend::Iterative { precond, tol } => {
                let out = pcg(self.a, b, Some(precond), *tol, 10 * self.a.dim().max(1))?;
                Ok((out.x, out.iterations))
            }
        }
    }
}

/// Lower estimate of `cond_1(A) = |A|_1 |A^{-1}|_1`; `|A|_1` is exact.
pub fn cond1_estimate(a: &CsrMatrix, solver: &SpdSolver<'_>) -> Result<f64> {
    let inv = norm1_estimate(a.dim(), |x| solver.solve(x).map(|s| s.0))?;
    Ok(a.norm1() * inv)
}

/// Lower estimate of `cond_1(L^{-1} A L^{-T})` for the IC(0) factor `L`.
/// Both norms are estimated: the operator is never formed.
pub fn preconditioned_cond1(a: &CsrMatrix, l: &Ic0, solver: &SpdSolver<'_>) -> Result<f64> {
    let n = a.dim();
    let fwd = norm1_estimate(n, |x| Ok(l.solve_lower(&a.mul_vec(&l.solve_upper(x)))))?;
    let inv = norm1_estimate(n, |x| solver.solve(&l.mul_lower(x)).map(|s| l.mul_upper(&s.0)))?;
    Ok(fwd * inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cond_of_identity_and_diagonal() {
        let id = CsrMatrix::identity(10);
        let s = SpdSolver::new(&id, SolverKind::Direct, 1e-12).unwrap();
        assert_eq!(cond1_estimate(&id, &s).unwrap(), 1.0);
        let d = CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, 1e6]]);
        let s = SpdSolver::new(&d, SolverKind::Direct, 1e-12).unwrap();
        assert!((cond1_estimate(&d, &s).unwrap() - 1e6).abs() < 1e-6);
        let l = Ic0::factor(&d).unwrap();
        assert!((preconditioned_cond1(&d, &l, &s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cg_backend_matches_direct() {
        let a = CsrMatrix::from_dense(&[vec![4.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 2.0]]);
        let b = [1.0, 2.0, 3.0];
        let d = SpdSolver::new(&a, SolverKind::Direct, 1e-14).unwrap().solve(&b).unwrap().0;
        let c = SpdSolver::new(&a, SolverKind::Cg, 1e-14).unwrap().solve(&b).unwrap().0;
        for (u, v) in d.iter().zip(&c) {
            assert!((u - v).abs() < 1e-12);
        }
    }
}
