//! Zero-fill incomplete Cholesky and preconditioned conjugate gradients.

use super::sparse::CsrMatrix;
use crate::prelude::*;
use crate::{Error, Result};

/// `L` of `A ~ L L^T` restricted to the lower sparsity pattern of `A`.
#[derive(Debug, Clone)]
pub struct Ic0 {
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
    /// Diagonal shift `alpha` finally used (0 when none was needed).
    pub shift: f64,
    /// Number of failed attempts before success.
    pub retries: usize,
}

impl Ic0 {
    /// Factors `A`; on a non-positive pivot retries with `A + alpha I`,
    /// `alpha = 1e-3 trace(A) / n`, doubling each time.
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.dim().max(1);
        let mut alpha = 1e-3 * a.trace().abs() / n as f64;
        match Self::try_factor(a, 0.0) {
            Ok(f) => return Ok(f),
            Err(e) if alpha == 0.0 || !alpha.is_finite() => return Err(e),
            Err(_) => {}
        }
        for retries in 1..=60 {
            if let Ok(mut f) = Self::try_factor(a, alpha) {
                f.retries = retries;
                return Ok(f);
            }
            alpha *= 2.0;
        }
        Self::try_factor(a, alpha)
    }

    fn try_factor(a: &CsrMatrix, shift: f64) -> Result<Self> {
        let n = a.dim();
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        indptr.push(0);
        for i in 0..n {
            indices.extend(a.row(i).map(|(j, _)| j).filter(|&j| j < i));
            indices.push(i);
            indptr.push(indices.len());
        }
        let mut values = vec![0.0; indices.len()];
        // Finalized L[i, k] of the current row, valid where mark[k] == i.
        let mut work = vec![0.0; n];
        let mut mark = vec![usize::MAX; n];
        for i in 0..n {
            for (j, v) in a.row(i).filter(|&(j, _)| j <= i) {
                work[j] = v;
                mark[j] = i;
            }
            work[i] += shift;
            let row = indptr[i]..indptr[i + 1];
            let mut diag = work[i];
            for p in row.start..row.end - 1 {
                let j = indices[p];
                let mut s = work[j];
                for q in indptr[j]..indptr[j + 1] - 1 {
                    let k = indices[q];
                    if mark[k] == i && k < j {
                        s -= work[k] * values[q];
                    }
                }
                let l = s / values[indptr[j + 1] - 1];
                work[j] = l;
                values[p] = l;
                diag -= l * l;
            }
            if !(diag > 0.0 && diag.is_finite()) {
                return Err(Error::NotPositiveDefinite { pivot: i, value: diag });
            }
            values[row.end - 1] = diag.sqrt();
        }
        Ok(Self {
            indptr,
            indices,
            values,
            shift,
            retries: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.indptr.len() - 1
    }

    /// `L^{-1} x`.
    pub fn solve_lower(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for i in 0..self.dim() {
            let r = self.indptr[i]..self.indptr[i + 1];
            let mut s = y[i];
            for p in r.start..r.end - 1 {
                s -= self.values[p] * y[self.indices[p]];
            }
            y[i] = s / self.values[r.end - 1];
        }
        y
    }

    /// `L^{-T} x`.
    pub fn solve_upper(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for i in (0..self.dim()).rev() {
            let r = self.indptr[i]..self.indptr[i + 1];
            y[i] /= self.values[r.end - 1];
            let yi = y[i];
            for p in r.start..r.end - 1 {
                y[self.indices[p]] -= self.values[p] * yi;
            }
        }
        y
    }

    /// `L x`.
    pub fn mul_lower(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| (self.indptr[i]..self.indptr[i + 1]).map(|p| self.values[p] * x[self.indices[p]]).sum())
            .collect()
    }

    /// `L^T x`.
    pub fn mul_upper(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        for i in 0..self.dim() {
            for p in self.indptr[i]..self.indptr[i + 1] {
                y[self.indices[p]] += self.values[p] * x[i];
            }
        }
        y
    }

    /// Preconditioner application `(L L^T)^{-1} r`.
    pub fn apply(&self, r: &[f64]) -> Vec<f64> {
        self.solve_upper(&self.solve_lower(r))
    }
}

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Final relative residual `|b - A x| / |b|`.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Preconditioned conjugate gradients from a zero initial guess.
pub fn pcg(a: &CsrMatrix, b: &[f64], precond: Option<&Ic0>, tol: f64, max_iter: usize) -> Result<CgOutcome> {
    let n = a.dim();
    let bnorm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(CgOutcome {
            x,
            iterations: 0,
            residual: 0.0,
        });
    }
    let apply = |r: &[f64]| precond.map_or_else(|| r.to_vec(), |m| m.apply(r));
    let mut r = b.to_vec();
    let mut z = apply(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut history = Vec::new();
    for it in 1..=max_iter {
        let ap = a.mul_vec(&p);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let res = dot(&r, &r).sqrt() / bnorm;
        history.push(res);
        if res <= tol {
            return Ok(CgOutcome {
                x,
                iterations: it,
                residual: res,
            });
        }
        z = apply(&r);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: history.last().copied().unwrap_or(1.0),
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, &t)
    }

    fn laplacian_2d(m: usize) -> CsrMatrix {
        let id = |i: usize, j: usize| i * m + j;
        let mut t = Vec::new();
        for i in 0..m {
            for j in 0..m {
                t.push((id(i, j), id(i, j), 4.0));
                if i + 1 < m {
                    t.push((id(i, j), id(i + 1, j), -1.0));
                    t.push((id(i + 1, j), id(i, j), -1.0));
                }
                if j + 1 < m {
                    t.push((id(i, j), id(i, j + 1), -1.0));
                    t.push((id(i, j + 1), id(i, j), -1.0));
                }
            }
        }
        CsrMatrix::from_triplets(m * m, &t)
    }

    #[test]
    fn ic0_is_exact_on_tridiagonal() {
        let a = laplacian_1d(50);
        let l = Ic0::factor(&a).unwrap();
        assert_eq!(l.shift, 0.0);
        let x: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let llt = l.mul_lower(&l.mul_upper(&x));
        let ax = a.mul_vec(&x);
        for (u, v) in llt.iter().zip(&ax) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn pcg_converges_faster_with_ic0() {
        let a = laplacian_2d(30);
        let b = vec![1.0; a.dim()];
        let plain = pcg(&a, &b, None, 1e-10, 10_000).unwrap();
        let l = Ic0::factor(&a).unwrap();
        let pre = pcg(&a, &b, Some(&l), 1e-10, 10_000).unwrap();
        assert!(pre.iterations < plain.iterations);
        let r = a.mul_vec(&pre.x);
        let err = r.iter().zip(&b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
        assert!(err < 1e-8);
    }

    #[test]
    fn shift_and_retry_on_negative_pivot() {
        // Symmetric, positive diagonal, but not positive definite.
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        let l = Ic0::factor(&a).unwrap();
        assert!(l.shift > 0.0 && l.retries > 0);
    }

    #[test]
    fn non_convergence_reports_history() {
        let a = laplacian_2d(10);
        let b = vec![1.0; a.dim()];
        match pcg(&a, &b, None, 1e-14, 3) {
            Err(Error::NoConvergence { iterations, history, .. }) => {
                assert_eq!(iterations, 3);
                assert_eq!(history.len(), 3);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
