//! Envelope (skyline) Cholesky factorization on a reverse Cuthill–McKee
//! ordering.

use super::sparse::{reverse_cuthill_mckee, CsrMatrix};
use crate::prelude::*;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    perm: Vec<usize>,
    /// First stored column of each (permuted) row.
    first: Vec<usize>,
    /// Offset of row `i`'s entries `L[i, first[i]..=i]` in `values`.
    start: Vec<usize>,
    values: Vec<f64>,
}

impl SkylineCholesky {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.dim();
        let perm = reverse_cuthill_mckee(a);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let first: Vec<usize> = (0..n)
            .map(|i| a.row(perm[i]).map(|(j, _)| inv[j]).filter(|&j| j <= i).min().unwrap_or(i))
            .collect();
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + i - first[i] + 1);
        }
        let mut values = vec![0.0; start[n]];
        for i in 0..n {
            for (j, v) in a.row(perm[i]) {
                let j = inv[j];
                if j <= i {
                    values[start[i] + j - first[i]] += v;
                }
            }
        }
        for i in 0..n {
            let (fi, si) = (first[i], start[i]);
            for j in fi..=i {
                let (fj, sj) = (first[j], start[j]);
                let k0 = fi.max(fj);
                let mut s = values[si + j - fi];
                for k in k0..j {
                    s -= values[si + k - fi] * values[sj + k - fj];
                }
                if j < i {
                    values[si + j - fi] = s / values[sj + j - fj];
                } else if s > 0.0 && s.is_finite() {
                    values[si + i - fi] = s.sqrt();
                } else {
                    return Err(Error::NotPositiveDefinite {
                        pivot: perm[i],
                        value: s,
                    });
                }
            }
        }
        start.pop();
        Ok(Self {
            perm,
            first,
            start,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Number of stored factor entries (the envelope size).
    pub fn envelope(&self) -> usize {
        self.values.len()
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        self.values[self.start[i] + j - self.first[i]]
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&o| b[o]).collect();
        for i in 0..n {
            let mut s = y[i];
            for k in self.first[i]..i {
                s -= self.entry(i, k) * y[k];
            }
            y[i] = s / self.entry(i, i);
        }
        for i in (0..n).rev() {
            y[i] /= self.entry(i, i);
            let xi = y[i];
            for k in self.first[i]..i {
                y[k] -= self.entry(i, k) * xi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}
