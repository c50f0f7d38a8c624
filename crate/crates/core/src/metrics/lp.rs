//! Dense simplex for tiny linear programs in canonical form.

use crate::prelude::*;

/// Maximizes `c . z` subject to `A z <= b`, `z >= 0`, with `b >= 0` so the
/// origin is feasible. Returns the optimal `z`, or `None` if unbounded.
/// Uses Bland's rule, so it terminates on degenerate problems.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    // Tableau rows: constraints, last row is the objective (reduced costs).
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        debug_assert!(b[i] >= -1e-12, "origin must be feasible");
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i].max(0.0);
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let eps = 1e-13;
    for _ in 0..10_000 {
        // Entering variable: smallest index with negative reduced cost.
        let Some(col) = (0..n + m).find(|&j| t[m][j] < -eps) else {
            break;
        };
        // Ratio test, ties broken by smallest basic index.
        let mut row = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][col] > eps {
                let r = t[i][width - 1] / t[i][col];
                let better = r < best - 1e-15
                    || (r <= best + 1e-15 && row.is_some_and(|p: usize| basis[i] < basis[p]));
                if better {
                    best = r;
                    row = Some(i);
                }
            }
        }
        let row = row?;
        let piv = t[row][col];
        for v in t[row].iter_mut() {
            *v /= piv;
        }
        let pivot_row = t[row].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i != row {
                let f = r[col];
                if f != 0.0 {
                    for (v, p) in r.iter_mut().zip(&pivot_row) {
                        *v -= f * p;
                    }
                }
            }
        }
        basis[row] = col;
    }
    let mut z = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            z[bv] = t[i][width - 1];
        }
    }
    Some(z)
}
