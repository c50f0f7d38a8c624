//! Hager–Higham 1-norm estimation for symmetric operators available only
//! through matrix–vector products.

use crate::prelude::*;
use crate::Result;

/// Lower estimate of `|B|_1` for a symmetric `n x n` operator `B`.
///
/// Runs at most five Hager iterations (each a power-like step on the dual
/// sign vector) and then takes the larger of that result and Higham's
/// alternating test vector. Every candidate is `|B x|_1 / |x|_1` for some `x`,
/// so the value never exceeds the true norm.
pub fn norm1_estimate<F>(n: usize, mut apply: F) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    if n == 0 {
        return Ok(0.0);
    }
    let norm1 = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
    let sign = |v: &[f64]| v.iter().map(|&x| if x >= 0.0 { 1.0 } else { -1.0 }).collect::<Vec<f64>>();
    let mut x = vec![1.0 / n as f64; n];
    let mut est = 0.0;
    let mut prev_sign: Option<Vec<f64>> = None;
    let mut last_j = usize::MAX;
    for iter in 0..5 {
        let y = apply(&x)?;
        // The ratio (rather than |y|_1 with |x|_1 = 1 assumed) keeps the
        // identity's estimate at exactly 1 despite rounding in 1/n.
        let e = norm1(&y) / norm1(&x);
        if iter > 0 && e <= est {
            break;
        }
        est = e;
        let xi = sign(&y);
        if prev_sign.as_ref() == Some(&xi) {
            break;
        }
        let z = apply(&xi)?;
        let (j, zj) = z
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.abs()))
            .fold((0, -1.0), |best, c| if c.1 > best.1 { c } else { best });
        let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
        if iter > 0 && (zj <= ztx || j == last_j) {
            break;
        }
        x = vec![0.0; n];
        x[j] = 1.0;
        last_j = j;
        prev_sign = Some(xi);
    }
    let alt: Vec<f64> = (0..n)
        .map(|i| {
            let mag = if n > 1 { 1.0 + i as f64 / (n - 1) as f64 } else { 1.0 };
            if i % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let alt_est = norm1(&apply(&alt)?) / norm1(&alt);
    Ok(if alt_est > est { alt_est } else { est })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_apply(a: &[Vec<f64>]) -> impl FnMut(&[f64]) -> Result<Vec<f64>> + '_ {
        move |x| Ok(a.iter().map(|r| r.iter().zip(x).map(|(u, v)| u * v).sum()).collect())
    }

    #[test]
    fn identity_norm_is_one() {
        let id: Vec<Vec<f64>> = (0..7).map(|i| (0..7).map(|j| f64::from(i == j)).collect()).collect();
        assert_eq!(norm1_estimate(7, dense_apply(&id)).unwrap(), 1.0);
    }

    #[test]
    fn finds_dominant_column() {
        let a = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 9.0]];
        assert_eq!(norm1_estimate(3, dense_apply(&a)).unwrap(), 9.0);
    }
}
