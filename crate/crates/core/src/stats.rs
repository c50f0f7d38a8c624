//! Spearman rank correlation and the metric/performance correlation study.

use crate::prelude::*;
use crate::{Error, Result};

/// Fractional ranks (1-based); tied values share the mean of their ranks.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = r;
        }
        i = j + 1;
    }
    ranks
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("correlation of a constant vector".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman correlation: Pearson correlation of the average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::Parameter(format!("spearman needs at least 3 samples, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::Undefined("NaN sample".into()));
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Cells with `|rho|` above this are reported as strongly correlated.
pub const HIGH_CORRELATION: f64 = 0.9;
/// Cells with `|rho|` below this are reported as uncorrelated.
pub const LOW_CORRELATION: f64 = 0.03;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    /// `values[r][c]`; `None` where a column or row is constant.
    pub values: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn get(&self, row: &str, column: &str) -> Option<f64> {
        let r = self.rows.iter().position(|n| n == row)?;
        let c = self.columns.iter().position(|n| n == column)?;
        self.values[r][c]
    }

    fn flagged(&self, pred: impl Fn(f64) -> bool) -> Vec<(String, String, f64)> {
        let mut out = Vec::new();
        for (r, row) in self.values.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if let Some(v) = *v {
                    if pred(v.abs()) {
                        out.push((self.rows[r].clone(), self.columns[c].clone(), v));
                    }
                }
            }
        }
        out
    }

    pub fn high(&self) -> Vec<(String, String, f64)> {
        self.flagged(|a| a > HIGH_CORRELATION)
    }

    pub fn low(&self) -> Vec<(String, String, f64)> {
        self.flagged(|a| a < LOW_CORRELATION)
    }
}

/// Correlates every row series against every column series. Each series
/// holds one value per run. Needs at least ten runs; fails if every cell is
/// undefined (e.g. the same run repeated).
pub fn correlation_study(rows: &[(String, Vec<f64>)], columns: &[(String, Vec<f64>)]) -> Result<CorrelationMatrix> {
    let runs = rows.first().map_or(0, |r| r.1.len());
    if runs < 10 {
        return Err(Error::Parameter(format!("correlation study needs at least 10 runs, got {runs}")));
    }
    for (_, s) in rows.iter().chain(columns) {
        if s.len() != runs {
            return Err(Error::Dimension {
                expected: runs,
                got: s.len(),
            });
        }
    }
    let values: Vec<Vec<Option<f64>>> = rows
        .iter()
        .map(|(_, x)| columns.iter().map(|(_, y)| spearman(x, y).ok()).collect())
        .collect();
    if values.iter().flatten().all(Option::is_none) {
        return Err(Error::Undefined("every series is constant".into()));
    }
    Ok(CorrelationMatrix {
        rows: rows.iter().map(|r| r.0.clone()).collect(),
        columns: columns.iter().map(|c| c.0.clone()).collect(),
        values,
    })
}
