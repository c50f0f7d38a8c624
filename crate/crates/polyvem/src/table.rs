//! CSV files with a header row, written with a fixed float format so reruns
//! are byte-identical.

use std::path::Path;

use crate::commands::CliError;

/// Shortest round-trip representation; scientific outside `[1e-4, 1e6)`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e6).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn write(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// A CSV file read back by column name.
#[derive(Debug, Clone)]
pub struct Table {
    pub path: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Reads `path`; if it is missing, the error says which command to run.
    pub fn read(path: &Path, producer: &str) -> Result<Self, CliError> {
        if !path.exists() {
            return Err(CliError::Validation(format!(
                "missing input {}; run `{producer}` first",
                path.display()
            )));
        }
        let bad = |e: csv::Error| CliError::Validation(format!("{}: {e}", path.display()));
        let mut r = csv::Reader::from_path(path).map_err(bad)?;
        let header = r.headers().map_err(bad)?.iter().map(str::to_string).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<Result<_, _>>()
            .map_err(bad)?;
        Ok(Self {
            path: path.display().to_string(),
            header,
            rows,
        })
    }

    pub fn column(&self, name: &str) -> Result<usize, CliError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Validation(format!("{}: no column '{name}'", self.path)))
    }

    pub fn str<'a>(&self, row: &'a [String], col: usize) -> &'a str {
        &row[col]
    }

    pub fn f64(&self, row: &[String], col: usize) -> Result<f64, CliError> {
        row[col]
            .parse()
            .map_err(|_| CliError::Validation(format!("{}: '{}' is not a number", self.path, row[col])))
    }

    pub fn usize(&self, row: &[String], col: usize) -> Result<usize, CliError> {
        row[col]
            .parse()
            .map_err(|_| CliError::Validation(format!("{}: '{}' is not an integer", self.path, row[col])))
    }
}
