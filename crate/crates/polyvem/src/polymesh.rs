//! The `POLYMESH 1` text format.
//!
//! ```text
//! POLYMESH 1
//! <num_vertices> <num_elements>
//! x y                      one vertex per line, 17 significant digits
//! <k> i0 i1 ... i{k-1}     one element per line, counterclockwise, 0-based
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use polyvem_core::geometry::{signed_area, Point};
use polyvem_core::Mesh;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum MeshFileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
}

pub fn to_string(mesh: &Mesh) -> String {
    let mut s = String::with_capacity(48 * (mesh.num_vertices() + mesh.num_elements()));
    s.push_str("POLYMESH 1\n");
    let _ = writeln!(s, "{} {}", mesh.num_vertices(), mesh.num_elements());
    for p in &mesh.vertices {
        // `{:.16e}` prints 17 significant digits, enough to round-trip f64.
        let _ = writeln!(s, "{:.16e} {:.16e}", p.x, p.y);
    }
    for el in &mesh.elements {
        let _ = write!(s, "{}", el.len());
        for i in el {
            let _ = write!(s, " {i}");
        }
        s.push('\n');
    }
    s
}

pub fn parse(text: &str, level: usize) -> Result<Mesh, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line: usize, message: String| ParseError { line, message };
    let mut next = |what: &str| lines.next().ok_or_else(|| err(0, format!("unexpected end of file, expected {what}")));

    let (ln, header) = next("header")?;
    if header != "POLYMESH 1" {
        return Err(err(ln, format!("expected header 'POLYMESH 1', found '{header}'")));
    }
    let (ln, counts) = next("vertex and element counts")?;
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|e| err(ln, format!("bad counts: {e}")))?;
    let [nv, ne] = counts[..] else {
        return Err(err(ln, "expected '<num_vertices> <num_elements>'".into()));
    };
    if ne == 0 {
        return Err(err(ln, "no elements".into()));
    }

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = next("a vertex")?;
        let xy: Vec<f64> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| err(ln, format!("bad coordinate: {e}")))?;
        match xy[..] {
            [x, y] if x.is_finite() && y.is_finite() => vertices.push(Point::new(x, y)),
            _ => return Err(err(ln, "expected two finite coordinates".into())),
        }
    }

    let mut elements = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (ln, l) = next("an element")?;
        let ids: Vec<usize> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| err(ln, format!("bad index: {e}")))?;
        let Some((&k, idx)) = ids.split_first() else {
            return Err(err(ln, "empty element line".into()));
        };
        if k < 3 || idx.len() != k {
            return Err(err(ln, format!("element declares {k} vertices but lists {}", idx.len())));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= nv) {
            return Err(err(ln, format!("vertex index {bad} out of range (mesh has {nv} vertices)")));
        }
        let poly: Vec<Point> = idx.iter().map(|&i| vertices[i]).collect();
        if signed_area(&poly) <= 0.0 {
            return Err(err(ln, "element is not counterclockwise".into()));
        }
        elements.push(idx.to_vec());
    }
    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, "trailing content after the last element".into()));
    }
    Ok(Mesh::new(vertices, elements, level))
}

pub fn save(mesh: &Mesh, path: &Path) -> Result<(), MeshFileError> {
    fs::write(path, to_string(mesh)).map_err(|source| MeshFileError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load(path: &Path, level: usize) -> Result<Mesh, MeshFileError> {
    let text = fs::read_to_string(path).map_err(|source| MeshFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text, level).map_err(|source| MeshFileError::Parse {
        path: path.display().to_string(),
        source,
    })
}
