//! Reader and writer for Matrix Market coordinate files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;
use crate::c64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::ParseError { line, message: message.into() }
}

pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_matrix_market(BufReader::new(file))
}

/// Parses a coordinate-format stream. Symmetric, skew-symmetric and
/// Hermitian files are expanded to the full matrix.
pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<SparseMatrix> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (lineno, header) = match lines.next() {
        Some((n, l)) => (n, l?),
        None => return Err(parse_err(1, "empty file")),
    };
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(lineno, "expected `%%MatrixMarket matrix <format> <field> <symmetry>`"));
    }
    if tokens[2] != "coordinate" {
        return Err(Error::UnsupportedFormat(format!("format `{}`", tokens[2])));
    }
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(Error::UnsupportedFormat(format!("field `{other}`"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(Error::UnsupportedFormat(format!("symmetry `{other}`"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut trip: Vec<(usize, usize, c64)> = Vec::new();
    let mut seen = 0usize;
    for (lineno, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        let Some((nrows, ncols, nnz)) = size else {
            if parts.len() != 3 {
                return Err(parse_err(lineno, "size line needs `rows cols entries`"));
            }
            let p = |s: &str| s.parse::<usize>().map_err(|e| parse_err(lineno, e.to_string()));
            let dims = (p(parts[0])?, p(parts[1])?, p(parts[2])?);
            if symmetry != Symmetry::General && dims.0 != dims.1 {
                return Err(parse_err(lineno, "symmetric storage requires a square matrix"));
            }
            size = Some(dims);
            trip.reserve(if symmetry == Symmetry::General { dims.2 } else { 2 * dims.2 });
            continue;
        };
        let expected = if field == Field::Complex { 4 } else { 3 };
        if parts.len() != expected {
            return Err(parse_err(lineno, format!("expected {expected} fields, found {}", parts.len())));
        }
        let idx = |s: &str, bound: usize| -> Result<usize> {
            let v = s.parse::<usize>().map_err(|e| parse_err(lineno, e.to_string()))?;
            if v == 0 || v > bound {
                return Err(parse_err(lineno, format!("index {v} outside 1..={bound}")));
            }
            Ok(v - 1)
        };
        let num = |s: &str| s.parse::<f64>().map_err(|e| parse_err(lineno, e.to_string()));
        let r = idx(parts[0], nrows)?;
        let c = idx(parts[1], ncols)?;
        let v = match field {
            Field::Real | Field::Integer => c64::new(num(parts[2])?, 0.0),
            Field::Complex => c64::new(num(parts[2])?, num(parts[3])?),
        };
        if symmetry != Symmetry::General && r < c {
            return Err(parse_err(lineno, "symmetric storage holds the lower triangle only"));
        }
        trip.push((r, c, v));
        if r != c {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => trip.push((c, r, v)),
                Symmetry::SkewSymmetric => trip.push((c, r, -v)),
                Symmetry::Hermitian => trip.push((c, r, v.conj())),
            }
        } else if symmetry == Symmetry::SkewSymmetric {
            return Err(parse_err(lineno, "skew-symmetric storage has no diagonal"));
        }
        seen += 1;
        if seen > nnz {
            return Err(parse_err(lineno, format!("more than the declared {nnz} entries")));
        }
    }
    let Some((nrows, ncols, nnz)) = size else {
        return Err(parse_err(1, "missing size line"));
    };
    if seen != nnz {
        return Err(parse_err(0, format!("declared {nnz} entries, found {seen}")));
    }
    SparseMatrix::from_triplets(nrows, ncols, trip)
}

/// Writes all stored entries in `general` symmetry, choosing the `real`
/// field when every value is real. Values are printed in shortest
/// round-trip form, so reading the file back is exact.
pub fn write_matrix_market<W: Write>(a: &SparseMatrix, mut out: W) -> Result<()> {
    let real = a.is_real_valued();
    let field = if real { "real" } else { "complex" };
    writeln!(out, "%%MatrixMarket matrix coordinate {field} general")?;
    writeln!(out, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
    for (r, c, v) in a.triplets() {
        if real {
            writeln!(out, "{} {} {:e}", r + 1, c + 1, v.re)?;
        } else {
            writeln!(out, "{} {} {:e} {:e}", r + 1, c + 1, v.re, v.im)?;
        }
    }
    Ok(())
}

pub fn save_matrix_market(a: &SparseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    write_matrix_market(a, &mut w)?;
    w.flush()?;
    Ok(())
}
