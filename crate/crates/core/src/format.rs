//! Matrix serialization: CSV and JSON of exact rationals, Matrix Market for 0/1 patterns.
//!
//! Every writer has a parser that inverts it exactly.

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::incidence::{IncidenceMatrix, Label};
use crate::linalg::{Matrix, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Mtx,
}

/// One row per line, entries as `num/den` (`num` alone when the denominator is 1).
pub fn write_csv(m: &RatMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(Rational::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_csv(src: &str) -> Result<RatMatrix> {
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (idx, line) in src.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: idx + 1, msg };
        let row: Vec<Rational> = line
            .split(',')
            .map(|tok| tok.trim().parse().map_err(|e| err(format!("{tok:?}: {e}"))))
            .collect::<Result<_>>()?;
        if *cols.get_or_insert(row.len()) != row.len() {
            return Err(err(format!("{} entries, expected {}", row.len(), cols.unwrap())));
        }
        data.extend(row);
        rows += 1;
    }
    Matrix::new(rows, cols.unwrap_or(0), data)
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    row_labels: Option<Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    col_labels: Option<Vec<Label>>,
}

/// Row and column labels attached to a JSON matrix.
pub type Labels<'a> = (&'a [Label], &'a [Label]);

/// `{"rows", "cols", "entries": [[...]]}`, plus `row_labels`/`col_labels` when given.
pub fn write_json(m: &RatMatrix, labels: Option<Labels<'_>>) -> Result<String> {
    if let Some((r, c)) = labels {
        if r.len() != m.rows() || c.len() != m.cols() {
            return Err(Error::Shape(format!(
                "{}x{} labels for a {}x{} matrix",
                r.len(),
                c.len(),
                m.rows(),
                m.cols()
            )));
        }
    }
    let jm = JsonMatrix {
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows()).map(|i| m.row(i).to_vec()).collect(),
        row_labels: labels.map(|l| l.0.to_vec()),
        col_labels: labels.map(|l| l.1.to_vec()),
    };
    serde_json::to_string_pretty(&jm).map_err(|e| Error::Format(e.to_string()))
}

/// Owned row and column labels read back from JSON.
pub type OwnedLabels = (Vec<Label>, Vec<Label>);

/// Parses [`write_json`] output; labels, if any, come back as well.
pub fn parse_json(src: &str) -> Result<(RatMatrix, Option<OwnedLabels>)> {
    let jm: JsonMatrix =
        serde_json::from_str(src).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    if jm.entries.len() != jm.rows || jm.entries.iter().any(|r| r.len() != jm.cols) {
        return Err(Error::Format(format!("entries do not form a {}x{} matrix", jm.rows, jm.cols)));
    }
    let m = Matrix::new(jm.rows, jm.cols, jm.entries.into_iter().flatten().collect())?;
    let labels = match (jm.row_labels, jm.col_labels) {
        (Some(r), Some(c)) => Some((r, c)),
        (None, None) => None,
        _ => return Err(Error::Format("row and column labels must come together".into())),
    };
    Ok((m, labels))
}

const MTX_HEADER: &str = "%%MatrixMarket matrix coordinate pattern general";

/// Coordinate pattern format, 1-based, ones listed row by row.
pub fn write_mtx(m: &IncidenceMatrix) -> String {
    let mut out = format!("{MTX_HEADER}\n{} {} {}\n", m.rows(), m.cols(), m.nnz());
    for i in 0..m.rows() {
        for &j in m.row_pattern(i) {
            out.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
    }
    out
}

pub fn parse_mtx(src: &str) -> Result<IncidenceMatrix> {
    let mut lines = src.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim().eq_ignore_ascii_case(MTX_HEADER) => {}
        _ => return Err(Error::Parse { line: 1, msg: format!("expected {MTX_HEADER:?}") }),
    }
    let mut body = lines.filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('%'));
    let nums = |idx: usize, line: &str, want: usize| -> Result<Vec<usize>> {
        let v: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Parse { line: idx + 1, msg: format!("{e}") })?;
        if v.len() != want {
            return Err(Error::Parse { line: idx + 1, msg: format!("expected {want} integers") });
        }
        Ok(v)
    };
    let (idx, size) = body.next().ok_or(Error::Parse { line: 2, msg: "missing size line".into() })?;
    let size = nums(idx, size, 3)?;
    let (rows, cols, nnz) = (size[0], size[1], size[2]);
    let mut ones = vec![Vec::new(); rows];
    let mut seen = 0;
    for (idx, line) in body {
        let e = nums(idx, line, 2)?;
        let (i, j) = (e[0], e[1]);
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(Error::Parse { line: idx + 1, msg: format!("entry ({i}, {j}) out of range") });
        }
        ones[i - 1].push(j - 1);
        seen += 1;
    }
    if seen != nnz {
        return Err(Error::Format(format!("header announces {nnz} entries, found {seen}")));
    }
    IncidenceMatrix::from_pattern(rows, cols, ones)
}
