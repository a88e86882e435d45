//! Sparse 0/1 incidence matrices with labelled rows and columns.

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, ModMatrix, RatMatrix};

/// What a row or column of an incidence matrix stands for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    /// A subset of `[n]`, 1-based, increasing.
    Subset(Vec<usize>),
    /// A subspace, as the rows of its canonical basis with rendered field elements.
    Subspace(Vec<Vec<String>>),
    /// A block of a design: its position in the block list and its points.
    Block { index: usize, points: Vec<usize> },
}

/// A 0/1 matrix stored as the sorted column positions of the ones in each row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    ones: Vec<Vec<usize>>,
    row_labels: Vec<Label>,
    col_labels: Vec<Label>,
}

impl IncidenceMatrix {
    /// Builds the matrix whose `(i, j)` entry is `incident(i, j)`.
    pub fn from_relation(
        row_labels: Vec<Label>,
        col_labels: Vec<Label>,
        mut incident: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let (rows, cols) = (row_labels.len(), col_labels.len());
        let ones = (0..rows).map(|i| (0..cols).filter(|&j| incident(i, j)).collect()).collect();
        IncidenceMatrix { rows, cols, ones, row_labels, col_labels }
    }

    /// From explicit row patterns, without labels. Used when re-reading emitted files.
    pub fn from_pattern(rows: usize, cols: usize, mut ones: Vec<Vec<usize>>) -> Result<Self> {
        if ones.len() != rows {
            return Err(Error::Shape(format!("{} pattern rows for {rows} rows", ones.len())));
        }
        for row in ones.iter_mut() {
            row.sort_unstable();
            row.dedup();
            if row.last().is_some_and(|&j| j >= cols) {
                return Err(Error::Shape(format!("column index out of range for {cols} columns")));
            }
        }
        Ok(IncidenceMatrix { rows, cols, ones, row_labels: Vec::new(), col_labels: Vec::new() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.ones.iter().map(Vec::len).sum()
    }

    pub fn is_one(&self, i: usize, j: usize) -> bool {
        self.ones[i].binary_search(&j).is_ok()
    }

    /// Column positions of the ones in row `i`, increasing.
    pub fn row_pattern(&self, i: usize) -> &[usize] {
        &self.ones[i]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.ones.iter().map(Vec::len).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        let mut sums = vec![0; self.cols];
        for row in &self.ones {
            for &j in row {
                sums[j] += 1;
            }
        }
        sums
    }

    pub fn row_labels(&self) -> &[Label] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[Label] {
        &self.col_labels
    }

    pub fn to_rational(&self) -> RatMatrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            if self.is_one(i, j) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// The same matrix read over GF(p).
    pub fn to_mod_p(&self) -> ModMatrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| u64::from(self.is_one(i, j)))
    }

    /// Equality of the 0/1 pattern, ignoring labels.
    pub fn same_pattern(&self, other: &IncidenceMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.ones == other.ones
    }
}
