use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ExactError, LaurentPoly};

/// Dense matrix with Laurent polynomial entries (transition matrices).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyMatrix {
    rows: Vec<Vec<LaurentPoly>>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self, ExactError> {
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(ExactError::DimensionMismatch("ragged polynomial matrix".into()));
        }
        Ok(PolyMatrix { rows })
    }

    pub fn zeros(r: usize, c: usize) -> Self {
        PolyMatrix { rows: vec![vec![LaurentPoly::zero(); c]; r] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = LaurentPoly::one();
        }
        m
    }

    pub fn diagonal(entries: Vec<LaurentPoly>) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            m.rows[i][i] = e;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.rows[i][j] = p;
    }

    pub fn rows(&self) -> &[Vec<LaurentPoly>] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.nrows(), self.ncols());
        PolyMatrix { rows: (0..c).map(|j| (0..r).map(|i| self.rows[i][j].clone()).collect()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        if self.ncols() != other.nrows() {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        let rows = (0..self.nrows())
            .map(|i| {
                (0..other.ncols())
                    .map(|j| (0..self.ncols()).map(|k| &self.rows[i][k] * &other.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(PolyMatrix { rows })
    }

    pub fn mul_vec(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        self.map(|p| p * c)
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        PolyMatrix { rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }

    pub fn substitute(&self, b: &BTreeMap<String, LaurentPoly>) -> Result<Self, ExactError> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|p| p.substitute(b)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix { rows })
    }

    /// Determinant by cofactor expansion; intended for small matrices.
    pub fn det(&self) -> Result<LaurentPoly, ExactError> {
        if self.nrows() != self.ncols() {
            return Err(ExactError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let idx: Vec<usize> = (0..self.nrows()).collect();
        Ok(self.det_rec(0, &idx))
    }

    fn det_rec(&self, row: usize, cols: &[usize]) -> LaurentPoly {
        if cols.is_empty() {
            return LaurentPoly::one();
        }
        let mut acc = LaurentPoly::zero();
        for (k, &c) in cols.iter().enumerate() {
            let e = &self.rows[row][c];
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = e * &self.det_rec(row + 1, &rest);
            acc = if k % 2 == 0 { acc + minor } else { acc - minor };
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.nrows())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
