use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::rational::{rat, Rational};
use super::ExactError;

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    #[serde(serialize_with = "ser_entries")]
    data: Vec<Rational>,
}

fn ser_entries<S: serde::Serializer>(d: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(d.iter().map(|r| r.to_string()))
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ExactError::DimensionMismatch("ragged rows".into()));
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Fraction-free row echelon form over the integers.
    ///
    /// Each row is first cleared of denominators; elimination uses
    /// cross-multiplication followed by division by the row content, so every
    /// intermediate entry stays an integer. Returns the echelon rows (only the
    /// nonzero ones) and the pivot column of each.
    fn integer_echelon(&self) -> (Vec<Vec<BigInt>>, Vec<usize>) {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows).map(|i| integer_row(self.row(i))).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.len() {
                break;
            }
            // smallest nonzero pivot keeps growth down
            let Some(p) = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()))
            else {
                continue;
            };
            m.swap(r, p);
            let (top, rest) = m.split_at_mut(r + 1);
            let pivot_row = &top[r];
            for row in rest.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let g = pivot_row[c].gcd(&row[c]);
                let a = &pivot_row[c] / &g;
                let b = &row[c] / &g;
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x = &a * &*x - &b * y;
                }
                reduce_content(row);
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.integer_echelon().1.len()
    }

    /// Reduced row echelon form (nonzero rows only) and pivot columns.
    pub fn rref(&self) -> (Vec<Vec<Rational>>, Vec<usize>) {
        let (ech, pivots) = self.integer_echelon();
        let mut rows: Vec<Vec<Rational>> = ech
            .into_iter()
            .zip(&pivots)
            .map(|(row, &p)| {
                let lead = Rational::from_integer(row[p].clone());
                row.into_iter().map(|x| Rational::from_integer(x) / &lead).collect()
            })
            .collect();
        for k in (0..rows.len()).rev() {
            let p = pivots[k];
            for i in 0..k {
                let f = rows[i][p].clone();
                if f.is_zero() {
                    continue;
                }
                let (upper, lower) = rows.split_at_mut(k);
                for (x, y) in upper[i].iter_mut().zip(&lower[0]) {
                    *x -= &f * y;
                }
            }
        }
        (rows, pivots)
    }

    /// Basis of the right kernel `{x : A x = 0}`; one vector per free column,
    /// carrying a 1 in that column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (rows, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in rows.iter().zip(&pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `A x = b` (free variables set to zero).
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>, ExactError> {
        if b.len() != self.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "rhs has {} entries, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug: Vec<Vec<Rational>> = (0..self.rows)
            .map(|i| self.row(i).iter().cloned().chain(std::iter::once(b[i].clone())).collect())
            .collect();
        let (rows, pivots) = RatMatrix::from_rows(aug)?.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(ExactError::InconsistentSystem);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in rows.iter().zip(&pivots) {
            x[p] = row[self.cols].clone();
        }
        Ok(x)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Rational, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        // scale rows to integers, remember the scale
        let mut scale = Rational::one();
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale /= Rational::from_integer(l.clone());
                row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        Ok(Rational::from_integer(sign * &m[n - 1][n - 1]) * scale)
    }

    /// Leading principal minors `det(A[..k, ..k])` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Result<Vec<Rational>, ExactError> {
        (1..=self.rows.min(self.cols))
            .map(|k| {
                let sub: Vec<Vec<Rational>> = (0..k).map(|i| self.row(i)[..k].to_vec()).collect();
                RatMatrix::from_rows(sub)?.det()
            })
            .collect()
    }
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect();
    reduce_content(&mut out);
    out
}

fn reduce_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Sparse equation: `(column, coefficient)` pairs.
pub type SparseRow = Vec<(usize, Rational)>;

/// Splits a sparse system into independent dense blocks.
///
/// Columns are grouped into connected components (two columns are linked
/// when some row mentions both). Each block carries its columns and, when
/// some row touches it, the dense matrix of those rows.
fn blocks(ncols: usize, rows: &[SparseRow]) -> Vec<(Vec<usize>, Option<RatMatrix>)> {
    let mut parent: Vec<usize> = (0..ncols).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for row in rows {
        let mut it = row.iter().filter(|(_, c)| !c.is_zero()).map(|(j, _)| *j);
        if let Some(first) = it.next() {
            for j in it {
                let (a, b) = (find(&mut parent, first), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut comp_cols: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for j in 0..ncols {
        let r = find(&mut parent, j);
        comp_cols.entry(r).or_default().push(j);
    }
    let mut comp_rows: BTreeMap<usize, Vec<&SparseRow>> = BTreeMap::new();
    for row in rows {
        if let Some((j, _)) = row.iter().find(|(_, c)| !c.is_zero()) {
            let r = find(&mut parent, *j);
            comp_rows.entry(r).or_default().push(row);
        }
    }
    comp_cols
        .into_iter()
        .map(|(root, cols)| {
            let m = comp_rows.get(&root).map(|eqs| {
                let mut m = RatMatrix::zeros(eqs.len(), cols.len());
                for (i, row) in eqs.iter().enumerate() {
                    for (j, c) in row.iter() {
                        let k = cols.binary_search(j).expect("column in component");
                        let v = m.get(i, k) + c;
                        m.set(i, k, v);
                    }
                }
                m
            });
            (cols, m)
        })
        .collect()
}

/// Kernel of a sparse homogeneous system, solved block by block. Columns
/// no row mentions are free; each returned vector is supported on a single
/// block.
pub fn sparse_kernel(ncols: usize, rows: &[SparseRow]) -> Vec<SparseRow> {
    let mut out = Vec::new();
    for (cols, m) in blocks(ncols, rows) {
        match m {
            None => out.extend(cols.iter().map(|&j| vec![(j, Rational::one())])),
            Some(m) => {
                for v in m.kernel() {
                    out.push(
                        v.into_iter()
                            .enumerate()
                            .filter(|(_, x)| !x.is_zero())
                            .map(|(k, x)| (cols[k], x))
                            .collect(),
                    );
                }
            }
        }
    }
    out
}

/// Pivot columns of the row space of a sparse system, sorted.
pub fn sparse_pivots(ncols: usize, rows: &[SparseRow]) -> Vec<usize> {
    let mut out: Vec<usize> = blocks(ncols, rows)
        .into_iter()
        .filter_map(|(cols, m)| m.map(|m| m.rref().1.into_iter().map(|k| cols[k]).collect::<Vec<_>>()))
        .flatten()
        .collect();
    out.sort_unstable();
    out
}
