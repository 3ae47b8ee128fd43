//! Line and rank-2 bundles on `Z_n = Tot O_{P^1}(-n)` and its collar.
//!
//! Charts `U = (z, u)` and `V = (xi, v)` glue by `xi = z^-1`, `v = z^n u`.
//! A transition matrix `T` (written in `z, u`) acts by `s_V = T s_U`, so the
//! line bundle `O(k)` has transition `z^-k` and twisting by `O(m)` multiplies
//! by `z^-m`. The canonical extension `[[z^j, p], [0, z^-j]]` sits in
//! `0 -> O(-j) -> E -> O(j) -> 0`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{rat, sparse_kernel, ExactError, LaurentPoly, PolyMatrix, Rational, SparseRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("degree window too small: {0}")]
    BoundTooSmall(String),
    #[error("no certificate within bound {0}")]
    NotFoundWithinBound(i64),
    #[error("invalid transition: {0}")]
    InvalidTransition(String),
    #[error("first Chern class is {0}, expected 0")]
    NonzeroChernClass(i64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub const Z: &str = "z";
pub const U: &str = "u";
pub const XI: &str = "xi";
pub const V: &str = "v";

pub fn zp(e: i64) -> LaurentPoly {
    LaurentPoly::monomial(rat(1), &[(Z, e)])
}

fn mono(c: Rational, pw: &[(&str, i64)]) -> LaurentPoly {
    LaurentPoly::monomial(c, pw)
}

/// The two canonical charts of `Z_n` (or of the collar, where `u` and `v`
/// are units).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceChartPair {
    pub n: u32,
    pub collar: bool,
}

impl SurfaceChartPair {
    pub fn new(n: u32, collar: bool) -> Self {
        SurfaceChartPair { n, collar }
    }

    /// `xi -> z^-1`, `v -> z^n u`.
    pub fn v_to_u(&self) -> BTreeMap<String, LaurentPoly> {
        BTreeMap::from([
            (XI.to_string(), zp(-1)),
            (V.to_string(), mono(rat(1), &[(Z, self.n as i64), (U, 1)])),
        ])
    }

    /// `z -> xi^-1`, `u -> xi^n v`.
    pub fn u_to_v(&self) -> BTreeMap<String, LaurentPoly> {
        BTreeMap::from([
            (Z.to_string(), mono(rat(1), &[(XI, -1)])),
            (U.to_string(), mono(rat(1), &[(XI, self.n as i64), (V, 1)])),
        ])
    }

    /// Going `U -> V -> U` returns `(z, u)`.
    pub fn gluing_round_trip(&self) -> bool {
        let back = self.v_to_u();
        [Z, U].iter().all(|s| {
            let there = LaurentPoly::var(s).substitute(&self.u_to_v()).expect("monomial");
            there.substitute(&back).expect("monomial") == LaurentPoly::var(s)
        })
    }

    pub fn to_u(&self, p: &LaurentPoly) -> Result<LaurentPoly, BundleError> {
        Ok(p.substitute(&self.v_to_u())?)
    }
}

/// `L_n(j)`, the restriction of `O(j)` to the collar; transition `z^-j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CollarLineBundle {
    pub n: u32,
    pub j: i64,
}

impl CollarLineBundle {
    pub fn transition(&self) -> LaurentPoly {
        zp(-self.j)
    }
}

/// `v^k z^-j u^-k = z^-r` with `j = r + k n`, `0 <= r < n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineNormalForm {
    pub n: u32,
    pub j: i64,
    pub residue: i64,
    pub k: i64,
    /// `v^k`, on the `V` side.
    pub left: LaurentPoly,
    /// `u^-k`, on the `U` side.
    pub right: LaurentPoly,
}

impl LineNormalForm {
    pub fn verify(&self) -> bool {
        let charts = SurfaceChartPair::new(self.n, true);
        match charts.to_u(&self.left) {
            Ok(l) => l * zp(-self.j) * self.right.clone() == zp(-self.residue),
            Err(_) => false,
        }
    }
}

impl fmt::Display for LineNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "L_{}({}) ~ L_{}({}): ({}) * (z^{}) * ({}) = z^{}",
            self.n, self.j, self.n, self.residue, self.left, -self.j, self.right, -self.residue
        )
    }
}

pub fn line_bundle_normal_form(n: u32, j: i64) -> Result<LineNormalForm, BundleError> {
    if n == 0 {
        return Err(BundleError::InvalidInput("n must be at least 1".into()));
    }
    let r = j.rem_euclid(n as i64);
    let k = (j - r) / n as i64;
    Ok(LineNormalForm {
        n,
        j,
        residue: r,
        k,
        left: mono(rat(1), &[(V, k)]),
        right: mono(rat(1), &[(U, -k)]),
    })
}

/// Tensor table of `L_n(0..n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PicardGroup {
    pub n: u32,
    pub table: Vec<Vec<i64>>,
    pub certificates_verified: bool,
}

impl PicardGroup {
    pub fn tensor(&self, a: i64, b: i64) -> i64 {
        self.table[a as usize][b as usize]
    }

    /// Order of `L_n(j)` in the table.
    pub fn order(&self, j: i64) -> usize {
        let mut acc = j.rem_euclid(self.n as i64);
        let mut k = 1;
        while acc != 0 {
            acc = self.tensor(acc, j);
            k += 1;
        }
        k
    }

    /// `L_n(1)` has order exactly `n`.
    pub fn is_cyclic_of_order_n(&self) -> bool {
        self.order(1) == self.n as usize
    }
}

pub fn picard_group(n: u32) -> Result<PicardGroup, BundleError> {
    let m = n as i64;
    let mut table = vec![vec![0; n as usize]; n as usize];
    let mut ok = true;
    for a in 0..m {
        for b in 0..m {
            let nf = line_bundle_normal_form(n, a + b)?;
            ok &= nf.verify();
            table[a as usize][b as usize] = nf.residue;
        }
    }
    Ok(PicardGroup { n, table, certificates_verified: ok })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollarTopology {
    pub n: u32,
    pub pi1: u32,
    pub h1: u32,
    pub h2: u32,
    pub steps: Vec<String>,
}

pub fn collar_topology(n: u32) -> CollarTopology {
    CollarTopology {
        n,
        pi1: n,
        h1: n,
        h2: n,
        steps: vec![
            format!("S^1-bundle over S^2 with clutching map z^{n} of degree {n}: pi1 = Z/{n}"),
            format!("abelianization: H1 = Z/{n}"),
            format!("Poincare duality: H2 = Z/{n}"),
            "exponential sheaf sequence: c1 : Pic -> H2, L(j) -> j mod n".to_string(),
        ],
    }
}

/// A transition matrix over the overlap of `U` and `V`, in `z, u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleTransition {
    pub n: u32,
    pub matrix: PolyMatrix,
}

impl BundleTransition {
    pub fn new(n: u32, matrix: PolyMatrix) -> Result<Self, BundleError> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(BundleError::InvalidTransition("matrix must be square and nonempty".into()));
        }
        for row in matrix.rows() {
            for p in row {
                if let Some(v) = p.vars().iter().find(|v| *v != Z && *v != U) {
                    return Err(BundleError::InvalidTransition(format!("unexpected variable {v}")));
                }
            }
        }
        Ok(BundleTransition { n, matrix })
    }

    /// `[[z^j, p], [0, z^-j]]`.
    pub fn canonical(n: u32, j: i64, p: LaurentPoly) -> Self {
        let m = PolyMatrix::from_rows(vec![vec![zp(j), p], vec![LaurentPoly::zero(), zp(-j)]]).expect("2x2");
        BundleTransition { n, matrix: m }
    }

    /// `diag(z^j, z^-j) = O(-j) + O(j)`.
    pub fn split(n: u32, j: i64) -> Self {
        Self::canonical(n, j, LaurentPoly::zero())
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    /// `u = 0`.
    pub fn restrict_to_line(&self) -> Result<PolyMatrix, BundleError> {
        let b = BTreeMap::from([(U.to_string(), LaurentPoly::zero())]);
        Ok(self.matrix.substitute(&b)?)
    }

    /// `c1` read from `det = c z^-c1`.
    pub fn first_chern_class(&self) -> Result<i64, BundleError> {
        let d = self.restrict_to_line()?.det()?;
        match d.as_monomial() {
            Some((_, pw)) if pw.keys().all(|k| k == Z) => Ok(-pw.get(Z).copied().unwrap_or(0)),
            _ => Err(BundleError::InvalidTransition(format!("determinant {d} is not a unit on the line"))),
        }
    }
}

/// `h^0(P^1, O(d))`.
pub fn h0_line(d: i64) -> usize {
    (d + 1).max(0) as usize
}

fn max_abs_exponent(m: &PolyMatrix) -> i64 {
    m.rows()
        .iter()
        .flatten()
        .map(|p| {
            let (lo, hi) = p.degree_range(Z);
            lo.abs().max(hi.abs())
        })
        .max()
        .unwrap_or(0)
}

fn h0_window(m0: &PolyMatrix, m: i64, w: i64) -> usize {
    let r = m0.nrows();
    let width = (w + 1) as usize;
    let mut rows: BTreeMap<(usize, i64), SparseRow> = BTreeMap::new();
    for i in 0..r {
        for c in 0..r {
            for (e, coef) in m0.get(i, c).terms() {
                let e = e.first().copied().unwrap_or(0);
                for a in 0..=w {
                    let p = e - m + a;
                    if p > 0 {
                        rows.entry((i, p)).or_default().push((c * width + a as usize, coef.clone()));
                    }
                }
            }
        }
    }
    let rows: Vec<SparseRow> = rows.into_values().collect();
    sparse_kernel(r * width, &rows).len()
}

/// Global sections of `E(m)` on the zero section `l`: polynomial `s_U` in
/// `z` with `z^-m M s_U` polynomial in `z^-1`.
pub fn h0_twist(m0: &PolyMatrix, m: i64) -> Result<usize, BundleError> {
    if m0.rows().iter().flatten().any(|p| p.vars().iter().any(|v| v != Z)) {
        return Err(BundleError::InvalidTransition("h0 needs a matrix in z alone".into()));
    }
    let w = max_abs_exponent(m0) + m.abs() + 1;
    let a = h0_window(m0, m, w);
    let b = h0_window(m0, m, 2 * w);
    if a != b {
        return Err(BundleError::BoundTooSmall(format!("window {w} gives {a}, window {} gives {b}", 2 * w)));
    }
    Ok(a)
}

/// The `j >= 0` with `E|_l = O(j) + O(-j)`.
pub fn splitting_type(bt: &BundleTransition) -> Result<i64, BundleError> {
    if bt.rank() != 2 {
        return Err(BundleError::InvalidTransition(format!("rank {} is not 2", bt.rank())));
    }
    let c1 = bt.first_chern_class()?;
    if c1 != 0 {
        return Err(BundleError::NonzeroChernClass(c1));
    }
    let m0 = bt.restrict_to_line()?;
    let j = h0_twist(&m0, -1)? as i64;
    for m in -j - 1..=j + 1 {
        let want = h0_line(j + m) + h0_line(-j + m);
        let got = h0_twist(&m0, m)?;
        if got != want {
            return Err(BundleError::InvalidTransition(format!(
                "h0 profile at twist {m} is {got}, splitting {j} predicts {want}"
            )));
        }
    }
    Ok(j)
}

/// One stage of `Phi = (x) O(-n) . Elm . Elm`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiStage {
    pub label: String,
    pub splitting: (i64, i64),
    pub c1: i64,
    pub collar_class: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiRecord {
    pub n: u32,
    pub j: i64,
    pub j_out: i64,
    pub stages: Vec<PhiStage>,
}

impl PhiRecord {
    pub fn preserves_collar_class(&self) -> bool {
        self.stages.windows(2).all(|w| w[0].collar_class == w[1].collar_class)
    }
}

/// Bookkeeping of `Phi`: each `Elm` along `l` raises `c1` by `n`; the
/// intermediate splittings are the ones of the elementary transformations.
pub fn phi_transform(n: u32, j: i64) -> Result<PhiRecord, BundleError> {
    if n == 0 || j < 0 {
        return Err(BundleError::InvalidInput(format!("phi needs n >= 1 and j >= 0, got n = {n}, j = {j}")));
    }
    let m = n as i64;
    let class = j.rem_euclid(m);
    let stage = |label: String, splitting, c1| PhiStage { label, splitting, c1, collar_class: class };
    let stages = vec![
        stage("E".into(), (-j, j), 0),
        stage(format!("Elm_O({j})(E)"), (-m, j + m), m),
        stage(format!("Elm_O({})(E')", j + m), (-j, j + 2 * m), 2 * m),
        stage(format!("E'' (x) O(-{m})"), (-j - m, j + m), 0),
    ];
    Ok(PhiRecord { n, j, j_out: j + m, stages })
}

/// `A` over `V` (in `xi, v`) and `B` over `U` (in `z, u`) with
/// `M2 B = A M1` and unit determinants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoCertificate {
    pub a: PolyMatrix,
    pub b: PolyMatrix,
    pub bound: i64,
}

impl IsoCertificate {
    pub fn verify(&self, n: u32, m1: &PolyMatrix, m2: &PolyMatrix) -> bool {
        let c = SurfaceChartPair::new(n, true);
        let unit = |d: &LaurentPoly, forbidden: &str| {
            d.as_monomial().is_some_and(|(_, pw)| pw.get(forbidden).copied().unwrap_or(0) == 0)
        };
        let (Ok(da), Ok(db)) = (self.a.det(), self.b.det()) else { return false };
        if !unit(&da, XI) || !unit(&db, Z) {
            return false;
        }
        let Ok(a_u) = self.a.substitute(&c.v_to_u()) else { return false };
        match (m2.mul(&self.b), a_u.mul(m1)) {
            (Ok(l), Ok(r)) => l == r,
            _ => false,
        }
    }
}

pub fn default_bound(n: u32, j1: i64, j2: i64) -> i64 {
    (n as i64).max(j1.abs() + j2.abs()) + 1
}

/// Searches `A` in the span of `xi^a v^b` and `B` in the span of `z^a u^b`,
/// `0 <= a <= D`, `|b| <= D`, solving `M2 B - A M1 = 0` exactly.
pub fn collar_iso_certificate(
    n: u32,
    m1: &PolyMatrix,
    m2: &PolyMatrix,
    bound: i64,
) -> Result<IsoCertificate, BundleError> {
    let r = m1.nrows();
    if m2.nrows() != r || m1.ncols() != r || m2.ncols() != r {
        return Err(BundleError::InvalidTransition("matrices of different shape".into()));
    }
    let d = bound;
    let basis: Vec<(i64, i64)> = (0..=d).flat_map(|a| (-d..=d).map(move |b| (a, b))).collect();
    let nb = basis.len();
    let a_col = |i: usize, l: usize, t: usize| (i * r + l) * nb + t;
    let b_col = |l: usize, k: usize, t: usize| r * r * nb + (l * r + k) * nb + t;
    let nm = n as i64;
    let terms = |p: &LaurentPoly| -> Vec<(i64, i64, Rational)> {
        p.named_terms()
            .into_iter()
            .map(|(m, c)| (m.get(Z).copied().unwrap_or(0), m.get(U).copied().unwrap_or(0), c))
            .collect()
    };
    let mut rows: BTreeMap<(usize, usize, i64, i64), SparseRow> = BTreeMap::new();
    for i in 0..r {
        for k in 0..r {
            for l in 0..r {
                for (ez, eu, c) in terms(m2.get(i, l)) {
                    for (t, &(a, b)) in basis.iter().enumerate() {
                        rows.entry((i, k, ez + a, eu + b)).or_default().push((b_col(l, k, t), c.clone()));
                    }
                }
                for (ez, eu, c) in terms(m1.get(l, k)) {
                    for (t, &(a, b)) in basis.iter().enumerate() {
                        // xi^a v^b = z^(n b - a) u^b
                        rows.entry((i, k, ez + nm * b - a, eu + b)).or_default().push((a_col(i, l, t), -c.clone()));
                    }
                }
            }
        }
    }
    let rows: Vec<SparseRow> = rows.into_values().collect();
    let kernel = sparse_kernel(2 * r * r * nb, &rows);
    let build = |vecs: &[&SparseRow]| -> IsoCertificate {
        let mut a = PolyMatrix::zeros(r, r);
        let mut b = PolyMatrix::zeros(r, r);
        for v in vecs {
            for (col, c) in v.iter() {
                let (which, rest) = (col / (r * r * nb), col % (r * r * nb));
                let (ent, t) = (rest / nb, rest % nb);
                let (x, y) = (ent / r, ent % r);
                let (e0, e1) = basis[t];
                if which == 0 {
                    let add = mono(c.clone(), &[(XI, e0), (V, e1)]);
                    a.set(x, y, a.get(x, y) + &add);
                } else {
                    let add = mono(c.clone(), &[(Z, e0), (U, e1)]);
                    b.set(x, y, b.get(x, y) + &add);
                }
            }
        }
        IsoCertificate { a, b, bound }
    };
    for v in &kernel {
        let cert = build(&[v]);
        if cert.verify(n, m1, m2) {
            return Ok(cert);
        }
    }
    let all: Vec<&SparseRow> = kernel.iter().collect();
    let cert = build(&all);
    if cert.verify(n, m1, m2) {
        return Ok(cert);
    }
    if kernel.len() <= 64 {
        for i in 0..kernel.len() {
            for k in i + 1..kernel.len() {
                let cert = build(&[&kernel[i], &kernel[k]]);
                if cert.verify(n, m1, m2) {
                    return Ok(cert);
                }
            }
        }
    }
    Err(BundleError::NotFoundWithinBound(bound))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IsoVerdict {
    Isomorphic(IsoCertificate),
    /// Residues of `j` mod `n` differ, so the first Chern classes on the
    /// collar differ.
    NonIsomorphic { residue1: i64, residue2: i64 },
    Inconclusive { bound: i64 },
}

/// Line bundles `L_n(j1)`, `L_n(j2)`.
pub fn collar_line_iso(n: u32, j1: i64, j2: i64, bound: Option<i64>) -> Result<IsoVerdict, BundleError> {
    let d = bound.unwrap_or_else(|| default_bound(n, j1, j2));
    let m1 = PolyMatrix::from_rows(vec![vec![zp(-j1)]])?;
    let m2 = PolyMatrix::from_rows(vec![vec![zp(-j2)]])?;
    match collar_iso_certificate(n, &m1, &m2, d) {
        Ok(c) => Ok(IsoVerdict::Isomorphic(c)),
        Err(BundleError::NotFoundWithinBound(_)) => {
            let (r1, r2) = (j1.rem_euclid(n as i64), j2.rem_euclid(n as i64));
            if r1 != r2 {
                Ok(IsoVerdict::NonIsomorphic { residue1: r1, residue2: r2 })
            } else {
                Ok(IsoVerdict::Inconclusive { bound: d })
            }
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ModuliDimension {
    Dim(i64),
    Empty { formula_value: i64, note: String },
}

/// `2j - n - 2`, or `Empty` when negative.
pub fn moduli_dimension(n: u32, j: i64) -> Result<ModuliDimension, BundleError> {
    if n == 0 || j < 0 {
        return Err(BundleError::InvalidInput(format!("need n >= 1 and j >= 0, got n = {n}, j = {j}")));
    }
    let d = 2 * j - n as i64 - 2;
    Ok(if d >= 0 {
        ModuliDimension::Dim(d)
    } else {
        ModuliDimension::Empty {
            formula_value: d,
            note: format!("2j - n - 2 = {d} < 0: no irreducible instantons of charge {j} on Z_{n}"),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(e: i64) -> LaurentPoly {
        zp(e)
    }

    #[test]
    fn gluing_is_invertible() {
        for n in 1..5 {
            assert!(SurfaceChartPair::new(n, false).gluing_round_trip());
        }
        let c = SurfaceChartPair::new(3, true);
        assert_eq!(c.to_u(&LaurentPoly::var(XI)).unwrap(), z(-1));
    }

    #[test]
    fn normal_forms() {
        let a = line_bundle_normal_form(3, 5).unwrap();
        assert_eq!((a.residue, a.k), (2, 1));
        assert!(a.verify());
        assert_eq!(a.left, LaurentPoly::var(V));
        let b = line_bundle_normal_form(4, -3).unwrap();
        assert_eq!((b.residue, b.k), (1, -1));
        assert!(b.verify());
        let c = line_bundle_normal_form(7, 0).unwrap();
        assert_eq!((c.residue, c.k), (0, 0));
        assert!(c.left.as_constant().is_some());
    }

    #[test]
    fn picard_tables() {
        let g = picard_group(3).unwrap();
        assert_eq!(g.tensor(2, 2), 1);
        assert!(g.certificates_verified && g.is_cyclic_of_order_n());
        for j in 0..3 {
            assert_eq!(g.tensor(j, (3 - j) % 3), 0);
        }
        let t = picard_group(1).unwrap();
        assert_eq!(t.table, vec![vec![0]]);
    }

    #[test]
    fn topology() {
        let t = collar_topology(4);
        assert_eq!((t.pi1, t.h1, t.h2), (4, 4, 4));
        assert_eq!(collar_topology(1).pi1, 1);
    }

    #[test]
    fn h0_of_split_bundles() {
        let m = BundleTransition::split(2, 1).restrict_to_line().unwrap();
        assert_eq!(h0_twist(&m, -1).unwrap(), 1);
        assert_eq!(h0_twist(&m, 0).unwrap(), 2);
        for j in 0..4 {
            let m = BundleTransition::split(2, j).restrict_to_line().unwrap();
            for t in -5..=5 {
                assert_eq!(h0_twist(&m, t).unwrap(), h0_line(j + t) + h0_line(-j + t), "j={j} m={t}");
            }
        }
    }

    #[test]
    fn splitting_examples() {
        for j in 0..5 {
            assert_eq!(splitting_type(&BundleTransition::split(1, j)).unwrap(), j);
        }
        let zu = LaurentPoly::monomial(rat(1), &[(Z, 1), (U, 1)]);
        assert_eq!(splitting_type(&BundleTransition::canonical(1, 2, zu)).unwrap(), 2);
        assert_eq!(splitting_type(&BundleTransition::canonical(1, 2, z(1))).unwrap(), 1);
        let bad = BundleTransition::new(1, PolyMatrix::diagonal(vec![z(1), z(1)])).unwrap();
        assert_eq!(splitting_type(&bad), Err(BundleError::NonzeroChernClass(-2)));
    }

    #[test]
    fn phi_bookkeeping() {
        let p = phi_transform(2, 1).unwrap();
        assert_eq!(p.j_out, 3);
        assert!(p.preserves_collar_class());
        assert_eq!(p.stages.last().unwrap().c1, 0);
        assert_eq!(p.stages[2].c1, 4);
        let q = phi_transform(5, 0).unwrap();
        assert_eq!((q.j_out, q.stages[0].collar_class), (5, 0));
        let twice = phi_transform(3, phi_transform(3, 1).unwrap().j_out).unwrap();
        assert_eq!(twice.j_out, 7);
    }

    #[test]
    fn rank_one_certificates() {
        let m1 = PolyMatrix::from_rows(vec![vec![z(-2)]]).unwrap();
        let m2 = PolyMatrix::from_rows(vec![vec![z(1)]]).unwrap();
        let c = collar_iso_certificate(3, &m1, &m2, 1).unwrap();
        assert!(c.verify(3, &m1, &m2));
        assert_eq!(c.a.get(0, 0).as_monomial().unwrap().1, BTreeMap::from([(V.to_string(), 1)]));
        let same = collar_iso_certificate(3, &m1, &m1, 1).unwrap();
        assert!(same.verify(3, &m1, &m1));
        assert!(matches!(collar_line_iso(3, 1, 2, None).unwrap(), IsoVerdict::NonIsomorphic { residue1: 1, residue2: 2 }));
    }

    #[test]
    fn rank_two_identity_certificate() {
        let m = BundleTransition::split(2, 1).matrix;
        let c = collar_iso_certificate(2, &m, &m, 1).unwrap();
        assert!(c.verify(2, &m, &m));
    }

    #[test]
    fn moduli_dims() {
        assert_eq!(moduli_dimension(2, 3).unwrap(), ModuliDimension::Dim(2));
        assert_eq!(moduli_dimension(2, 2).unwrap(), ModuliDimension::Dim(0));
        assert!(matches!(moduli_dimension(5, 1).unwrap(), ModuliDimension::Empty { formula_value: -5, .. }));
    }
}
