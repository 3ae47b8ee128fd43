//! Extension classes `Ext^1(O(j), O(-j)) = H^1(Z_n, O(-2j))` on the
//! two-chart cover and the one-parameter families
//! `[[z^J, tau p], [0, z^-J]]` that degenerate to the split bundle at
//! `tau = 0`.
//!
//! A class is an overlap function `p(z, u)`, Laurent in `z` and polynomial
//! in `u`, taken modulo `z^j f(z, u) + z^-j g(xi, v)`. Both kinds of
//! coboundary are monomial, so reduction keeps exactly the monomials that no
//! coboundary reaches.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::bundles::{splitting_type, zp, BundleError, BundleTransition, U, Z};
use crate::exact::{rat, sparse_pivots, LaurentPoly, PolyMatrix, Rational, SparseRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformError {
    #[error("ext1 basis changes when the cutoff is doubled (n = {n}, j = {j}, cutoff = {cutoff})")]
    WindowUnstable { n: u32, j: i64, cutoff: i64 },
    #[error("class is not generic: {0}")]
    ClassNotGeneric(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

pub const TAU: &str = "tau";

pub fn default_cutoff(j: i64) -> i64 {
    3.max(2 * j)
}

/// `(z-exponent, u-exponent)` of a basis monomial.
pub type Monomial = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ext1Basis {
    pub n: u32,
    pub j: i64,
    pub cutoff: i64,
    pub monomials: Vec<Monomial>,
}

impl Ext1Basis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn polys(&self) -> Vec<LaurentPoly> {
        self.monomials.iter().map(|&(a, b)| mono(rat(1), a, b)).collect()
    }
}

fn mono(c: Rational, a: i64, b: i64) -> LaurentPoly {
    LaurentPoly::monomial(c, &[(Z, a), (U, b)])
}

/// Window monomials that survive modulo coboundaries at cutoff `c`.
fn surviving(n: u32, j: i64, c: i64) -> Vec<Monomial> {
    let n = n as i64;
    let (zlo, zhi) = (-2 * j - n * c, 2 * j + n * c);
    let width = (zhi - zlo + 1) as usize;
    let col = |a: i64, b: i64| -> Option<usize> {
        ((zlo..=zhi).contains(&a) && (0..=c).contains(&b)).then(|| b as usize * width + (a - zlo) as usize)
    };
    let mut rows: Vec<SparseRow> = Vec::new();
    for b in 0..=c {
        // z^j z^a u^b from the U side
        for a in 0..=zhi - j {
            if let Some(k) = col(j + a, b) {
                rows.push(vec![(k, rat(1))]);
            }
        }
        // z^-j xi^e v^b = z^(n b - j - e) u^b from the V side
        let top = n * b - j;
        for e in 0..=(top - zlo).max(-1) {
            if let Some(k) = col(top - e, b) {
                rows.push(vec![(k, rat(1))]);
            }
        }
    }
    let ncols = width * (c as usize + 1);
    let pivots: BTreeSet<usize> = sparse_pivots(ncols, &rows).into_iter().collect();
    (0..ncols)
        .filter(|k| !pivots.contains(k))
        .map(|k| ((k % width) as i64 + zlo, (k / width) as i64))
        .collect()
}

/// Monomial basis of `H^1(Z_n, O(-2j))`, checked stable under doubling the
/// cutoff.
pub fn ext1_basis(n: u32, j: i64, cutoff: Option<i64>) -> Result<Ext1Basis, DeformError> {
    if n == 0 || j < 0 {
        return Err(DeformError::InvalidInput(format!("need n >= 1 and j >= 0, got n = {n}, j = {j}")));
    }
    let c = cutoff.unwrap_or_else(|| default_cutoff(j));
    if c < 0 {
        return Err(DeformError::InvalidInput(format!("cutoff {c} is negative")));
    }
    let small = surviving(n, j, c);
    if small != surviving(n, j, 2 * c.max(1)) {
        return Err(DeformError::WindowUnstable { n, j, cutoff: c });
    }
    Ok(Ext1Basis { n, j, cutoff: c, monomials: small })
}

/// A reduced representative together with its coordinates in
/// `ext1_basis(n, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtClass {
    pub n: u32,
    pub j: i64,
    pub p: LaurentPoly,
    #[serde(serialize_with = "ser_rats")]
    pub coords: Vec<Rational>,
}

fn ser_rats<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl ExtClass {
    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }
}

fn split_terms(p: &LaurentPoly) -> Result<Vec<(Monomial, Rational)>, DeformError> {
    p.named_terms()
        .into_iter()
        .map(|(m, c)| {
            if let Some(v) = m.keys().find(|v| *v != Z && *v != U) {
                return Err(DeformError::InvalidInput(format!("unexpected variable {v} in {p}")));
            }
            let (a, b) = (m.get(Z).copied().unwrap_or(0), m.get(U).copied().unwrap_or(0));
            if b < 0 {
                return Err(DeformError::InvalidInput(format!("{p} has a pole along u = 0")));
            }
            Ok(((a, b), c))
        })
        .collect()
}

/// Reduces `p` modulo coboundaries for the pair `(n, j)`.
pub fn reduce(n: u32, j: i64, p: &LaurentPoly) -> Result<ExtClass, DeformError> {
    let terms = split_terms(p)?;
    let basis = ext1_basis(n, j, None)?;
    let index: BTreeMap<Monomial, usize> = basis.monomials.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut coords = vec![rat(0); basis.dim()];
    let mut kept = LaurentPoly::zero();
    for ((a, b), c) in terms {
        if let Some(&i) = index.get(&(a, b)) {
            coords[i] = c.clone();
            kept = kept + mono(c, a, b);
        } else if b <= basis.cutoff && (a >= j || a <= n as i64 * b - j) {
            continue;
        } else {
            return Err(DeformError::InvalidInput(format!("monomial z^{a} u^{b} lies outside the cutoff window")));
        }
    }
    Ok(ExtClass { n, j, p: kept, coords })
}

/// `H^1(O(-2j)) -> H^1(O(-2j-2s))`, keeping the representative.
pub fn include_class(p: &ExtClass, s: i64) -> Result<ExtClass, DeformError> {
    if s < 0 {
        return Err(DeformError::InvalidInput(format!("inclusion step {s} is negative")));
    }
    reduce(p.n, p.j + s, &p.p)
}

/// `[[z^J, tau p], [0, z^-J]]` with `J = k + s`, where `k` is the
/// splitting type of the extension `p` itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeformationFamily {
    pub n: u32,
    /// Splitting type away from `tau = 0`.
    pub j: i64,
    pub s: i64,
    pub class: ExtClass,
    pub matrix: PolyMatrix,
}

impl DeformationFamily {
    pub fn at(&self, tau: &Rational) -> BundleTransition {
        let b = BTreeMap::from([(TAU.to_string(), LaurentPoly::constant(tau.clone()))]);
        let m = self.matrix.substitute(&b).expect("polynomial in tau");
        BundleTransition::new(self.n, m).expect("entries in z, u")
    }
}

pub fn deformation_family(p: &ExtClass, s: i64) -> Result<DeformationFamily, DeformError> {
    if s < 1 {
        return Err(DeformError::InvalidInput(format!("family step s = {s} must be positive")));
    }
    if p.is_zero() {
        return Err(DeformError::ClassNotGeneric("zero class".into()));
    }
    let k = splitting_type(&BundleTransition::canonical(p.n, p.j, p.p.clone()))?;
    let big_j = k + s;
    if big_j < p.j {
        return Err(DeformError::ClassNotGeneric(format!(
            "class lives at window {} beyond the family window {big_j}",
            p.j
        )));
    }
    let class = include_class(p, big_j - p.j)?;
    let entry = class.p.clone() * LaurentPoly::var(TAU);
    let matrix = PolyMatrix::from_rows(vec![vec![zp(big_j), entry], vec![LaurentPoly::zero(), zp(-big_j)]])
        .expect("2x2");
    let fam = DeformationFamily { n: p.n, j: k, s, class, matrix };
    let at_one = splitting_type(&fam.at(&rat(1)))?;
    if at_one != k {
        return Err(DeformError::ClassNotGeneric(format!("splitting {at_one} at tau = 1, expected {k}")));
    }
    Ok(fam)
}

/// The split family `diag(z^(j+s), z^-(j+s))`.
pub fn split_family(n: u32, j: i64, s: i64) -> DeformationFamily {
    let big_j = j + s;
    DeformationFamily {
        n,
        j: big_j,
        s,
        class: ExtClass { n, j: big_j, p: LaurentPoly::zero(), coords: Vec::new() },
        matrix: BundleTransition::split(n, big_j).matrix,
    }
}

pub fn family_splitting_profile(fam: &DeformationFamily, taus: &[Rational]) -> Result<Vec<i64>, DeformError> {
    taus.iter().map(|t| Ok(splitting_type(&fam.at(t))?)).collect()
}

/// A class whose family has splitting `j` off `tau = 0` and `j + s` at
/// `tau = 0`, searched among basis monomials of windows `j+1..=j+s`.
pub fn generic_class(n: u32, j: i64, s: i64) -> Result<ExtClass, DeformError> {
    for w in j + 1..=j + s {
        for p in ext1_basis(n, w, None)?.polys() {
            let c = reduce(n, w, &p)?;
            match deformation_family(&c, s) {
                Ok(f) if f.j == j => return Ok(c),
                Ok(_) | Err(DeformError::ClassNotGeneric(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Err(DeformError::ClassNotGeneric(format!("no basis monomial works for n = {n}, j = {j}, s = {s}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext1_small() {
        assert_eq!(ext1_basis(3, 0, None).unwrap().dim(), 0);
        assert_eq!(ext1_basis(1, 1, None).unwrap().monomials, vec![(0, 0)]);
        assert_eq!(ext1_basis(2, 1, None).unwrap().monomials, vec![(0, 0)]);
        assert_eq!(ext1_basis(1, 2, None).unwrap().monomials, vec![(-1, 0), (0, 0), (1, 0), (0, 1), (1, 1), (1, 2)]);
    }

    #[test]
    fn ext1_dimension_formula() {
        // sum over b >= 0 of max(0, 2j - 1 - n b)
        for n in 1..=4u32 {
            for j in 0..=3i64 {
                let want: i64 = (0..=2 * j).map(|b| (2 * j - 1 - n as i64 * b).max(0)).sum();
                assert_eq!(ext1_basis(n, j, None).unwrap().dim() as i64, want, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn too_small_cutoff_is_reported() {
        assert!(matches!(ext1_basis(1, 3, Some(1)), Err(DeformError::WindowUnstable { .. })));
    }

    #[test]
    fn reduction_and_inclusion() {
        let z = |e: i64| zp(e);
        let c = reduce(1, 2, &(z(1) + z(5) + z(-7))).unwrap();
        assert_eq!(c.p, z(1));
        let zero = reduce(2, 1, &LaurentPoly::zero()).unwrap();
        assert!(include_class(&zero, 2).unwrap().is_zero());
        let one = reduce(1, 1, &LaurentPoly::one()).unwrap();
        let up = include_class(&one, 1).unwrap();
        assert!(up.coords.iter().any(|x| *x != rat(0)));
        assert_eq!(include_class(&include_class(&one, 1).unwrap(), 1).unwrap(), include_class(&one, 2).unwrap());
    }

    #[test]
    fn family_endpoints() {
        let p = generic_class(1, 1, 1).unwrap();
        let f = deformation_family(&p, 1).unwrap();
        let prof = family_splitting_profile(&f, &[rat(0), rat(1), rat(5)]).unwrap();
        assert_eq!(prof, vec![2, 1, 1]);
        let split = split_family(2, 1, 1);
        assert_eq!(family_splitting_profile(&split, &[rat(0), rat(1)]).unwrap(), vec![2, 2]);
    }

    #[test]
    fn zero_class_is_not_generic() {
        let zero = reduce(2, 1, &LaurentPoly::zero()).unwrap();
        assert!(matches!(deformation_family(&zero, 1), Err(DeformError::ClassNotGeneric(_))));
    }
}
