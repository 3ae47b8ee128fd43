use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{join, rat, split, Rational};
use super::ExactError;

/// Sparse multivariate Laurent polynomial with rational coefficients.
///
/// The representation is canonical: variables are sorted by [`var_order`],
/// only variables that actually occur in some term are kept, and no zero
/// coefficient is stored. Structural equality is therefore mathematical
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i64>, Rational>,
}

/// Orders variable names by alphabetic stem, then numeric suffix, so that
/// `x2 < x10`.
pub(crate) fn var_order(a: &str, b: &str) -> Ordering {
    fn key(s: &str) -> (&str, Option<u64>, &str) {
        let stem_end = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (stem, digits) = s.split_at(stem_end);
        (stem, digits.parse().ok(), s)
    }
    key(a).cmp(&key(b))
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        LaurentPoly { vars: Vec::new(), terms }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(rat(c))
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(Rational::one(), &[(name, 1)])
    }

    /// `coef * prod(name^exp)`. Repeated names multiply.
    pub fn monomial(coef: Rational, powers: &[(&str, i64)]) -> Self {
        if coef.is_zero() {
            return Self::zero();
        }
        let mut acc: BTreeMap<&str, i64> = BTreeMap::new();
        for &(v, e) in powers {
            *acc.entry(v).or_insert(0) += e;
        }
        let mut vars: Vec<String> = acc.iter().filter(|(_, &e)| e != 0).map(|(v, _)| v.to_string()).collect();
        vars.sort_by(|a, b| var_order(a, b));
        let exp = vars.iter().map(|v| acc[v.as_str()]).collect();
        let mut terms = BTreeMap::new();
        terms.insert(exp, coef);
        LaurentPoly { vars, terms }
    }

    /// Builds a polynomial from `(coefficient, powers)` pairs.
    pub fn from_terms<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Vec<(&'a str, i64)>)>,
    {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (c, p)| acc + Self::monomial(c, &p))
    }

    /// Variables occurring in the polynomial, in canonical order.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over `(exponents, coefficient)` with exponents aligned to
    /// [`Self::vars`], in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Terms as named powers, handy when the caller has its own variable list.
    pub fn named_terms(&self) -> Vec<(BTreeMap<String, i64>, Rational)> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let m = self.vars.iter().cloned().zip(e.iter().copied()).filter(|(_, x)| *x != 0).collect();
                (m, c.clone())
            })
            .collect()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 if self.vars.is_empty() => self.terms.values().next().cloned(),
            _ => None,
        }
    }

    /// Returns `(coefficient, powers)` if the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(Rational, BTreeMap<String, i64>)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.named_terms().pop().map(|(m, c)| (c, m))
    }

    /// Exponent range `(min, max)` of `var` over all terms; `(0, 0)` if absent.
    pub fn degree_range(&self, var: &str) -> (i64, i64) {
        match self.vars.iter().position(|v| v == var) {
            None => (0, 0),
            Some(i) => {
                let mut it = self.terms.keys().map(|e| e[i]);
                let first = it.next().unwrap_or(0);
                it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)))
            }
        }
    }

    /// Coefficient of the monomial with the given powers (missing names are 0).
    pub fn coefficient(&self, powers: &[(&str, i64)]) -> Rational {
        let mut want = vec![0i64; self.vars.len()];
        for &(v, e) in powers {
            match self.vars.iter().position(|x| x == v) {
                Some(i) => want[i] += e,
                None if e != 0 => return Rational::zero(),
                None => {}
            }
        }
        self.terms.get(&want).cloned().unwrap_or_else(Rational::zero)
    }

    fn from_raw(vars: Vec<String>, terms: BTreeMap<Vec<i64>, Rational>) -> Self {
        let mut p = LaurentPoly { vars, terms };
        p.normalize();
        p
    }

    /// Drops zero coefficients and unused variables.
    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|e| e[i] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            return;
        }
        self.vars = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = std::mem::take(&mut self.terms);
        for (e, c) in terms {
            let e: Vec<i64> = e.into_iter().zip(&used).filter(|(_, &u)| u).map(|(x, _)| x).collect();
            self.terms.insert(e, c);
        }
    }

    /// Union of two variable lists plus index maps into it.
    fn merge_vars(a: &[String], b: &[String]) -> (Vec<String>, Vec<usize>, Vec<usize>) {
        let mut all: Vec<String> = a.iter().chain(b).cloned().collect::<BTreeSet<_>>().into_iter().collect();
        all.sort_by(|x, y| var_order(x, y));
        let idx = |src: &[String]| src.iter().map(|v| all.iter().position(|w| w == v).unwrap()).collect();
        let (ia, ib) = (idx(a), idx(b));
        (all, ia, ib)
    }

    fn lift(e: &[i64], map: &[usize], width: usize) -> Vec<i64> {
        let mut out = vec![0; width];
        for (x, &i) in e.iter().zip(map) {
            out[i] = *x;
        }
        out
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        if self.vars == other.vars {
            let mut terms = self.terms.clone();
            for (e, c) in &other.terms {
                let slot = terms.entry(e.clone()).or_insert_with(Rational::zero);
                if sign > 0 {
                    *slot += c;
                } else {
                    *slot -= c;
                }
            }
            return Self::from_raw(self.vars.clone(), terms);
        }
        let (vars, ia, ib) = Self::merge_vars(&self.vars, &other.vars);
        let w = vars.len();
        let mut terms: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(Self::lift(e, &ia, w), c.clone());
        }
        for (e, c) in &other.terms {
            let slot = terms.entry(Self::lift(e, &ib, w)).or_insert_with(Rational::zero);
            if sign > 0 {
                *slot += c;
            } else {
                *slot -= c;
            }
        }
        Self::from_raw(vars, terms)
    }

    fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (vars, ia, ib) = Self::merge_vars(&self.vars, &other.vars);
        let w = vars.len();
        let lb: Vec<(Vec<i64>, &Rational)> = other.terms.iter().map(|(e, c)| (Self::lift(e, &ib, w), c)).collect();
        let mut terms: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let ea = Self::lift(ea, &ia, w);
            for (eb, cb) in &lb {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert_with(Rational::zero) += ca * *cb;
            }
        }
        Self::from_raw(vars, terms)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Inverse of a monomial; `None` for zero or multi-term polynomials.
    pub fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let mut terms = BTreeMap::new();
        terms.insert(e.iter().map(|x| -x).collect(), c.recip());
        Some(LaurentPoly { vars: self.vars.clone(), terms })
    }

    /// Integer power; negative exponents require a monomial.
    pub fn pow(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Some(acc)
    }

    /// Replaces variables by polynomials. Unbound variables are kept.
    pub fn substitute(&self, bindings: &BTreeMap<String, LaurentPoly>) -> Result<Self, ExactError> {
        let mut cache: BTreeMap<(usize, i64), LaurentPoly> = BTreeMap::new();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut term = Self::constant(c.clone());
            for (i, (&x, v)) in e.iter().zip(&self.vars).enumerate() {
                if x == 0 {
                    continue;
                }
                let factor = match bindings.get(v) {
                    None => Self::monomial(Rational::one(), &[(v.as_str(), x)]),
                    Some(b) => {
                        if let Some(f) = cache.get(&(i, x)) {
                            f.clone()
                        } else {
                            let f = if x < 0 && b.is_zero() {
                                return Err(ExactError::ZeroIntoNegativePower(v.clone()));
                            } else {
                                b.pow(x).ok_or_else(|| ExactError::NotInvertible(v.clone()))?
                            };
                            cache.insert((i, x), f.clone());
                            f
                        }
                    }
                };
                term = &term * &factor;
                if term.is_zero() {
                    break;
                }
            }
            out = out + term;
        }
        Ok(out)
    }

    /// Substitutes a single variable.
    pub fn subs(&self, var: &str, value: &LaurentPoly) -> Result<Self, ExactError> {
        let mut b = BTreeMap::new();
        b.insert(var.to_string(), value.clone());
        self.substitute(&b)
    }

    /// Evaluates every variable to a rational. Unbound variables are an error.
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Result<Rational, ExactError> {
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (&x, v) in e.iter().zip(&self.vars) {
                let val = values
                    .get(v)
                    .ok_or_else(|| ExactError::Parse(format!("no value for `{v}`")))?;
                if x < 0 && val.is_zero() {
                    return Err(ExactError::ZeroIntoNegativePower(v.clone()));
                }
                t *= num_traits::pow::Pow::pow(val, x as i32);
            }
            total += t;
        }
        Ok(total)
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: &str) -> Self {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return Self::zero();
        };
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] != 0)
            .map(|(e, c)| {
                let mut e = e.clone();
                let k = e[i];
                e[i] -= 1;
                (e, c * rat(k))
            })
            .collect();
        Self::from_raw(self.vars.clone(), terms)
    }

    /// Splits the polynomial by the exponent of `var`:
    /// `self = sum_k out[k] * var^k`, with no `var` left in `out[k]`.
    pub fn collect_by(&self, var: &str) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            if !self.is_zero() {
                out.insert(0, self.clone());
            }
            return out;
        };
        let mut buckets: BTreeMap<i64, BTreeMap<Vec<i64>, Rational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e = e.clone();
            let k = std::mem::replace(&mut e[i], 0);
            buckets.entry(k).or_default().insert(e, c.clone());
        }
        for (k, terms) in buckets {
            out.insert(k, Self::from_raw(self.vars.clone(), terms));
        }
        out
    }

    /// Largest monomial in the given variables dividing every term
    /// (exponent-wise minimum), returned as `(factor, self / factor)`.
    pub fn split_monomial_factor(&self, among: &[&str]) -> (Self, Self) {
        if self.is_zero() {
            return (Self::one(), Self::zero());
        }
        let mut powers = Vec::new();
        for &v in among {
            let (lo, _) = self.degree_range(v);
            if self.vars.iter().any(|x| x == v) {
                powers.push((v, lo));
            }
        }
        let f = Self::monomial(Rational::one(), &powers);
        let rest = self * &f.inverse().expect("monomial");
        (f, rest)
    }

    /// True when all exponents are non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Total degree of each term (sum of exponents).
    pub fn total_degrees(&self) -> BTreeSet<i64> {
        self.terms.keys().map(|e| e.iter().sum()).collect()
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // by total degree, highest first
        let mut order: Vec<_> = self.terms.iter().collect();
        order.sort_by_key(|(e, _)| std::cmp::Reverse((e.iter().sum::<i64>(), (*e).clone())));
        for (k, (e, c)) in order.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e)
                .filter(|(_, &x)| x != 0)
                .map(|(v, &x)| if x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                $body(self, rhs)
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                $body(&self, &rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                $body(&self, rhs)
            }
        }
    };
}

binop!(Add, add, |a: &LaurentPoly, b: &LaurentPoly| a.combine(b, 1));
binop!(Sub, sub, |a: &LaurentPoly, b: &LaurentPoly| a.combine(b, -1));
binop!(Mul, mul, |a: &LaurentPoly, b: &LaurentPoly| a.product(b));

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&rat(-1))
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&rat(-1))
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |a, b| a + b)
    }
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    exp: Vec<i64>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct WirePoly {
    vars: Vec<String>,
    terms: Vec<WireTerm>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let (num, den) = split(c);
                WireTerm { exp: e.clone(), num, den }
            })
            .collect();
        WirePoly { vars: self.vars.clone(), terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = WirePoly::deserialize(d)?;
        let mut out = LaurentPoly::zero();
        for t in w.terms {
            if t.exp.len() != w.vars.len() {
                return Err(D::Error::custom("exponent vector length differs from vars"));
            }
            let c = join(&t.num, &t.den).map_err(D::Error::custom)?;
            let powers: Vec<(&str, i64)> = w.vars.iter().map(String::as_str).zip(t.exp).collect();
            out = out + LaurentPoly::monomial(c, &powers);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> LaurentPoly {
        LaurentPoly::var(s)
    }

    fn mono(c: i64, p: &[(&str, i64)]) -> LaurentPoly {
        LaurentPoly::monomial(rat(c), p)
    }

    #[test]
    fn difference_of_squares() {
        let (z, u) = (v("z"), v("u"));
        let lhs = (&z + &u) * (&z - &u);
        assert_eq!(lhs, mono(1, &[("z", 2)]) - mono(1, &[("u", 2)]));
    }

    #[test]
    fn inverse_monomials_cancel() {
        assert_eq!(mono(1, &[("z", -1)]) * v("z"), LaurentPoly::one());
        assert_eq!(mono(1, &[("z", 3), ("u", 1)]) * mono(1, &[("z", -3), ("u", -1)]), LaurentPoly::one());
    }

    #[test]
    fn substitution_cases() {
        let p = mono(1, &[("z", 2), ("u", 1)]);
        assert!(p.subs("u", &LaurentPoly::zero()).unwrap().is_zero());
        let q = mono(1, &[("z", -1)]);
        assert_eq!(
            q.subs("z", &LaurentPoly::zero()),
            Err(ExactError::ZeroIntoNegativePower("z".into()))
        );
        let xi = v("xi");
        assert_eq!(xi.subs("xi", &mono(1, &[("z", -1)])).unwrap(), mono(1, &[("z", -1)]));
        // negative power of a binomial has no Laurent inverse
        assert_eq!(
            q.subs("z", &(v("a") + v("b"))),
            Err(ExactError::NotInvertible("z".into()))
        );
    }

    #[test]
    fn unused_variables_are_dropped() {
        let p = v("x1") - v("x1") + v("y");
        assert_eq!(p.vars(), &["y".to_string()]);
        assert_eq!(p, v("y"));
    }

    #[test]
    fn natural_variable_order() {
        let p = v("x10") + v("x2") + v("a");
        assert_eq!(p.vars(), &["a", "x2", "x10"]);
    }

    #[test]
    fn derivative_and_collect() {
        let p = mono(3, &[("x", 2), ("t", -1)]) + mono(1, &[("t", 2)]);
        assert_eq!(p.derivative("x"), mono(6, &[("x", 1), ("t", -1)]));
        let by_t = p.collect_by("t");
        assert_eq!(by_t[&-1], mono(3, &[("x", 2)]));
        assert_eq!(by_t[&2], LaurentPoly::one());
    }

    #[test]
    fn display_is_readable() {
        let p = mono(-2, &[("x1", 1), ("y1", 1)]) + LaurentPoly::var("c");
        assert_eq!(p.to_string(), "-2*x1*y1 + c");
        assert_eq!(mono(1, &[("z", -2)]).to_string(), "z^-2");
    }

    #[test]
    fn json_schema() {
        let p = mono(1, &[("z", 1)]) - LaurentPoly::constant(Rational::new(1.into(), 3.into()));
        let js = serde_json::to_value(&p).unwrap();
        assert_eq!(js["vars"], serde_json::json!(["z"]));
        assert_eq!(js["terms"][0], serde_json::json!({"exp": [0], "num": "-1", "den": "3"}));
        let back: LaurentPoly = serde_json::from_value(js).unwrap();
        assert_eq!(back, p);
    }
}
