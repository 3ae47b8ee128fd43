//! Segre embeddings, coordinate projections and the birational maps
//! `P^a x P^b --> P^(a+b)` built from them.
//!
//! Segre coordinates `u_ij = y_i z_j` are indexed `i (b + 1) + j`. The
//! projection keeps `u_i0` for all `i` and `u_0j` for `j >= 1`; its inverse
//! is `y = (w_0..w_a)`, `z = (w_0, w_(a+1)..w_(a+b))`.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{rat, LaurentPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BirError {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("every sample hit an indeterminacy locus")]
    DegenerateSampler,
    #[error("maps do not compose: {0}")]
    Mismatch(String),
}

pub const DEFAULT_SEED: u64 = 1;
pub const MAX_RETRIES: usize = 10;
const HEIGHT: i64 = 97;

/// Homogeneous coordinates per factor.
pub type SamplePoint = Vec<Vec<Rational>>;

/// A rational map between products of projective spaces, given by
/// homogeneous polynomials per target factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalMap {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub source_vars: Vec<Vec<String>>,
    pub components: Vec<Vec<LaurentPoly>>,
}

fn names(prefix: &str, d: usize) -> Vec<String> {
    (0..=d).map(|i| format!("{prefix}{i}")).collect()
}

const PREFIXES: [&str; 3] = ["y", "z", "w"];

impl RationalMap {
    /// Identity of `P^d1 x ... x P^dk`.
    pub fn identity(dims: &[usize]) -> Self {
        let source_vars: Vec<Vec<String>> =
            dims.iter().enumerate().map(|(f, &d)| names(PREFIXES[f.min(2)], d)).collect();
        let components = source_vars.iter().map(|v| v.iter().map(|s| LaurentPoly::var(s)).collect()).collect();
        RationalMap { source: dims.to_vec(), target: dims.to_vec(), source_vars, components }
    }

    /// Points where every component of some target factor vanishes.
    pub fn indeterminacy(&self) -> Vec<String> {
        self.components
            .iter()
            .map(|c| format!("{} = 0", c.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" = ")))
            .collect()
    }

    /// `None` on the indeterminacy locus.
    pub fn eval(&self, p: &SamplePoint) -> Option<SamplePoint> {
        let mut env = BTreeMap::new();
        for (vars, vals) in self.source_vars.iter().zip(p) {
            for (v, x) in vars.iter().zip(vals) {
                env.insert(v.clone(), x.clone());
            }
        }
        let out: SamplePoint = self
            .components
            .iter()
            .map(|c| c.iter().map(|q| q.eval(&env).expect("polynomial components")).collect())
            .collect();
        out.iter().all(|f: &Vec<Rational>| f.iter().any(|x| *x != rat(0))).then_some(out)
    }

    /// `next . self`.
    pub fn then(&self, next: &RationalMap) -> Result<RationalMap, BirError> {
        if self.target != next.source {
            return Err(BirError::Mismatch(format!("target {:?} vs source {:?}", self.target, next.source)));
        }
        let mut b = BTreeMap::new();
        for (vars, comps) in next.source_vars.iter().zip(&self.components) {
            for (v, c) in vars.iter().zip(comps) {
                b.insert(v.clone(), c.clone());
            }
        }
        let components = next
            .components
            .iter()
            .map(|c| c.iter().map(|p| p.substitute(&b).expect("polynomial substitution")).collect())
            .collect();
        Ok(RationalMap {
            source: self.source.clone(),
            target: next.target.clone(),
            source_vars: self.source_vars.clone(),
            components,
        })
    }

    pub fn component_strings(&self) -> Vec<Vec<String>> {
        self.components.iter().map(|c| c.iter().map(|p| p.to_string()).collect()).collect()
    }
}

fn show_space(dims: &[usize]) -> String {
    dims.iter().map(|d| format!("P^{d}")).collect::<Vec<_>>().join(" x ")
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src: Vec<String> = self.source_vars.iter().map(|v| format!("[{}]", v.join(":"))).collect();
        let dst: Vec<String> = self.component_strings().iter().map(|c| format!("[{}]", c.join(" : "))).collect();
        write!(
            f,
            "{} --> {}: {} |-> {}",
            show_space(&self.source),
            show_space(&self.target),
            src.join(", "),
            dst.join(", ")
        )
    }
}

pub fn segre_index(b: usize, i: usize, j: usize) -> usize {
    i * (b + 1) + j
}

/// `P^a x P^b -> P^r`, `u_ij = y_i z_j`.
pub fn segre(a: usize, b: usize) -> RationalMap {
    let y = names("y", a);
    let z = names("z", b);
    let comps = (0..=a)
        .flat_map(|i| (0..=b).map(move |j| (i, j)))
        .map(|(i, j)| LaurentPoly::var(&y[i]) * LaurentPoly::var(&z[j]))
        .collect();
    RationalMap { source: vec![a, b], target: vec![(a + 1) * (b + 1) - 1], source_vars: vec![y, z], components: vec![comps] }
}

/// `P^r --> P^(|keep| - 1)`, keeping the listed coordinates in the given order.
pub fn linear_projection(r: usize, keep: &[usize]) -> Result<RationalMap, BirError> {
    if keep.is_empty() || keep.iter().any(|&k| k > r) {
        return Err(BirError::IndexOutOfRange(format!("keep set {keep:?} in P^{r}")));
    }
    let u = names("u", r);
    let comps = keep.iter().map(|&k| LaurentPoly::var(&u[k])).collect();
    Ok(RationalMap { source: vec![r], target: vec![keep.len() - 1], source_vars: vec![u], components: vec![comps] })
}

/// Coordinates `u_i0` (`i = 0..a`) then `u_0j` (`j = 1..b`).
pub fn keep_set(a: usize, b: usize) -> Vec<usize> {
    (0..=a).map(|i| segre_index(b, i, 0)).chain((1..=b).map(|j| segre_index(b, 0, j))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductToProjective {
    pub a: usize,
    pub b: usize,
    pub keep: Vec<usize>,
    pub forward: RationalMap,
    pub inverse: RationalMap,
}

pub fn product_to_projective(a: usize, b: usize) -> Result<ProductToProjective, BirError> {
    if a + b == 0 {
        return Err(BirError::IndexOutOfRange("need a + b >= 1".into()));
    }
    let keep = keep_set(a, b);
    let forward = segre(a, b).then(&linear_projection((a + 1) * (b + 1) - 1, &keep)?)?;
    let w = names("w", a + b);
    let var = |k: usize| LaurentPoly::var(&w[k]);
    let ys = (0..=a).map(var).collect();
    let zs = std::iter::once(0).chain(a + 1..=a + b).map(var).collect();
    let inverse = RationalMap { source: vec![a + b], target: vec![a, b], source_vars: vec![w], components: vec![ys, zs] };
    Ok(ProductToProjective { a, b, keep, forward, inverse })
}

/// `P^j x P^(n-j-1) --> P^(j+1) x P^(n-j-2)` through `P^(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BirStep {
    pub n: usize,
    pub j: usize,
    pub forward: RationalMap,
    pub inverse: RationalMap,
    pub source_keep: Vec<usize>,
    pub target_keep: Vec<usize>,
    /// Both bundles are twisted by `O(+1)` before projectivizing; the
    /// projectivization does not see the twist.
    pub twist_normalization: String,
}

pub fn bir_step(n: usize, j: usize) -> Result<BirStep, BirError> {
    if j + 2 > n {
        return Err(BirError::IndexOutOfRange(format!("bir_step needs j + 1 < n, got n = {n}, j = {j}")));
    }
    let src = product_to_projective(j, n - j - 1)?;
    let dst = product_to_projective(j + 1, n - j - 2)?;
    Ok(BirStep {
        n,
        j,
        forward: src.forward.then(&dst.inverse)?,
        inverse: dst.forward.then(&src.inverse)?,
        source_keep: src.keep,
        target_keep: dst.keep,
        twist_normalization: "O(+1)".into(),
    })
}

/// Deterministic stream of small rationals `p/q`, `|p|, q <= 97`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rational(&mut self) -> Rational {
        let p = self.rng.gen_range(-HEIGHT..=HEIGHT);
        let q = self.rng.gen_range(1..=HEIGHT);
        Rational::new(p.into(), q.into())
    }

    /// A point with no identically-zero factor.
    pub fn point(&mut self, dims: &[usize]) -> SamplePoint {
        dims.iter()
            .map(|&d| loop {
                let v: Vec<Rational> = (0..=d).map(|_| self.rational()).collect();
                if v.iter().any(|x| *x != rat(0)) {
                    break v;
                }
            })
            .collect()
    }
}

/// Equality of homogeneous coordinate vectors up to a nonzero scalar.
pub fn projectively_equal(u: &[Rational], v: &[Rational]) -> bool {
    let zero = rat(0);
    u.len() == v.len()
        && u.iter().any(|x| *x != zero)
        && v.iter().any(|x| *x != zero)
        && (0..u.len()).all(|i| (i + 1..u.len()).all(|k| &u[i] * &v[k] == &u[k] * &v[i]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub checked: usize,
    pub skipped: usize,
    pub failed: usize,
    pub seed: u64,
    pub passed: bool,
}

/// Checks `inverse(forward(p)) = p` on sampled points, retrying up to
/// `MAX_RETRIES` times when a draw lands on an indeterminacy locus.
pub fn verify_birational(
    forward: &RationalMap,
    inverse: &RationalMap,
    samples: usize,
    seed: u64,
) -> Result<Verdict, BirError> {
    if forward.target != inverse.source || forward.source != inverse.target {
        return Err(BirError::Mismatch(format!(
            "{} vs {}",
            show_space(&forward.source),
            show_space(&inverse.target)
        )));
    }
    let mut s = Sampler::new(seed);
    let (mut checked, mut skipped, mut failed) = (0, 0, 0);
    for _ in 0..samples {
        for _ in 0..=MAX_RETRIES {
            let p = s.point(&forward.source);
            match forward.eval(&p).and_then(|q| inverse.eval(&q)) {
                None => skipped += 1,
                Some(back) => {
                    checked += 1;
                    if !p.iter().zip(&back).all(|(u, v)| projectively_equal(u, v)) {
                        failed += 1;
                    }
                    break;
                }
            }
        }
    }
    if checked == 0 && samples > 0 {
        return Err(BirError::DegenerateSampler);
    }
    Ok(Verdict { checked, skipped, failed, seed, passed: failed == 0 && checked == samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(m: &RationalMap) -> Vec<Vec<String>> {
        m.component_strings()
    }

    #[test]
    fn segre_small() {
        let s = segre(1, 1);
        let mut got = strs(&s)[0].clone();
        got.sort();
        let mut want = vec!["y0*z0", "y1*z0", "y0*z1", "y1*z1"];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(strs(&segre(2, 1))[0], vec!["y0*z0", "y0*z1", "y1*z0", "y1*z1", "y2*z0", "y2*z1"]);
        assert_eq!(strs(&segre(0, 2))[0], vec!["y0*z0", "y0*z1", "y0*z2"]);
    }

    #[test]
    fn keep_sets() {
        assert_eq!(keep_set(1, 1), vec![0, 2, 1]);
        let mut k = keep_set(2, 1);
        k.sort();
        assert_eq!(k, vec![0, 1, 2, 4]);
        let all = linear_projection(3, &[0, 1, 2, 3]).unwrap();
        assert_eq!(strs(&all), vec![vec!["u0", "u1", "u2", "u3"]]);
        assert_eq!(all.source, all.target);
        assert!(linear_projection(3, &[4]).is_err());
    }

    #[test]
    fn forward_maps() {
        let p = product_to_projective(1, 1).unwrap();
        assert_eq!(strs(&p.forward), vec![vec!["y0*z0", "y1*z0", "y0*z1"]]);
        let q = product_to_projective(0, 1).unwrap();
        assert_eq!(strs(&q.forward), vec![vec!["y0*z0", "y0*z1"]]);
        assert!(product_to_projective(0, 0).is_err());
    }

    #[test]
    fn round_trips() {
        for a in 0..=3 {
            for b in 0..=3 - a {
                if a + b == 0 {
                    continue;
                }
                let p = product_to_projective(a, b).unwrap();
                let v = verify_birational(&p.forward, &p.inverse, 40, DEFAULT_SEED).unwrap();
                assert!(v.passed, "({a},{b}) {v:?}");
                let back = verify_birational(&p.inverse, &p.forward, 40, DEFAULT_SEED).unwrap();
                assert!(back.passed, "({a},{b}) reverse {back:?}");
            }
        }
    }

    #[test]
    fn bir_step_shapes() {
        let s = bir_step(4, 1).unwrap();
        assert_eq!((s.forward.source.clone(), s.forward.target.clone()), (vec![1, 2], vec![2, 1]));
        let id = bir_step(2, 0).unwrap();
        assert_eq!(strs(&id.forward), vec![vec!["y0*z0", "y0*z1"], vec!["y0*z0"]]);
        assert!(verify_birational(&id.forward, &id.inverse, 20, 3).unwrap().passed);
        let s5 = bir_step(5, 2).unwrap();
        assert!(verify_birational(&s5.forward, &s5.inverse, 30, 7).unwrap().passed);
        assert!(matches!(bir_step(3, 2), Err(BirError::IndexOutOfRange(_))));
    }

    #[test]
    fn rescaling_is_invisible() {
        let p = product_to_projective(2, 1).unwrap();
        let mut s = Sampler::new(9);
        for _ in 0..20 {
            let pt = s.point(&[2, 1]);
            let scaled: SamplePoint = vec![pt[0].iter().map(|x| x * rat(-3)).collect(), pt[1].iter().map(|x| x * Rational::new(2.into(), 7.into())).collect()];
            match (p.forward.eval(&pt), p.forward.eval(&scaled)) {
                (Some(a), Some(b)) => assert!(projectively_equal(&a[0], &b[0])),
                (None, None) => {}
                _ => panic!("indeterminacy not projective"),
            }
        }
    }

    #[test]
    fn forgetting_too_much_fails() {
        let fwd = segre(1, 1).then(&linear_projection(3, &[0, 1]).unwrap()).unwrap();
        let w = vec!["w0".to_string(), "w1".to_string()];
        let var = |k: usize| LaurentPoly::var(&w[k]);
        let inv = RationalMap {
            source: vec![1],
            target: vec![1, 1],
            source_vars: vec![w.clone()],
            components: vec![vec![var(0), var(0)], vec![var(0), var(1)]],
        };
        let v = verify_birational(&fwd, &inv, 25, DEFAULT_SEED).unwrap();
        assert!(!v.passed);
        assert!(v.failed > 0);
    }

    #[test]
    fn all_indeterminate_is_degenerate() {
        let y = vec!["y0".to_string(), "y1".to_string()];
        let zero = RationalMap {
            source: vec![1],
            target: vec![1],
            source_vars: vec![y],
            components: vec![vec![LaurentPoly::zero(), LaurentPoly::zero()]],
        };
        assert_eq!(verify_birational(&zero, &RationalMap::identity(&[1]), 3, 1), Err(BirError::DegenerateSampler));
    }
}
