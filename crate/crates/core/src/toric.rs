//! Two-dimensional toric geometry of cyclic quotient singularities.
//!
//! A singularity `1/n(1,a)` is `C^2` modulo the diagonal action
//! `(x, y) -> (rho x, rho^a y)` of a primitive `n`-th root of unity `rho`.
//! Its fan is a single lattice cone; the minimal resolution subdivides that
//! cone by the rays of its Hirzebruch-Jung continued fraction.
//!
//! Cones are compared up to `GL_2(Z)` through a normal form: rotate so the
//! first ray is `(1,0)`, then shear the second ray to `(-q, n)` with
//! `0 <= q < n`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{rat, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Ray = [i64; 2];

/// `1/n(1,a)`, generated by `diag(rho, rho^a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuotientSingularity {
    n: u32,
    a: u32,
}

impl QuotientSingularity {
    /// `n >= 1`, `1 <= a < n`, `gcd(a, n) = 1`. For `n = 1` the only
    /// accepted weight is `a = 1` (the trivial group).
    pub fn new(n: u32, a: u32) -> Result<Self, ToricError> {
        let ok = if n == 1 { a == 1 } else { a >= 1 && a < n && a.gcd(&n) == 1 };
        if !ok {
            return Err(ToricError::InvalidInput(format!("1/{n}(1,{a}) is not a valid cyclic quotient")));
        }
        Ok(QuotientSingularity { n, a })
    }

    /// `X_n = 1/n(1,1)`, contracted from `Z_n`.
    pub fn x_n(n: u32) -> Result<Self, ToricError> {
        Self::new(n, 1)
    }

    /// `X_n^v = 1/n(1,n-1)`, the `A_{n-1}` singularity.
    pub fn x_n_dual(n: u32) -> Result<Self, ToricError> {
        Self::new(n, if n == 1 { 1 } else { n - 1 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// Exponents `(1, a)` of `rho` on the diagonal of the generator.
    pub fn generator(&self) -> (u32, u32) {
        (1, self.a)
    }
}

/// Strongly convex rational cone in `Z^2`, rays primitive and stored
/// counterclockwise (`det(ray1, ray2) > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Cone2D {
    ray1: Ray,
    ray2: Ray,
}

pub fn det2(a: Ray, b: Ray) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn primitive(v: Ray) -> Ray {
    let g = v[0].gcd(&v[1]);
    if g == 0 {
        v
    } else {
        [v[0] / g, v[1] / g]
    }
}

/// `(g, s, t)` with `s a + t b = g = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

type Mat2 = [[i64; 2]; 2];

fn apply(m: &Mat2, v: Ray) -> Ray {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Inverse of a determinant-one integer matrix.
fn unimodular_inverse(m: &Mat2) -> Mat2 {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

impl Cone2D {
    pub fn new(a: Ray, b: Ray) -> Result<Self, ToricError> {
        for r in [a, b] {
            if r == [0, 0] || r[0].gcd(&r[1]) != 1 {
                return Err(ToricError::InvalidInput(format!("ray {r:?} is not primitive")));
            }
        }
        match det2(a, b) {
            0 => Err(ToricError::InvalidInput(format!("rays {a:?}, {b:?} are dependent"))),
            d if d > 0 => Ok(Cone2D { ray1: a, ray2: b }),
            _ => Ok(Cone2D { ray1: b, ray2: a }),
        }
    }

    pub fn rays(&self) -> (Ray, Ray) {
        (self.ray1, self.ray2)
    }

    /// Lattice index `det(ray1, ray2)`; 1 exactly for smooth cones.
    pub fn multiplicity(&self) -> i64 {
        det2(self.ray1, self.ray2)
    }

    pub fn contains(&self, v: Ray) -> bool {
        det2(self.ray1, v) >= 0 && det2(v, self.ray2) >= 0
    }

    /// `{v : <v, u> >= 0 for all u in self}`, generated by the inward
    /// normals of the two rays.
    pub fn dual(&self) -> Cone2D {
        let [a, b] = self.ray1;
        let [c, d] = self.ray2;
        let n1 = primitive([-b, a]);
        let n2 = primitive([d, -c]);
        Cone2D::new(n1, n2).expect("dual of a strongly convex cone")
    }

    /// Determinant-one `W` with `W ray1 = (1,0)` and `W ray2 = (-q, n)`,
    /// `0 <= q < n`. Returns `(W, n, q)`.
    fn normal_form_transform(&self) -> (Mat2, i64, i64) {
        let [p, r] = self.ray1;
        let (_, s, t) = ext_gcd(p, r);
        let rot: Mat2 = [[s, t], [-r, p]];
        let [x, n] = apply(&rot, self.ray2);
        // shear (x, n) -> (x + k n, n) landing in (-n, 0]
        let q = (-x).rem_euclid(n);
        let k = (-q - x) / n;
        let shear: Mat2 = [[1, k], [0, 1]];
        (mat_mul(&shear, &rot), n, q)
    }

    /// `(n, q)` of the oriented normal form.
    pub fn normal_form(&self) -> (i64, i64) {
        let (_, n, q) = self.normal_form_transform();
        (n, q)
    }

    /// Invariant up to all of `GL_2(Z)`: orientation reversal swaps `q`
    /// with its inverse mod `n`, so the smaller of the two is kept.
    pub fn unimodular_class(&self) -> (i64, i64) {
        let (n, q) = self.normal_form();
        if n == 1 {
            return (1, 0);
        }
        let (_, inv, _) = ext_gcd(q, n);
        (n, q.min(inv.rem_euclid(n)))
    }

    pub fn is_unimodularly_equivalent(&self, other: &Cone2D) -> bool {
        self.unimodular_class() == other.unimodular_class()
    }
}

/// The fan cone of `C^2 / Gamma`.
///
/// `1/n(1,1)` gives `<(1,0), (-1,n)>`; `1/n(1,n-1)` for `n >= 3` gives
/// `<(0,1), (n,1)>`; other weights use `<(1,0), (-a,n)>`. For `n = 2` both
/// descriptions are the same singularity and the first form is returned.
pub fn quotient_cone(s: &QuotientSingularity) -> Cone2D {
    let (n, a) = (s.n as i64, s.a as i64);
    if n >= 3 && a == n - 1 {
        Cone2D::new([0, 1], [n, 1]).expect("valid cone")
    } else {
        Cone2D::new([1, 0], [-a, n]).expect("valid cone")
    }
}

/// Cone of `X_n`, `<(1,0), (-1,n)>`.
pub fn cone_of_x(n: u32) -> Cone2D {
    Cone2D::new([1, 0], [-1, n as i64]).expect("valid cone")
}

/// Cone of `X_n^v`, `<(0,1), (n,1)>`.
pub fn cone_of_x_dual(n: u32) -> Cone2D {
    Cone2D::new([0, 1], [n as i64, 1]).expect("valid cone")
}

/// Hirzebruch-Jung continued fraction `n/q = a_1 - 1/(a_2 - 1/(...))`.
pub fn hj_expansion(n: u64, q: u64) -> Result<Vec<u64>, ToricError> {
    if q == 0 || q >= n || n.gcd(&q) != 1 {
        return Err(ToricError::InvalidInput(format!("need 0 < q < n coprime, got n={n}, q={q}")));
    }
    let (mut n, mut q) = (n, q);
    let mut out = Vec::new();
    while q > 0 {
        let a = n.div_ceil(q);
        out.push(a);
        (n, q) = (q, a * q - n);
    }
    Ok(out)
}

/// Minimal resolution data: interior rays, self-intersections `-a_i` and
/// the intersection matrix of the exceptional curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionChain {
    pub cone: Cone2D,
    /// Interior rays, walking counterclockwise from `cone.ray1`.
    pub rays: Vec<Ray>,
    pub self_intersections: Vec<i64>,
    pub intersection_matrix: Vec<Vec<i64>>,
}

impl ResolutionChain {
    /// Every cone of the subdivided fan, in order.
    pub fn subdivision(&self) -> Vec<(Ray, Ray)> {
        let (r1, r2) = self.cone.rays();
        let all: Vec<Ray> = std::iter::once(r1).chain(self.rays.iter().copied()).chain(std::iter::once(r2)).collect();
        all.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

pub fn minimal_resolution(s: &QuotientSingularity) -> ResolutionChain {
    resolve_cone(&quotient_cone(s))
}

/// Resolves any cone: in normal form the rays satisfy
/// `v_{i-1} + v_{i+1} = a_i v_i` starting from `(1,0), (0,1)`.
pub fn resolve_cone(cone: &Cone2D) -> ResolutionChain {
    let (w, n, q) = cone.normal_form_transform();
    let winv = unimodular_inverse(&w);
    let coeffs = if n == 1 { Vec::new() } else { hj_expansion(n as u64, q as u64).expect("normal form is coprime") };
    let mut rays = Vec::with_capacity(coeffs.len());
    let (mut prev, mut cur): (Ray, Ray) = ([1, 0], [0, 1]);
    for &a in &coeffs {
        rays.push(apply(&winv, cur));
        let next = [a as i64 * cur[0] - prev[0], a as i64 * cur[1] - prev[1]];
        (prev, cur) = (cur, next);
    }
    let k = coeffs.len();
    let self_intersections: Vec<i64> = coeffs.iter().map(|&a| -(a as i64)).collect();
    let intersection_matrix = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| match i.abs_diff(j) {
                    0 => self_intersections[i],
                    1 => 1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    ResolutionChain { cone: *cone, rays, self_intersections, intersection_matrix }
}

/// Dual graph of the exceptional curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn is_path(&self) -> bool {
        self.edges.len() + 1 == self.vertices.max(1)
            && self.edges.iter().all(|&(a, b)| b == a + 1)
    }

    /// `A_k` label when the graph is a path on `k` vertices.
    pub fn dynkin_label(&self) -> Option<String> {
        (self.vertices > 0 && self.is_path()).then(|| format!("A_{}", self.vertices))
    }
}

pub fn dynkin_dual_graph(r: &ResolutionChain) -> DualGraph {
    let k = r.intersection_matrix.len();
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if r.intersection_matrix[i][j] == 1 {
                edges.push((i, j));
            }
        }
    }
    DualGraph { vertices: k, edges }
}

/// `C[a,b]^Gamma` presented by generators `x_i -> a^i b^(n-i)` and the
/// binomial relations among them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantRing {
    pub n: u32,
    pub symbols: Vec<String>,
    pub generators: Vec<LaurentPoly>,
    pub relations: Vec<LaurentPoly>,
}

impl InvariantRing {
    pub fn parametrization(&self) -> BTreeMap<String, LaurentPoly> {
        self.symbols.iter().cloned().zip(self.generators.iter().cloned()).collect()
    }

    /// Each relation pulled back along `x_i -> generator_i`.
    pub fn relation_images(&self) -> Vec<LaurentPoly> {
        let p = self.parametrization();
        self.relations.iter().map(|r| r.substitute(&p).expect("polynomial substitution")).collect()
    }
}

fn x_sym(i: u32) -> String {
    format!("x{i}")
}

pub fn invariant_generators(s: &QuotientSingularity) -> Result<InvariantRing, ToricError> {
    if s.a != 1 {
        return Err(ToricError::Unsupported(format!(
            "invariant ring only computed for weight a = 1, got 1/{}(1,{})",
            s.n, s.a
        )));
    }
    let n = s.n;
    let symbols: Vec<String> = (0..=n).map(x_sym).collect();
    let generators = (0..=n)
        .map(|i| LaurentPoly::monomial(rat(1), &[("a", i as i64), ("b", (n - i) as i64)]))
        .collect();
    let x = |i: u32| LaurentPoly::var(&x_sym(i));
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            relations.push(x(i) * x(j + 1) - x(i + 1) * x(j));
        }
    }
    Ok(InvariantRing { n, symbols, generators, relations })
}

/// The contraction `Z_n -> X_n` in canonical coordinates: `z^i u -> x_i`.
pub fn contraction_map(n: u32) -> Vec<(LaurentPoly, String)> {
    (0..=n)
        .map(|i| (LaurentPoly::monomial(rat(1), &[("z", i as i64), ("u", 1)]), x_sym(i)))
        .collect()
}

/// Pulls a polynomial in the `x_i` back to the `(z, u)` chart.
pub fn pull_back_along_contraction(n: u32, p: &LaurentPoly) -> LaurentPoly {
    let b = contraction_map(n).into_iter().map(|(m, s)| (s, m)).collect();
    p.substitute(&b).expect("polynomial substitution")
}

/// SVG drawing of a cone, its lattice points, and (optionally) the rays of
/// its resolution.
pub fn fan_svg(cone: &Cone2D, chain: Option<&ResolutionChain>, title: &str) -> String {
    let (r1, r2) = cone.rays();
    let extra: Vec<Ray> = chain.map(|c| c.rays.clone()).unwrap_or_default();
    let pts: Vec<Ray> = [r1, r2, [0, 0]].into_iter().chain(extra.iter().copied()).collect();
    let lo = |k: usize| pts.iter().map(|p| p[k]).min().unwrap() - 1;
    let hi = |k: usize| pts.iter().map(|p| p[k]).max().unwrap() + 1;
    let (x0, x1, y0, y1) = (lo(0), hi(0), lo(1), hi(1));
    let cell = 40i64;
    let (w, h) = ((x1 - x0) * cell + 2 * cell, (y1 - y0) * cell + 3 * cell);
    let px = |x: i64| (x - x0) * cell + cell;
    let py = |y: i64| (y1 - y) * cell + cell;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for x in x0..=x1 {
        for y in y0..=y1 {
            if cone.contains([x, y]) {
                let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="2.5" fill="black"/>"#, px(x), py(y));
            }
        }
    }
    let mut line = |r: Ray, style: &str| {
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"{style}/>"#,
            px(0),
            py(0),
            px(r[0]),
            py(r[1])
        );
    };
    line(r1, "");
    line(r2, "");
    for r in &extra {
        line(*r, r#" stroke-dasharray="4 3""#);
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="serif" font-size="14" font-style="italic">{}</text>"#,
        cell / 2,
        h - cell / 2,
        title
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sing(n: u32, a: u32) -> QuotientSingularity {
        QuotientSingularity::new(n, a).unwrap()
    }

    #[test]
    fn cones_for_n3() {
        assert_eq!(quotient_cone(&sing(3, 1)).rays(), ([1, 0], [-1, 3]));
        // counterclockwise storage puts (3,1) first
        assert_eq!(quotient_cone(&sing(3, 2)).rays(), ([3, 1], [0, 1]));
    }

    #[test]
    fn n2_cone_is_self_dual_up_to_lattice_automorphism() {
        let c = quotient_cone(&sing(2, 1));
        assert_ne!(c, c.dual());
        assert!(c.is_unimodularly_equivalent(&c.dual()));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(cone_of_x(3).dual(), cone_of_x_dual(3));
        let quadrant = Cone2D::new([1, 0], [0, 1]).unwrap();
        assert_eq!(quadrant.dual(), quadrant);
    }

    #[test]
    fn hj_examples() {
        assert_eq!(hj_expansion(5, 1).unwrap(), vec![5]);
        assert_eq!(hj_expansion(5, 4).unwrap(), vec![2, 2, 2, 2]);
        assert_eq!(hj_expansion(7, 3).unwrap(), vec![3, 2, 2]);
        assert!(hj_expansion(6, 3).is_err());
        assert!(hj_expansion(4, 4).is_err());
        assert!(hj_expansion(4, 0).is_err());
    }

    #[test]
    fn resolution_of_a3() {
        let r = minimal_resolution(&sing(4, 3));
        let mut rays = r.rays.clone();
        rays.sort();
        assert_eq!(rays, vec![[1, 1], [2, 1], [3, 1]]);
        assert_eq!(r.self_intersections, vec![-2, -2, -2]);
        assert_eq!(r.intersection_matrix, vec![vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]);
    }

    #[test]
    fn resolution_of_x4() {
        let r = minimal_resolution(&sing(4, 1));
        assert_eq!(r.rays, vec![[0, 1]]);
        assert_eq!(r.self_intersections, vec![-4]);
    }

    #[test]
    fn z2_equals_y2_tilde() {
        let a = minimal_resolution(&QuotientSingularity::x_n(2).unwrap());
        let b = minimal_resolution(&QuotientSingularity::x_n_dual(2).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.self_intersections, vec![-2]);
    }

    #[test]
    fn general_weight_follows_continued_fraction() {
        let r = minimal_resolution(&sing(7, 3));
        assert_eq!(r.self_intersections, vec![-3, -2, -2]);
        for (a, b) in r.subdivision() {
            assert_eq!(det2(a, b), 1);
        }
    }

    #[test]
    fn dual_graphs() {
        let g = dynkin_dual_graph(&minimal_resolution(&sing(5, 4)));
        assert_eq!(g.vertices, 4);
        assert_eq!(g.dynkin_label().as_deref(), Some("A_4"));
        for (n, a) in [(3, 1), (2, 1)] {
            let g = dynkin_dual_graph(&minimal_resolution(&sing(n, a)));
            assert_eq!((g.vertices, g.edges.len()), (1, 0));
        }
    }

    #[test]
    fn invariant_ring_small_cases() {
        let r3 = invariant_generators(&sing(3, 1)).unwrap();
        assert_eq!(r3.generators.len(), 4);
        let x = |i: u32| LaurentPoly::var(&x_sym(i));
        assert_eq!(
            r3.relations,
            vec![x(0) * x(2) - x(1) * x(1), x(0) * x(3) - x(1) * x(2), x(1) * x(3) - x(2) * x(2)]
        );
        assert!(r3.relation_images().iter().all(LaurentPoly::is_zero));

        let r1 = invariant_generators(&sing(1, 1)).unwrap();
        assert_eq!(r1.generators, vec![LaurentPoly::var("b"), LaurentPoly::var("a")]);
        assert!(r1.relations.is_empty());

        let r2 = invariant_generators(&sing(2, 1)).unwrap();
        assert_eq!(r2.relations, vec![x(0) * x(2) - x(1) * x(1)]);

        assert!(matches!(invariant_generators(&sing(5, 2)), Err(ToricError::Unsupported(_))));
    }

    #[test]
    fn contraction_kills_relations() {
        let m = contraction_map(2);
        assert_eq!(m[1], (LaurentPoly::monomial(rat(1), &[("z", 1), ("u", 1)]), "x1".to_string()));
        for n in [1, 2, 4] {
            let ring = invariant_generators(&sing(n, 1)).unwrap();
            for r in &ring.relations {
                assert!(pull_back_along_contraction(n, r).is_zero());
            }
        }
    }

    #[test]
    fn invalid_singularities() {
        assert!(QuotientSingularity::new(4, 2).is_err());
        assert!(QuotientSingularity::new(4, 4).is_err());
        assert!(QuotientSingularity::new(0, 1).is_err());
        assert!(Cone2D::new([2, 0], [0, 1]).is_err());
        assert!(Cone2D::new([1, 0], [-1, 0]).is_err());
    }

    #[test]
    fn svg_mentions_every_ray() {
        let c = quotient_cone(&sing(3, 1));
        let r = resolve_cone(&c);
        let svg = fan_svg(&c, Some(&r), "fan");
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<line").count(), 3);
    }
}
