//! Lagrangian skeleton of `T*P^n` under a weighted torus action.
//!
//! Every chart expression is written in the coordinates of `V_0`:
//! base `x1..xn`, fiber `y1..yn`. Chart `V_j` (`j >= 1`) has base slots
//! `x_0/x_j, x_k/x_j (k != j)` and fiber `T_{0j} y`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{rat, var_order, LaurentPoly, PolyMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeletonError {
    #[error("fixed points are not isolated: {0}")]
    NonIsolatedFixedPoint(String),
    #[error("unrecognized form: {0}")]
    UnrecognizedForm(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub fn x(k: usize) -> String {
    format!("x{k}")
}

pub fn y(k: usize) -> String {
    format!("y{k}")
}

fn xv(k: usize) -> LaurentPoly {
    LaurentPoly::var(&x(k))
}

fn yv(k: usize) -> LaurentPoly {
    LaurentPoly::var(&y(k))
}

fn xp(k: usize, e: i64) -> LaurentPoly {
    LaurentPoly::monomial(rat(1), &[(&x(k), e)])
}

/// One trivializing chart `V_i = U_i x C^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub index: usize,
    /// Homogeneous index carried by each base slot.
    pub slots: Vec<usize>,
    pub base: Vec<LaurentPoly>,
    pub fiber: Vec<LaurentPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CotangentAtlas {
    pub n: usize,
    pub charts: Vec<Chart>,
    /// `A_i = dX^(i)/dx`, indexed `[slot][k-1]`.
    #[serde(skip)]
    jac: Vec<PolyMatrix>,
    /// `B_j = dx/dX^(j)`, indexed `[k-1][slot]`.
    #[serde(skip)]
    inv_jac: Vec<PolyMatrix>,
}

fn slots_of(n: usize, i: usize) -> Vec<usize> {
    if i == 0 {
        return (1..=n).collect();
    }
    std::iter::once(0).chain((1..=n).filter(|&k| k != i)).collect()
}

pub fn build_atlas(n: usize) -> Result<CotangentAtlas, SkeletonError> {
    if n == 0 {
        return Err(SkeletonError::InvalidInput("n must be at least 1".into()));
    }
    let mut charts = Vec::with_capacity(n + 1);
    let mut jac = Vec::with_capacity(n + 1);
    let mut inv_jac = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let slots = slots_of(n, i);
        let (a, b) = if i == 0 {
            (PolyMatrix::identity(n), PolyMatrix::identity(n))
        } else {
            let mut a = PolyMatrix::zeros(n, n);
            let mut b = PolyMatrix::zeros(n, n);
            for (s, &m) in slots.iter().enumerate() {
                if m == 0 {
                    a.set(s, i - 1, xp(i, -2).scale(&rat(-1)));
                    for k in 1..=n {
                        let e = if k == i { xp(i, 2) } else { xv(k) * xv(i) };
                        b.set(k - 1, s, e.scale(&rat(-1)));
                    }
                } else {
                    a.set(s, m - 1, xp(i, -1));
                    a.set(s, i - 1, (xv(m) * xp(i, -2)).scale(&rat(-1)));
                    b.set(m - 1, s, xv(i));
                }
            }
            (a, b)
        };
        let base = slots
            .iter()
            .map(|&m| match (i, m) {
                (0, m) => xv(m),
                (_, 0) => xp(i, -1),
                (_, m) => xv(m) * xp(i, -1),
            })
            .collect();
        let ys: Vec<LaurentPoly> = (1..=n).map(yv).collect();
        let fiber = b.transpose().mul_vec(&ys);
        charts.push(Chart { index: i, slots, base, fiber });
        jac.push(a);
        inv_jac.push(b);
    }
    Ok(CotangentAtlas { n, charts, jac, inv_jac })
}

impl CotangentAtlas {
    /// `T_{ij}` maps fiber coordinates on `V_i` to those on `V_j`.
    pub fn transition(&self, i: usize, j: usize) -> PolyMatrix {
        self.jac[i].mul(&self.inv_jac[j]).expect("square").transpose()
    }

    /// Checks `T_{ik} = T_{jk} T_{ij}` and `T_{ii} = 1` for every triple.
    pub fn check_cocycle(&self) -> bool {
        let m = self.n + 1;
        let t: Vec<Vec<PolyMatrix>> = (0..m).map(|i| (0..m).map(|j| self.transition(i, j)).collect()).collect();
        (0..m).all(|i| t[i][i].is_identity())
            && (0..m).all(|i| {
                (0..m).all(|j| (0..m).all(|k| t[j][k].mul(&t[i][j]).expect("square") == t[i][k]))
            })
    }

    /// Base slot labels of chart `i`, e.g. `x0/x2`.
    pub fn base_labels(&self, i: usize) -> Vec<String> {
        self.charts[i]
            .slots
            .iter()
            .map(|&m| if i == 0 { x(m) } else { format!("x{m}/x{i}") })
            .collect()
    }
}

/// `x_k -> t^(-w_k) x_k`, `y_k -> t^(w_k) y_k` on `V_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusAction {
    weights: Vec<i64>,
}

impl TorusAction {
    pub fn new(weights: Vec<i64>) -> Result<Self, SkeletonError> {
        if weights.contains(&0) {
            return Err(SkeletonError::NonIsolatedFixedPoint(format!("zero weight in {weights:?}")));
        }
        let distinct: BTreeSet<i64> = weights.iter().copied().collect();
        if distinct.len() != weights.len() {
            return Err(SkeletonError::NonIsolatedFixedPoint(format!("repeated weight in {weights:?}")));
        }
        Ok(TorusAction { weights })
    }

    /// `w_k = k`.
    pub fn standard(n: usize) -> Self {
        TorusAction { weights: (1..=n as i64).collect() }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    fn bindings(&self) -> BTreeMap<String, LaurentPoly> {
        let mut b = BTreeMap::new();
        for (k, &w) in self.weights.iter().enumerate() {
            b.insert(x(k + 1), LaurentPoly::monomial(rat(1), &[("t", -w), (&x(k + 1), 1)]));
            b.insert(y(k + 1), LaurentPoly::monomial(rat(1), &[("t", w), (&y(k + 1), 1)]));
        }
        b
    }
}

/// A coordinate as `sum_k c_k t^k`.
pub type TExpansion = BTreeMap<i64, LaurentPoly>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionChartExpr {
    pub chart: usize,
    pub base: Vec<TExpansion>,
    pub fiber: Vec<TExpansion>,
}

impl ActionChartExpr {
    /// Sum of the coefficients, i.e. the expression at `t = 1`.
    pub fn at_t_one(&self) -> (Vec<LaurentPoly>, Vec<LaurentPoly>) {
        let flat = |v: &[TExpansion]| v.iter().map(|e| e.values().cloned().sum()).collect();
        (flat(&self.base), flat(&self.fiber))
    }
}

fn show_expansion(e: &TExpansion) -> String {
    if e.is_empty() {
        return "0".into();
    }
    e.iter()
        .map(|(k, c)| match k {
            0 => format!("({c})"),
            1 => format!("t*({c})"),
            k => format!("t^{k}*({c})"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Display for ActionChartExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.base.iter().map(show_expansion).collect();
        let y: Vec<String> = self.fiber.iter().map(show_expansion).collect();
        write!(f, "T.V{} = [{}], ({})", self.chart, b.join(", "), y.join(", "))
    }
}

pub fn act(atlas: &CotangentAtlas, action: &TorusAction, chart: usize) -> Result<ActionChartExpr, SkeletonError> {
    if action.weights.len() != atlas.n {
        return Err(SkeletonError::InvalidInput(format!(
            "{} weights for n = {}",
            action.weights.len(),
            atlas.n
        )));
    }
    let c = atlas
        .charts
        .get(chart)
        .ok_or_else(|| SkeletonError::InvalidInput(format!("no chart V_{chart}")))?;
    let b = action.bindings();
    let go = |v: &[LaurentPoly]| -> Vec<TExpansion> {
        v.iter().map(|p| p.substitute(&b).expect("monomial substitution").collect_by("t")).collect()
    };
    Ok(ActionChartExpr { chart, base: go(&c.base), fiber: go(&c.fiber) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Classification {
    AffineFiber(usize),
    TwistedBundle { base_dim: usize, rank: usize, twists: Vec<i64> },
    ZeroSection(usize),
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::AffineFiber(d) => write!(f, "C^{d}"),
            Classification::ZeroSection(d) => write!(f, "P^{d}"),
            Classification::TwistedBundle { base_dim, twists, .. } => {
                let parts: Vec<String> = twists.iter().map(|t| format!("O_{{P^{base_dim}}}({t})")).collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkeletonComponent {
    pub index: usize,
    pub n: usize,
    /// Coefficients of non-positive powers of `t` in chart `V_j`.
    pub chart_equations: Vec<LaurentPoly>,
    /// Variables forced to vanish, in `V_0` coordinates.
    pub forced_zeros: Vec<String>,
    pub free_base: Vec<String>,
    pub free_fiber: Vec<String>,
    pub classification: Classification,
}

impl SkeletonComponent {
    pub fn free_count(&self) -> usize {
        self.free_base.len() + self.free_fiber.len()
    }

    /// `{x3 = y1 = y2 = 0}`, or `{}` when nothing is forced.
    pub fn equation_string(&self) -> String {
        if self.forced_zeros.is_empty() {
            return "{}".into();
        }
        format!("{{{} = 0}}", self.forced_zeros.join(" = "))
    }
}

impl fmt::Display for SkeletonComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L_{} = {}  {}", self.index, self.classification, self.equation_string())
    }
}

fn sort_vars(v: &mut [String]) {
    v.sort_by(|a, b| var_order(a, b));
}

/// Reduces equations using that `x_j` is a unit on `V_j`.
fn reduce(equations: &[LaurentPoly], unit: &str) -> Result<BTreeSet<String>, SkeletonError> {
    let mut forced: BTreeSet<String> = BTreeSet::new();
    let mut pending: Vec<LaurentPoly> = equations.to_vec();
    loop {
        let zero: BTreeMap<String, LaurentPoly> = forced.iter().map(|v| (v.clone(), LaurentPoly::zero())).collect();
        let mut next = Vec::new();
        let mut grew = false;
        for e in &pending {
            let e = e.substitute(&zero).map_err(|err| SkeletonError::UnrecognizedForm(err.to_string()))?;
            let (_, e) = e.split_monomial_factor(&[unit]);
            if e.is_zero() {
                continue;
            }
            match e.as_monomial() {
                Some((_, pw)) => {
                    let live: Vec<&String> = pw.iter().filter(|(_, &p)| p != 0).map(|(v, _)| v).collect();
                    match live.as_slice() {
                        [] => return Err(SkeletonError::UnrecognizedForm(format!("nonzero constant equation {e}"))),
                        [v] if pw[*v] > 0 => {
                            grew |= forced.insert((*v).clone());
                        }
                        _ => next.push(e),
                    }
                }
                None => next.push(e),
            }
        }
        pending = next;
        if !grew {
            break;
        }
    }
    if let Some(e) = pending.first() {
        return Err(SkeletonError::UnrecognizedForm(format!("equation {e} does not reduce to coordinate vanishing")));
    }
    Ok(forced)
}

pub fn stable_manifold(
    atlas: &CotangentAtlas,
    action: &TorusAction,
    j: usize,
) -> Result<SkeletonComponent, SkeletonError> {
    let n = atlas.n;
    if j > n {
        return Err(SkeletonError::InvalidInput(format!("fixed point e_{j} with n = {n}")));
    }
    let expr = act(atlas, action, j)?;
    let mut chart_equations = Vec::new();
    for e in expr.base.iter().chain(&expr.fiber) {
        for (&k, c) in e {
            if k <= 0 {
                chart_equations.push(c.clone());
            }
        }
    }
    let unit = if j == 0 { String::new() } else { x(j) };
    let forced = reduce(&chart_equations, &unit)?;
    let mut forced_zeros: Vec<String> = forced.iter().cloned().collect();
    sort_vars(&mut forced_zeros);
    let free_base: Vec<String> = (1..=n).map(x).filter(|v| !forced.contains(v)).collect();
    let free_fiber: Vec<String> = (1..=n).map(y).filter(|v| !forced.contains(v)).collect();
    let classification = classify_component(atlas, j, &forced)?;
    Ok(SkeletonComponent { index: j, n, chart_equations, forced_zeros, free_base, free_fiber, classification })
}

/// Reads the bundle type off the forced-zero pattern and the induced fiber
/// transitions on charts `V_1..V_j`.
pub fn classify_component(
    atlas: &CotangentAtlas,
    j: usize,
    forced: &BTreeSet<String>,
) -> Result<Classification, SkeletonError> {
    let n = atlas.n;
    let expect: BTreeSet<String> = (j + 1..=n).map(x).chain((1..=j).map(y)).collect();
    if *forced != expect {
        let mut got: Vec<String> = forced.iter().cloned().collect();
        sort_vars(&mut got);
        return Err(SkeletonError::UnrecognizedForm(format!("forced zeros {got:?} for e_{j}")));
    }
    if j == 0 {
        return Ok(Classification::AffineFiber(n));
    }
    if j == n {
        return Ok(Classification::ZeroSection(n));
    }
    let zero: BTreeMap<String, LaurentPoly> = forced.iter().map(|v| (v.clone(), LaurentPoly::zero())).collect();
    let mut twists = None;
    for i in 1..=j {
        let mut tw = Vec::new();
        for f in &atlas.charts[i].fiber {
            let f = f.substitute(&zero).map_err(|e| SkeletonError::UnrecognizedForm(e.to_string()))?;
            if f.is_zero() {
                continue;
            }
            let (c, pw) = f
                .as_monomial()
                .ok_or_else(|| SkeletonError::UnrecognizedForm(format!("fiber coordinate {f} on V_{i}")))?;
            let ys: Vec<&String> = pw.keys().filter(|v| v.starts_with('y')).collect();
            let gx = pw.get(&x(i)).copied().unwrap_or(0);
            if ys.len() != 1 || pw[ys[0]] != 1 || pw.len() != 2 || gx == 0 || c != rat(1) {
                return Err(SkeletonError::UnrecognizedForm(format!("fiber coordinate {f} on V_{i}")));
            }
            tw.push(-gx);
        }
        if tw.len() != n - j || twists.as_ref().is_some_and(|t| *t != tw) {
            return Err(SkeletonError::UnrecognizedForm(format!("fiber transitions on V_{i}")));
        }
        twists = Some(tw);
    }
    Ok(Classification::TwistedBundle { base_dim: j, rank: n - j, twists: twists.expect("j >= 1") })
}

/// Closed form: `C^n`, `O_{P^j}(-1)^(n-j)`, `P^n`.
pub fn closed_form(n: usize, j: usize) -> Classification {
    match j {
        0 => Classification::AffineFiber(n),
        j if j == n => Classification::ZeroSection(n),
        j => Classification::TwistedBundle { base_dim: j, rank: n - j, twists: vec![-1; n - j] },
    }
}

pub fn skeleton_with(n: usize, action: &TorusAction) -> Result<Vec<SkeletonComponent>, SkeletonError> {
    let atlas = build_atlas(n)?;
    (0..=n).map(|j| stable_manifold(&atlas, action, j)).collect()
}

pub fn skeleton(n: usize) -> Result<Vec<SkeletonComponent>, SkeletonError> {
    skeleton_with(n, &TorusAction::standard(n))
}
