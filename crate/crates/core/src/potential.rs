//! Hamiltonian potential of the torus action on `V_0` with
//! `omega = sum dx_i ^ dy_i`.
//!
//! A potential `h` is accepted for a field `X` when `dh(Z) = kappa omega(X, Z)`
//! for every `Z`. The factor `kappa` is a parameter; `kappa = 2` with the
//! standard weights gives `h = sum -2 i x_i y_i + c`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{rat, LaurentPoly, RatMatrix, Rational};
use crate::skeleton::{x, y};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PotentialError {
    #[error("field is not Hamiltonian: {0}")]
    NotHamiltonian(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// `omega = sum dx_i ^ dy_i` on `C^(2n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymplecticStructure {
    pub n: usize,
}

impl SymplecticStructure {
    pub fn new(n: usize) -> Self {
        SymplecticStructure { n }
    }

    /// `omega(X, Z) = sum X_{x_i} Z_{y_i} - X_{y_i} Z_{x_i}`.
    pub fn pair(&self, a: &VectorField, b: &VectorField) -> LaurentPoly {
        let n = self.n;
        (0..n)
            .map(|i| &a.components[i] * &b.components[n + i] - &a.components[n + i] * &b.components[i])
            .sum()
    }
}

/// Components along `x_1..x_n, y_1..y_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VectorField {
    pub n: usize,
    pub components: Vec<LaurentPoly>,
}

impl VectorField {
    pub fn new(n: usize, components: Vec<LaurentPoly>) -> Result<Self, PotentialError> {
        if components.len() != 2 * n {
            return Err(PotentialError::InvalidInput(format!("{} components for n = {n}", components.len())));
        }
        Ok(VectorField { n, components })
    }

    /// Fully symbolic field `(a_1..a_n, b_1..b_n)`.
    pub fn symbolic(n: usize) -> Self {
        let components = (1..=n)
            .map(|i| LaurentPoly::var(&format!("a{i}")))
            .chain((1..=n).map(|i| LaurentPoly::var(&format!("b{i}"))))
            .collect();
        VectorField { n, components }
    }

    pub fn coordinates(n: usize) -> Vec<String> {
        (1..=n).map(x).chain((1..=n).map(y)).collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.components.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", c.join(", "))
    }
}

/// Derivative of the action at `t = 1`: `(-w_i x_i, w_i y_i)`.
pub fn action_vector_field(weights: &[i64]) -> VectorField {
    let n = weights.len();
    let components = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| LaurentPoly::monomial(rat(-w), &[(&x(i + 1), 1)]))
        .chain(weights.iter().enumerate().map(|(i, &w)| LaurentPoly::monomial(rat(w), &[(&y(i + 1), 1)])))
        .collect();
    VectorField { n, components }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Potential {
    pub n: usize,
    /// Includes the free constant `c`.
    pub h: LaurentPoly,
    #[serde(serialize_with = "ser_rat")]
    pub kappa: Rational,
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl Potential {
    pub fn gradient(&self) -> Vec<LaurentPoly> {
        VectorField::coordinates(self.n).iter().map(|v| self.h.derivative(v)).collect()
    }

    /// `(dh/dy, -dh/dx)`.
    pub fn symplectic_gradient(&self) -> VectorField {
        let g = self.gradient();
        let n = self.n;
        let components = g[n..].iter().cloned().chain(g[..n].iter().map(|p| -p.clone())).collect();
        VectorField { n, components }
    }

    /// Kernel of the linear part of `dh = 0`, in `(x, y)` coordinates.
    pub fn critical_points(&self) -> Result<Vec<Vec<Rational>>, PotentialError> {
        let coords = VectorField::coordinates(self.n);
        let mut rows = Vec::new();
        for g in self.gradient() {
            let mut row = vec![rat(0); coords.len()];
            for (m, c) in g.named_terms() {
                let live: Vec<(&String, &i64)> = m.iter().filter(|(_, &e)| e != 0).collect();
                match live.as_slice() {
                    [(v, 1)] => {
                        let k = coords
                            .iter()
                            .position(|u| u == *v)
                            .ok_or_else(|| PotentialError::InvalidInput(format!("stray variable {v}")))?;
                        row[k] = c;
                    }
                    _ => return Err(PotentialError::InvalidInput(format!("gradient {g} is not linear"))),
                }
            }
            rows.push(row);
        }
        let m = RatMatrix::from_rows(rows).map_err(|e| PotentialError::InvalidInput(e.to_string()))?;
        Ok(m.kernel())
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h = {}", self.h)
    }
}

/// Integrates `dh = kappa omega(X, .)`.
pub fn solve_potential(
    field: &VectorField,
    omega: &SymplecticStructure,
    kappa: &Rational,
) -> Result<Potential, PotentialError> {
    let n = field.n;
    if omega.n != n {
        return Err(PotentialError::InvalidInput(format!("field of dimension {n}, form of dimension {}", omega.n)));
    }
    let coords = VectorField::coordinates(n);
    let grad: Vec<LaurentPoly> = (0..n)
        .map(|i| field.components[n + i].scale(&-kappa.clone()))
        .chain((0..n).map(|i| field.components[i].scale(kappa)))
        .collect();
    if grad.iter().any(|g| !g.is_polynomial()) {
        return Err(PotentialError::NotHamiltonian("field is not polynomial".into()));
    }
    for (i, u) in coords.iter().enumerate() {
        for (j, v) in coords.iter().enumerate().skip(i + 1) {
            if grad[i].derivative(v) != grad[j].derivative(u) {
                return Err(PotentialError::NotHamiltonian(format!("d/d{v} of h_{u} differs from d/d{u} of h_{v}")));
            }
        }
    }
    // Euler: sum u dh/du = d h on each degree-d part
    let mut by_degree: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
    for (g, u) in grad.iter().zip(&coords) {
        for (m, c) in g.named_terms() {
            let d: i64 = m.values().sum();
            let term = LaurentPoly::monomial(c, &m.iter().map(|(k, &e)| (k.as_str(), e)).collect::<Vec<_>>());
            let e = by_degree.entry(d).or_default();
            *e = std::mem::take(e) + term * LaurentPoly::var(u);
        }
    }
    let h: LaurentPoly = by_degree
        .into_iter()
        .map(|(d, p)| p.scale(&Rational::new(1.into(), (d + 1).into())))
        .sum();
    let check: Vec<LaurentPoly> = coords.iter().map(|u| h.derivative(u)).collect();
    if check != grad {
        return Err(PotentialError::NotHamiltonian("integrated potential fails its gradient check".into()));
    }
    Ok(Potential { n, h: h + LaurentPoly::var("c"), kappa: kappa.clone() })
}

/// `dh(Z) - kappa omega(X, Z)`.
pub fn hamiltonian_residual(
    p: &Potential,
    field: &VectorField,
    omega: &SymplecticStructure,
    z: &VectorField,
) -> LaurentPoly {
    let dh: LaurentPoly = p.gradient().iter().zip(&z.components).map(|(g, c)| g * c).sum();
    dh - omega.pair(field, z).scale(&p.kappa)
}

/// `sum -kappa w_i x_i y_i + c`, the closed form for a diagonal action.
pub fn closed_form(weights: &[i64], kappa: &Rational) -> LaurentPoly {
    weights
        .iter()
        .enumerate()
        .map(|(i, &w)| LaurentPoly::monomial(-kappa.clone() * rat(w), &[(&x(i + 1), 1), (&y(i + 1), 1)]))
        .sum::<LaurentPoly>()
        + LaurentPoly::var("c")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(w: &[i64], k: i64) -> Potential {
        solve_potential(&action_vector_field(w), &SymplecticStructure::new(w.len()), &rat(k)).unwrap()
    }

    #[test]
    fn field_examples() {
        let f = action_vector_field(&[1, 2, 3]);
        assert_eq!(f.to_string(), "(-x1, -2*x2, -3*x3, y1, 2*y2, 3*y3)");
        assert!(action_vector_field(&[0, 0]).components.iter().all(LaurentPoly::is_zero));
        assert_eq!(action_vector_field(&[1]).to_string(), "(-x1, y1)");
    }

    #[test]
    fn standard_potential() {
        let p = solve(&[1, 2, 3], 2);
        assert_eq!(p.h, closed_form(&[1, 2, 3], &rat(2)));
        assert_eq!(p.to_string(), "h = -2*x1*y1 - 4*x2*y2 - 6*x3*y3 + c");
        assert_eq!(solve(&[1], 2).h.to_string(), "-2*x1*y1 + c");
    }

    #[test]
    fn other_weights_and_zero_field() {
        assert_eq!(solve(&[3, 5], 1).to_string(), "h = -3*x1*y1 - 5*x2*y2 + c");
        assert_eq!(solve(&[0, 0], 2).h, LaurentPoly::var("c"));
    }

    #[test]
    fn residual_vanishes_and_detects_perturbation() {
        let w = [1, 2];
        let f = action_vector_field(&w);
        let om = SymplecticStructure::new(2);
        let z = VectorField::symbolic(2);
        let p = solve(&w, 2);
        assert!(hamiltonian_residual(&p, &f, &om, &z).is_zero());
        let bad = Potential { h: &p.h + &LaurentPoly::monomial(rat(1), &[("x1", 1), ("y1", 1)]), ..p.clone() };
        let r = hamiltonian_residual(&bad, &f, &om, &z);
        assert_eq!(r, LaurentPoly::var("y1") * LaurentPoly::var("a1") + LaurentPoly::var("x1") * LaurentPoly::var("b1"));
    }

    #[test]
    fn symplectic_gradient_is_scaled_field() {
        let w = [2, 7, 1];
        let p = solve(&w, 3);
        let f = action_vector_field(&w);
        let want: Vec<LaurentPoly> = f.components.iter().map(|c| c.scale(&rat(3))).collect();
        assert_eq!(p.symplectic_gradient().components, want);
    }

    #[test]
    fn critical_points_are_fixed_points() {
        assert!(solve(&[1, 2, 3], 2).critical_points().unwrap().is_empty());
        assert_eq!(solve(&[1, 0], 2).critical_points().unwrap().len(), 2);
    }

    #[test]
    fn non_hamiltonian_field_rejected() {
        let x1 = LaurentPoly::var("x1");
        let f = VectorField::new(1, vec![LaurentPoly::zero(), x1.clone() * x1]).unwrap();
        assert!(solve_potential(&f, &SymplecticStructure::new(1), &rat(1)).is_ok());
        let g = VectorField::new(2, vec![
            LaurentPoly::zero(),
            LaurentPoly::zero(),
            LaurentPoly::var("x2"),
            LaurentPoly::zero(),
        ])
        .unwrap();
        assert!(matches!(
            solve_potential(&g, &SymplecticStructure::new(2), &rat(1)),
            Err(PotentialError::NotHamiltonian(_))
        ));
    }
}
