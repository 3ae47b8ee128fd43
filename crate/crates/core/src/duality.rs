//! The correspondence `L_j <-> O(j) + O(-j)` between components of the
//! skeleton of `T*P^(n-1)` and rank-2 bundles on the collar of `Z_n`, and
//! the square formed with the `bir` and `def` arrows.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::birmaps::{bir_step, verify_birational, BirError, Verdict, DEFAULT_SEED};
use crate::bundles::zp;
use crate::deform::{deformation_family, family_splitting_profile, reduce, DeformError};
use crate::exact::Rational;
use crate::skeleton::{skeleton, SkeletonError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("residues ({0}, {1}) are not negatives of each other mod {2}")]
    NotAPair(i64, i64, u32),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Bir(#[from] BirError),
    #[error(transparent)]
    Deform(#[from] DeformError),
}

/// Residues `(j mod n, -j mod n)` naming `L_n(j) + L_n(-j)`.
pub type ResiduePair = (i64, i64);

pub fn pair_of(n: u32, j: i64) -> ResiduePair {
    let m = n as i64;
    (j.rem_euclid(m), (-j).rem_euclid(m))
}

pub fn dual_of_lagrangian(n: u32, j: i64) -> Result<ResiduePair, DualityError> {
    if n == 0 || j < 0 || j >= n as i64 {
        return Err(DualityError::IndexOutOfRange(format!("j = {j} for n = {n}")));
    }
    Ok(pair_of(n, j))
}

pub fn dual_of_bundle_pair(n: u32, pair: ResiduePair) -> Result<i64, DualityError> {
    let m = n as i64;
    let (a, b) = pair;
    if n == 0 || !(0..m).contains(&a) || !(0..m).contains(&b) || (a + b).rem_euclid(m) != 0 {
        return Err(DualityError::NotAPair(a, b, n));
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityEntry {
    pub n: u32,
    pub j: i64,
    pub component: String,
    pub forced_zeros: Vec<String>,
    pub pair: ResiduePair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SquareOptions {
    pub samples: usize,
    pub seed: u64,
    /// Step of the `def` family; the commuting square uses 1.
    pub def_s: i64,
}

impl Default for SquareOptions {
    fn default() -> Self {
        SquareOptions { samples: 100, seed: DEFAULT_SEED, def_s: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub n: u32,
    pub j: i64,
    pub bir: Verdict,
    pub bir_target: i64,
    pub dual_source: ResiduePair,
    pub dual_target: ResiduePair,
    pub def_s: i64,
    /// Splitting types at `tau = 0, 1, 2, 1/3`.
    pub def_profile: Vec<i64>,
    pub def_source: ResiduePair,
    pub verdict: bool,
    pub failure: Option<String>,
}

pub const DEF_TAUS: [(i64, i64); 4] = [(0, 1), (1, 1), (2, 1), (1, 3)];

/// Checks `dual(bir(L_j))` against the `tau = 0` end of the `def` family
/// that deforms to `dual(L_j)`.
pub fn square_check(n: u32, j: i64, opts: &SquareOptions) -> Result<SquareReport, DualityError> {
    if n < 2 || j < 0 || j + 2 > n as i64 {
        return Err(DualityError::IndexOutOfRange(format!("square needs 0 <= j <= n - 2, got n = {n}, j = {j}")));
    }
    let step = bir_step(n as usize, j as usize)?;
    let bir = verify_birational(&step.forward, &step.inverse, opts.samples, opts.seed)?;
    let back = verify_birational(&step.inverse, &step.forward, opts.samples, opts.seed)?;
    let bir_target = j + 1;
    let dual_source = dual_of_lagrangian(n, j)?;
    let dual_target = dual_of_lagrangian(n, bir_target)?;

    let class = reduce(n, j + 1, &zp(j))?;
    let fam = deformation_family(&class, opts.def_s)?;
    let def_profile = family_splitting_profile(&fam, &def_taus())?;
    let def_source = pair_of(n, def_profile[0]);

    let failure = if !bir.passed || !back.passed {
        Some(format!("bir round trip failed: {bir:?} / {back:?}"))
    } else if def_profile[1..].iter().any(|&k| pair_of(n, k) != dual_source) {
        Some(format!("def family off tau = 0 has splitting {:?}, expected residue {dual_source:?}", &def_profile[1..]))
    } else if def_source != dual_target {
        Some(format!("def source {def_source:?} differs from dual(bir(L_{j})) = {dual_target:?}"))
    } else {
        None
    };
    Ok(SquareReport {
        n,
        j,
        bir,
        bir_target,
        dual_source,
        dual_target,
        def_s: opts.def_s,
        def_profile,
        def_source,
        verdict: failure.is_none(),
        failure,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub n: u32,
    pub seed: u64,
    pub samples: usize,
    pub entries: Vec<DualityEntry>,
    pub squares: Vec<SquareReport>,
    pub all_verified: bool,
}

pub fn duality_report(n: u32, opts: &SquareOptions) -> Result<DualityReport, DualityError> {
    if n < 2 {
        return Err(DualityError::IndexOutOfRange(format!("duality report needs n >= 2, got {n}")));
    }
    let comps = skeleton(n as usize - 1)?;
    let entries = comps
        .iter()
        .map(|c| {
            let j = c.index as i64;
            Ok(DualityEntry {
                n,
                j,
                component: c.classification.to_string(),
                forced_zeros: c.forced_zeros.clone(),
                pair: dual_of_lagrangian(n, j)?,
            })
        })
        .collect::<Result<Vec<_>, DualityError>>()?;
    let squares = (0..n as i64 - 1).map(|j| square_check(n, j, opts)).collect::<Result<Vec<_>, _>>()?;
    let all_verified = entries.len() == n as usize && squares.iter().all(|s| s.verdict);
    Ok(DualityReport { n, seed: opts.seed, samples: opts.samples, entries, squares, all_verified })
}

impl fmt::Display for DualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# duality n={} seed={} samples={}", self.n, self.seed, self.samples)?;
        for e in &self.entries {
            writeln!(
                f,
                "L_{} = {:<40} <-> L_{n}({}) + L_{n}({})",
                e.j,
                e.component,
                e.pair.0,
                e.pair.1,
                n = self.n
            )?;
        }
        for s in &self.squares {
            writeln!(
                f,
                "square {} -> {}: bir {}/{} def {:?} {}",
                s.j,
                s.bir_target,
                s.bir.checked - s.bir.failed,
                s.bir.checked,
                s.def_profile,
                if s.verdict { "ok" } else { "FAILED" }
            )?;
        }
        write!(f, "all squares verified: {}", self.all_verified)
    }
}

pub fn def_taus() -> Vec<Rational> {
    DEF_TAUS.iter().map(|&(p, q)| Rational::new(p.into(), q.into())).collect()
}
