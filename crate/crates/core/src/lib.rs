//! Exact computational toolkit relating Lagrangian skeleta of `T*P^n` to
//! vector bundles on collars of the local surfaces `Z_n = Tot O_{P^1}(-n)`.
//!
//! The crate is organised by subject:
//!
//! * [`exact`]: rationals, Laurent polynomials, rational linear algebra.
//! * [`toric`]: cones, Hirzebruch-Jung resolutions, invariant rings.
//! * [`skeleton`]: chart atlas of `T*P^n`, torus action, stable manifolds.
//! * [`potential`]: Hamiltonian potential of the torus action.
//! * [`birmaps`]: Segre embeddings, linear projections, birational steps.
//! * [`bundles`]: line and rank-2 bundles on `Z_n` and its collar.
//! * [`deform`]: extension classes and one-parameter deformation families.
//! * [`duality`]: the correspondence between both sides and its square check.

pub mod birmaps;
pub mod bundles;
pub mod deform;
pub mod duality;
pub mod exact;
pub mod potential;
pub mod skeleton;
pub mod toric;

pub use exact::{LaurentPoly, PolyMatrix, RatMatrix, Rational};
