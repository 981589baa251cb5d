//! Boundary algebras Ξ(R,K) of the Kitaev quantum double model.
//!
//! Finite-group data ([`group_core`]) feeds the algebras D(G) and Ξ(R,K)
//! ([`doubles`]), their quasi-Hopf and *-structure ([`quasihopf`]), a sparse
//! lattice simulator with boundaries and ribbon operators ([`lattice`]) and
//! patch-based lattice surgery ([`surgery`]).

pub mod doubles;
pub mod error;
pub mod group_core;
pub mod lattice;
pub mod quasihopf;
pub mod report;
pub mod surgery;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Tolerance for complex comparisons.
pub const TOL: f64 = 1e-9;
/// Coefficients below this magnitude are dropped.
pub const PRUNE: f64 = 1e-12;
