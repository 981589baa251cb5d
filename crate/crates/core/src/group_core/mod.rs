//! Finite groups, subgroups, transversals and their representation data.

pub mod catalog;
mod character;
mod conjugacy;
mod group;
mod irreps;
mod orbit;
mod subgroup;
mod transversal;

pub use character::CharacterTable;
pub use conjugacy::ConjugacyData;
pub use group::{compose, cycle_label, parse_cycles, FiniteGroup, MAX_ORDER};
pub use irreps::{irreps_from_json, matrix_irreps, Irrep, Mat};
pub use orbit::OrbitData;
pub use subgroup::Subgroup;
pub use transversal::Transversal;
