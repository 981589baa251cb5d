//! D(G) and Ξ(R,K) as concrete *-algebras, and bulk↔boundary multiplicities.

mod dg;
pub mod elem;
mod multiplicity;
mod xi;

pub use dg::{BulkLabels, DgLabel, DoubleAlgebra};
pub use elem::{Elem, LegMap, Smash, Tag};
pub use multiplicity::{Multiplicities, MultiplicityTable, SpecialCase};
pub use xi::{BoundaryLabels, XiAlgebra, XiLabel};
