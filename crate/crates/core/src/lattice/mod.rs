//! Kitaev lattice model with boundaries on sparse state vectors.

pub mod boundary;
pub mod geometry;
pub mod ribbon;
pub mod site;
pub mod state;
pub mod yribbon;

pub use geometry::{Dir, EdgeKey, Face, Lattice, PatchShape, Restriction, Side, Site, Vertex};
pub use site::{all_configs, vacuum_one, vacuum_two, verify_dg_rep, verify_terms};
pub use state::{Config, LatticeState};
pub use ribbon::{verify_ribbon, BoundRibbon, QuasiBasis, Ribbon, Triangle};
pub use boundary::{boundary_strip, condensation_table, lattice_suite, verify_boundary_ribbon, verify_xi_rep, CondensationTable};
pub use yribbon::{concat_residual, example_yrib, order_independence, search_lattice, triangle_relations, y_counterexample, Lambda, YExample, YRibbon, YSearch};
