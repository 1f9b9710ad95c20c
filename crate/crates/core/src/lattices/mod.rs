//! Lattices from codes: Constructions A, D and E, T-lattices, LLL and
//! exact shortest-vector enumeration.

mod catalog;
mod construct;
pub(crate) mod enumerate;
mod lattice;
mod lll;
mod tlattice;

pub use catalog::{
    catalog, d4_t, e8_t, lambda16_t, lambda32, lambda_tilde, leech, parity_chain, repetition_chain, z2_t, CatalogEntry,
    CATALOG_NAMES,
};
pub use construct::{
    construction_a, construction_d, construction_d_lift, construction_d_unchecked, contains, lattice_coordinates,
    lattice_from_generators, DyadicVector,
};
pub use enumerate::{
    closest_distance, shortest_vectors, theta_prefix, theta_vectors, ClosestSolver, EnumOptions, ShortVectors,
    MAX_ENUM_DIM, NODE_BUDGET,
};
pub use lattice::DyadicLattice;
pub use lll::{lll_gram, lll_reduce};
pub use tlattice::{
    construction_e, construction_e_min_norm, construction_e_tlattice, minimal_vectors, AxiomCheck, TAxiomReport,
    TLattice,
};
