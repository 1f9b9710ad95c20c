//! Linear codes over GF(q): constructions, exact weight enumeration and
//! nested chains with certified distance profiles.

pub mod chain;
pub mod families;
pub mod light;
pub mod linear;

pub use chain::{
    chain_complete, chain_complete_with_targets, reed_muller_chain, rs_nested, ChainReport, NestedCodeChain,
};
pub use families::{
    ag_code, binary_image, even_weight, extended_golay, extended_hamming_8, parity_check_code, reed_muller, rs_code,
    simplex_concat, simplex_phi, EvaluationData,
};
pub use light::light_vector_bound;
pub use linear::{LinearCode, ENUMERATION_BUDGET};
