//! Exact arithmetic: finite fields, polynomials, matrices over GF(q),
//! dyadic rationals and integer matrices.

pub mod dyadic;
pub mod field;
pub mod intmat;
pub mod matrix;
pub mod poly;

pub use dyadic::DyadicRational;
pub use field::{FieldElem, FiniteField};
pub use intmat::IntMatrix;
pub use matrix::Matrix;
pub use poly::{irreducible_monics, Polynomial};
