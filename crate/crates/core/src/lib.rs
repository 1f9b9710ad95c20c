//! Lattices from nested code chains: finite fields, linear codes, curve
//! towers, exact lattice enumeration and the numeric bounds that go with
//! them.

#![allow(clippy::needless_range_loop, clippy::type_complexity, clippy::large_enum_variant)]

pub mod algebra;
pub mod bounds;
pub mod codes;
pub mod curves;
pub mod error;
pub mod lattices;
pub mod verify;

pub use error::{Error, Result};
