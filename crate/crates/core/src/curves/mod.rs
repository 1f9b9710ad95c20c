//! Explicit computations on the Garcia-Stichtenoth and Elkies-Drinfeld
//! towers and the modular curves X0(M).

mod genus;
mod towers;

pub use genus::{
    densify_ladder, drinfeld_genus, gs_genus, x0m_invariants, x0m_raw, Family, GenusRecord, X0mInvariants,
};
pub use towers::{elkies_points, gs_points, points_csv, TowerPoint, TowerPoints, POINT_BUDGET};
