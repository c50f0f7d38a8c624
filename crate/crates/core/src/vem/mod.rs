//! Conforming virtual elements of order 1..=3 for `-lap u = f` on the unit
//! square with Dirichlet data.

pub mod assembly;
pub mod basis;
pub mod local;

pub use assembly::{build_locals, DofMap, Discretization, Solution, VemConfig};
pub use basis::{dim_pk, exponents, polygon_moments, ScaledMonomials};
pub use local::{build_local, cond2, dof_count, LocalData, Stabilization};
