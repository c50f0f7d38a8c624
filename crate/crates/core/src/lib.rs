//! Polygonal meshes, polygon quality metrics and a conforming virtual element
//! solver for the Poisson problem on the unit square.
//!
//! The crate is `no_std` (with `alloc`) so the numerical kernels can be reused
//! anywhere; file formats, reporting and the command line live in the `polyvem`
//! companion crate.
//!
//! Module map:
//!
//! - [`geometry`], [`mesh`]: points, simple polygons, the [`Mesh`] record and
//!   its validation.
//! - [`metrics`]: the fourteen per-polygon quality metrics and their mesh
//!   aggregations.
//! - [`datasets`]: generators for the reference, hybrid, mirroring and
//!   parametric mesh families, plus the scaling indicators.
//! - [`quadrature`], [`linalg`], [`vem`]: the virtual element discretization
//!   of order 1..=3 and its linear algebra.
//! - [`perf`]: error norms, conditioning diagnostics and performance indexes.
//! - [`indicator`]: the geometry-only quality indicator.
//! - [`stats`]: Spearman rank correlation.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod datasets;
pub mod error;
pub mod geometry;
pub mod indicator;
pub mod linalg;
pub mod mesh;
pub mod metrics;
pub mod perf;
pub mod quadrature;
pub mod stats;
pub mod vem;

pub use error::{Error, Result};
pub use geometry::Point;
pub use mesh::{Dataset, Mesh};

/// Items every module pulls in. Outside `std`, float methods (`sqrt`, `sin`,
/// ...) come from `num_traits::Float`, which is backed by `libm`.
pub(crate) mod prelude {
    pub use alloc::format;
    pub use alloc::string::{String, ToString};
    pub use alloc::vec;
    pub use alloc::vec::Vec;
    #[cfg(not(feature = "std"))]
    #[allow(unused_imports)]
    pub use num_traits::Float;
}
