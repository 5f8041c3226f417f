//! Numerical toolkit for harmonic quasiconformal mappings of the unit disk.
//!
//! A map `f = h + conj(g)` is described by a [`MapDescriptor`]. From it the
//! crate computes Wirtinger derivatives, radial lengths, hyperbolic
//! geometry, boundary distances, John-disk criteria and Poisson-kernel
//! functionals, and checks distortion inequalities on sample grids.

pub mod bounds;
pub mod config;
pub mod corpus;
pub mod error;
pub mod geometry;
pub mod hmap;
pub mod johndisk;
pub mod poisson;
pub mod quad;
pub mod radial;
pub mod suite;
pub mod transforms;

pub use config::Config;
pub use corpus::Corpus;
pub use error::{Error, Result};
pub use hmap::{AnalyticPart, CatalogFn, MapDescriptor, MapFlags, WirtingerPair};
pub use num_complex::Complex64;
