//! Finite pointed simplicial G-sets and Real simplicial sets.

mod build;
pub mod ops;
mod real;
mod retractive;
pub mod samples;
mod set;

pub use build::{
  build_cocartesian_cube, cone, delta, indexed_wedge_product, ordered_complex, point, product,
  pushout, quotient, rep_sphere, smash, smash_all, sphere, suspension, wedge, GCube,
  IndexedWedgeProduct, Product, Pushout, Wedge,
};
pub use real::{
  doubled, edgewise_subdivide, real_circle, real_delta, real_ordered_complex, real_product,
  real_quotient, real_smash, real_sphere, real_subcomplex, RealSimplicialSet, Subdivision,
};
pub use retractive::{smash_over_base, suspension_over_base, RetractiveGSset};
pub use set::{Builder, Cell, Simplex, SimplicialGSet, SimplicialMap, BASE, DEFAULT_TRUNCATION};
