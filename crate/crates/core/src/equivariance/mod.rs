//! Finite groups, subgroup lattices, finite G-sets and connectivity functions.

mod conn;
mod group;
mod gset;
mod lattice;

pub use conn::{
  certificate_shift, excision_bound, indexed_wedge_bound, indexed_wedge_bound_looped, min_below,
  permutation_sphere_gain, sphere_gain, wedge_bound, AnalyticityCertificate, ClassFn, ConnFn,
  ConnFnQ, Ext, ExtInt, ExtRat, WedgeBound,
};
pub use group::FiniteGroup;
pub use gset::{FiniteGSet, OrbitData};
pub use lattice::{SubgroupLattice, DEFAULT_GROUP_BOUND};
