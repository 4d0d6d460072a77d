//! Integral homology of simplicial sets, chain complexes and mapping cones.

mod chains;
mod fp;
mod matrix;
mod moore;

pub use chains::*;
pub use fp::*;
pub use matrix::*;
pub use moore::*;
