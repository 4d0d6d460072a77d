//! Finite models for equivariant calculus and Real algebraic K-theory.

pub mod doldthom;
pub mod dualcat;
pub mod equivariance;
pub mod error;
pub mod homology;
pub mod s21;
pub mod sset;
pub mod wall;

pub use error::{Error, Result};
