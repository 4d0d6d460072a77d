//! The equivariant Dold-Thom construction and its fixed points.

mod coeff;
mod fixed;
mod les;
mod space;

pub use coeff::*;
pub use fixed::*;
pub use les::*;
pub use space::*;
