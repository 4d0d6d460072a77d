mod modcat;
mod ring;

pub use modcat::{hm_bimodule, split_square_zero, KernelComparison, ModCat, SplitSquareZero};
pub use ring::{dual_numbers_f2, ring_isomorphisms, semidirect_ring, WallBimodule, WallRing};
