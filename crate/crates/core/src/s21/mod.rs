mod extend;
mod level;
mod shape;
mod split;
mod strict;
mod trace;

pub use extend::{
  compare_routes, dual_family, dual_lands, extend_by_search, extend_by_smith, extension_elements,
  is_compatible, pull_family, push_family, span, ExtensionComparison, Family, KernelMod,
};
pub use level::{compare_with_oracle, Diagram, Level, OracleComparison, Transformation};
pub use shape::{codegeneracy, coface, Shape};
pub use split::{verify_split_pa, HomComparison, SplitPaReport};
pub use strict::{
  check_strict_duality, reindex, StrictDualityReport, StrictLevel, StrictMorphism, StrictObject,
};
pub use trace::{
  curated_inputs, kr_hr_levels, trace_conn, CoeffSystem, LevelConn, TraceConn, TraceLevel,
};
