//! Finite categories with duality, strictification, symmetric forms, semidirect products,
//! the Real nerve and swallowing.

mod cat;
mod nerve;
mod semidirect;
mod strict;
pub mod swallow;

pub use cat::{check_equivalence, is_natural, Duality, EquivalenceReport, FinCat, Functor};
pub use nerve::{compare_sym_nerve, nerve, real_nerve, SymNerveComparison};
pub use semidirect::{
  classify_split_extension, coprod_embed, semidirect_cat, AdditiveCat, CoprodEmbedding, Semidirect,
  SplitExtensionReport, TableBimodule,
};
pub use strict::{
  product, product_duality, standard_embedding, strict_inverse, strictify, sym, sym_equivalences,
  StrictInverse, StrictInverseReport, Strictified, SymCat, SymEquivalences, SymReport,
};
