use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use super::matrix::SparseMatrix;
use crate::{
  equivariance::{ConnFn, Ext, ExtInt, SubgroupLattice},
  error::{invalid, Result},
  sset::{Simplex, SimplicialGSet, SimplicialMap, BASE},
};

/// A bounded complex of free abelian groups; `boundaries[n]: C_n -> C_{n-1}`.
///
/// Homology is exact in degrees `<= reliable`; above that the complex may be cut off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
  pub ranks: Vec<usize>,
  pub boundaries: Vec<SparseMatrix>,
  pub reliable: usize,
  /// True when no generators were discarded, so homology vanishes past the top degree.
  pub complete: bool,
}

impl ChainComplex {
  pub fn new(
    ranks: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
    reliable: usize,
    complete: bool,
  ) -> Result<Self> {
    let c = Self { ranks, boundaries, reliable, complete };
    c.validate()?;
    Ok(c)
  }

  pub fn top(&self) -> usize {
    self.ranks.len().saturating_sub(1)
  }

  pub fn validate(&self) -> Result<()> {
    if self.boundaries.len() != self.ranks.len() {
      return invalid("one boundary matrix per degree required");
    }
    for (n, d) in self.boundaries.iter().enumerate() {
      let below = if n == 0 { 0 } else { self.ranks[n - 1] };
      if d.cols != self.ranks[n] || d.rows != below {
        return invalid(format!("boundary in degree {n} has the wrong shape"));
      }
      if n >= 1 && !self.boundaries[n - 1].mul(d).is_zero() {
        return invalid(format!("boundary squares to a nonzero map in degree {n}"));
      }
    }
    Ok(())
  }

  fn boundary(&self, n: usize) -> Option<&SparseMatrix> {
    self.boundaries.get(n)
  }
}

/// Reduced normalized chains: one generator per nondegenerate non-basepoint simplex.
pub fn reduced_chains(x: &SimplicialGSet) -> ChainComplex {
  let top = x.dim();
  let offset = |d: usize| if d == 0 { 1 } else { 0 };
  let ranks: Vec<usize> = (0..=top).map(|d| x.num_cells(d) - offset(d)).collect();
  let mut boundaries = vec![SparseMatrix::zero(0, ranks[0])];
  for d in 1..=top {
    let mut m = SparseMatrix::zero(ranks[d - 1], ranks[d]);
    for c in x.cells(d) {
      for (i, f) in x.cell_faces(c).iter().enumerate() {
        if !f.is_degenerate() && !f.is_basepoint() {
          m.add(f.cell.idx - offset(d - 1), c.idx, if i % 2 == 0 { 1 } else { -1 });
        }
      }
    }
    boundaries.push(m);
  }
  let complete = !x.is_truncated();
  ChainComplex {
    ranks,
    boundaries,
    reliable: if complete { usize::MAX } else { x.truncation().saturating_sub(1) },
    complete,
  }
}

fn generator(s: &Simplex) -> Option<usize> {
  if s.is_degenerate() || s.is_basepoint() {
    None
  } else {
    Some(s.cell.idx - if s.cell.dim == 0 { 1 } else { 0 })
  }
}

/// The induced map on reduced normalized chains, per degree.
pub fn chain_map(f: &SimplicialMap) -> Vec<SparseMatrix> {
  let (x, y) = (&f.source, &f.target);
  (0..=x.dim())
    .map(|d| {
      let offset = if d == 0 { 1 } else { 0 };
      let mut m =
        SparseMatrix::zero(y.num_cells(d).saturating_sub(offset), x.num_cells(d) - offset);
      for c in x.cells(d).filter(|&c| c != BASE) {
        if let Some(r) = generator(f.cell_image(c)) {
          m.add(r, c.idx - offset, 1);
        }
      }
      m
    })
    .collect()
}

/// `Cone_n = C_{n-1} + D_n` with `d(x, y) = (-dx, f x + dy)`.
pub fn mapping_cone(c: &ChainComplex, d: &ChainComplex, f: &[SparseMatrix]) -> ChainComplex {
  let top = (c.top() + 1).max(d.top());
  let rank = |cc: &ChainComplex, n: usize| cc.ranks.get(n).copied().unwrap_or(0);
  let ranks: Vec<usize> =
    (0..=top).map(|n| if n == 0 { 0 } else { rank(c, n - 1) } + rank(d, n)).collect();
  let mut boundaries = Vec::with_capacity(top + 1);
  for n in 0..=top {
    let below = if n == 0 { 0 } else { ranks[n - 1] };
    let mut m = SparseMatrix::zero(below, ranks[n]);
    if n >= 1 {
      let cx = rank(c, n - 1);
      let c_below = if n >= 2 { rank(c, n - 2) } else { 0 };
      if n >= 2 {
        if let Some(dc) = c.boundary(n - 1) {
          for (r, col, v) in dc.entries() {
            m.add(r, col, -v.clone());
          }
        }
      }
      if let Some(fm) = f.get(n - 1) {
        for (r, col, v) in fm.entries() {
          m.add(c_below + r, col, v.clone());
        }
      }
      if let Some(dd) = d.boundary(n) {
        for (r, col, v) in dd.entries() {
          m.add(c_below + r, cx + col, v.clone());
        }
      }
    }
    boundaries.push(m);
  }
  ChainComplex {
    ranks,
    boundaries,
    reliable: c.reliable.saturating_add(1).min(d.reliable),
    complete: c.complete && d.complete,
  }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology {
  pub betti: usize,
  pub torsion: Vec<BigInt>,
}

impl DegreeHomology {
  pub fn is_zero(&self) -> bool {
    self.betti == 0 && self.torsion.is_empty()
  }

  pub fn is_z(&self) -> bool {
    self.betti == 1 && self.torsion.is_empty()
  }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
  pub degrees: Vec<DegreeHomology>,
  /// Highest degree computed exactly.
  pub reliable: usize,
  pub complete: bool,
}

impl HomologyReport {
  pub fn degree(&self, n: usize) -> DegreeHomology {
    self.degrees.get(n).cloned().unwrap_or(DegreeHomology { betti: 0, torsion: Vec::new() })
  }

  /// Largest `c` with vanishing homology in all degrees `<= c`.
  pub fn connectivity(&self) -> Connectivity {
    let limit = self.degrees.len().min(self.reliable.saturating_add(1));
    match (0..limit).find(|&n| !self.degrees[n].is_zero()) {
      Some(n) => Connectivity { value: Ext::Fin(n as i64 - 1), window_limited: false },
      None if self.complete => Connectivity { value: Ext::PosInf, window_limited: false },
      None => Connectivity { value: Ext::Fin(limit as i64 - 1), window_limited: true },
    }
  }

  pub fn to_json(&self) -> Value {
    json!({
      "reliable_through": if self.complete { Value::Null } else { json!(self.reliable) },
      "degrees": self.degrees.iter().enumerate().filter(|(n, _)| *n <= self.reliable).map(|(n, h)| json!({
        "degree": n,
        "betti": h.betti,
        "torsion": h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
      })).collect::<Vec<_>>(),
    })
  }
}

/// Homological connectivity; when `window_limited`, `value` is only a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Connectivity {
  pub value: ExtInt,
  pub window_limited: bool,
}

pub fn homology(c: &ChainComplex) -> Result<HomologyReport> {
  c.validate()?;
  Ok(homology_unchecked(c))
}

pub(crate) fn homology_unchecked(c: &ChainComplex) -> HomologyReport {
  let factors: Vec<Vec<BigInt>> = c.boundaries.iter().map(|d| d.invariant_factors()).collect();
  let degrees = (0..c.ranks.len())
    .map(|n| {
      let rank_out = factors[n].len();
      let incoming = factors.get(n + 1).map_or(&[][..], |f| &f[..]);
      DegreeHomology {
        betti: c.ranks[n] - rank_out - incoming.len(),
        torsion: incoming.iter().filter(|t| !t.is_one()).cloned().collect(),
      }
    })
    .collect();
  let reliable = if c.complete { usize::MAX } else { c.reliable.min(c.top().saturating_sub(1)) };
  HomologyReport { degrees, reliable, complete: c.complete }
}

pub fn reduced_homology(x: &SimplicialGSet) -> HomologyReport {
  homology_unchecked(&reduced_chains(x))
}

/// Connectivity of a space: largest `c` with vanishing reduced homology through degree `c`.
pub fn conn_space(x: &SimplicialGSet) -> Connectivity {
  reduced_homology(x).connectivity()
}

/// Largest `nu` such that the mapping cone has vanishing homology in degrees `<= nu`.
pub fn conn_map(f: &SimplicialMap) -> Connectivity {
  let c = reduced_chains(&f.source);
  let d = reduced_chains(&f.target);
  let cone = mapping_cone(&c, &d, &chain_map(f));
  homology_unchecked(&cone).connectivity()
}

/// `conn_map` on the `H`-fixed points for every subgroup, keyed by conjugacy class.
pub fn equivariant_conn(
  f: &SimplicialMap,
  lattice: &std::sync::Arc<SubgroupLattice>,
) -> (ConnFn, bool) {
  let src = &f.source;
  let tgt = &f.target;
  let limited = std::cell::Cell::new(false);
  let conn = ConnFn::from_fn(lattice, |h| {
    let (xs, xi) = src.fixed_points(lattice, h);
    let (ys, yi) = tgt.fixed_points(lattice, h);
    let back: std::collections::HashMap<_, _> =
      ys.all_cells().map(|c| (yi.cell_image(c).cell, c)).collect();
    let fh = SimplicialMap::from_fn(&xs, &ys, |c| {
      let s = f.cell_image(xi.cell_image(c).cell);
      Simplex { surj: s.surj.clone(), cell: back[&s.cell] }
    });
    let k = conn_map(&fh);
    limited.set(limited.get() | k.window_limited);
    k.value
  });
  (conn, limited.get())
}

/// Space connectivity of every fixed-point set.
pub fn equivariant_conn_space(
  x: &std::sync::Arc<SimplicialGSet>,
  lattice: &std::sync::Arc<SubgroupLattice>,
) -> ConnFn {
  ConnFn::from_fn(lattice, |h| conn_space(&x.fixed_points(lattice, h).0).value)
}

#[cfg(test)]
mod tests {
  use std::sync::Arc;

  use super::*;
  use crate::{
    equivariance::{FiniteGSet, FiniteGroup},
    sset::{cone, delta, product, rep_sphere, smash, sphere, suspension},
  };

  fn z(n: i64) -> BigInt {
    BigInt::from(n)
  }

  #[test]
  fn spheres_and_simplices() {
    let g = FiniteGroup::trivial();
    for n in 0..4 {
      let h = reduced_homology(&sphere(&g, n));
      assert!(h.degree(n).is_z());
      assert!((0..5).filter(|&k| k != n).all(|k| h.degree(k).is_zero()));
      assert_eq!(conn_space(&sphere(&g, n)).value, Ext::Fin(n as i64 - 1));
    }
    assert_eq!(conn_space(&delta(&g, 3, 0)).value, Ext::PosInf);
  }

  #[test]
  fn torsion_from_a_chain_complex() {
    let mut d1 = SparseMatrix::zero(1, 1);
    d1.add(0, 0, 2);
    let c = ChainComplex::new(vec![1, 1], vec![SparseMatrix::zero(0, 1), d1], 1, true).unwrap();
    let h = homology(&c).unwrap();
    assert_eq!(h.degree(0).torsion, vec![z(2)]);
    assert!(h.degree(1).is_zero());
    let mut bad = SparseMatrix::zero(1, 1);
    bad.add(0, 0, 1);
    assert!(ChainComplex::new(
      vec![1, 1, 1],
      vec![SparseMatrix::zero(0, 1), bad.clone(), bad],
      2,
      true
    )
    .is_err());
  }

  #[test]
  fn torus() {
    let g = FiniteGroup::trivial();
    let s1 = Arc::new(sphere(&g, 1));
    let t = product(&[s1.clone(), s1], None).unwrap();
    let h = reduced_homology(&t.space);
    assert_eq!(h.degree(1).betti, 2);
    assert!(h.degree(2).is_z());
    assert!(h.degree(3).is_zero());
  }

  #[test]
  fn cones_and_suspensions() {
    let g = FiniteGroup::trivial();
    let s1 = Arc::new(sphere(&g, 1));
    let (c, inc) = cone(&s1).unwrap();
    assert_eq!(conn_space(&c).value, Ext::PosInf);
    assert_eq!(conn_map(&inc).value, Ext::Fin(1));
    assert_eq!(conn_map(&SimplicialMap::identity(&s1)).value, Ext::PosInf);
    let s2 = smash(&s1, &s1).unwrap();
    assert!(reduced_homology(&s2).degree(2).is_z());
    let sig = suspension(&s2).unwrap();
    assert_eq!(conn_space(&sig).value, Ext::Fin(2));
  }

  #[test]
  fn regular_representation_spheres() {
    let g = FiniteGroup::cyclic(2);
    let lattice = Arc::new(SubgroupLattice::new(&g).unwrap());
    let rho = rep_sphere(&g, &FiniteGSet::free(&g, 1)).unwrap();
    assert!(reduced_homology(&rho).degree(2).is_z());
    let c = equivariant_conn_space(&rho, &lattice);
    assert_eq!(c.at(lattice.trivial()), Ext::Fin(1));
    assert_eq!(c.at(lattice.top()), Ext::Fin(0));
    let two = rep_sphere(&g, &FiniteGSet::free(&g, 2)).unwrap();
    let c = equivariant_conn_space(&two, &lattice);
    assert_eq!((c.at(lattice.trivial()), c.at(lattice.top())), (Ext::Fin(3), Ext::Fin(1)));
  }
}
