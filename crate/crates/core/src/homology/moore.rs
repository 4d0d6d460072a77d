use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{
  chains::{homology_unchecked, ChainComplex, HomologyReport},
  matrix::{smith_normal_form, SmithNormalForm, SparseMatrix},
};
use crate::error::{invalid, Result};

/// A finitely generated abelian group `Z^gens / relations`, relations given as columns.
#[derive(Clone, Debug)]
pub struct Presented {
  pub gens: usize,
  pub relations: Vec<Vec<BigInt>>,
  snf: SmithNormalForm,
}

impl Presented {
  pub fn new(gens: usize, relations: Vec<Vec<BigInt>>) -> Result<Self> {
    if relations.iter().any(|r| r.len() != gens) {
      return invalid("relation has the wrong length");
    }
    let dense: Vec<Vec<BigInt>> =
      (0..gens).map(|i| relations.iter().map(|r| r[i].clone()).collect()).collect();
    let snf = smith_normal_form(&dense, relations.len());
    if snf.diagonal.len() != relations.len() {
      return invalid("relations are not linearly independent");
    }
    Ok(Self { gens, relations, snf })
  }

  pub fn free(gens: usize) -> Self {
    Self::new(gens, Vec::new()).unwrap()
  }

  /// `Z/d_1 + ... + Z/d_k`, with `d = 0` giving a free summand.
  pub fn cyclic(orders: &[u64]) -> Self {
    let rels = orders
      .iter()
      .enumerate()
      .filter(|(_, &d)| d != 0)
      .map(|(i, &d)| (0..orders.len()).map(|j| BigInt::from(if i == j { d } else { 0 })).collect())
      .collect();
    Self::new(orders.len(), rels).unwrap()
  }

  pub fn num_relations(&self) -> usize {
    self.relations.len()
  }

  /// The unique `y` with `relations * y = v`, if `v` is a relation.
  pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let r = self.relations.len();
    let uv: Vec<BigInt> =
      self.snf.u.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
    if uv[r..].iter().any(|x| !x.is_zero()) {
      return None;
    }
    let mut z = Vec::with_capacity(r);
    for (x, d) in uv.iter().zip(&self.snf.diagonal) {
      let (q, rem) = x.div_rem(d);
      if !rem.is_zero() {
        return None;
      }
      z.push(q);
    }
    Some(self.snf.v.iter().map(|row| row.iter().zip(&z).map(|(a, b)| a * b).sum()).collect())
  }

  /// Invariant factors of the group, with zeros for free summands.
  pub fn structure(&self) -> Vec<BigInt> {
    let mut out: Vec<BigInt> =
      self.snf.diagonal.iter().filter(|d| !d.abs().is_one()).cloned().collect();
    out.extend(std::iter::repeat(BigInt::zero()).take(self.gens - self.relations.len()));
    out
  }
}

/// A complex of presented groups; `lifts[k]: Z^{g_k} -> Z^{g_{k-1}}` lifts the differential.
///
/// Each level is a direct sum of presented blocks occupying consecutive generators.
#[derive(Clone, Debug)]
pub struct FgChainComplex {
  pub levels: Vec<Vec<Presented>>,
  pub lifts: Vec<SparseMatrix>,
  pub reliable: usize,
  pub complete: bool,
}

impl FgChainComplex {
  pub fn gens(&self, k: usize) -> usize {
    self.levels.get(k).map_or(0, |l| l.iter().map(|b| b.gens).sum())
  }

  pub fn relations(&self, k: usize) -> usize {
    self.levels.get(k).map_or(0, |l| l.iter().map(|b| b.num_relations()).sum())
  }

  pub fn from_free(c: &ChainComplex) -> Self {
    Self {
      levels: c.ranks.iter().map(|&r| vec![Presented::free(r)]).collect(),
      lifts: c.boundaries.clone(),
      reliable: c.reliable,
      complete: c.complete,
    }
  }

  /// The constant simplicial group with the given cyclic orders, through degree `top`.
  pub fn constant(orders: &[u64], top: usize) -> Self {
    let mut levels = vec![vec![Presented::cyclic(orders)]];
    let mut lifts = vec![SparseMatrix::zero(0, orders.len())];
    for k in 1..=top {
      levels.push(Vec::new());
      lifts.push(SparseMatrix::zero(if k == 1 { orders.len() } else { 0 }, 0));
    }
    Self { levels, lifts, reliable: usize::MAX, complete: true }
  }

  fn relation_matrix(&self, k: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zero(self.gens(k), self.relations(k));
    let (mut go, mut ro) = (0, 0);
    for b in self.levels.get(k).into_iter().flatten() {
      for (j, col) in b.relations.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
          if !v.is_zero() {
            m.add(go + i, ro + j, v.clone());
          }
        }
      }
      go += b.gens;
      ro += b.num_relations();
    }
    m
  }

  fn solve_level(&self, k: usize, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut out = Vec::with_capacity(self.relations(k));
    let mut go = 0;
    for b in &self.levels[k] {
      out.extend(b.solve(&v[go..go + b.gens])?);
      go += b.gens;
    }
    Some(out)
  }

  /// The total complex of the presentations, a free complex with the same homology.
  pub fn total(&self) -> Result<ChainComplex> {
    let top = self.levels.len().saturating_sub(1);
    let rho: Vec<SparseMatrix> = (0..=top).map(|k| self.relation_matrix(k)).collect();
    let lift = |k: usize| -> SparseMatrix {
      self
        .lifts
        .get(k)
        .cloned()
        .unwrap_or_else(|| SparseMatrix::zero(self.gens(k.wrapping_sub(1)), self.gens(k)))
    };
    // E_k: R_k -> R_{k-1} with rho E = D rho, and h_k: Z^{g_k} -> R_{k-2} with rho h = -D D.
    let mut e = vec![SparseMatrix::zero(0, self.relations(0))];
    for k in 1..=top {
      let drho = lift(k).mul(&rho[k]);
      let mut m = SparseMatrix::zero(self.relations(k - 1), self.relations(k));
      for j in 0..drho.cols {
        let v = dense_column(&drho, j);
        let Some(y) = self.solve_level(k - 1, &v) else {
          return invalid(format!("differential does not preserve relations in degree {k}"));
        };
        for (i, x) in y.into_iter().enumerate() {
          m.add(i, j, x);
        }
      }
      e.push(m);
    }
    let mut h = vec![SparseMatrix::zero(0, self.gens(0)), SparseMatrix::zero(0, self.gens(1))];
    for k in 2..=top {
      let dd = lift(k - 1).mul(&lift(k));
      let mut m = SparseMatrix::zero(self.relations(k - 2), self.gens(k));
      for j in 0..dd.cols {
        let v: Vec<BigInt> = dense_column(&dd, j).into_iter().map(|x| -x).collect();
        let Some(y) = self.solve_level(k - 2, &v) else {
          return invalid(format!("differential squares outside the relations in degree {k}"));
        };
        for (i, x) in y.into_iter().enumerate() {
          m.add(i, j, x);
        }
      }
      h.push(m);
    }
    let g = |k: usize| if k <= top { self.gens(k) } else { 0 };
    let r = |k: isize| if k >= 0 && (k as usize) <= top { self.relations(k as usize) } else { 0 };
    let ranks: Vec<usize> = (0..=top + 1).map(|k| g(k) + r(k as isize - 1)).collect();
    let mut boundaries = vec![SparseMatrix::zero(0, ranks[0])];
    for k in 1..=top + 1 {
      let mut m = SparseMatrix::zero(ranks[k - 1], ranks[k]);
      let gk = g(k);
      let gk1 = g(k - 1);
      if k <= top {
        for (i, j, v) in lift(k).entries() {
          m.add(i, j, v.clone());
        }
        if k >= 2 {
          for (i, j, v) in h[k].entries() {
            m.add(gk1 + i, j, v.clone());
          }
        }
      }
      for (i, j, v) in rho[k - 1].entries() {
        m.add(i, gk + j, v.clone());
      }
      if k >= 2 {
        for (i, j, v) in e[k - 1].entries() {
          m.add(gk1 + i, gk + j, -v.clone());
        }
      }
      boundaries.push(m);
    }
    let reliable =
      if self.complete { usize::MAX } else { self.reliable.min(top.saturating_sub(1)) };
    ChainComplex::new(ranks, boundaries, reliable, self.complete)
  }

  pub fn homology(&self) -> Result<HomologyReport> {
    let tot = self.total()?;
    let mut rep = homology_unchecked(&tot);
    let top = self.levels.len().saturating_sub(1);
    rep.degrees.truncate(top + 1);
    if !self.complete {
      rep.reliable = rep.reliable.min(top.saturating_sub(1));
    }
    Ok(rep)
  }
}

fn dense_column(m: &SparseMatrix, j: usize) -> Vec<BigInt> {
  let mut v = vec![BigInt::zero(); m.rows];
  for (i, x) in m.column(j) {
    v[*i] = x.clone();
  }
  v
}

#[cfg(test)]
mod tests {
  use super::*;

  fn z(n: i64) -> BigInt {
    BigInt::from(n)
  }

  #[test]
  fn constant_groups() {
    let h = FgChainComplex::constant(&[2], 4).homology().unwrap();
    assert_eq!(h.degree(0).torsion, vec![z(2)]);
    assert_eq!(h.degree(0).betti, 0);
    assert!((1..4).all(|k| h.degree(k).is_zero()));
    let h = FgChainComplex::constant(&[0, 6], 3).homology().unwrap();
    assert_eq!((h.degree(0).betti, h.degree(0).torsion.clone()), (1, vec![z(6)]));
  }

  #[test]
  fn multiplication_by_two_on_z4() {
    // Z/4 --2--> Z/4 in degrees 1 -> 0: kernel Z/2, cokernel Z/2.
    let mut d = SparseMatrix::zero(1, 1);
    d.add(0, 0, 2);
    let c = FgChainComplex {
      levels: vec![vec![Presented::cyclic(&[4])], vec![Presented::cyclic(&[4])]],
      lifts: vec![SparseMatrix::zero(0, 1), d],
      reliable: usize::MAX,
      complete: true,
    };
    let h = c.homology().unwrap();
    assert_eq!(h.degree(0).torsion, vec![z(2)]);
    assert_eq!(h.degree(1).torsion, vec![z(2)]);
  }

  #[test]
  fn bad_lifts_are_rejected() {
    // Z/2 -> Z/4 sending 1 to 1 is not a homomorphism.
    let mut d = SparseMatrix::zero(1, 1);
    d.add(0, 0, 1);
    let c = FgChainComplex {
      levels: vec![vec![Presented::cyclic(&[4])], vec![Presented::cyclic(&[2])]],
      lifts: vec![SparseMatrix::zero(0, 1), d],
      reliable: usize::MAX,
      complete: true,
    };
    assert!(c.total().is_err());
  }

  #[test]
  fn solving_relations() {
    let p = Presented::new(2, vec![vec![z(2), z(0)], vec![z(1), z(3)]]).unwrap();
    assert_eq!(p.solve(&[z(3), z(3)]), Some(vec![z(1), z(1)]));
    assert_eq!(p.solve(&[z(1), z(0)]), None);
    assert_eq!(p.structure(), vec![z(6)]);
  }
}
