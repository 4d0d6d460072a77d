use std::{collections::HashMap, sync::Arc};

use super::{
  build::{self, Product},
  ops,
  set::{Builder, Cell, Simplex, SimplicialGSet, BASE},
};
use crate::{
  equivariance::FiniteGroup,
  error::{invalid, Result},
};

/// A pointed simplicial set with levelwise involutions `w` satisfying `w d_i = d_{n-i} w`.
///
/// The involution is stored on cells; on a degenerate simplex `X(s) x` it is `X(omega s omega) (w x)`,
/// which makes `w s_i = s_{n-1-i} w` hold by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealSimplicialSet {
  space: Arc<SimplicialGSet>,
  w: Vec<Vec<usize>>,
}

impl RealSimplicialSet {
  pub fn new(space: SimplicialGSet, w: Vec<Vec<usize>>) -> Result<Self> {
    let r = Self { space: Arc::new(space.with_trivial_group()), w };
    r.validate()?;
    Ok(r)
  }

  pub fn underlying(&self) -> &Arc<SimplicialGSet> {
    &self.space
  }

  pub fn w_cell(&self, c: Cell) -> Cell {
    Cell { dim: c.dim, idx: self.w[c.dim][c.idx] }
  }

  pub fn w(&self, s: &Simplex) -> Simplex {
    Simplex { surj: ops::reverse(&s.surj, s.cell.dim), cell: self.w_cell(s.cell) }
  }

  pub fn validate(&self) -> Result<()> {
    let x = &self.space;
    if self.w.len() != x.dim() + 1 {
      return invalid("involution table has wrong shape");
    }
    for d in 0..=x.dim() {
      if self.w[d].len() != x.num_cells(d) || self.w[d].iter().any(|&i| i >= x.num_cells(d)) {
        return invalid("involution does not permute cells");
      }
    }
    if self.w_cell(BASE) != BASE {
      return invalid("involution moves the basepoint");
    }
    for c in x.all_cells() {
      if self.w_cell(self.w_cell(c)) != c {
        return invalid(format!("involution does not square to the identity on {c:?}"));
      }
      let s = Simplex::nondegenerate(c);
      let ws = self.w(&s);
      for i in 0..=c.dim {
        if c.dim > 0 && self.w(&x.face(i, &s)) != x.face(c.dim - i, &ws) {
          return invalid(format!("w d_{i} != d_{} w on {c:?}", c.dim - i));
        }
      }
    }
    Ok(())
  }

  /// All simplices in the given level.
  pub fn simplices(&self, n: usize) -> Vec<Simplex> {
    self.space.simplices(n)
  }
}

/// `Delta[1]` with boundary collapsed; the involution fixes the unique edge.
pub fn real_circle() -> RealSimplicialSet {
  real_sphere(1)
}

/// `Delta[n]` with boundary collapsed and the involution reversing the top cell.
pub fn real_sphere(n: usize) -> RealSimplicialSet {
  let s = build::sphere(&FiniteGroup::trivial(), n);
  let w = (0..=s.dim()).map(|d| (0..s.num_cells(d)).collect()).collect();
  RealSimplicialSet::new(s, w).unwrap()
}

/// The Real ordered complex on the given simplices, closed under `v -> n - v` on `0..=n`,
/// with a disjoint basepoint.
pub fn real_ordered_complex(n: usize, simplices: &[Vec<usize>]) -> Result<RealSimplicialSet> {
  let mut all: Vec<Vec<usize>> = Vec::new();
  for s in simplices {
    if s.iter().any(|&v| v > n) {
      return invalid("vertex out of range");
    }
    all.push(s.clone());
    all.push(s.iter().map(|&v| n - v).collect());
  }
  let (x, levels) = build::ordered_complex(&FiniteGroup::trivial(), &all, None, None)?;
  let index: HashMap<Vec<usize>, usize> =
    levels.iter().flat_map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i))).collect();
  let w = levels
    .iter()
    .map(|l| {
      l.iter()
        .map(|s| {
          let mut t: Vec<usize> = s.iter().map(|&v| n - v).collect();
          t.sort_unstable();
          index[&t]
        })
        .collect()
    })
    .collect();
  RealSimplicialSet::new(x, w)
}

pub fn real_delta(n: usize) -> RealSimplicialSet {
  real_ordered_complex(n, &[(0..=n).collect()]).unwrap()
}

/// Collapses a `w`-invariant subcomplex.
pub fn real_quotient(z: &RealSimplicialSet, collapse: &[Vec<bool>]) -> Result<RealSimplicialSet> {
  for c in z.space.all_cells() {
    let inside = |c: Cell| c == BASE || collapse.get(c.dim).is_some_and(|k| k[c.idx]);
    if inside(c) != inside(z.w_cell(c)) {
      return invalid("collapsed subcomplex is not invariant under the involution");
    }
  }
  let (q, map) = build::quotient(&z.space, collapse)?;
  let mut w: Vec<Vec<usize>> = (0..=q.dim()).map(|d| vec![0; q.num_cells(d)]).collect();
  for c in z.space.all_cells() {
    let im = map.cell_image(c);
    if !im.is_degenerate() {
      w[c.dim][im.cell.idx] = map.cell_image(z.w_cell(c)).cell.idx;
    }
  }
  RealSimplicialSet::new((*q).clone(), w)
}

/// The invariant subcomplex on the marked cells.
pub fn real_subcomplex(z: &RealSimplicialSet, keep: &[Vec<bool>]) -> Result<RealSimplicialSet> {
  let (sub, map) = z.space.subcomplex(keep)?;
  let back: HashMap<Cell, Cell> = sub.all_cells().map(|c| (map.cell_image(c).cell, c)).collect();
  let w = (0..=sub.dim())
    .map(|d| {
      sub
        .cells(d)
        .map(|c| back.get(&z.w_cell(map.cell_image(c).cell)).map(|t| t.idx))
        .collect::<Option<Vec<usize>>>()
    })
    .collect::<Option<Vec<Vec<usize>>>>();
  match w {
    Some(w) => RealSimplicialSet::new((*sub).clone(), w),
    None => invalid("subcomplex is not invariant under the involution"),
  }
}

fn product_involution(p: &Product, factors: &[&RealSimplicialSet]) -> Vec<Vec<usize>> {
  (0..=p.space.dim())
    .map(|d| {
      p.space
        .cells(d)
        .map(|c| {
          let comps: Vec<Simplex> =
            p.components(c).iter().zip(factors).map(|(s, z)| z.w(s)).collect();
          p.tuple(&comps).unwrap().cell.idx
        })
        .collect()
    })
    .collect()
}

pub fn real_product(factors: &[&RealSimplicialSet]) -> Result<RealSimplicialSet> {
  let spaces: Vec<Arc<SimplicialGSet>> = factors.iter().map(|z| z.space.clone()).collect();
  let p = build::product(&spaces, None)?;
  let w = product_involution(&p, factors);
  RealSimplicialSet::new((*p.space).clone(), w)
}

pub fn real_smash(a: &RealSimplicialSet, b: &RealSimplicialSet) -> Result<RealSimplicialSet> {
  let p = real_product(&[a, b])?;
  let prod = build::product(&[a.space.clone(), b.space.clone()], None)?;
  let fat: Vec<Vec<bool>> = (0..=prod.space.dim())
    .map(|d| {
      prod.space.cells(d).map(|c| prod.components(c).iter().any(|s| s.cell == BASE)).collect()
    })
    .collect();
  real_quotient(&p, &fat)
}

/// Sends `theta: [q] -> [p]` to `theta + theta^op: [2q+1] -> [2p+1]`.
pub fn doubled(theta: &[u8], p: usize) -> Vec<u8> {
  let q = theta.len() - 1;
  (0..=2 * q + 1)
    .map(|t| if t <= q { theta[t] } else { (2 * p + 1) as u8 - theta[2 * q + 1 - t] })
    .collect()
}

/// Segal's edgewise subdivision with its simplicial involution, as a simplicial `Z/2`-set.
pub struct Subdivision {
  pub space: Arc<SimplicialGSet>,
  /// The simplex of `Z_{2p+1}` underlying each nondegenerate `p`-simplex.
  pub origins: Vec<Vec<Simplex>>,
}

pub fn edgewise_subdivide(z: &RealSimplicialSet) -> Result<Subdivision> {
  let x = &z.space;
  let top = x.dim().min(x.truncation());
  let sd_apply = |theta: &[u8], p: usize, y: &Simplex| x.apply(&doubled(theta, p), y);
  let sd_face = |i: usize, p: usize, y: &Simplex| sd_apply(&ops::coface(p, i), p, y);
  let sd_degen = |i: usize, p: usize, y: &Simplex| sd_apply(&ops::codegeneracy(p, i), p, y);
  let mut origins: Vec<Vec<Simplex>> = Vec::new();
  let mut index: Vec<HashMap<Simplex, usize>> = Vec::new();
  for p in 0..=top {
    let mut level = Vec::new();
    if p == 0 {
      level.push(Simplex::basepoint(1));
    }
    for y in x.simplices(2 * p + 1) {
      if p == 0 && y.is_basepoint() {
        continue;
      }
      let degenerate = (0..p).any(|i| sd_degen(i, p - 1, &sd_face(i, p, &y)) == y);
      if !degenerate {
        level.push(y);
      }
    }
    index.push(level.iter().cloned().enumerate().map(|(i, y)| (y, i)).collect());
    origins.push(level);
  }
  while origins.len() > 1 && origins.last().is_some_and(|l| l.is_empty()) {
    origins.pop();
    index.pop();
  }
  let decompose = |p: usize, y: &Simplex| -> Simplex {
    let mut y = y.clone();
    let mut level = p;
    let mut surj = ops::identity(p);
    loop {
      match (0..level).find(|&i| sd_degen(i, level - 1, &sd_face(i, level, &y)) == y) {
        Some(i) => {
          surj = ops::compose(&ops::codegeneracy(level - 1, i), &surj);
          y = sd_face(i, level, &y);
          level -= 1;
        }
        None => return Simplex { surj, cell: Cell { dim: level, idx: index[level][&y] } },
      }
    }
  };
  let c2 = FiniteGroup::cyclic(2);
  let mut b = Builder::new(&c2).truncation(x.truncation());
  if x.is_truncated() {
    b.mark_truncated();
  }
  for (p, level) in origins.iter().enumerate() {
    for y in level.iter().skip(if p == 0 { 1 } else { 0 }) {
      if p == 0 {
        b.add_vertex();
      } else {
        b.add_cell(p, (0..=p).map(|i| decompose(p - 1, &sd_face(i, p, y))).collect());
      }
    }
  }
  let space = b.build_with(|g, p, i| if g == 0 { i } else { index[p][&z.w(&origins[p][i])] })?;
  Ok(Subdivision { space: Arc::new(space), origins })
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn circle_identities() {
    let s = real_circle();
    s.validate().unwrap();
    let e = Simplex::nondegenerate(Cell { dim: 1, idx: 0 });
    assert_eq!(s.w(&e), e);
    let x = s.underlying();
    let d = x.degeneracy(0, &e);
    assert_eq!(s.w(&d), x.degeneracy(1, &s.w(&e)));
    for i in 0..3 {
      assert_eq!(s.w(&x.face(i, &d)), x.face(2 - i, &s.w(&d)));
    }
  }

  #[test]
  fn doubling_is_functorial() {
    for a in ops::monotone_maps(1, 2) {
      for b in ops::monotone_maps(2, 3) {
        let ab = ops::compose(&b, &a);
        assert_eq!(doubled(&ab, 3), ops::compose(&doubled(&b, 3), &doubled(&a, 2)));
      }
    }
  }

  #[test]
  fn sd_of_point_is_point() {
    let z = RealSimplicialSet::new(build::point(&FiniteGroup::trivial()), vec![vec![0]]).unwrap();
    let sd = edgewise_subdivide(&z).unwrap();
    assert_eq!(sd.space.total_cells(), 1);
  }

  #[test]
  fn sd_of_circle_has_two_fixed_vertices() {
    let sd = edgewise_subdivide(&real_circle()).unwrap();
    assert_eq!(sd.space.num_cells(0), 2);
    assert_eq!(sd.space.num_cells(1), 2);
    let l = sd.space.lattice();
    let (fixed, _) = sd.space.fixed_points(&l, l.top());
    assert_eq!(fixed.num_cells(0), 2);
    assert_eq!(fixed.num_cells(1), 0);
  }

  #[test]
  fn sd_keeps_cells_above_empty_levels() {
    let sd = edgewise_subdivide(&real_sphere(4)).unwrap();
    let h = crate::homology::reduced_homology(&sd.space);
    assert!(h.degree(4).is_z());
    assert!((0..4).all(|n| h.degree(n).is_zero()));
  }

  #[test]
  fn real_delta_reverses() {
    let z = real_delta(2);
    assert_eq!(z.underlying().num_cells(0), 4);
    let w = &z.w;
    assert_eq!(w[2], vec![0]);
    assert!(w[0].iter().enumerate().any(|(i, &j)| i != j));
  }
}
