use std::collections::HashMap;

use super::cat::{Duality, FinCat};
use crate::{
  equivariance::{FiniteGroup, SubgroupLattice},
  error::{invalid, Result},
  homology::{reduced_homology, HomologyReport},
  sset::{edgewise_subdivide, Builder, Cell, RealSimplicialSet, Simplex, SimplicialGSet},
};

/// A simplex of the nerve: the objects `x_0..x_p` and morphisms `f_i: x_{i-1} -> x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Chain {
  start: usize,
  arrows: Vec<usize>,
}

struct NerveBuilder<'a> {
  cat: &'a FinCat,
  cells: Vec<Vec<Chain>>,
  index: HashMap<Chain, Cell>,
}

impl NerveBuilder<'_> {
  /// The simplex represented by a chain that may contain identities.
  fn simplex(&self, c: &Chain) -> Simplex {
    let mut surj = vec![0u8];
    let mut arrows = Vec::new();
    for &f in &c.arrows {
      if !self.cat.is_identity(f) {
        arrows.push(f);
      }
      surj.push(arrows.len() as u8);
    }
    let cell = if arrows.is_empty() {
      Chain { start: c.start, arrows }
    } else {
      Chain { start: self.cat.src(arrows[0]), arrows }
    };
    Simplex { surj, cell: self.index[&cell] }
  }

  fn face(&self, c: &Chain, i: usize) -> Chain {
    let p = c.arrows.len();
    let mut arrows = c.arrows.clone();
    let start = if i == 0 { self.cat.tgt(arrows.remove(0)) } else { c.start };
    if i == p && i > 0 {
      arrows.pop();
    } else if i > 0 {
      let g = arrows.remove(i);
      arrows[i - 1] = self.cat.compose(g, arrows[i - 1]);
    }
    Chain { start, arrows }
  }
}

fn build(cat: &FinCat, truncation: usize) -> Result<(SimplicialGSet, Vec<Vec<Chain>>)> {
  let mut nb = NerveBuilder { cat, cells: Vec::new(), index: HashMap::new() };
  let mut b = Builder::new(&FiniteGroup::trivial()).truncation(truncation);
  nb.cells.push(vec![Chain { start: usize::MAX, arrows: Vec::new() }]);
  for x in 0..cat.num_objects() {
    let cell = b.add_vertex();
    let chain = Chain { start: x, arrows: Vec::new() };
    nb.index.insert(chain.clone(), cell);
    nb.cells[0].push(chain);
  }
  let proper: Vec<usize> = (0..cat.num_morphisms()).filter(|&f| !cat.is_identity(f)).collect();
  for p in 1..=truncation + 1 {
    let mut level = Vec::new();
    for prev in &nb.cells[p - 1] {
      if p > 1 || prev.start != usize::MAX {
        let end = prev.arrows.last().map_or(prev.start, |&f| cat.tgt(f));
        for &f in proper.iter().filter(|&&f| cat.src(f) == end) {
          let mut arrows = prev.arrows.clone();
          arrows.push(f);
          level.push(Chain { start: prev.start, arrows });
        }
      }
    }
    if p == truncation + 1 {
      if !level.is_empty() {
        b.mark_truncated();
      }
      break;
    }
    for c in &level {
      let faces = (0..=p).map(|i| nb.simplex(&nb.face(c, i))).collect();
      let cell = b.add_cell(p, faces);
      nb.index.insert(c.clone(), cell);
    }
    if level.is_empty() {
      break;
    }
    nb.cells.push(level);
  }
  Ok((b.build()?, nb.cells))
}

/// The nerve of a finite category with a disjoint basepoint, truncated above `truncation`.
pub fn nerve(cat: &FinCat, truncation: usize) -> Result<SimplicialGSet> {
  Ok(build(cat, truncation)?.0)
}

/// The Real nerve `N(C)_+` of a category with strict duality: `(f_1, ..., f_p) -> (Df_p, ..., Df_1)`.
pub fn real_nerve(cat: &FinCat, d: &Duality, truncation: usize) -> Result<RealSimplicialSet> {
  if !d.is_strict(cat) {
    return invalid("the Real nerve needs a strict duality");
  }
  let (space, cells) = build(cat, truncation)?;
  let index: Vec<HashMap<&Chain, usize>> =
    cells.iter().map(|l| l.iter().enumerate().map(|(i, c)| (c, i)).collect()).collect();
  let w = cells
    .iter()
    .enumerate()
    .map(|(p, level)| {
      level
        .iter()
        .enumerate()
        .map(|(i, c)| {
          if p == 0 {
            return if i == 0 {
              0
            } else {
              index[0][&Chain { start: d.obj[c.start], arrows: Vec::new() }]
            };
          }
          let arrows: Vec<usize> = c.arrows.iter().rev().map(|&f| d.mor[f]).collect();
          index[p][&Chain { start: cat.src(arrows[0]), arrows }]
        })
        .collect()
    })
    .collect();
  RealSimplicialSet::new(space, w)
}

/// Both routes of the comparison `(sd_e N C)^{Z/2} = N(sym C)` through degree `degree`.
pub struct SymNerveComparison {
  pub fixed: HomologyReport,
  pub sym: HomologyReport,
  pub degree: usize,
}

impl SymNerveComparison {
  pub fn agrees(&self) -> bool {
    self.fixed.reliable >= self.degree
      && self.sym.reliable >= self.degree
      && (0..=self.degree).all(|n| self.fixed.degree(n) == self.sym.degree(n))
  }
}

pub fn compare_sym_nerve(cat: &FinCat, d: &Duality, degree: usize) -> Result<SymNerveComparison> {
  let z = real_nerve(cat, d, 2 * degree + 5)?;
  let sd = edgewise_subdivide(&z)?;
  let lattice = SubgroupLattice::new(&FiniteGroup::cyclic(2))?;
  let (fixed, _) = sd.space.fixed_points(&lattice, lattice.top());
  let s = super::strict::sym(cat, d)?;
  let sym_nerve = nerve(&s.cat, degree + 2)?;
  Ok(SymNerveComparison {
    fixed: reduced_homology(&fixed),
    sym: reduced_homology(&sym_nerve),
    degree,
  })
}

#[cfg(test)]
mod tests {
  use super::*;
  use num_bigint::BigInt;

  #[test]
  fn nerve_of_z2_is_rp_infinity() {
    let g = FiniteGroup::cyclic(2);
    let c = FinCat::group(&g);
    let n = nerve(&c, 5).unwrap();
    let h = reduced_homology(&n);
    // the disjoint basepoint contributes one copy of Z in degree 0
    assert!(h.degree(0).is_z());
    assert_eq!(h.degree(1).torsion, vec![BigInt::from(2)]);
    assert!(h.degree(2).is_zero());
    assert_eq!(h.degree(3).torsion, vec![BigInt::from(2)]);
  }

  #[test]
  fn real_nerve_involution_validates() {
    let g = FiniteGroup::symmetric3();
    let c = FinCat::group(&g);
    let d = Duality::group_inverse(&g, &c);
    let z = real_nerve(&c, &d, 3).unwrap();
    assert_eq!(z.underlying().num_cells(2), 25);
  }

  #[test]
  fn sym_nerve_routes_agree_for_z2() {
    let g = FiniteGroup::cyclic(2);
    let c = FinCat::group(&g);
    let d = Duality::group_inverse(&g, &c);
    let cmp = compare_sym_nerve(&c, &d, 3).unwrap();
    assert!(cmp.agrees(), "{:?} vs {:?}", cmp.fixed.degrees, cmp.sym.degrees);
    assert_eq!(cmp.sym.degree(0).betti, 2);
  }
}
