use std::{collections::HashMap, sync::Arc};

use serde::{Deserialize, Serialize};

use super::ops;
use crate::{
  equivariance::{FiniteGroup, SubgroupLattice},
  error::{invalid, Error, Result},
};

pub const DEFAULT_TRUNCATION: usize = 6;

/// A nondegenerate cell `(dim, idx)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
  pub dim: usize,
  pub idx: usize,
}

pub const BASE: Cell = Cell { dim: 0, idx: 0 };

/// The simplex `X(s)(cell)` for a monotone surjection `s: [n] -> [cell.dim]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex {
  pub surj: Vec<u8>,
  pub cell: Cell,
}

impl Simplex {
  pub fn nondegenerate(cell: Cell) -> Self {
    Self { surj: ops::identity(cell.dim), cell }
  }

  pub fn basepoint(level: usize) -> Self {
    Self { surj: ops::constant(level), cell: BASE }
  }

  pub fn level(&self) -> usize {
    self.surj.len() - 1
  }

  pub fn is_degenerate(&self) -> bool {
    self.level() != self.cell.dim
  }

  pub fn is_basepoint(&self) -> bool {
    self.cell == BASE
  }

  /// Precomposition of the degeneracy part with a surjection.
  pub fn degenerate_by(&self, s: &[u8]) -> Self {
    Self { surj: ops::compose(&self.surj, s), cell: self.cell }
  }
}

/// A finite pointed simplicial set with a simplicial action of a finite group.
///
/// Cells are the nondegenerate simplices; `faces[dim][idx][i]` is `d_i` of that cell and
/// `action[g][dim][idx]` its image under `g`. The basepoint is the vertex `(0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialGSet {
  group: FiniteGroup,
  faces: Vec<Vec<Vec<Simplex>>>,
  action: Vec<Vec<Vec<usize>>>,
  truncation: usize,
  truncated: bool,
}

impl SimplicialGSet {
  pub fn group(&self) -> &FiniteGroup {
    &self.group
  }

  /// Highest dimension with cells; cells above the truncation are never stored.
  pub fn dim(&self) -> usize {
    self.faces.len().saturating_sub(1)
  }

  pub fn truncation(&self) -> usize {
    self.truncation
  }

  /// Whether some simplices above the truncation were discarded.
  pub fn is_truncated(&self) -> bool {
    self.truncated
  }

  pub fn num_cells(&self, dim: usize) -> usize {
    self.faces.get(dim).map_or(0, |c| c.len())
  }

  pub fn cells(&self, dim: usize) -> impl Iterator<Item = Cell> {
    (0..self.num_cells(dim)).map(move |idx| Cell { dim, idx })
  }

  pub fn all_cells(&self) -> impl Iterator<Item = Cell> + '_ {
    (0..=self.dim()).flat_map(move |d| self.cells(d))
  }

  pub fn total_cells(&self) -> usize {
    self.faces.iter().map(|c| c.len()).sum()
  }

  pub fn cell_faces(&self, c: Cell) -> &[Simplex] {
    &self.faces[c.dim][c.idx]
  }

  pub fn act_cell(&self, g: usize, c: Cell) -> Cell {
    Cell { dim: c.dim, idx: self.action[g][c.dim][c.idx] }
  }

  pub fn act(&self, g: usize, s: &Simplex) -> Simplex {
    Simplex { surj: s.surj.clone(), cell: self.act_cell(g, s.cell) }
  }

  /// Applies the monotone map `theta: [k] -> [n]` to an `n`-simplex.
  pub fn apply(&self, theta: &[u8], s: &Simplex) -> Simplex {
    let psi = ops::compose(&s.surj, theta);
    let (epi, mono) = ops::epi_mono(&psi);
    self.restrict(s.cell, &mono).degenerate_by(&epi)
  }

  /// The face of a cell along an injection `delta: [r] -> [cell.dim]`.
  fn restrict(&self, cell: Cell, delta: &[u8]) -> Simplex {
    if delta.len() == cell.dim + 1 {
      return Simplex::nondegenerate(cell);
    }
    let j = (0..=cell.dim as u8).rev().find(|v| !delta.contains(v)).unwrap() as usize;
    let shifted: Vec<u8> =
      delta.iter().map(|&v| if (v as usize) < j { v } else { v - 1 }).collect();
    self.apply(&shifted, &self.faces[cell.dim][cell.idx][j])
  }

  pub fn face(&self, i: usize, s: &Simplex) -> Simplex {
    self.apply(&ops::coface(s.level(), i), s)
  }

  pub fn degeneracy(&self, i: usize, s: &Simplex) -> Simplex {
    Simplex { surj: ops::compose(&s.surj, &ops::codegeneracy(s.level(), i)), cell: s.cell }
  }

  /// Every `n`-simplex, degenerate ones included.
  pub fn simplices(&self, n: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    for m in 0..=n.min(self.dim()) {
      let surjs = ops::surjections(n, m);
      for cell in self.cells(m) {
        out.extend(surjs.iter().map(|s| Simplex { surj: s.clone(), cell }));
      }
    }
    out
  }

  /// Checks the face identities, the action laws and that the action is simplicial.
  pub fn validate(&self) -> Result<()> {
    if self.num_cells(0) == 0 {
      return invalid("no basepoint");
    }
    for c in self.all_cells() {
      let fs = self.cell_faces(c);
      if c.dim > 0 && fs.len() != c.dim + 1 {
        return invalid(format!("cell {c:?} has {} faces", fs.len()));
      }
      for f in fs {
        if f.level() + 1 != c.dim
          || f.cell.dim >= self.faces.len()
          || f.cell.idx >= self.num_cells(f.cell.dim)
        {
          return invalid(format!("face of {c:?} is malformed"));
        }
        if *f.surj.last().unwrap() as usize != f.cell.dim
          || f.surj[0] != 0
          || ops::epi_mono(&f.surj).0 != f.surj
        {
          return invalid(format!("face of {c:?} has a non-surjective degeneracy word"));
        }
      }
    }
    for c in self.all_cells().filter(|c| c.dim >= 2) {
      let s = Simplex::nondegenerate(c);
      for j in 0..=c.dim {
        for i in 0..j {
          let a = self.face(i, &self.face(j, &s));
          let b = self.face(j - 1, &self.face(i, &s));
          if a != b {
            return invalid(format!("d_{i} d_{j} != d_{} d_{i} on {c:?}", j - 1));
          }
        }
      }
    }
    let g = &self.group;
    if self.action.len() != g.order() {
      return invalid("action table size");
    }
    for a in g.elements() {
      for d in 0..self.faces.len() {
        let perm = &self.action[a][d];
        let mut seen = vec![false; perm.len()];
        if perm.len() != self.num_cells(d)
          || perm.iter().any(|&x| x >= seen.len() || std::mem::replace(&mut seen[x], true))
        {
          return invalid(format!("element {a} does not permute {d}-cells"));
        }
      }
      if self.act_cell(a, BASE) != BASE {
        return invalid("basepoint is not fixed");
      }
      for b in g.elements() {
        for c in self.all_cells() {
          if self.act_cell(g.mul(a, b), c) != self.act_cell(a, self.act_cell(b, c)) {
            return invalid(format!("action law fails at {c:?}"));
          }
        }
      }
      for c in self.all_cells() {
        let gc = self.act_cell(a, c);
        for (i, f) in self.cell_faces(c).iter().enumerate() {
          if self.act(a, f) != self.cell_faces(gc)[i] {
            return invalid(format!("element {a} does not commute with d_{i} on {c:?}"));
          }
        }
      }
    }
    Ok(())
  }

  /// The cells fixed by every element of subgroup `h`, with the identity group acting.
  pub fn fixed_points(
    self: &Arc<Self>,
    lattice: &SubgroupLattice,
    h: usize,
  ) -> (Arc<SimplicialGSet>, SimplicialMap) {
    let hs = lattice.elements(h);
    let keep: Vec<Vec<bool>> = (0..self.faces.len())
      .map(|d| self.cells(d).map(|c| hs.iter().all(|&g| self.act_cell(g, c) == c)).collect())
      .collect();
    let (sub, mut map) = self.subcomplex(&keep).expect("fixed cells form a subcomplex");
    let sub = Arc::new(sub.with_trivial_group());
    map.source = sub.clone();
    (sub, map)
  }

  /// Forgets the action.
  pub fn with_trivial_group(&self) -> SimplicialGSet {
    let action = vec![self.action[self.group.id()].clone()];
    SimplicialGSet {
      group: FiniteGroup::trivial(),
      faces: self.faces.clone(),
      action,
      truncation: self.truncation,
      truncated: self.truncated,
    }
  }

  /// Restricts the action along the subgroup `h`, reindexing its elements in increasing order.
  pub fn restrict_action(&self, lattice: &SubgroupLattice, h: usize) -> Result<SimplicialGSet> {
    let elems = lattice.elements(h);
    let g = lattice.group();
    let table: Vec<Vec<usize>> = elems
      .iter()
      .map(|&a| {
        elems.iter().map(|&b| elems.iter().position(|&x| x == g.mul(a, b)).unwrap()).collect()
      })
      .collect();
    let group = FiniteGroup::from_table(format!("{}|{h}", g.name()), table)?;
    let action = elems.iter().map(|&a| self.action[a].clone()).collect();
    Ok(SimplicialGSet {
      group,
      faces: self.faces.clone(),
      action,
      truncation: self.truncation,
      truncated: self.truncated,
    })
  }

  /// The subcomplex on the cells marked `keep`, which must be closed under faces and the action.
  pub fn subcomplex(
    self: &Arc<Self>,
    keep: &[Vec<bool>],
  ) -> Result<(Arc<SimplicialGSet>, SimplicialMap)> {
    let mut index: Vec<Vec<Option<usize>>> = Vec::new();
    for d in 0..self.faces.len() {
      let mut next = 0;
      index.push(
        (0..self.num_cells(d))
          .map(|i| {
            if keep.get(d).is_some_and(|k| k[i]) {
              next += 1;
              Some(next - 1)
            } else {
              None
            }
          })
          .collect(),
      );
    }
    if index[0][0] != Some(0) {
      return invalid("subcomplex must contain the basepoint");
    }
    let lookup = |c: Cell| index[c.dim][c.idx].map(|idx| Cell { dim: c.dim, idx });
    let mut faces = Vec::new();
    for d in 0..self.faces.len() {
      let mut level = Vec::new();
      for c in self.cells(d).filter(|c| index[d][c.idx].is_some()) {
        let mut fs = Vec::new();
        for f in self.cell_faces(c) {
          match lookup(f.cell) {
            Some(cell) => fs.push(Simplex { surj: f.surj.clone(), cell }),
            None => return invalid(format!("face of {c:?} leaves the subcomplex")),
          }
        }
        level.push(fs);
      }
      faces.push(level);
    }
    while faces.len() > 1 && faces.last().unwrap().is_empty() {
      faces.pop();
    }
    let mut action = Vec::new();
    for g in self.group.elements() {
      let mut per = Vec::new();
      for (d, level) in faces.iter().enumerate() {
        let mut perm = Vec::with_capacity(level.len());
        for c in self.cells(d).filter(|c| index[d][c.idx].is_some()) {
          match lookup(self.act_cell(g, c)) {
            Some(t) => perm.push(t.idx),
            None => return invalid("subcomplex is not invariant"),
          }
        }
        per.push(perm);
      }
      action.push(per);
    }
    let sub = SimplicialGSet {
      group: self.group.clone(),
      faces,
      action,
      truncation: self.truncation,
      truncated: self.truncated,
    };
    let images = (0..sub.faces.len())
      .map(|d| {
        self.cells(d).filter(|c| index[d][c.idx].is_some()).map(Simplex::nondegenerate).collect()
      })
      .collect();
    let sub = Arc::new(sub);
    let map = SimplicialMap { source: sub.clone(), target: self.clone(), images };
    Ok((sub, map))
  }

  /// Drops cells above dimension `d`.
  pub fn with_truncation(&self, d: usize) -> SimplicialGSet {
    let mut out = self.clone();
    if out.faces.len() > d + 1 {
      out.faces.truncate(d + 1);
      for a in &mut out.action {
        a.truncate(d + 1);
      }
      out.truncated = true;
    }
    out.truncation = d;
    out
  }

  /// Smallest subcomplex containing the given cells together with their orbits.
  pub fn closure(&self, cells: &[Cell]) -> Vec<Vec<bool>> {
    let mut keep: Vec<Vec<bool>> =
      (0..self.faces.len()).map(|d| vec![false; self.num_cells(d)]).collect();
    let mut stack: Vec<Cell> = cells.to_vec();
    stack.push(BASE);
    while let Some(c) = stack.pop() {
      if keep[c.dim][c.idx] {
        continue;
      }
      keep[c.dim][c.idx] = true;
      for g in self.group.elements() {
        stack.push(self.act_cell(g, c));
      }
      for f in self.cell_faces(c) {
        stack.push(f.cell);
      }
    }
    keep
  }

  pub fn lattice(&self) -> SubgroupLattice {
    SubgroupLattice::new(&self.group).expect("group within bound")
  }
}

/// Incremental construction of a simplicial G-set by listing cells with their faces.
#[derive(Clone, Debug)]
pub struct Builder {
  group: FiniteGroup,
  faces: Vec<Vec<Vec<Simplex>>>,
  truncation: usize,
  truncated: bool,
}

impl Builder {
  /// Starts with the basepoint as the only cell.
  pub fn new(group: &FiniteGroup) -> Self {
    Self {
      group: group.clone(),
      faces: vec![vec![Vec::new()]],
      truncation: DEFAULT_TRUNCATION,
      truncated: false,
    }
  }

  pub fn truncation(mut self, d: usize) -> Self {
    self.truncation = d;
    self
  }

  pub fn mark_truncated(&mut self) {
    self.truncated = true;
  }

  pub fn add_vertex(&mut self) -> Cell {
    self.add_cell(0, Vec::new())
  }

  pub fn add_cell(&mut self, dim: usize, faces: Vec<Simplex>) -> Cell {
    while self.faces.len() <= dim {
      self.faces.push(Vec::new());
    }
    self.faces[dim].push(faces);
    Cell { dim, idx: self.faces[dim].len() - 1 }
  }

  pub fn num_cells(&self, dim: usize) -> usize {
    self.faces.get(dim).map_or(0, |c| c.len())
  }

  /// Finishes with the action `g . (dim, idx) = (dim, action(g, dim, idx))`.
  pub fn build_with(self, action: impl Fn(usize, usize, usize) -> usize) -> Result<SimplicialGSet> {
    let mut faces = self.faces;
    while faces.len() > 1 && faces.last().unwrap().is_empty() {
      faces.pop();
    }
    let table = self
      .group
      .elements()
      .map(|g| {
        faces
          .iter()
          .enumerate()
          .map(|(d, l)| (0..l.len()).map(|i| action(g, d, i)).collect())
          .collect()
      })
      .collect();
    let x = SimplicialGSet {
      group: self.group,
      faces,
      action: table,
      truncation: self.truncation,
      truncated: self.truncated,
    };
    x.validate()?;
    Ok(x)
  }

  pub fn build(self) -> Result<SimplicialGSet> {
    self.build_with(|_, _, i| i)
  }
}

/// A simplicial map given by the images of the nondegenerate cells of the source.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
  pub source: Arc<SimplicialGSet>,
  pub target: Arc<SimplicialGSet>,
  pub images: Vec<Vec<Simplex>>,
}

impl SimplicialMap {
  pub fn identity(x: &Arc<SimplicialGSet>) -> Self {
    let images = (0..=x.dim()).map(|d| x.cells(d).map(Simplex::nondegenerate).collect()).collect();
    Self { source: x.clone(), target: x.clone(), images }
  }

  /// The map sending everything to the basepoint.
  pub fn constant(source: &Arc<SimplicialGSet>, target: &Arc<SimplicialGSet>) -> Self {
    let images =
      (0..=source.dim()).map(|d| vec![Simplex::basepoint(d); source.num_cells(d)]).collect();
    Self { source: source.clone(), target: target.clone(), images }
  }

  pub fn from_fn(
    source: &Arc<SimplicialGSet>,
    target: &Arc<SimplicialGSet>,
    f: impl Fn(Cell) -> Simplex,
  ) -> Self {
    let images = (0..=source.dim()).map(|d| source.cells(d).map(&f).collect()).collect();
    Self { source: source.clone(), target: target.clone(), images }
  }

  pub fn cell_image(&self, c: Cell) -> &Simplex {
    &self.images[c.dim][c.idx]
  }

  pub fn apply(&self, s: &Simplex) -> Simplex {
    self.images[s.cell.dim][s.cell.idx].degenerate_by(&s.surj)
  }

  /// `other . self`.
  pub fn then(&self, other: &SimplicialMap) -> SimplicialMap {
    let images = self.images.iter().map(|l| l.iter().map(|s| other.apply(s)).collect()).collect();
    SimplicialMap { source: self.source.clone(), target: other.target.clone(), images }
  }

  /// Checks levels, basepoint, compatibility with faces and equivariance for a common group.
  pub fn validate(&self) -> Result<()> {
    let (x, y) = (&*self.source, &*self.target);
    if self.images.len() != x.dim() + 1 {
      return invalid("map image table has wrong shape");
    }
    for c in x.all_cells() {
      let im = self.cell_image(c);
      if im.level() != c.dim || im.cell.dim > y.dim() || im.cell.idx >= y.num_cells(im.cell.dim) {
        return invalid(format!("image of {c:?} is malformed"));
      }
      for (i, f) in x.cell_faces(c).iter().enumerate() {
        if self.apply(f) != y.face(i, im) {
          return invalid(format!("map does not commute with d_{i} on {c:?}"));
        }
      }
    }
    if *self.cell_image(BASE) != Simplex::basepoint(0) {
      return invalid("map is not pointed");
    }
    if x.group() == y.group() {
      for g in x.group().elements() {
        for c in x.all_cells() {
          if self.apply(&x.act(g, &Simplex::nondegenerate(c))) != y.act(g, self.cell_image(c)) {
            return invalid(format!("map is not equivariant at {c:?}"));
          }
        }
      }
    }
    Ok(())
  }

  /// Injective on all simplices iff nondegenerate cells go to distinct nondegenerate cells.
  pub fn check_injective(&self) -> Result<()> {
    let mut seen = HashMap::new();
    for c in self.source.all_cells() {
      let im = self.cell_image(c);
      if im.is_degenerate() {
        return Err(Error::NotInjective(format!("{c:?} maps to a degenerate simplex")));
      }
      if let Some(prev) = seen.insert(im.cell, c) {
        return Err(Error::NotInjective(format!("{prev:?} and {c:?} have the same image")));
      }
    }
    Ok(())
  }

  pub fn is_injective(&self) -> bool {
    self.check_injective().is_ok()
  }
}
