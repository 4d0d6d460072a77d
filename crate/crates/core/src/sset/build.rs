use std::{collections::HashMap, sync::Arc};

use super::{
  ops,
  set::{Builder, Cell, Simplex, SimplicialGSet, SimplicialMap, BASE, DEFAULT_TRUNCATION},
};
use crate::{
  equivariance::{FiniteGSet, FiniteGroup},
  error::{invalid, Error, Result},
};

pub fn point(group: &FiniteGroup) -> SimplicialGSet {
  Builder::new(group).build().unwrap()
}

/// The ordered simplicial complex spanned by the given vertex lists, as a pointed simplicial set.
///
/// With `base = Some(v)` the vertex `v` is the basepoint, otherwise a disjoint one is added.
/// `action[g]` permutes vertices and must preserve the vertex order on every simplex.
pub fn ordered_complex(
  group: &FiniteGroup,
  simplices: &[Vec<usize>],
  base: Option<usize>,
  vertex_action: Option<&[Vec<usize>]>,
) -> Result<(SimplicialGSet, Vec<Vec<Vec<usize>>>)> {
  let mut all: Vec<Vec<usize>> = Vec::new();
  for s in simplices {
    let mut s = s.clone();
    s.sort_unstable();
    s.dedup();
    let k = s.len();
    for mask in 1u32..1 << k {
      let sub: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect();
      all.push(sub);
    }
  }
  all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
  all.dedup();
  let mut levels: Vec<Vec<Vec<usize>>> = Vec::new();
  let mut b = Builder::new(group);
  let mut index: HashMap<Vec<usize>, Cell> = HashMap::new();
  if let Some(v) = base {
    if !all.contains(&vec![v]) {
      return invalid("basepoint is not a vertex");
    }
    index.insert(vec![v], BASE);
    levels.push(vec![vec![v]]);
  } else {
    levels.push(vec![Vec::new()]);
  }
  for s in &all {
    if index.contains_key(s) {
      continue;
    }
    let d = s.len() - 1;
    let faces = if d == 0 {
      Vec::new()
    } else {
      (0..=d)
        .map(|i| {
          let mut f = s.clone();
          f.remove(i);
          Simplex::nondegenerate(index[&f])
        })
        .collect()
    };
    let c = b.add_cell(d, faces);
    index.insert(s.clone(), c);
    while levels.len() <= d {
      levels.push(Vec::new());
    }
    levels[d].push(s.clone());
  }
  let x = match vertex_action {
    None => b.build()?,
    Some(act) => {
      let image = |g: usize, d: usize, i: usize| -> Option<usize> {
        let s = &levels[d][i];
        if s.is_empty() {
          return Some(0);
        }
        let t: Vec<usize> = s.iter().map(|&v| act[g][v]).collect();
        if t.windows(2).any(|w| w[0] >= w[1]) {
          return None;
        }
        index.get(&t).map(|c| c.idx)
      };
      for g in group.elements() {
        for d in 0..levels.len() {
          for i in 0..levels[d].len() {
            if image(g, d, i).is_none() {
              return invalid("vertex action does not preserve the ordered complex");
            }
          }
        }
      }
      b.build_with(|g, d, i| image(g, d, i).unwrap())?
    }
  };
  Ok((x, levels))
}

/// The standard simplex based at vertex `base`.
pub fn delta(group: &FiniteGroup, n: usize, base: usize) -> SimplicialGSet {
  ordered_complex(group, &[(0..=n).collect()], Some(base), None).unwrap().0
}

/// `Delta[n]` with boundary collapsed: one vertex and one `n`-cell.
pub fn sphere(group: &FiniteGroup, n: usize) -> SimplicialGSet {
  let mut b = Builder::new(group);
  if n > 0 {
    b.add_cell(n, vec![Simplex::basepoint(n - 1); n + 1]);
  }
  if n == 0 {
    b.add_vertex();
  }
  b.build().unwrap()
}

/// The tuples of a product, indexed to recover a cell from its components.
#[derive(Clone, Debug)]
pub struct Product {
  pub space: Arc<SimplicialGSet>,
  factors: Vec<Arc<SimplicialGSet>>,
  tuples: Vec<Vec<Vec<(Cell, u32)>>>,
  index: HashMap<Vec<u32>, usize>,
}

fn key(level: usize, comps: &[(Cell, u32)]) -> Vec<u32> {
  let mut k = Vec::with_capacity(1 + 3 * comps.len());
  k.push(level as u32);
  for (c, m) in comps {
    k.extend([c.dim as u32, c.idx as u32, *m]);
  }
  k
}

impl Product {
  pub fn factors(&self) -> &[Arc<SimplicialGSet>] {
    &self.factors
  }

  /// The components of a product cell as simplices of the factors.
  pub fn components(&self, c: Cell) -> Vec<Simplex> {
    self.tuples[c.dim][c.idx]
      .iter()
      .map(|&(cell, mask)| Simplex { surj: ops::surjection_from_flats(c.dim, mask), cell })
      .collect()
  }

  /// The product simplex with the given components, all at one level.
  pub fn tuple(&self, comps: &[Simplex]) -> Option<Simplex> {
    let n = comps[0].level();
    let common = comps
      .iter()
      .fold(if n == 0 { 0 } else { u32::MAX >> (32 - n) }, |acc, s| acc & ops::flats(&s.surj));
    let m = n - common.count_ones() as usize;
    let reduced: Vec<(Cell, u32)> =
      comps.iter().map(|s| (s.cell, ops::flats(&ops::remove_flats(&s.surj, common)))).collect();
    let idx = *self.index.get(&key(m, &reduced))?;
    Some(Simplex { surj: ops::surjection_from_flats(n, common), cell: Cell { dim: m, idx } })
  }

  pub fn projection(&self, j: usize) -> SimplicialMap {
    SimplicialMap::from_fn(&self.space, &self.factors[j], |c| self.components(c)[j].clone())
  }
}

/// The product of the factors, truncated; `perm` makes G also permute the factors,
/// `(g x)_j = g x_{g^{-1} j}`.
pub fn product(factors: &[Arc<SimplicialGSet>], perm: Option<&FiniteGSet>) -> Result<Product> {
  let group = factors.first().map(|f| f.group().clone()).unwrap_or_else(FiniteGroup::trivial);
  if factors.iter().any(|f| *f.group() != group) {
    return Err(Error::MixedGroups);
  }
  if let Some(p) = perm {
    if p.len() != factors.len() || factors.iter().any(|f| f != &factors[0]) {
      return invalid("permuted product needs equal factors indexed by the G-set");
    }
  }
  let trunc = factors.iter().map(|f| f.truncation()).min().unwrap_or(DEFAULT_TRUNCATION);
  let total: usize = factors.iter().map(|f| f.dim()).sum();
  let top = total.min(trunc);
  let mut tuples: Vec<Vec<Vec<(Cell, u32)>>> = Vec::new();
  let mut index = HashMap::new();
  for n in 0..=top {
    let mut level = Vec::new();
    let full = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let mut cur: Vec<(Cell, u32)> = Vec::new();
    fn go(
      j: usize,
      n: usize,
      acc: u32,
      factors: &[Arc<SimplicialGSet>],
      cur: &mut Vec<(Cell, u32)>,
      out: &mut Vec<Vec<(Cell, u32)>>,
    ) {
      if j == factors.len() {
        if acc == 0 {
          out.push(cur.clone());
        }
        return;
      }
      for d in 0..=n.min(factors[j].dim()) {
        let masks = ops::subsets(n, n - d);
        for c in factors[j].cells(d) {
          for &m in &masks {
            cur.push((c, m));
            go(j + 1, n, acc & m, factors, cur, out);
            cur.pop();
          }
        }
      }
    }
    go(0, n, full, factors, &mut cur, &mut level);
    for (i, t) in level.iter().enumerate() {
      index.insert(key(n, t), i);
    }
    tuples.push(level);
  }
  while tuples.len() > 1 && tuples.last().is_some_and(|l| l.is_empty()) {
    tuples.pop();
  }
  if factors.is_empty() {
    tuples = vec![vec![Vec::new()]];
    index.insert(key(0, &[]), 0);
  }
  let mut proto =
    Product { space: Arc::new(point(&group)), factors: factors.to_vec(), tuples, index };
  let mut b = Builder::new(&group).truncation(trunc);
  if total > trunc || factors.iter().any(|f| f.is_truncated()) {
    b.mark_truncated();
  }
  for _ in 1..proto.tuples[0].len() {
    b.add_vertex();
  }
  for n in 1..proto.tuples.len() {
    for idx in 0..proto.tuples[n].len() {
      let comps = proto.components(Cell { dim: n, idx });
      let faces = (0..=n)
        .map(|i| {
          let fc: Vec<Simplex> =
            comps.iter().enumerate().map(|(j, s)| factors[j].face(i, s)).collect();
          proto.tuple(&fc).expect("faces of product cells are product simplices")
        })
        .collect();
      b.add_cell(n, faces);
    }
  }
  let act = |g: usize, d: usize, i: usize| -> usize {
    let comps = proto.components(Cell { dim: d, idx: i });
    let moved: Vec<Simplex> = match perm {
      None => comps.iter().enumerate().map(|(j, s)| factors[j].act(g, s)).collect(),
      Some(p) => {
        let ginv = group.inv(g);
        (0..comps.len()).map(|j| factors[0].act(g, &comps[p.act(ginv, j)])).collect()
      }
    };
    proto.tuple(&moved).unwrap().cell.idx
  };
  let space = b.build_with(act)?;
  proto.space = Arc::new(space);
  Ok(proto)
}

/// The wedge of the factors, with the summand inclusions.
#[derive(Clone, Debug)]
pub struct Wedge {
  pub space: Arc<SimplicialGSet>,
  pub inclusions: Vec<SimplicialMap>,
  /// For each non-base cell of the wedge, its summand and cell there.
  pub origin: Vec<Vec<Option<(usize, Cell)>>>,
}

pub fn wedge(factors: &[Arc<SimplicialGSet>], perm: Option<&FiniteGSet>) -> Result<Wedge> {
  let group = factors.first().map(|f| f.group().clone()).unwrap_or_else(FiniteGroup::trivial);
  if factors.iter().any(|f| *f.group() != group) {
    return Err(Error::MixedGroups);
  }
  if let Some(p) = perm {
    if p.len() != factors.len() || factors.iter().any(|f| f != &factors[0]) {
      return invalid("permuted wedge needs equal summands indexed by the G-set");
    }
  }
  let trunc = factors.iter().map(|f| f.truncation()).min().unwrap_or(DEFAULT_TRUNCATION);
  let top = factors.iter().map(|f| f.dim()).max().unwrap_or(0);
  let mut origin: Vec<Vec<Option<(usize, Cell)>>> = vec![vec![None]];
  let mut where_: HashMap<(usize, Cell), Cell> = HashMap::new();
  for d in 0..=top {
    if d > 0 {
      origin.push(Vec::new());
    }
    for (j, f) in factors.iter().enumerate() {
      for c in f.cells(d).filter(|&c| c != BASE) {
        where_.insert((j, c), Cell { dim: d, idx: origin[d].len() });
        origin[d].push(Some((j, c)));
      }
    }
  }
  let lift = |j: usize, s: &Simplex| -> Simplex {
    if s.is_basepoint() {
      Simplex { surj: s.surj.clone(), cell: BASE }
    } else {
      Simplex { surj: s.surj.clone(), cell: where_[&(j, s.cell)] }
    }
  };
  let mut b = Builder::new(&group).truncation(trunc);
  if factors.iter().any(|f| f.is_truncated()) {
    b.mark_truncated();
  }
  for (d, level) in origin.iter().enumerate() {
    for o in level.iter().flatten() {
      let (j, c) = *o;
      b.add_cell(d, factors[j].cell_faces(c).iter().map(|f| lift(j, f)).collect());
    }
  }
  let act = |g: usize, d: usize, i: usize| -> usize {
    match origin[d][i] {
      None => 0,
      Some((j, c)) => {
        let (j2, c2) = match perm {
          None => (j, factors[j].act_cell(g, c)),
          Some(p) => (p.act(g, j), factors[0].act_cell(g, c)),
        };
        where_[&(j2, c2)].idx
      }
    }
  };
  let space = Arc::new(b.build_with(act)?);
  let inclusions = factors
    .iter()
    .enumerate()
    .map(|(j, f)| SimplicialMap::from_fn(f, &space, |c| lift(j, &Simplex::nondegenerate(c))))
    .collect();
  Ok(Wedge { space, inclusions, origin })
}

pub struct IndexedWedgeProduct {
  pub wedge: Wedge,
  pub product: Product,
  pub comparison: SimplicialMap,
}

/// `J`-indexed wedge and product of `x` with the canonical comparison map.
pub fn indexed_wedge_product(
  x: &Arc<SimplicialGSet>,
  j: &FiniteGSet,
) -> Result<IndexedWedgeProduct> {
  let copies = vec![x.clone(); j.len()];
  let w = wedge(&copies, Some(j))?;
  let p = product(&copies, Some(j))?;
  let comparison = SimplicialMap::from_fn(&w.space, &p.space, |c| match w.origin[c.dim][c.idx] {
    None => Simplex::basepoint(0),
    Some((k, cell)) => {
      let comps: Vec<Simplex> = (0..j.len())
        .map(|i| if i == k { Simplex::nondegenerate(cell) } else { Simplex::basepoint(c.dim) })
        .collect();
      p.tuple(&comps).unwrap()
    }
  });
  Ok(IndexedWedgeProduct { wedge: w, product: p, comparison })
}

/// Collapses an invariant subcomplex to the basepoint.
pub fn quotient(
  x: &Arc<SimplicialGSet>,
  collapse: &[Vec<bool>],
) -> Result<(Arc<SimplicialGSet>, SimplicialMap)> {
  let inside = |c: Cell| c == BASE || collapse.get(c.dim).is_some_and(|k| k[c.idx]);
  let mut index: Vec<Vec<Option<usize>>> = Vec::new();
  for d in 0..=x.dim() {
    let mut next = if d == 0 { 1 } else { 0 };
    index.push(
      x.cells(d)
        .map(|c| {
          if inside(c) {
            None
          } else {
            next += 1;
            Some(next - 1)
          }
        })
        .collect(),
    );
  }
  let image = |s: &Simplex| -> Simplex {
    match index[s.cell.dim][s.cell.idx] {
      None => Simplex::basepoint(s.level()),
      Some(idx) => Simplex { surj: s.surj.clone(), cell: Cell { dim: s.cell.dim, idx } },
    }
  };
  for c in x.all_cells().filter(|&c| inside(c)) {
    if x.cell_faces(c).iter().any(|f| !inside(f.cell)) {
      return invalid("collapsed cells do not form a subcomplex");
    }
    if x.group().elements().any(|g| !inside(x.act_cell(g, c))) {
      return invalid("collapsed subcomplex is not invariant");
    }
  }
  let mut b = Builder::new(x.group()).truncation(x.truncation());
  if x.is_truncated() {
    b.mark_truncated();
  }
  let mut back: Vec<Vec<Cell>> = vec![vec![BASE]];
  for d in 0..=x.dim() {
    if d > 0 {
      back.push(Vec::new());
    }
    for c in x.cells(d).filter(|&c| !inside(c)) {
      if d == 0 {
        b.add_vertex();
      } else {
        b.add_cell(d, x.cell_faces(c).iter().map(&image).collect());
      }
      back[d].push(c);
    }
  }
  let q = Arc::new(b.build_with(|g, d, i| {
    if d == 0 && i == 0 {
      0
    } else {
      index[d][x.act_cell(g, back[d][i]).idx].unwrap()
    }
  })?);
  let map = SimplicialMap::from_fn(x, &q, |c| image(&Simplex::nondegenerate(c)));
  Ok((q, map))
}

/// Cells of a product with some component at the basepoint.
fn fat_wedge(p: &Product) -> Vec<Vec<bool>> {
  (0..=p.space.dim())
    .map(|d| p.tuples[d].iter().map(|t| t.iter().any(|(c, _)| *c == BASE)).collect())
    .collect()
}

/// The smash product of all factors, with the quotient map from the product.
pub fn smash_all(
  factors: &[Arc<SimplicialGSet>],
  perm: Option<&FiniteGSet>,
) -> Result<(Product, Arc<SimplicialGSet>, SimplicialMap)> {
  let p = product(factors, perm)?;
  let (q, map) = quotient(&p.space, &fat_wedge(&p))?;
  Ok((p, q, map))
}

pub fn smash(x: &Arc<SimplicialGSet>, y: &Arc<SimplicialGSet>) -> Result<Arc<SimplicialGSet>> {
  Ok(smash_all(&[x.clone(), y.clone()], None)?.1)
}

/// The permutation representation sphere: `|I|`-fold smash of circles with G permuting factors.
pub fn rep_sphere(group: &FiniteGroup, i: &FiniteGSet) -> Result<Arc<SimplicialGSet>> {
  if i.is_empty() {
    return invalid("empty index set");
  }
  let s1 = Arc::new(sphere(group, 1));
  Ok(smash_all(&vec![s1; i.len()], Some(i))?.1)
}

/// The reduced cone `X smash Delta[1]` based at 1, with the inclusion at vertex 0.
pub fn cone(x: &Arc<SimplicialGSet>) -> Result<(Arc<SimplicialGSet>, SimplicialMap)> {
  let interval = Arc::new(delta(x.group(), 1, 1).with_truncation(x.truncation()));
  let (p, c, q) = smash_all(&[x.clone(), interval.clone()], None)?;
  let v0 = Cell { dim: 0, idx: 1 };
  let inc = SimplicialMap::from_fn(x, &c, |cell| {
    let t = p
      .tuple(&[Simplex::nondegenerate(cell), Simplex { surj: ops::constant(cell.dim), cell: v0 }])
      .unwrap();
    q.apply(&t)
  });
  Ok((c, inc))
}

pub fn suspension(x: &Arc<SimplicialGSet>) -> Result<Arc<SimplicialGSet>> {
  let s1 = Arc::new(sphere(x.group(), 1).with_truncation(x.truncation()));
  smash(x, &s1)
}

pub struct Pushout {
  pub space: Arc<SimplicialGSet>,
  /// From the codomain of the injective leg.
  pub from_x: SimplicialMap,
  /// From the codomain of the other leg; a subcomplex inclusion.
  pub from_y: SimplicialMap,
}

/// Pushout of `X <- A -> Y` along a levelwise-injective `i: A -> X`.
pub fn pushout(i: &SimplicialMap, f: &SimplicialMap) -> Result<Pushout> {
  i.check_injective()?;
  if !Arc::ptr_eq(&i.source, &f.source) && *i.source != *f.source {
    return invalid("pushout legs need a common domain");
  }
  let (x, y) = (&i.target, &f.target);
  if x.group() != y.group() {
    return Err(Error::MixedGroups);
  }
  let mut preimage: HashMap<Cell, Cell> = HashMap::new();
  for c in i.source.all_cells() {
    preimage.insert(i.cell_image(c).cell, c);
  }
  let mut b = Builder::new(y.group()).truncation(x.truncation().min(y.truncation()));
  if x.is_truncated() || y.is_truncated() {
    b.mark_truncated();
  }
  for d in 1..=y.dim() {
    for c in y.cells(d) {
      b.add_cell(d, y.cell_faces(c).to_vec());
    }
  }
  for _ in 1..y.num_cells(0) {
    b.add_vertex();
  }
  let mut new_index: HashMap<Cell, Cell> = HashMap::new();
  for d in 0..=x.dim() {
    for c in x.cells(d).filter(|c| !preimage.contains_key(c)) {
      new_index.insert(
        c,
        Cell { dim: d, idx: y.num_cells(d) + new_index.iter().filter(|(k, _)| k.dim == d).count() },
      );
    }
  }
  let image = |s: &Simplex| -> Simplex {
    match preimage.get(&s.cell) {
      Some(&a) => f.apply(&Simplex { surj: s.surj.clone(), cell: a }),
      None => Simplex { surj: s.surj.clone(), cell: new_index[&s.cell] },
    }
  };
  let mut order: Vec<(Cell, Cell)> = new_index.iter().map(|(&k, &v)| (v, k)).collect();
  order.sort();
  for &(v, k) in &order {
    if v.dim == 0 {
      b.add_vertex();
    } else {
      b.add_cell(v.dim, x.cell_faces(k).iter().map(&image).collect());
    }
  }
  let back: HashMap<Cell, Cell> = order.into_iter().collect();
  let space = Arc::new(b.build_with(|g, d, idx| {
    if idx < y.num_cells(d) {
      y.act_cell(g, Cell { dim: d, idx }).idx
    } else {
      new_index[&x.act_cell(g, back[&Cell { dim: d, idx }])].idx
    }
  })?);
  let from_x = SimplicialMap::from_fn(x, &space, |c| image(&Simplex::nondegenerate(c)));
  let from_y = SimplicialMap::from_fn(y, &space, Simplex::nondegenerate);
  Ok(Pushout { space, from_x, from_y })
}

/// A commutative cube of spaces indexed by subsets of `0..n`, built from maps out of `X_0`.
pub struct GCube {
  pub n: usize,
  pub vertices: Vec<Arc<SimplicialGSet>>,
  /// `legs[S][i]` embeds `X_i` (the target of `e_i`) into the vertex `S`, for `i` in `S`.
  legs: Vec<Vec<Option<SimplicialMap>>>,
  pub initial: Vec<SimplicialMap>,
  owners: Vec<Vec<Vec<Option<(usize, Cell)>>>>,
}

impl GCube {
  pub fn vertex(&self, s: usize) -> &Arc<SimplicialGSet> {
    &self.vertices[s]
  }

  pub fn leg(&self, s: usize, i: usize) -> Option<&SimplicialMap> {
    self.legs[s][i].as_ref()
  }

  /// The structure map for `S` contained in `T`.
  pub fn edge(&self, s: usize, t: usize) -> Result<SimplicialMap> {
    if s & !t != 0 {
      return invalid("edge requires S to be a subset of T");
    }
    let (src, tgt) = (&self.vertices[s], &self.vertices[t]);
    Ok(SimplicialMap::from_fn(src, tgt, |c| match self.owners[s][c.dim][c.idx] {
      None => Simplex::nondegenerate(Cell { dim: c.dim, idx: c.idx }),
      Some((i, xc)) => self.legs[t][i].as_ref().unwrap().cell_image(xc).clone(),
    }))
  }
}

/// Iterated pushouts of levelwise-injective maps `e_i: X_0 -> X_i`.
pub fn build_cocartesian_cube(e: &[SimplicialMap]) -> Result<GCube> {
  let n = e.len();
  if n == 0 {
    return invalid("a cube needs at least one initial map");
  }
  let x0 = e[0].source.clone();
  for m in e {
    m.check_injective()?;
    if *m.source != *x0 {
      return invalid("initial maps need a common domain");
    }
  }
  let mut vertices = Vec::new();
  let mut legs = Vec::new();
  let mut owners = Vec::new();
  for s in 0..1usize << n {
    let mut b =
      Builder::new(x0.group()).truncation(e.iter().map(|m| m.target.truncation()).min().unwrap());
    if e.iter().any(|m| m.target.is_truncated()) {
      b.mark_truncated();
    }
    let mut owner: Vec<Vec<Option<(usize, Cell)>>> =
      (0..=x0.dim()).map(|d| vec![None; x0.num_cells(d)]).collect();
    let mut where_: HashMap<(usize, Cell), Cell> = HashMap::new();
    let mut pre: Vec<HashMap<Cell, Cell>> = Vec::new();
    for m in e {
      pre.push(x0.all_cells().map(|c| (m.cell_image(c).cell, c)).collect());
    }
    let top = e.iter().map(|m| m.target.dim()).chain([x0.dim()]).max().unwrap();
    while owner.len() <= top {
      owner.push(Vec::new());
    }
    for d in 0..=top {
      for i in (0..n).filter(|&i| s >> i & 1 == 1) {
        for c in e[i].target.cells(d).filter(|c| !pre[i].contains_key(c)) {
          where_.insert((i, c), Cell { dim: d, idx: owner[d].len() });
          owner[d].push(Some((i, c)));
        }
      }
    }
    let lift = |i: usize, s: &Simplex| -> Simplex {
      match pre[i].get(&s.cell) {
        Some(&a) => Simplex { surj: s.surj.clone(), cell: a },
        None => Simplex { surj: s.surj.clone(), cell: where_[&(i, s.cell)] },
      }
    };
    for (d, level) in owner.iter().enumerate() {
      for (idx, o) in level.iter().enumerate() {
        if d == 0 && idx == 0 {
          continue;
        }
        match o {
          None if d == 0 => {
            b.add_vertex();
          }
          None => {
            b.add_cell(d, x0.cell_faces(Cell { dim: d, idx }).to_vec());
          }
          Some((i, c)) if d == 0 => {
            let _ = (i, c);
            b.add_vertex();
          }
          Some((i, c)) => {
            b.add_cell(d, e[*i].target.cell_faces(*c).iter().map(|f| lift(*i, f)).collect());
          }
        }
      }
    }
    let space = Arc::new(b.build_with(|g, d, idx| match owner[d][idx] {
      None => x0.act_cell(g, Cell { dim: d, idx }).idx,
      Some((i, c)) => where_[&(i, e[i].target.act_cell(g, c))].idx,
    })?);
    let leg: Vec<Option<SimplicialMap>> = (0..n)
      .map(|i| {
        (s >> i & 1 == 1).then(|| {
          SimplicialMap::from_fn(&e[i].target, &space, |c| lift(i, &Simplex::nondegenerate(c)))
        })
      })
      .collect();
    vertices.push(space);
    legs.push(leg);
    owners.push(owner);
  }
  Ok(GCube { n, vertices, legs, initial: e.to_vec(), owners })
}
