use std::collections::HashMap;

use serde::Serialize;

use crate::error::{invalid, Error, Result};

const NONE: u32 = u32::MAX;

/// A finite category with morphisms numbered `0..n` and a dense composition table.
#[derive(Clone, Debug)]
pub struct FinCat {
  objects: usize,
  src: Vec<usize>,
  tgt: Vec<usize>,
  ids: Vec<usize>,
  homs: Vec<Vec<Vec<usize>>>,
  comp: Vec<u32>,
}

impl FinCat {
  /// Builds a category from its morphism list and a composition rule `compose(g, f) = g f`.
  ///
  /// Unit laws and associativity are checked on every composable pair and triple.
  pub fn from_fn(
    objects: usize,
    arrows: Vec<(usize, usize)>,
    ids: Vec<usize>,
    compose: impl Fn(usize, usize) -> Option<usize>,
  ) -> Result<Self> {
    let n = arrows.len();
    if n >= NONE as usize {
      return Err(Error::Unsupported("category too large".into()));
    }
    if ids.len() != objects {
      return invalid("one identity per object is required");
    }
    let (src, tgt): (Vec<usize>, Vec<usize>) = arrows.iter().copied().unzip();
    if src.iter().chain(&tgt).any(|&o| o >= objects) {
      return invalid("arrow endpoint out of range");
    }
    let mut homs = vec![vec![Vec::new(); objects]; objects];
    for f in 0..n {
      homs[src[f]][tgt[f]].push(f);
    }
    for (c, &i) in ids.iter().enumerate() {
      if i >= n || src[i] != c || tgt[i] != c {
        return invalid(format!("identity of object {c} is not an endomorphism of it"));
      }
    }
    let mut comp = vec![NONE; n * n];
    for f in 0..n {
      for &g in homs[tgt[f]].iter().flatten() {
        if src[g] != tgt[f] {
          continue;
        }
        match compose(g, f) {
          Some(h) if h < n && src[h] == src[f] && tgt[h] == tgt[g] => comp[g * n + f] = h as u32,
          _ => return invalid(format!("composite of {g} after {f} is missing or misplaced")),
        }
      }
    }
    let cat = Self { objects, src, tgt, ids, homs, comp };
    for f in 0..n {
      if cat.compose(cat.id(cat.tgt[f]), f) != f || cat.compose(f, cat.id(cat.src[f])) != f {
        return invalid(format!("unit law fails at {f}"));
      }
    }
    for f in 0..n {
      for g in cat.out_of(cat.tgt[f]) {
        let gf = cat.compose(g, f);
        for h in cat.out_of(cat.tgt[g]) {
          if cat.compose(h, gf) != cat.compose(cat.compose(h, g), f) {
            return invalid(format!("associativity fails at ({h},{g},{f})"));
          }
        }
      }
    }
    Ok(cat)
  }

  /// The one-object category of a finite group.
  pub fn group(g: &crate::equivariance::FiniteGroup) -> Self {
    let arrows = vec![(0, 0); g.order()];
    Self::from_fn(1, arrows, vec![g.id()], |a, b| Some(g.mul(a, b))).expect("group category")
  }

  /// The groupoid with `n` objects and exactly one morphism between any two; `(i, j)` is `i*n + j`.
  pub fn codiscrete(n: usize) -> Self {
    let arrows = (0..n * n).map(|k| (k / n, k % n)).collect();
    let ids = (0..n).map(|i| i * n + i).collect();
    Self::from_fn(n, arrows, ids, |g, f| Some((f / n) * n + g % n)).expect("codiscrete groupoid")
  }

  pub fn num_objects(&self) -> usize {
    self.objects
  }

  pub fn num_morphisms(&self) -> usize {
    self.src.len()
  }

  pub fn src(&self, f: usize) -> usize {
    self.src[f]
  }

  pub fn tgt(&self, f: usize) -> usize {
    self.tgt[f]
  }

  pub fn id(&self, c: usize) -> usize {
    self.ids[c]
  }

  pub fn is_identity(&self, f: usize) -> bool {
    self.ids[self.src[f]] == f
  }

  pub fn hom(&self, c: usize, d: usize) -> &[usize] {
    &self.homs[c][d]
  }

  /// Morphisms with source `c`.
  pub fn out_of(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
    self.homs[c].iter().flatten().copied()
  }

  pub fn compose(&self, g: usize, f: usize) -> usize {
    let h = self.comp[g * self.num_morphisms() + f];
    assert!(h != NONE, "morphisms {g} and {f} are not composable");
    h as usize
  }

  /// Composes a path given in diagrammatic order, `path = [f1, f2, ...]` meaning `... f2 f1`.
  pub fn compose_path(&self, path: &[usize]) -> usize {
    path[1..].iter().fold(path[0], |acc, &g| self.compose(g, acc))
  }

  pub fn inverse(&self, f: usize) -> Option<usize> {
    let (c, d) = (self.src[f], self.tgt[f]);
    self.homs[d][c]
      .iter()
      .copied()
      .find(|&g| self.compose(g, f) == self.ids[c] && self.compose(f, g) == self.ids[d])
  }

  pub fn is_iso(&self, f: usize) -> bool {
    self.inverse(f).is_some()
  }

  pub fn isos(&self, c: usize, d: usize) -> Vec<usize> {
    self.homs[c][d].iter().copied().filter(|&f| self.is_iso(f)).collect()
  }

  pub fn is_groupoid(&self) -> bool {
    (0..self.num_morphisms()).all(|f| self.is_iso(f))
  }

  /// Wide subcategory of isomorphisms, with the inclusion on morphisms.
  pub fn core(&self) -> (FinCat, Vec<usize>) {
    let keep: Vec<usize> = (0..self.num_morphisms()).filter(|&f| self.is_iso(f)).collect();
    let index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let arrows = keep.iter().map(|&f| (self.src[f], self.tgt[f])).collect();
    let ids = self.ids.iter().map(|i| index[i]).collect();
    let core = Self::from_fn(self.objects, arrows, ids, |g, f| {
      index.get(&self.compose(keep[g], keep[f])).copied()
    })
    .expect("core of a category");
    (core, keep)
  }
}

/// A duality `(D, eta)`: a contravariant endofunctor with `eta: id => D D` and `D(eta_c) eta_{Dc} = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Duality {
  pub obj: Vec<usize>,
  pub mor: Vec<usize>,
  pub eta: Vec<usize>,
}

impl Duality {
  pub fn new(cat: &FinCat, obj: Vec<usize>, mor: Vec<usize>, eta: Vec<usize>) -> Result<Self> {
    let d = Self { obj, mor, eta };
    d.validate(cat)?;
    Ok(d)
  }

  /// The strict duality with identity `eta`.
  pub fn strict(cat: &FinCat, obj: Vec<usize>, mor: Vec<usize>) -> Result<Self> {
    let eta = (0..cat.num_objects()).map(|c| cat.id(c)).collect();
    Self::new(cat, obj, mor, eta)
  }

  /// The duality on a group category given by `g -> g^{-1}`.
  pub fn group_inverse(g: &crate::equivariance::FiniteGroup, cat: &FinCat) -> Self {
    Self::strict(cat, vec![0], g.elements().map(|x| g.inv(x)).collect()).expect("inverse duality")
  }

  /// The strict duality on `codiscrete(n)` induced by a permutation of order at most two.
  pub fn codiscrete(n: usize, perm: Vec<usize>) -> Result<Self> {
    let cat = FinCat::codiscrete(n);
    let mor = (0..n * n).map(|k| perm[k % n] * n + perm[k / n]).collect();
    Self::strict(&cat, perm, mor)
  }

  pub fn validate(&self, cat: &FinCat) -> Result<()> {
    let (n, m) = (cat.num_objects(), cat.num_morphisms());
    if self.obj.len() != n || self.mor.len() != m || self.eta.len() != n {
      return invalid("duality tables have the wrong size");
    }
    if self.obj.iter().any(|&o| o >= n) || self.mor.iter().chain(&self.eta).any(|&f| f >= m) {
      return invalid("duality tables out of range");
    }
    for f in 0..m {
      let df = self.mor[f];
      if cat.src(df) != self.obj[cat.tgt(f)] || cat.tgt(df) != self.obj[cat.src(f)] {
        return invalid(format!("D({f}) has the wrong endpoints"));
      }
    }
    for c in 0..n {
      if self.mor[cat.id(c)] != cat.id(self.obj[c]) {
        return invalid(format!("D does not preserve the identity of {c}"));
      }
      let e = self.eta[c];
      if cat.src(e) != c || cat.tgt(e) != self.obj[self.obj[c]] || !cat.is_iso(e) {
        return invalid(format!("eta_{c} is not an isomorphism c -> DDc"));
      }
    }
    for f in 0..m {
      for g in cat.out_of(cat.tgt(f)) {
        if self.mor[cat.compose(g, f)] != cat.compose(self.mor[f], self.mor[g]) {
          return invalid(format!("D is not contravariantly functorial at ({g},{f})"));
        }
      }
      let (c, d) = (cat.src(f), cat.tgt(f));
      if cat.compose(self.eta[d], f) != cat.compose(self.dd(f), self.eta[c]) {
        return invalid(format!("eta is not natural at {f}"));
      }
    }
    for c in 0..n {
      if cat.compose(self.mor[self.eta[c]], self.eta[self.obj[c]]) != cat.id(self.obj[c]) {
        return invalid(format!("coherence D(eta) eta_D = id fails at {c}"));
      }
    }
    Ok(())
  }

  pub fn dd(&self, f: usize) -> usize {
    self.mor[self.mor[f]]
  }

  pub fn is_strict(&self, cat: &FinCat) -> bool {
    (0..cat.num_objects()).all(|c| self.eta[c] == cat.id(c) && self.obj[self.obj[c]] == c)
      && (0..cat.num_morphisms()).all(|f| self.dd(f) == f)
  }
}

/// A functor between finite categories, stored as tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
  pub obj: Vec<usize>,
  pub mor: Vec<usize>,
}

impl Functor {
  pub fn new(a: &FinCat, b: &FinCat, obj: Vec<usize>, mor: Vec<usize>) -> Result<Self> {
    let f = Self { obj, mor };
    f.validate(a, b)?;
    Ok(f)
  }

  pub fn identity(a: &FinCat) -> Self {
    Self { obj: (0..a.num_objects()).collect(), mor: (0..a.num_morphisms()).collect() }
  }

  pub fn validate(&self, a: &FinCat, b: &FinCat) -> Result<()> {
    if self.obj.len() != a.num_objects() || self.mor.len() != a.num_morphisms() {
      return invalid("functor tables have the wrong size");
    }
    if self.obj.iter().any(|&o| o >= b.num_objects())
      || self.mor.iter().any(|&f| f >= b.num_morphisms())
    {
      return invalid("functor tables out of range");
    }
    for f in 0..a.num_morphisms() {
      let g = self.mor[f];
      if b.src(g) != self.obj[a.src(f)] || b.tgt(g) != self.obj[a.tgt(f)] {
        return invalid(format!("F({f}) has the wrong endpoints"));
      }
      for h in a.out_of(a.tgt(f)) {
        if self.mor[a.compose(h, f)] != b.compose(self.mor[h], g) {
          return invalid(format!("F does not preserve the composite of {h} after {f}"));
        }
      }
    }
    for c in 0..a.num_objects() {
      if self.mor[a.id(c)] != b.id(self.obj[c]) {
        return invalid(format!("F does not preserve the identity of {c}"));
      }
    }
    Ok(())
  }

  pub fn then(&self, g: &Functor) -> Functor {
    Functor {
      obj: self.obj.iter().map(|&o| g.obj[o]).collect(),
      mor: self.mor.iter().map(|&f| g.mor[f]).collect(),
    }
  }

  /// `F D_A = D_B F` on objects and morphisms.
  pub fn commutes_with(&self, da: &Duality, db: &Duality) -> bool {
    self.obj.iter().enumerate().all(|(c, &fc)| self.obj[da.obj[c]] == db.obj[fc])
      && self.mor.iter().enumerate().all(|(f, &ff)| self.mor[da.mor[f]] == db.mor[ff])
  }
}

/// Checks that `components` form a natural transformation `F => G`, optionally invertible.
pub fn is_natural(
  a: &FinCat,
  b: &FinCat,
  f: &Functor,
  g: &Functor,
  components: &[usize],
  iso: bool,
) -> bool {
  (0..a.num_objects()).all(|c| {
    let u = components[c];
    b.src(u) == f.obj[c] && b.tgt(u) == g.obj[c] && (!iso || b.is_iso(u))
  }) && (0..a.num_morphisms()).all(|h| {
    let (c, d) = (a.src(h), a.tgt(h));
    b.compose(components[d], f.mor[h]) == b.compose(g.mor[h], components[c])
  })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EquivalenceReport {
  pub fully_faithful: bool,
  pub essentially_surjective: bool,
  /// For each object `b` of the target, a source object `a` and an iso `F(a) -> b`.
  pub witnesses: Vec<Option<(usize, usize)>>,
  pub failure: Option<String>,
}

impl EquivalenceReport {
  pub fn is_equivalence(&self) -> bool {
    self.fully_faithful && self.essentially_surjective
  }
}

/// Decides by exhaustion whether `F` is fully faithful and essentially surjective.
pub fn check_equivalence(a: &FinCat, b: &FinCat, f: &Functor) -> EquivalenceReport {
  let mut failure = None;
  let mut fully_faithful = true;
  'outer: for c in 0..a.num_objects() {
    for d in 0..a.num_objects() {
      let mut image: Vec<usize> = a.hom(c, d).iter().map(|&h| f.mor[h]).collect();
      image.sort_unstable();
      let before = image.len();
      image.dedup();
      if image.len() != before {
        failure = Some(format!("not faithful on ({c},{d})"));
        fully_faithful = false;
        break 'outer;
      }
      if image.len() != b.hom(f.obj[c], f.obj[d]).len() {
        failure = Some(format!("not full on ({c},{d})"));
        fully_faithful = false;
        break 'outer;
      }
    }
  }
  let witnesses: Vec<Option<(usize, usize)>> = (0..b.num_objects())
    .map(|y| (0..a.num_objects()).find_map(|x| b.isos(f.obj[x], y).first().map(|&u| (x, u))))
    .collect();
  let essentially_surjective = witnesses.iter().all(Option::is_some);
  if failure.is_none() && !essentially_surjective {
    let y = witnesses.iter().position(Option::is_none).unwrap();
    failure = Some(format!("object {y} is not in the essential image"));
  }
  EquivalenceReport { fully_faithful, essentially_surjective, witnesses, failure }
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::equivariance::FiniteGroup;

  #[test]
  fn codiscrete_composition() {
    let c = FinCat::codiscrete(3);
    assert_eq!(c.num_morphisms(), 9);
    assert!(c.is_groupoid());
    let f = 1;
    let g = 3 + 2;
    assert_eq!(c.compose(g, f), 2);
  }

  #[test]
  fn bad_composition_is_rejected() {
    let r = FinCat::from_fn(1, vec![(0, 0), (0, 0)], vec![0], |g, f| {
      Some(if g == 1 && f == 1 { 1 } else { g.max(f) })
    });
    assert!(r.is_ok());
    let r = FinCat::from_fn(1, vec![(0, 0), (0, 0)], vec![0], |g, f| {
      Some(if g == 1 && f == 1 { 0 } else { 1 })
    });
    assert!(r.is_err());
  }

  #[test]
  fn group_dualities() {
    let g = FiniteGroup::symmetric3();
    let c = FinCat::group(&g);
    let d = Duality::group_inverse(&g, &c);
    assert!(d.is_strict(&c));
    let bad = Duality::strict(&c, vec![0], g.elements().collect());
    assert!(bad.is_err());
  }

  #[test]
  fn codiscrete_swap_duality_is_strict() {
    let c = FinCat::codiscrete(2);
    let d = Duality::codiscrete(2, vec![1, 0]).unwrap();
    assert!(d.is_strict(&c));
  }

  #[test]
  fn skeleton_inclusion_is_an_equivalence() {
    let big = FinCat::codiscrete(3);
    let small = FinCat::codiscrete(1);
    let f = Functor::new(&small, &big, vec![1], vec![4]).unwrap();
    let rep = check_equivalence(&small, &big, &f);
    assert!(rep.is_equivalence(), "{rep:?}");
    let two =
      FinCat::from_fn(2, vec![(0, 0), (1, 1)], vec![0, 1], |g, f| (g == f).then_some(g)).unwrap();
    let f = Functor::new(&small, &two, vec![0], vec![0]).unwrap();
    assert!(!check_equivalence(&small, &two, &f).essentially_surjective);
  }
}
