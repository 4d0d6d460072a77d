use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::shape::Shape;
use crate::{
  error::{invalid, Error, Result},
  wall::ModCat,
};

const MAX_CHOICES: usize = 5_000_000;

/// A functor `Cat([2],[p]) -> P_A` into the skeleton: a rank per object and a matrix per arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Diagram {
  pub ranks: Vec<usize>,
  pub maps: Vec<usize>,
}

/// A natural transformation between diagrams: one matrix per object.
pub type Transformation = Vec<usize>;

/// `S^{2,1}_p` of the skeleton `P_A` with vertex ranks at most `bound`.
pub struct Level<'a> {
  pub shape: Shape,
  pub mc: &'a ModCat,
  isos: Vec<Vec<usize>>,
}

impl<'a> Level<'a> {
  pub fn new(p: usize, mc: &'a ModCat) -> Self {
    let isos = (0..=mc.max_rank).map(|k| mc.cat.isos(k, k)).collect();
    Self { shape: Shape::new(p), mc, isos }
  }

  fn zero(&self, k: usize, l: usize) -> usize {
    self.mc.morphism(k, l, &vec![0; k * l])
  }

  pub fn map(&self, x: &Diagram, r: usize, t: usize) -> usize {
    x.maps[self.shape.arrow(r, t).unwrap()]
  }

  /// All vectors of `A^k` as entry lists.
  fn vectors(&self, k: usize) -> Vec<Vec<usize>> {
    let n = self.mc.ring.size();
    (0..n.pow(k as u32)).map(|c| (0..k).map(|i| c / n.pow(i as u32) % n).collect()).collect()
  }

  fn apply(&self, f: usize, v: &[usize]) -> Vec<usize> {
    let (k, l) = (self.mc.cat.src(f), self.mc.cat.tgt(f));
    let m = self.mc.matrix(f);
    let r = &self.mc.ring;
    (0..l).map(|i| (0..k).fold(r.zero(), |acc, j| r.add(acc, r.mul(m[i * k + j], v[j])))).collect()
  }

  fn image(&self, f: usize) -> HashSet<Vec<usize>> {
    self.vectors(self.mc.cat.src(f)).iter().map(|v| self.apply(f, v)).collect()
  }

  fn kernel(&self, g: usize) -> HashSet<Vec<usize>> {
    let l = self.mc.cat.tgt(g);
    self
      .vectors(self.mc.cat.src(g))
      .into_iter()
      .filter(|v| self.apply(g, v) == vec![0; l])
      .collect()
  }

  /// Exactness of `0 -> X(d_3 psi) -> X(d_2 psi) -> X(d_1 psi) -> X(d_0 psi) -> 0`.
  pub fn exact_at(&self, x: &Diagram, psi: &[usize; 4]) -> bool {
    let o: Vec<usize> = (0..4).rev().map(|j| self.shape.face_of(psi, j)).collect();
    let f: Vec<usize> = (0..3).map(|i| self.map(x, o[i], o[i + 1])).collect();
    let top = x.ranks[o[3]];
    self.kernel(f[0]).len() == 1
      && self.image(f[0]) == self.kernel(f[1])
      && self.image(f[1]) == self.kernel(f[2])
      && self.image(f[2]).len() == self.mc.ring.size().pow(top as u32)
  }

  /// Vanishing off injective objects, functoriality and exactness.
  pub fn check(&self, x: &Diagram) -> Result<()> {
    let s = &self.shape;
    let cat = &self.mc.cat;
    if x.ranks.len() != s.objects.len() || x.maps.len() != s.arrows.len() {
      return invalid("diagram has the wrong size");
    }
    if (0..s.objects.len()).any(|t| !s.is_injective(t) && x.ranks[t] != 0) {
      return invalid("diagram is nonzero at a non-injective object");
    }
    for (i, &(r, t)) in s.arrows.iter().enumerate() {
      let f = x.maps[i];
      if f >= cat.num_morphisms() || cat.src(f) != x.ranks[r] || cat.tgt(f) != x.ranks[t] {
        return invalid("map has the wrong shape");
      }
      if r == t && f != cat.id(x.ranks[r]) {
        return invalid("identity arrow is not sent to an identity");
      }
    }
    for &(r, m) in &s.arrows {
      for &(_, t) in s.arrows.iter().filter(|a| a.0 == m) {
        if cat.compose(self.map(x, m, t), self.map(x, r, m)) != self.map(x, r, t) {
          return invalid("diagram is not functorial");
        }
      }
    }
    if let Some(psi) = s.quadruples().iter().find(|psi| !self.exact_at(x, psi)) {
      return Err(Error::CheckFailed(format!("sequence at {psi:?} is not exact")));
    }
    Ok(())
  }

  /// Completes cover maps to all arrows, or `None` if two chains disagree.
  fn complete(&self, ranks: &[usize], cover: &HashMap<(usize, usize), usize>) -> Option<Diagram> {
    let s = &self.shape;
    let cat = &self.mc.cat;
    let mut value: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = s.arrows.clone();
    let height = |t: usize| s.objects[t].iter().sum::<usize>();
    pairs.sort_by_key(|&(r, t)| height(t) - height(r));
    for (r, t) in pairs {
      if r == t {
        value.insert((r, t), cat.id(ranks[r]));
        continue;
      }
      let mut found = None;
      for &m in &s.covers[r] {
        if let Some(&rest) = value.get(&(m, t)) {
          let v = cat.compose(rest, cover[&(r, m)]);
          match found {
            None => found = Some(v),
            Some(w) if w != v => return None,
            _ => {}
          }
        }
      }
      value.insert((r, t), found?);
    }
    Some(Diagram { ranks: ranks.to_vec(), maps: s.arrows.iter().map(|a| value[a]).collect() })
  }

  /// All objects with vertex ranks at most `bound`, up to isomorphism, by direct search over
  /// cover maps.
  pub fn enumerate(&self, bound: usize) -> Result<Vec<Diagram>> {
    let s = &self.shape;
    let cat = &self.mc.cat;
    if bound > self.mc.max_rank {
      return invalid("rank bound exceeds the skeleton");
    }
    let inj: Vec<usize> = (0..s.objects.len()).filter(|&t| s.is_injective(t)).collect();
    let covers: Vec<(usize, usize)> =
      (0..s.objects.len()).flat_map(|r| s.covers[r].iter().map(move |&t| (r, t))).collect();
    let mut reps: Vec<Diagram> = Vec::new();
    let mut ranks = vec![0; s.objects.len()];
    let combos = (bound + 1).pow(inj.len() as u32);
    let set_ranks = |ranks: &mut Vec<usize>, code: usize| {
      for (i, &t) in inj.iter().enumerate() {
        ranks[t] = code / (bound + 1).pow(i as u32) % (bound + 1);
      }
    };
    let count = |ranks: &[usize]| {
      covers
        .iter()
        .try_fold(1usize, |acc, &(r, t)| acc.checked_mul(cat.hom(ranks[r], ranks[t]).len()))
        .unwrap_or(usize::MAX)
    };
    for code in 0..combos {
      set_ranks(&mut ranks, code);
      let total = count(&ranks);
      if total > MAX_CHOICES {
        return Err(Error::Unsupported(format!("{total} cover assignments at ranks {ranks:?}")));
      }
    }
    for code in 0..combos {
      set_ranks(&mut ranks, code);
      let options: Vec<&[usize]> =
        covers.iter().map(|&(r, t)| cat.hom(ranks[r], ranks[t])).collect();
      let total = count(&ranks);
      for choice in 0..total {
        let mut rest = choice;
        let mut cover = HashMap::new();
        for (i, o) in options.iter().enumerate() {
          cover.insert(covers[i], o[rest % o.len()]);
          rest /= o.len();
        }
        let Some(x) = self.complete(&ranks, &cover) else { continue };
        if self.check(&x).is_err() {
          continue;
        }
        if !reps.iter().any(|y| y.ranks == x.ranks && self.isomorphism(y, &x).is_some()) {
          reps.push(x);
        }
      }
    }
    Ok(reps)
  }

  /// The split objects `X_theta = sum over the retractions of theta of A^{r_(a,b)}`, with
  /// inclusions and projections of summands as maps, for every rank family within `bound`.
  pub fn oracle(&self, bound: usize) -> Vec<(Vec<usize>, Diagram)> {
    let s = &self.shape;
    let labels = s.labels();
    let retr: Vec<Vec<(usize, usize)>> = (0..s.objects.len()).map(|t| s.retractions(t)).collect();
    let mut out = Vec::new();
    for code in 0..(bound + 1).pow(labels.len() as u32) {
      let r: Vec<usize> =
        (0..labels.len()).map(|i| code / (bound + 1).pow(i as u32) % (bound + 1)).collect();
      let rank_of = |l: &(usize, usize)| r[labels.iter().position(|x| x == l).unwrap()];
      let ranks: Vec<usize> = retr.iter().map(|ls| ls.iter().map(rank_of).sum()).collect();
      if ranks.iter().any(|&k| k > bound) {
        continue;
      }
      let offsets = |t: usize| -> HashMap<(usize, usize), usize> {
        let mut acc = 0;
        retr[t]
          .iter()
          .map(|l| {
            let o = acc;
            acc += rank_of(l);
            (*l, o)
          })
          .collect()
      };
      let maps = s
        .arrows
        .iter()
        .map(|&(a, t)| {
          let (k, l) = (ranks[a], ranks[t]);
          let (oa, ot) = (offsets(a), offsets(t));
          let mut entries = vec![0; k * l];
          for lab in retr[a].iter().filter(|lab| ot.contains_key(lab)) {
            for i in 0..rank_of(lab) {
              entries[(ot[lab] + i) * k + oa[lab] + i] = self.mc.ring.one();
            }
          }
          self.mc.morphism(k, l, &entries)
        })
        .collect();
      out.push((r, Diagram { ranks, maps }));
    }
    out
  }

  /// Natural isomorphisms `x -> y`, at most `limit` of them.
  pub fn isomorphisms(&self, x: &Diagram, y: &Diagram, limit: usize) -> Vec<Transformation> {
    let s = &self.shape;
    if x.ranks != y.ranks {
      return Vec::new();
    }
    let order: Vec<usize> = (0..s.objects.len()).filter(|&t| x.ranks[t] > 0).collect();
    let mut g: Vec<usize> = x.ranks.iter().map(|&k| self.mc.cat.id(k)).collect();
    let mut out = Vec::new();
    self.search(x, y, &order, 0, &mut g, &mut out, limit);
    out
  }

  pub fn isomorphism(&self, x: &Diagram, y: &Diagram) -> Option<Transformation> {
    self.isomorphisms(x, y, 1).pop()
  }

  #[allow(clippy::too_many_arguments)]
  fn search(
    &self,
    x: &Diagram,
    y: &Diagram,
    order: &[usize],
    depth: usize,
    g: &mut Vec<usize>,
    out: &mut Vec<Transformation>,
    limit: usize,
  ) {
    if out.len() >= limit {
      return;
    }
    if depth == order.len() {
      out.push(g.clone());
      return;
    }
    let t = order[depth];
    let cat = &self.mc.cat;
    for &u in &self.isos[x.ranks[t]] {
      g[t] = u;
      let ok = order[..=depth].iter().all(|&r| {
        let fits = |a: usize, b: usize| {
          self.shape.arrow(a, b).map_or(true, |_| {
            cat.compose(self.map(y, a, b), g[a]) == cat.compose(g[b], self.map(x, a, b))
          })
        };
        fits(r, t) && fits(t, r)
      });
      if ok {
        self.search(x, y, order, depth + 1, g, out, limit);
        if out.len() >= limit {
          return;
        }
      }
    }
  }

  /// `(DX)_theta = D(X_{omega theta omega})` with `DX(rho -> theta) = D(X(omega theta omega -> omega rho omega))`.
  pub fn dual(&self, x: &Diagram, d: &crate::dualcat::Duality) -> Diagram {
    let s = &self.shape;
    let ranks = (0..s.objects.len()).map(|t| d.obj[x.ranks[s.omega[t]]]).collect();
    let maps = s.arrows.iter().map(|&(r, t)| d.mor[self.map(x, s.omega[t], s.omega[r])]).collect();
    Diagram { ranks, maps }
  }

  /// The image of a diagram under a functor of skeleta that is the identity on objects.
  pub fn transport(&self, x: &Diagram, f: &crate::dualcat::Functor) -> Diagram {
    Diagram { ranks: x.ranks.clone(), maps: x.maps.iter().map(|&m| f.mor[m]).collect() }
  }

  /// Whether every vertex has rank 0.
  pub fn is_zero(&self, x: &Diagram) -> bool {
    x.ranks.iter().all(|&k| k == 0)
  }

  pub fn zero_object(&self) -> Diagram {
    let s = &self.shape;
    Diagram {
      ranks: vec![0; s.objects.len()],
      maps: s.arrows.iter().map(|_| self.zero(0, 0)).collect(),
    }
  }
}

/// The outcome of comparing direct enumeration with the splitting oracle.
#[derive(Clone, Debug, Serialize)]
pub struct OracleComparison {
  pub p: usize,
  pub bound: usize,
  pub enumerated: usize,
  pub oracle: usize,
  pub oracle_exact: bool,
  pub oracle_distinct: bool,
  pub covered: bool,
}

impl OracleComparison {
  pub fn holds(&self) -> bool {
    self.oracle_exact && self.oracle_distinct && self.covered && self.enumerated == self.oracle
  }
}

pub fn compare_with_oracle(level: &Level, bound: usize) -> Result<OracleComparison> {
  let found = level.enumerate(bound)?;
  let oracle = level.oracle(bound);
  let oracle_exact = oracle.iter().all(|(_, x)| level.check(x).is_ok());
  let oracle_distinct = (0..oracle.len())
    .all(|i| (0..i).all(|j| level.isomorphism(&oracle[i].1, &oracle[j].1).is_none()));
  let covered = found.iter().all(|x| oracle.iter().any(|(_, y)| level.isomorphism(y, x).is_some()));
  Ok(OracleComparison {
    p: level.shape.p,
    bound,
    enumerated: found.len(),
    oracle: oracle.len(),
    oracle_exact,
    oracle_distinct,
    covered,
  })
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::wall::{semidirect_ring, WallBimodule, WallRing};

  #[test]
  fn low_levels_are_trivial_or_the_category() {
    let f2 = WallRing::prime_field(2);
    let mc = ModCat::new(&f2, 2).unwrap();
    for p in 0..2 {
      let level = Level::new(p, &mc);
      let found = level.enumerate(2).unwrap();
      assert_eq!(found.len(), 1);
      assert!(level.is_zero(&found[0]));
    }
    let level = Level::new(2, &mc);
    assert_eq!(level.enumerate(2).unwrap().len(), 3);
  }

  #[test]
  fn oracle_matches_enumeration() {
    let f2 = WallRing::prime_field(2);
    let r = semidirect_ring(&f2, &WallBimodule::regular(&f2)).unwrap();
    for (ring, bound) in [(f2.clone(), 1), (f2, 2), (r, 1), (WallRing::cyclic_sign(4), 1)] {
      let mc = ModCat::new(&ring, bound).unwrap();
      for p in 0..=3 {
        let cmp = compare_with_oracle(&Level::new(p, &mc), bound).unwrap();
        assert!(cmp.holds(), "{} {cmp:?}", ring.name);
      }
    }
  }

  #[test]
  fn fourteen_classes_at_rank_two() {
    let f2 = WallRing::prime_field(2);
    let mc = ModCat::new(&f2, 2).unwrap();
    assert_eq!(Level::new(3, &mc).oracle(2).len(), 14);
  }

  #[test]
  fn non_exact_diagram_is_rejected() {
    let f2 = WallRing::prime_field(2);
    let mc = ModCat::new(&f2, 1).unwrap();
    let level = Level::new(3, &mc);
    let (_, mut x) = level.oracle(1).into_iter().find(|(r, _)| r == &vec![1, 0, 0]).unwrap();
    // kill the map X_012 -> X_013
    let s = &level.shape;
    let a = s.arrow(s.object([0, 1, 2]), s.object([0, 1, 3])).unwrap();
    x.maps[a] = mc.morphism(1, 1, &[0]);
    assert!(level.check(&x).is_err());
  }

  #[test]
  fn dual_diagram_is_an_object() {
    let z4 = WallRing::cyclic_sign(4);
    let mc = ModCat::new(&z4, 1).unwrap();
    let d = mc.duality().unwrap();
    let level = Level::new(3, &mc);
    for x in level.enumerate(1).unwrap() {
      level.check(&level.dual(&x, &d)).unwrap();
    }
  }
}
