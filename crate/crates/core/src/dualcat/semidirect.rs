use std::collections::HashMap;

use serde::Serialize;

use super::cat::{check_equivalence, Duality, EquivalenceReport, FinCat, Functor};
use super::strict::Strictified;
use crate::error::{invalid, Error, Result};

type Mat = Vec<Vec<u32>>;

fn apply(q: u32, m: &Mat, v: &[u32]) -> Vec<u32> {
  m.iter()
    .map(|row| {
      row.iter().zip(v).fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % q as u64) as u32
    })
    .collect()
}

fn mat_mul(q: u32, a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
  a.iter()
    .map(|row| {
      (0..cols)
        .map(|j| {
          (0..inner).fold(0u64, |acc, k| (acc + row[k] as u64 * b[k][j] as u64) % q as u64) as u32
        })
        .collect()
    })
    .collect()
}

fn identity(r: usize) -> Mat {
  (0..r).map(|i| (0..r).map(|j| u32::from(i == j)).collect()).collect()
}

/// A bimodule `M: C^op x C -> Ab` with each `M(c, d)` a free `Z/q`-module, given by matrices.
///
/// `push[f][c]` is `f_*: M(c, src f) -> M(c, tgt f)` and `pull[g][d]` is `g^*: M(tgt g, d) -> M(src g, d)`.
/// `j[c][d]`, when present, is `J: M(c, d) -> M(Dd, Dc)`.
#[derive(Clone, Debug)]
pub struct TableBimodule {
  pub q: u32,
  pub rank: Vec<Vec<usize>>,
  pub push: Vec<Vec<Mat>>,
  pub pull: Vec<Vec<Mat>>,
  pub j: Option<Vec<Vec<Mat>>>,
}

impl TableBimodule {
  /// The bimodule with `M(c, d) = Z/q` for every pair, actions by the scalars `chi(f)` on
  /// both sides, and `J` multiplication by `j`.
  pub fn scalar(cat: &FinCat, q: u32, chi: impl Fn(usize) -> u32, j: Option<u32>) -> Self {
    let n = cat.num_objects();
    let one = |x: u32| vec![vec![x % q]];
    let rank = vec![vec![1; n]; n];
    let push = (0..cat.num_morphisms()).map(|f| vec![one(chi(f)); n]).collect();
    let pull = (0..cat.num_morphisms()).map(|g| vec![one(chi(g)); n]).collect();
    let j = j.map(|x| vec![vec![one(x); n]; n]);
    Self { q, rank, push, pull, j }
  }

  pub fn elements(&self, c: usize, d: usize) -> impl Iterator<Item = Vec<u32>> + '_ {
    let r = self.rank[c][d];
    let q = self.q;
    (0..(q as usize).pow(r as u32)).map(move |mut code| {
      (0..r)
        .map(|_| {
          let x = (code % q as usize) as u32;
          code /= q as usize;
          x
        })
        .collect()
    })
  }

  pub fn size(&self, c: usize, d: usize) -> usize {
    (self.q as usize).pow(self.rank[c][d] as u32)
  }

  pub fn code(&self, v: &[u32]) -> usize {
    v.iter().rev().fold(0, |acc, &x| acc * self.q as usize + x as usize)
  }

  pub fn zero(&self, c: usize, d: usize) -> Vec<u32> {
    vec![0; self.rank[c][d]]
  }

  pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| (x + y) % self.q).collect()
  }

  pub fn neg(&self, a: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| (self.q - x) % self.q).collect()
  }

  /// `f_* m` for `m` in `M(c, src f)`.
  pub fn push(&self, f: usize, c: usize, m: &[u32]) -> Vec<u32> {
    apply(self.q, &self.push[f][c], m)
  }

  /// `g^* m` for `m` in `M(tgt g, d)`.
  pub fn pull(&self, g: usize, d: usize, m: &[u32]) -> Vec<u32> {
    apply(self.q, &self.pull[g][d], m)
  }

  pub fn apply_j(&self, c: usize, d: usize, m: &[u32]) -> Vec<u32> {
    apply(self.q, &self.j.as_ref().expect("bimodule without duality")[c][d], m)
  }

  pub fn validate(&self, cat: &FinCat, duality: Option<&Duality>) -> Result<()> {
    let n = cat.num_objects();
    let q = self.q;
    let shape = |m: &Mat, rows: usize, cols: usize| {
      m.len() == rows && m.iter().all(|r| r.len() == cols && r.iter().all(|&x| x < q))
    };
    if self.rank.len() != n
      || self.push.len() != cat.num_morphisms()
      || self.pull.len() != cat.num_morphisms()
    {
      return invalid("bimodule tables have the wrong size");
    }
    for f in 0..cat.num_morphisms() {
      let (s, t) = (cat.src(f), cat.tgt(f));
      for c in 0..n {
        if !shape(&self.push[f][c], self.rank[c][t], self.rank[c][s])
          || !shape(&self.pull[f][c], self.rank[s][c], self.rank[t][c])
        {
          return invalid(format!("action matrix of {f} has the wrong shape"));
        }
      }
    }
    for c in 0..n {
      for d in 0..n {
        if self.push[cat.id(d)][c] != identity(self.rank[c][d])
          || self.pull[cat.id(c)][d] != identity(self.rank[c][d])
        {
          return invalid("identities do not act trivially");
        }
      }
    }
    for f in 0..cat.num_morphisms() {
      for g in cat.out_of(cat.tgt(f)) {
        let gf = cat.compose(g, f);
        for c in 0..n {
          let (s, t, u) = (cat.src(f), cat.tgt(f), cat.tgt(g));
          let two =
            mat_mul(q, &self.push[g][c], &self.push[f][c], self.rank[c][t], self.rank[c][s]);
          if self.push[gf][c] != two {
            return invalid("pushforward is not functorial");
          }
          let two =
            mat_mul(q, &self.pull[f][c], &self.pull[g][c], self.rank[t][c], self.rank[u][c]);
          if self.pull[gf][c] != two {
            return invalid("pullback is not functorial");
          }
        }
      }
    }
    for f in 0..cat.num_morphisms() {
      for g in 0..cat.num_morphisms() {
        let (d, d2, c2, c) = (cat.src(f), cat.tgt(f), cat.src(g), cat.tgt(g));
        let lhs =
          mat_mul(q, &self.push[f][c2], &self.pull[g][d], self.rank[c2][d], self.rank[c][d]);
        let rhs =
          mat_mul(q, &self.pull[g][d2], &self.push[f][c], self.rank[c][d2], self.rank[c][d]);
        if lhs != rhs {
          return invalid("left and right actions do not commute");
        }
      }
    }
    let (Some(dual), Some(j)) = (duality, self.j.as_ref()) else {
      return if duality.is_some() != self.j.is_some() {
        invalid("duality and J must be given together")
      } else {
        Ok(())
      };
    };
    for c in 0..n {
      for d in 0..n {
        if !shape(&j[c][d], self.rank[dual.obj[d]][dual.obj[c]], self.rank[c][d]) {
          return invalid("J has the wrong shape");
        }
      }
    }
    for f in 0..cat.num_morphisms() {
      for g in 0..cat.num_morphisms() {
        let (d, d2, c2, c) = (cat.src(f), cat.tgt(f), cat.src(g), cat.tgt(g));
        for m in self.elements(c, d) {
          let lhs = self.apply_j(c2, d2, &self.push(f, c2, &self.pull(g, d, &m)));
          let jm = self.apply_j(c, d, &m);
          let rhs = self.pull(dual.mor[f], dual.obj[c2], &self.push(dual.mor[g], dual.obj[d], &jm));
          if lhs != rhs {
            return invalid(format!("J is not natural at ({f},{g})"));
          }
        }
      }
    }
    for c in 0..n {
      for d in 0..n {
        let inv = cat.inverse(dual.eta[c]).unwrap();
        for m in self.elements(c, d) {
          let jj = self.apply_j(dual.obj[d], dual.obj[c], &self.apply_j(c, d, &m));
          let moved = self.pull(inv, dual.obj[dual.obj[d]], &self.push(dual.eta[d], c, &m));
          if jj != moved {
            return invalid(format!("J J differs from the eta transport at ({c},{d})"));
          }
        }
      }
    }
    Ok(())
  }

  /// The bimodule `DM` on the strictification: `DM(x, y) = M(c_x, c_y)`, with
  /// `DJ = (phi_x^{-1})_* (phi_y)^* J`.
  pub fn strictify(&self, c: &FinCat, dual: &Strictified, d: &Duality) -> Result<TableBimodule> {
    let objs = &dual.objects;
    let n = objs.len();
    let rank = (0..n).map(|x| (0..n).map(|y| self.rank[objs[x].0][objs[y].0]).collect()).collect();
    let push = dual
      .morphisms
      .iter()
      .map(|&(a, _)| (0..n).map(|x| self.push[a][objs[x].0].clone()).collect())
      .collect();
    let pull = dual
      .morphisms
      .iter()
      .map(|&(a, _)| (0..n).map(|y| self.pull[a][objs[y].0].clone()).collect())
      .collect();
    let j = self.j.as_ref().map(|_| {
      (0..n)
        .map(|x| {
          (0..n)
            .map(|y| {
              let ((cx, dx, px), (cy, dy, py)) = (objs[x], objs[y]);
              let px_inv = c.inverse(px).unwrap();
              let r = self.rank[cx][cy];
              let cols: Vec<Vec<u32>> = (0..r)
                .map(|i| {
                  let e: Vec<u32> = (0..r).map(|k| u32::from(k == i)).collect();
                  let jm = self.apply_j(cx, cy, &e);
                  self.push(px_inv, dy, &self.pull(py, d.obj[cx], &jm))
                })
                .collect();
              let rows = self.rank[dy][dx];
              (0..rows).map(|row| cols.iter().map(|col| col[row]).collect()).collect()
            })
            .collect()
        })
        .collect()
    });
    let m = TableBimodule { q: self.q, rank, push, pull, j };
    m.validate(&dual.cat, Some(&dual.duality))?;
    Ok(m)
  }
}

/// The semidirect product `C x| M`: morphisms `(f, m)` with `m` in `M(src f, tgt f)` and
/// `(f, m)(g, n) = (fg, f_* n + g^* m)`.
#[derive(Clone, Debug)]
pub struct Semidirect {
  pub cat: FinCat,
  pub parts: Vec<(usize, Vec<u32>)>,
  pub duality: Option<Duality>,
  pub offset: Vec<usize>,
}

impl Semidirect {
  pub fn morphism(&self, m: &TableBimodule, f: usize, v: &[u32]) -> usize {
    self.offset[f] + m.code(v)
  }
}

pub fn semidirect_cat(
  c: &FinCat,
  duality: Option<&Duality>,
  m: &TableBimodule,
) -> Result<Semidirect> {
  m.validate(c, duality)?;
  if let Some(d) = duality {
    if !d.is_strict(c) {
      return invalid("semidirect products need a strict duality");
    }
  }
  let mut parts = Vec::new();
  let mut offset = Vec::new();
  let mut arrows = Vec::new();
  for f in 0..c.num_morphisms() {
    offset.push(parts.len());
    for v in m.elements(c.src(f), c.tgt(f)) {
      parts.push((f, v));
      arrows.push((c.src(f), c.tgt(f)));
    }
  }
  let ids = (0..c.num_objects()).map(|x| offset[c.id(x)]).collect();
  let cat = FinCat::from_fn(c.num_objects(), arrows, ids, |g, f| {
    let ((gm, gv), (fm, fv)) = (&parts[g], &parts[f]);
    let v = m.add(&m.push(*gm, c.src(*fm), fv), &m.pull(*fm, c.tgt(*gm), gv));
    Some(offset[c.compose(*gm, *fm)] + m.code(&v))
  })?;
  let duality = match duality {
    Some(d) => {
      let mor = parts
        .iter()
        .map(|(f, v)| offset[d.mor[*f]] + m.code(&m.apply_j(c.src(*f), c.tgt(*f), v)))
        .collect();
      Some(Duality::strict(&cat, d.obj.clone(), mor)?)
    }
    None => None,
  };
  Ok(Semidirect { cat, parts, duality, offset })
}

/// The groupoid `coprod_C M` (one object per object of `C`, automorphisms `M(c, c)` under
/// addition) and the functor `e: m -> (id, m)` into the isomorphisms of `C x| M`.
pub struct CoprodEmbedding {
  pub groupoid: FinCat,
  pub duality: Option<Duality>,
  pub embed: Functor,
  pub parts: Vec<(usize, Vec<u32>)>,
}

pub fn coprod_embed(
  c: &FinCat,
  duality: Option<&Duality>,
  m: &TableBimodule,
  sd: &Semidirect,
) -> Result<CoprodEmbedding> {
  let mut parts = Vec::new();
  let mut arrows = Vec::new();
  let mut offset = Vec::new();
  for x in 0..c.num_objects() {
    offset.push(parts.len());
    for v in m.elements(x, x) {
      parts.push((x, v));
      arrows.push((x, x));
    }
  }
  let ids = offset.clone();
  let groupoid = FinCat::from_fn(c.num_objects(), arrows, ids, |g, f| {
    let (x, gv) = &parts[g];
    Some(offset[*x] + m.code(&m.add(gv, &parts[f].1)))
  })?;
  let embed = Functor::new(
    &groupoid,
    &sd.cat,
    (0..c.num_objects()).collect(),
    parts.iter().map(|(x, v)| sd.morphism(m, c.id(*x), v)).collect(),
  )?;
  if embed.mor.iter().any(|&f| !sd.cat.is_iso(f)) {
    return Err(Error::CheckFailed("e does not land in isomorphisms".into()));
  }
  let duality = match duality {
    Some(d) => {
      let mor =
        parts.iter().map(|(x, v)| offset[d.obj[*x]] + m.code(&m.apply_j(*x, *x, v))).collect();
      let dd = Duality::strict(&groupoid, d.obj.clone(), mor)?;
      if !embed.commutes_with(&dd, sd.duality.as_ref().unwrap()) {
        return Err(Error::CheckFailed("e does not commute with the dualities".into()));
      }
      Some(dd)
    }
    None => None,
  };
  Ok(CoprodEmbedding { groupoid, duality, embed, parts })
}

/// A finite category whose hom-sets are abelian groups with bilinear composition.
#[derive(Clone, Debug)]
pub struct AdditiveCat {
  pub cat: FinCat,
  sum: HashMap<(usize, usize), usize>,
  zero: Vec<Vec<usize>>,
  negative: Vec<usize>,
}

impl AdditiveCat {
  pub fn new(cat: FinCat, add: impl Fn(usize, usize) -> usize) -> Result<Self> {
    let n = cat.num_objects();
    let mut sum = HashMap::new();
    let mut zero = vec![vec![usize::MAX; n]; n];
    let mut negative = vec![usize::MAX; cat.num_morphisms()];
    for c in 0..n {
      for d in 0..n {
        let hom = cat.hom(c, d);
        for &f in hom {
          for &g in hom {
            let h = add(f, g);
            if cat.src(h) != c || cat.tgt(h) != d {
              return invalid("sum leaves the hom-set");
            }
            sum.insert((f, g), h);
          }
        }
        let z = hom.iter().copied().find(|&z| hom.iter().all(|&f| sum[&(z, f)] == f));
        let Some(z) = z else { return invalid(format!("hom({c},{d}) has no zero")) };
        zero[c][d] = z;
        for &f in hom {
          match hom.iter().copied().find(|&g| sum[&(f, g)] == z) {
            Some(g) => negative[f] = g,
            None => return invalid("hom-set is not a group"),
          }
          for &g in hom {
            if sum[&(f, g)] != sum[&(g, f)]
              || hom.iter().any(|&h| sum[&(sum[&(f, g)], h)] != sum[&(f, sum[&(g, h)])])
            {
              return invalid("hom-set is not an abelian group");
            }
          }
        }
      }
    }
    for f in 0..cat.num_morphisms() {
      for g in cat.out_of(cat.tgt(f)) {
        for &g2 in cat.hom(cat.src(g), cat.tgt(g)) {
          if cat.compose(sum[&(g, g2)], f) != sum[&(cat.compose(g, f), cat.compose(g2, f))] {
            return invalid("composition is not bilinear");
          }
        }
        for &f2 in cat.hom(cat.src(f), cat.tgt(f)) {
          if cat.compose(g, sum[&(f, f2)]) != sum[&(cat.compose(g, f), cat.compose(g, f2))] {
            return invalid("composition is not bilinear");
          }
        }
      }
    }
    Ok(Self { cat, sum, zero, negative })
  }

  pub fn add(&self, f: usize, g: usize) -> usize {
    self.sum[&(f, g)]
  }

  pub fn sub(&self, f: usize, g: usize) -> usize {
    self.sum[&(f, self.negative[g])]
  }

  pub fn zero(&self, c: usize, d: usize) -> usize {
    self.zero[c][d]
  }
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitExtensionReport {
  pub kernel_sizes: Vec<Vec<usize>>,
  pub composites_vanish: bool,
  pub f_equivalence: EquivalenceReport,
  pub inverse_formula_ok: bool,
  pub isos_only: bool,
}

impl SplitExtensionReport {
  pub fn holds(&self) -> bool {
    self.composites_vanish && self.f_equivalence.is_equivalence() && self.inverse_formula_ok
  }
}

/// For additive `p: B -> C` with section `s` and `U: p s => id`, builds `C x| ker p` and
/// `F(f, m) = s(f) + m`, and checks `F` is an equivalence with the explicit inverse
/// `f -> (U_d p(f) U_c^{-1}, f - s(U_d p(f) U_c^{-1}))` on hom-sets.
///
/// With `isos_only` the same is checked for `i(C) x| ker p -> iB`.
pub fn classify_split_extension(
  b: &AdditiveCat,
  c: &AdditiveCat,
  p: &Functor,
  s: &Functor,
  u: &[usize],
  isos_only: bool,
) -> Result<SplitExtensionReport> {
  let (bc, cc) = (&b.cat, &c.cat);
  p.validate(bc, cc)?;
  s.validate(cc, bc)?;
  let n = cc.num_objects();
  for x in 0..n {
    if cc.src(u[x]) != p.obj[s.obj[x]] || cc.tgt(u[x]) != x || !cc.is_iso(u[x]) {
      return invalid("U is not an isomorphism p s => id");
    }
  }
  let kernel: Vec<Vec<Vec<usize>>> = (0..n)
    .map(|x| {
      (0..n)
        .map(|y| {
          let z = c.zero(p.obj[s.obj[x]], p.obj[s.obj[y]]);
          bc.hom(s.obj[x], s.obj[y]).iter().copied().filter(|&f| p.mor[f] == z).collect()
        })
        .collect()
    })
    .collect();
  let composites_vanish = (0..n).all(|x| {
    (0..n).all(|y| {
      (0..n).all(|z| {
        kernel[x][y]
          .iter()
          .all(|&k| kernel[y][z].iter().all(|&k2| bc.compose(k2, k) == b.zero(s.obj[x], s.obj[z])))
      })
    })
  });
  let mut parts = Vec::new();
  let mut arrows = Vec::new();
  let mut index = HashMap::new();
  for g in 0..cc.num_morphisms() {
    if isos_only && !cc.is_iso(g) {
      continue;
    }
    let (x, y) = (cc.src(g), cc.tgt(g));
    for &k in &kernel[x][y] {
      index.insert((g, k), parts.len());
      parts.push((g, k));
      arrows.push((x, y));
    }
  }
  let ids = (0..n).map(|x| index[&(cc.id(x), b.zero(s.obj[x], s.obj[x]))]).collect();
  let semi = FinCat::from_fn(n, arrows, ids, |g, f| {
    let ((g1, k1), (f1, k2)) = (parts[g], parts[f]);
    let m = b.add(bc.compose(s.mor[g1], k2), bc.compose(k1, s.mor[f1]));
    index.get(&(cc.compose(g1, f1), m)).copied()
  })?;
  let (target, keep) =
    if isos_only { bc.core() } else { (bc.clone(), (0..bc.num_morphisms()).collect()) };
  let back: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &f)| (f, i)).collect();
  let f_mor = parts
    .iter()
    .map(|&(g, k)| {
      back
        .get(&b.add(s.mor[g], k))
        .copied()
        .ok_or_else(|| Error::CheckFailed("F(f, m) is not invertible".into()))
    })
    .collect::<Result<Vec<_>>>()?;
  let f = Functor::new(&semi, &target, s.obj.clone(), f_mor)?;
  let f_equivalence = check_equivalence(&semi, &target, &f);
  let mut inverse_formula_ok = true;
  'outer: for x in 0..n {
    for y in 0..n {
      for &h in bc.hom(s.obj[x], s.obj[y]) {
        if isos_only && !bc.is_iso(h) {
          continue;
        }
        let g = cc.compose_path(&[cc.inverse(u[x]).unwrap(), p.mor[h], u[y]]);
        let k = b.sub(h, s.mor[g]);
        match index.get(&(g, k)) {
          Some(&i) if keep[f.mor[i]] == h => {}
          _ => {
            inverse_formula_ok = false;
            break 'outer;
          }
        }
      }
    }
  }
  let kernel_sizes = kernel.iter().map(|row| row.iter().map(Vec::len).collect()).collect();
  Ok(SplitExtensionReport {
    kernel_sizes,
    composites_vanish,
    f_equivalence,
    inverse_formula_ok,
    isos_only,
  })
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::dualcat::strict::strictify;
  use crate::equivariance::FiniteGroup;

  fn groupoid_with_sign() -> (FinCat, Duality, TableBimodule) {
    let g = FiniteGroup::cyclic(2);
    let c = FinCat::group(&g);
    let d = Duality::group_inverse(&g, &c);
    let m = TableBimodule::scalar(&c, 3, |f| if f == 1 { 2 } else { 1 }, Some(2));
    (c, d, m)
  }

  #[test]
  fn scalar_bimodule_validates() {
    let (c, d, m) = groupoid_with_sign();
    m.validate(&c, Some(&d)).unwrap();
    let bad = TableBimodule::scalar(&c, 3, |f| if f == 1 { 2 } else { 1 }, Some(0));
    assert!(bad.validate(&c, Some(&d)).is_err());
  }

  #[test]
  fn semidirect_product_is_a_category_with_duality() {
    let (c, d, m) = groupoid_with_sign();
    let sd = semidirect_cat(&c, Some(&d), &m).unwrap();
    assert_eq!(sd.cat.num_morphisms(), 6);
    assert!(sd.duality.as_ref().unwrap().is_strict(&sd.cat));
    assert!(sd.cat.is_groupoid());
    let e = coprod_embed(&c, Some(&d), &m, &sd).unwrap();
    assert_eq!(e.groupoid.num_morphisms(), 3);
  }

  #[test]
  fn strictified_bimodule() {
    let c = FinCat::codiscrete(2);
    let d = Duality::codiscrete(2, vec![1, 0]).unwrap();
    let m = TableBimodule::scalar(&c, 3, |_| 1, Some(2));
    m.validate(&c, Some(&d)).unwrap();
    let dc = strictify(&c, &d).unwrap();
    let dm = m.strictify(&c, &dc, &d).unwrap();
    let sd = semidirect_cat(&dc.cat, Some(&dc.duality), &dm).unwrap();
    assert_eq!(sd.cat.num_objects(), 4);
    assert_eq!(sd.cat.num_morphisms(), 48);
  }
}
