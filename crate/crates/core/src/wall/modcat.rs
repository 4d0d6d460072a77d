use serde::Serialize;

use super::ring::{decode, WallBimodule, WallRing};
use crate::{
  dualcat::{AdditiveCat, Duality, FinCat, Functor, TableBimodule},
  error::{invalid, Error, Result},
};

const MAX_MORPHISMS: usize = 6000;

/// The skeleton of free modules `A^0..A^r` with matrices as morphisms. A morphism `A^k -> A^l`
/// is an `l x k` matrix acting on columns, entries row-major.
#[derive(Clone, Debug)]
pub struct ModCat {
  pub ring: WallRing,
  pub max_rank: usize,
  pub cat: FinCat,
  offset: Vec<Vec<usize>>,
  mats: Vec<Vec<usize>>,
}

fn mat_mul(
  r: &WallRing,
  g: &[usize],
  f: &[usize],
  rows: usize,
  inner: usize,
  cols: usize,
) -> Vec<usize> {
  let mut out = vec![r.zero(); rows * cols];
  for i in 0..rows {
    for j in 0..cols {
      out[i * cols + j] =
        (0..inner).fold(r.zero(), |acc, t| r.add(acc, r.mul(g[i * inner + t], f[t * cols + j])));
    }
  }
  out
}

impl ModCat {
  pub fn new(ring: &WallRing, max_rank: usize) -> Result<Self> {
    let n = ring.size();
    let count: usize =
      (0..=max_rank).flat_map(|k| (0..=max_rank).map(move |l| n.pow((k * l) as u32))).sum();
    if count > MAX_MORPHISMS {
      return Err(Error::Unsupported(format!(
        "{count} matrices at rank {max_rank} over {}",
        ring.name
      )));
    }
    let mut offset = vec![vec![0; max_rank + 1]; max_rank + 1];
    let mut mats = Vec::new();
    let mut arrows = Vec::new();
    for k in 0..=max_rank {
      for l in 0..=max_rank {
        offset[k][l] = mats.len();
        for code in 0..n.pow((k * l) as u32) {
          mats.push((0..k * l).map(|i| code / n.pow(i as u32) % n).collect::<Vec<_>>());
          arrows.push((k, l));
        }
      }
    }
    let code = |m: &[usize]| m.iter().rev().fold(0, |acc, &x| acc * n + x);
    let ids = (0..=max_rank)
      .map(|k| {
        offset[k][k]
          + code(
            &(0..k * k).map(|i| if i % (k + 1) == 0 { ring.one() } else { 0 }).collect::<Vec<_>>(),
          )
      })
      .collect();
    let cat = FinCat::from_fn(max_rank + 1, arrows.clone(), ids, |g, f| {
      let ((k, l), (_, m)) = (arrows[f], arrows[g]);
      Some(offset[k][m] + code(&mat_mul(ring, &mats[g], &mats[f], m, l, k)))
    })?;
    Ok(Self { ring: ring.clone(), max_rank, cat, offset, mats })
  }

  pub fn matrix(&self, f: usize) -> &[usize] {
    &self.mats[f]
  }

  pub fn morphism(&self, k: usize, l: usize, entries: &[usize]) -> usize {
    let n = self.ring.size();
    self.offset[k][l] + entries.iter().rev().fold(0, |acc, &x| acc * n + x)
  }

  /// `D(F) = w^{-1}(F)^T` with `eta = w^{-1}(eps) I`.
  pub fn duality(&self) -> Result<Duality> {
    let r = &self.ring;
    let mor = (0..self.cat.num_morphisms())
      .map(|f| {
        let (k, l) = (self.cat.src(f), self.cat.tgt(f));
        let m = &self.mats[f];
        let t: Vec<usize> = (0..k * l).map(|idx| r.w_inv(m[(idx % l) * k + idx / l])).collect();
        self.morphism(l, k, &t)
      })
      .collect();
    let e = r.w_inv(r.eps());
    let eta = (0..=self.max_rank)
      .map(|k| {
        self.morphism(
          k,
          k,
          &(0..k * k).map(|i| if i % (k + 1) == 0 { e } else { 0 }).collect::<Vec<_>>(),
        )
      })
      .collect();
    Duality::new(&self.cat, (0..=self.max_rank).collect(), mor, eta)
  }

  pub fn additive(&self) -> Result<AdditiveCat> {
    AdditiveCat::new(self.cat.clone(), |f, g| {
      let (k, l) = (self.cat.src(f), self.cat.tgt(f));
      let sum: Vec<usize> =
        self.mats[f].iter().zip(&self.mats[g]).map(|(&a, &b)| self.ring.add(a, b)).collect();
      self.morphism(k, l, &sum)
    })
  }

  /// The functor induced by a unital ring map `phi: A -> B` on entries.
  pub fn induced(&self, target: &ModCat, phi: impl Fn(usize) -> usize) -> Result<Functor> {
    if target.max_rank != self.max_rank {
      return invalid("skeleta of different ranks");
    }
    let mor = (0..self.cat.num_morphisms())
      .map(|f| {
        let entries: Vec<usize> = self.mats[f].iter().map(|&a| phi(a)).collect();
        target.morphism(self.cat.src(f), self.cat.tgt(f), &entries)
      })
      .collect();
    Functor::new(&self.cat, &target.cat, (0..=self.max_rank).collect(), mor)
  }
}

/// The matrix of the `Z/q`-linear map `x -> op(x)` on `(Z/q)^dim` in the coordinate basis.
fn linear(q: u32, dim: usize, op: impl Fn(usize) -> usize) -> Vec<Vec<u32>> {
  let cols: Vec<Vec<u32>> =
    (0..dim).map(|t| decode(q, dim, op((q as usize).pow(t as u32)))).collect();
  (0..dim).map(|row| cols.iter().map(|c| c[row]).collect()).collect()
}

type Block<'a> = Vec<(usize, &'a Vec<Vec<u32>>)>;

/// A block matrix over `Z/q` with `dm x dm` blocks, target block `t` summing `blocks(t)`.
fn assemble<'a>(
  q: u32,
  dm: usize,
  rows: usize,
  cols: usize,
  blocks: impl Fn(usize) -> Block<'a>,
) -> Vec<Vec<u32>> {
  let mut out = vec![vec![0u32; cols * dm]; rows * dm];
  for target in 0..rows {
    for (src, mat) in blocks(target) {
      for a in 0..dm {
        for b in 0..dm {
          out[target * dm + a][src * dm + b] = (out[target * dm + a][src * dm + b] + mat[a][b]) % q;
        }
      }
    }
  }
  out
}

/// `H^M(A^k, A^l) = M^{l x k}` on the skeleton, with `g_* X = gX`, `f^* X = Xf` and
/// `J(X)_{ji} = h^{-1}(X_{ij})`.
pub fn hm_bimodule(mc: &ModCat, m: &WallBimodule) -> Result<TableBimodule> {
  let (r, q, dm) = (&mc.ring, mc.ring.q, m.dim);
  let n = mc.max_rank + 1;
  let cat = &mc.cat;
  let left: Vec<_> = (0..r.size()).map(|a| linear(q, dm, |x| m.left(a, x))).collect();
  let right: Vec<_> = (0..r.size()).map(|a| linear(q, dm, |x| m.right(x, a))).collect();
  let h_inv = linear(q, dm, |x| m.h_inv(x));
  let rank: Vec<Vec<usize>> = (0..n).map(|k| (0..n).map(|l| k * l * dm).collect()).collect();
  let push = (0..cat.num_morphisms())
    .map(|g| {
      let (l, l2) = (cat.src(g), cat.tgt(g));
      let gm = mc.matrix(g);
      (0..n)
        .map(|k| {
          assemble(q, dm, l2 * k, l * k, |t| {
            let (i, j) = (t / k, t % k);
            (0..l).map(|s| (s * k + j, &left[gm[i * l + s]])).collect()
          })
        })
        .collect()
    })
    .collect();
  let pull = (0..cat.num_morphisms())
    .map(|f| {
      let (k2, k) = (cat.src(f), cat.tgt(f));
      let fm = mc.matrix(f);
      (0..n)
        .map(|l| {
          assemble(q, dm, l * k2, l * k, |t| {
            let (i, j) = (t / k2, t % k2);
            (0..k).map(|s| (i * k + s, &right[fm[s * k2 + j]])).collect()
          })
        })
        .collect()
    })
    .collect();
  let j = (0..n)
    .map(|k| {
      (0..n)
        .map(|l| {
          assemble(q, dm, k * l, l * k, |t| {
            let (jj, i) = (t / l, t % l);
            vec![(i * k + jj, &h_inv)]
          })
        })
        .collect()
    })
    .collect();
  let hm = TableBimodule { q, rank, push, pull, j: Some(j) };
  hm.validate(cat, Some(&mc.duality()?))?;
  Ok(hm)
}

/// Checks for the split square-zero extension `P_{A x| M} -> P_A` on the skeleta.
#[derive(Clone, Debug, Serialize)]
pub struct KernelComparison {
  pub bijective: bool,
  pub push_matches: bool,
  pub pull_matches: bool,
  pub j_matches: bool,
}

impl KernelComparison {
  pub fn holds(&self) -> bool {
    self.bijective && self.push_matches && self.pull_matches && self.j_matches
  }
}

/// The extension data for `A x| M`: both skeleta, `p`, `s` and the comparison of `ker p`
/// with `H^M` under `X -> (0, X)`.
pub struct SplitSquareZero {
  pub base: ModCat,
  pub total: ModCat,
  pub p: Functor,
  pub s: Functor,
  pub hm: TableBimodule,
  pub comparison: KernelComparison,
  m_dim: usize,
}

impl SplitSquareZero {
  /// `s(a) + (0, v)` for a base matrix `a` and `v` in `H^M` of the same shape.
  pub fn lift(&self, a: usize, v: &[u32]) -> usize {
    let (k, l) = (self.base.cat.src(a), self.base.cat.tgt(a));
    let (n, q, d) = (self.base.ring.size(), self.base.ring.q as usize, self.m_dim);
    let am = self.base.matrix(a);
    let entries: Vec<usize> = (0..k * l)
      .map(|e| {
        am[e] + n * v[e * d..(e + 1) * d].iter().rev().fold(0, |acc, &c| acc * q + c as usize)
      })
      .collect();
    self.total.morphism(k, l, &entries)
  }
}

pub fn split_square_zero(
  ring: &WallRing,
  m: &WallBimodule,
  max_rank: usize,
) -> Result<SplitSquareZero> {
  let total_ring = super::ring::semidirect_ring(ring, m)?;
  let base = ModCat::new(ring, max_rank)?;
  let total = ModCat::new(&total_ring, max_rank)?;
  let n = ring.size();
  let p = total.induced(&base, |x| x % n)?;
  let s = base.induced(&total, |a| a)?;
  let hm = hm_bimodule(&base, m)?;
  let db = total.duality()?;
  let iota = |k: usize, l: usize, v: &[u32]| {
    let entries: Vec<usize> = (0..k * l)
      .map(|e| {
        n * v[e * m.dim..(e + 1) * m.dim]
          .iter()
          .rev()
          .fold(0, |acc, &c| acc * ring.q as usize + c as usize)
      })
      .collect();
    total.morphism(k, l, &entries)
  };
  let cat = &base.cat;
  let mut bijective = true;
  let (mut push_matches, mut pull_matches, mut j_matches) = (true, true, true);
  for k in 0..=max_rank {
    for l in 0..=max_rank {
      let images: std::collections::HashSet<usize> =
        hm.elements(k, l).map(|v| iota(k, l, &v)).collect();
      let kernel = total
        .cat
        .hom(k, l)
        .iter()
        .filter(|&&f| p.mor[f] == base.morphism(k, l, &vec![0; k * l]))
        .count();
      bijective &= images.len() == hm.size(k, l) && kernel == images.len();
      for v in hm.elements(k, l) {
        let x = iota(k, l, &v);
        if total.cat.tgt(db.mor[x]) != k || db.mor[x] != iota(l, k, &hm.apply_j(k, l, &v)) {
          j_matches = false;
        }
        for g in cat.out_of(l) {
          if total.cat.compose(s.mor[g], x) != iota(k, cat.tgt(g), &hm.push(g, k, &v)) {
            push_matches = false;
          }
        }
        for &f in (0..=max_rank).flat_map(|k2| cat.hom(k2, k)) {
          if total.cat.compose(x, s.mor[f]) != iota(cat.src(f), l, &hm.pull(f, l, &v)) {
            pull_matches = false;
          }
        }
      }
    }
  }
  let comparison = KernelComparison { bijective, push_matches, pull_matches, j_matches };
  Ok(SplitSquareZero { base, total, p, s, hm, comparison, m_dim: m.dim })
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::dualcat::classify_split_extension;

  #[test]
  fn skeleton_dualities_validate() {
    for (name, r) in [("F2", 2), ("F3", 2), ("Z4", 2), ("M2F2", 1)] {
      let ring = WallRing::preset(name).unwrap();
      let mc = ModCat::new(&ring, r).unwrap();
      mc.duality().unwrap();
    }
  }

  #[test]
  fn incoherent_unit_breaks_the_duality() {
    let mul = (0..25).map(|ab| (ab / 5) * (ab % 5) % 5).collect();
    let ring = WallRing::new("F5(2)", 5, 1, mul, (0..5).collect(), 2).unwrap();
    let mc = ModCat::new(&ring, 1).unwrap();
    assert!(mc.duality().is_err());
  }

  #[test]
  fn hm_is_a_bimodule_with_duality() {
    for (name, r) in [("F3", 2), ("Z4", 1), ("M2F2", 1)] {
      let ring = WallRing::preset(name).unwrap();
      hm_bimodule(&ModCat::new(&ring, r).unwrap(), &WallBimodule::regular(&ring)).unwrap();
    }
  }

  #[test]
  fn square_zero_extension_classified() {
    let f2 = WallRing::prime_field(2);
    let sq = split_square_zero(&f2, &WallBimodule::regular(&f2), 2).unwrap();
    assert!(sq.comparison.holds(), "{:?}", sq.comparison);
    let (b, c) = (sq.total.additive().unwrap(), sq.base.additive().unwrap());
    let u: Vec<usize> = (0..=2).map(|k| sq.base.cat.id(k)).collect();
    for isos_only in [false, true] {
      let rep = classify_split_extension(&b, &c, &sq.p, &sq.s, &u, isos_only).unwrap();
      assert!(rep.holds(), "{rep:?}");
      assert_eq!(rep.kernel_sizes[2][2], 16);
    }
  }
}
