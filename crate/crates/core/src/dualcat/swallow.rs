//! Swallowing for `N_{2k+1} i(DC x| DM)`: the map `r`, the natural isomorphism `U: id => lambda`
//! and the homotopy `H` between `(Ne) r` and the identity.
//!
//! The simplicial direction is modelled by the string categories `L_p = Fun([p], i DC)`; a `p`-level
//! element is a grid of objects `x[i][j]` (`i` along the string, `j` along `[p]`).

use serde::Serialize;

use super::cat::{Duality, FinCat};
use super::semidirect::TableBimodule;
use super::strict::{strictify, Strictified};
use crate::error::{Error, Result};

pub struct SwallowBase {
  pub base: FinCat,
  pub dual: Strictified,
  pub dm: TableBimodule,
}

impl SwallowBase {
  pub fn new(c: &FinCat, d: &Duality, m: &TableBimodule) -> Result<Self> {
    if !c.is_groupoid() {
      return Err(Error::Unsupported("swallowing is implemented for groupoids".into()));
    }
    let dual = strictify(c, d)?;
    let dm = m.strictify(c, &dual, d)?;
    Ok(Self { base: c.clone(), dual, dm })
  }

  /// The codiscrete groupoid on two objects with the swapping duality and `M = F_3`, `J = -1`.
  pub fn preset() -> Self {
    let c = FinCat::codiscrete(2);
    let d = Duality::codiscrete(2, vec![1, 0]).unwrap();
    let m = TableBimodule::scalar(&c, 3, |_| 1, Some(2));
    Self::new(&c, &d, &m).unwrap()
  }

  fn cat(&self) -> &FinCat {
    &self.dual.cat
  }

  fn parts(&self, f: usize) -> (usize, usize) {
    self.dual.morphisms[f]
  }

  fn inv(&self, f: usize) -> usize {
    self.cat().inverse(f).expect("groupoid")
  }

  fn out_degree(&self, x: usize) -> usize {
    self.cat().out_of(x).count()
  }

  /// Number of `p`-level elements of `N_{2k+1}`.
  pub fn count(&self, k: usize, p: usize) -> u128 {
    let objs = self.cat().num_objects() as u128;
    let out = (0..self.cat().num_objects()).map(|x| self.out_degree(x)).max().unwrap_or(0) as u128;
    let msize = (0..self.cat().num_objects())
      .flat_map(|x| (0..self.cat().num_objects()).map(move |y| (x, y)))
      .map(|(x, y)| self.dm.size(x, y))
      .max()
      .unwrap_or(1) as u128;
    let n = 2 * k as u32 + 1;
    objs * out.pow(p as u32) * (out * msize * out.pow(p as u32)).pow(n)
  }
}

/// A `p`-level element of `N_n i(L_p x| M_p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
  pub obj: Vec<Vec<usize>>,
  /// `hor[i - 1][j]: obj[i - 1][j] -> obj[i][j]`.
  pub hor: Vec<Vec<usize>>,
  /// `vert[i][j - 1]: obj[i][j - 1] -> obj[i][j]`.
  pub vert: Vec<Vec<usize>>,
  /// `m[i - 1][j]` lies in `DM(obj[i - 1][j], obj[i][j])`.
  pub m: Vec<Vec<Vec<u32>>>,
}

impl Grid {
  pub fn length(&self) -> usize {
    self.obj.len() - 1
  }

  pub fn level(&self) -> usize {
    self.obj[0].len() - 1
  }
}

impl SwallowBase {
  pub fn is_valid(&self, g: &Grid) -> bool {
    let c = self.cat();
    let (n, p) = (g.length(), g.level());
    for i in 0..=n {
      for j in 0..=p {
        if j > 0 {
          let v = g.vert[i][j - 1];
          if c.src(v) != g.obj[i][j - 1] || c.tgt(v) != g.obj[i][j] {
            return false;
          }
        }
        if i > 0 {
          let h = g.hor[i - 1][j];
          if c.src(h) != g.obj[i - 1][j]
            || c.tgt(h) != g.obj[i][j]
            || g.m[i - 1][j].len() != self.dm.rank[g.obj[i - 1][j]][g.obj[i][j]]
          {
            return false;
          }
        }
        if i > 0 && j > 0 {
          if c.compose(g.hor[i - 1][j], g.vert[i - 1][j - 1])
            != c.compose(g.vert[i][j - 1], g.hor[i - 1][j - 1])
          {
            return false;
          }
          let left = self.dm.pull(g.vert[i - 1][j - 1], g.obj[i][j], &g.m[i - 1][j]);
          let right = self.dm.push(g.vert[i][j - 1], g.obj[i - 1][j - 1], &g.m[i - 1][j - 1]);
          if left != right {
            return false;
          }
        }
      }
    }
    true
  }

  /// Visits every `p`-level element of `N_{2k+1}`.
  pub fn for_each(&self, k: usize, p: usize, mut visit: impl FnMut(&Grid)) {
    let n = 2 * k + 1;
    let mut g = Grid {
      obj: vec![vec![0; p + 1]; n + 1],
      hor: vec![vec![0; p + 1]; n],
      vert: vec![vec![0; p]; n + 1],
      m: vec![vec![Vec::new(); p + 1]; n],
    };
    for x in 0..self.cat().num_objects() {
      g.obj[0][0] = x;
      self.first_row(&mut g, 1, &mut visit);
    }
  }

  fn first_row(&self, g: &mut Grid, j: usize, visit: &mut impl FnMut(&Grid)) {
    if j > g.level() {
      return self.row(g, 1, 0, visit);
    }
    for v in self.cat().out_of(g.obj[0][j - 1]).collect::<Vec<_>>() {
      g.vert[0][j - 1] = v;
      g.obj[0][j] = self.cat().tgt(v);
      self.first_row(g, j + 1, visit);
    }
  }

  fn row(&self, g: &mut Grid, i: usize, j: usize, visit: &mut impl FnMut(&Grid)) {
    if i > g.length() {
      return visit(g);
    }
    if j > g.level() {
      return self.row(g, i + 1, 0, visit);
    }
    let c = self.cat();
    for h in c.out_of(g.obj[i - 1][j]).collect::<Vec<_>>() {
      g.hor[i - 1][j] = h;
      g.obj[i][j] = c.tgt(h);
      if j == 0 {
        for v in self.dm.elements(g.obj[i - 1][0], g.obj[i][0]).collect::<Vec<_>>() {
          g.m[i - 1][0] = v;
          self.row(g, i, 1, visit);
        }
      } else {
        let v = c.compose_path(&[self.inv(g.hor[i - 1][j - 1]), g.vert[i - 1][j - 1], h]);
        g.vert[i][j - 1] = v;
        let moved = self.dm.push(v, g.obj[i - 1][j - 1], &g.m[i - 1][j - 1]);
        g.m[i - 1][j] = self.dm.pull(self.inv(g.vert[i - 1][j - 1]), g.obj[i][j], &moved);
        self.row(g, i, j + 1, visit);
      }
    }
  }

  fn compose_range(&self, g: &Grid, j: usize, from: usize, to: usize) -> usize {
    // hor[to - 1] ... hor[from], a map obj[from][j] -> obj[to][j]
    let c = self.cat();
    (from..to).fold(c.id(g.obj[from][j]), |acc, i| c.compose(g.hor[i][j], acc))
  }

  /// The diagonal object of the middle square at column `j`.
  fn diagonal(&self, g: &Grid, k: usize, j: usize) -> Result<usize> {
    let (ck, _, phik) = self.dual.objects[g.obj[k][j]];
    let (_, dk1, _) = self.dual.objects[g.obj[k + 1][j]];
    let (_, b) = self.parts(g.hor[k][j]);
    self
      .dual
      .object(ck, dk1, self.base.compose(phik, b))
      .ok_or_else(|| Error::CheckFailed("diagonal is not an object".into()))
  }

  /// `U` at column `j`: the component `obj[i][j] -> diagonal`.
  fn unit(&self, g: &Grid, k: usize, i: usize, j: usize, diag: usize) -> Result<usize> {
    let base = &self.base;
    let a = if i <= k {
      self.parts(self.compose_range(g, j, i, k)).0
    } else {
      base.inverse(self.parts(self.compose_range(g, j, k, i)).0).unwrap()
    };
    let b = if i <= k + 1 {
      self.parts(self.compose_range(g, j, i, k + 1)).1
    } else {
      base.inverse(self.parts(self.compose_range(g, j, k + 1, i)).1).unwrap()
    };
    self
      .dual
      .morphism(g.obj[i][j], diag, a, b)
      .ok_or_else(|| Error::CheckFailed("U has an incompatible component".into()))
  }

  /// `f^i_sigma` at a column with `sigma = 1`, as a morphism `obj[k][j] -> obj[i][j]`.
  fn transport(&self, g: &Grid, k: usize, i: usize, j: usize) -> usize {
    if i <= k {
      self.inv(self.compose_range(g, j, i, k))
    } else {
      self.compose_range(g, j, k, i)
    }
  }

  /// `H(g, tau)` for any `tau: [p] -> {0, 1}`.
  pub fn homotopy(&self, g: &Grid, tau: &[bool]) -> Result<Grid> {
    let (n, p) = (g.length(), g.level());
    let k = (n - 1) / 2;
    let c = self.cat();
    let mut out = g.clone();
    let mut diag = vec![0; p + 1];
    for j in 0..=p {
      if !tau[j] {
        continue;
      }
      diag[j] = self.diagonal(g, k, j)?;
      for i in 0..=n {
        out.obj[i][j] = diag[j];
      }
      for i in 1..=n {
        out.hor[i - 1][j] = c.id(diag[j]);
        let f_prev = self.transport(g, k, i - 1, j);
        let f_inv = self.inv(self.transport(g, k, i, j));
        let moved = self.dm.push(f_inv, g.obj[i - 1][j], &g.m[i - 1][j]);
        out.m[i - 1][j] = self.dm.pull(f_prev, g.obj[k][j], &moved);
      }
    }
    for j in 1..=p {
      for i in 0..=n {
        let mut v = g.vert[i][j - 1];
        if tau[j - 1] {
          v = c.compose(v, self.inv(self.unit(g, k, i, j - 1, diag[j - 1])?));
        }
        if tau[j] {
          v = c.compose(self.unit(g, k, i, j, diag[j])?, v);
        }
        out.vert[i][j - 1] = v;
      }
    }
    Ok(out)
  }

  /// `(Ne) r`: the constant string at the diagonal with the transported bimodule entries.
  pub fn swallow(&self, g: &Grid) -> Result<(Vec<usize>, Vec<usize>, Vec<Vec<Vec<u32>>>)> {
    let (n, p) = (g.length(), g.level());
    let k = (n - 1) / 2;
    let diag = (0..=p).map(|j| self.diagonal(g, k, j)).collect::<Result<Vec<_>>>()?;
    let mut vert = Vec::new();
    for j in 1..=p {
      let (a, _) = self.parts(g.vert[k][j - 1]);
      let (_, b) = self.parts(g.vert[k + 1][j - 1]);
      vert.push(
        self
          .dual
          .morphism(diag[j - 1], diag[j], a, b)
          .ok_or_else(|| Error::CheckFailed("diagonal is not a string".into()))?,
      );
    }
    let mut entries = vec![vec![Vec::new(); p + 1]; n];
    for i in 1..=n {
      for j in 0..=p {
        let m = &g.m[i - 1][j];
        entries[i - 1][j] = if i <= k {
          let pushed = self.dm.push(self.compose_range(g, j, i, k), g.obj[i - 1][j], m);
          self.dm.pull(self.inv(self.compose_range(g, j, i - 1, k)), g.obj[k][j], &pushed)
        } else {
          let pushed = self.dm.push(self.inv(self.compose_range(g, j, k, i)), g.obj[i - 1][j], m);
          self.dm.pull(self.compose_range(g, j, k, i - 1), g.obj[k][j], &pushed)
        };
      }
    }
    Ok((diag, vert, entries))
  }

  /// `Ne` applied to an element of the coproduct groupoid at level `p`.
  pub fn embed(&self, diag: &[usize], vert: &[usize], entries: &[Vec<Vec<u32>>]) -> Grid {
    let n = entries.len();
    let c = self.cat();
    Grid {
      obj: vec![diag.to_vec(); n + 1],
      hor: vec![diag.iter().map(|&x| c.id(x)).collect(); n],
      vert: vec![vert.to_vec(); n + 1],
      m: entries.to_vec(),
    }
  }

  pub fn face(&self, g: &Grid, i: usize) -> Grid {
    let c = self.cat();
    let p = g.level();
    let mut out = g.clone();
    for row in 0..out.obj.len() {
      out.obj[row].remove(i);
    }
    for row in 0..out.hor.len() {
      out.hor[row].remove(i);
      out.m[row].remove(i);
    }
    for row in 0..out.vert.len() {
      let v = &mut out.vert[row];
      if i == 0 {
        v.remove(0);
      } else if i == p {
        v.pop();
      } else {
        let after = v.remove(i);
        v[i - 1] = c.compose(after, v[i - 1]);
      }
    }
    out
  }

  pub fn degeneracy(&self, g: &Grid, i: usize) -> Grid {
    let c = self.cat();
    let mut out = g.clone();
    for row in 0..out.obj.len() {
      let x = out.obj[row][i];
      out.obj[row].insert(i, x);
      out.vert[row].insert(i, c.id(x));
    }
    for row in 0..out.hor.len() {
      let (h, m) = (out.hor[row][i], out.m[row][i].clone());
      out.hor[row].insert(i, h);
      out.m[row].insert(i, m);
    }
    out
  }

  /// Reversal of the string and of `[p]`, with `D` on objects and morphisms and `J` on entries.
  pub fn dual_grid(&self, g: &Grid) -> Grid {
    let d = &self.dual.duality;
    let (n, p) = (g.length(), g.level());
    Grid {
      obj: (0..=n).map(|i| (0..=p).map(|j| d.obj[g.obj[n - i][p - j]]).collect()).collect(),
      hor: (1..=n).map(|i| (0..=p).map(|j| d.mor[g.hor[n - i][p - j]]).collect()).collect(),
      vert: (0..=n).map(|i| (1..=p).map(|j| d.mor[g.vert[n - i][p - j]]).collect()).collect(),
      m: (1..=n)
        .map(|i| {
          (0..=p)
            .map(|j| {
              self.dm.apply_j(g.obj[n - i][p - j], g.obj[n - i + 1][p - j], &g.m[n - i][p - j])
            })
            .collect()
        })
        .collect(),
    }
  }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SwallowCase {
  pub k: usize,
  pub p: usize,
  pub elements: u64,
  pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwallowReport {
  pub cases: Vec<SwallowCase>,
  pub skipped: Vec<(usize, usize, String)>,
}

impl SwallowReport {
  pub fn holds(&self) -> bool {
    !self.cases.is_empty() && self.cases.iter().all(|c| c.failures.is_empty())
  }

  pub fn covered_k(&self) -> Vec<usize> {
    let mut ks: Vec<usize> = self.cases.iter().map(|c| c.k).collect();
    ks.dedup();
    ks
  }
}

fn monotone(p: usize) -> Vec<Vec<bool>> {
  (0..=p + 1).map(|a| (0..=p).map(|j| j >= a).collect()).collect()
}

impl SwallowBase {
  fn check_element(&self, g: &Grid, failures: &mut Vec<String>) -> Result<()> {
    let p = g.level();
    let mut fail = |what: &str| {
      if failures.len() < 10 {
        failures.push(format!("{what} at {g:?}"));
      }
    };
    if !self.is_valid(g) {
      fail("enumerated element is invalid");
      return Ok(());
    }
    let (diag, vert, entries) = self.swallow(g)?;
    let ner = self.embed(&diag, &vert, &entries);
    let zero = vec![false; p + 1];
    let one = vec![true; p + 1];
    if self.homotopy(g, &zero)? != *g {
      fail("H(x, 0) != x");
    }
    if self.homotopy(g, &one)? != ner {
      fail("H(x, 1) != (Ne) r x");
    }
    let dg = self.dual_grid(g);
    let (ddiag, dvert, dentries) = self.swallow(&dg)?;
    if self.embed(&ddiag, &dvert, &dentries) != self.dual_grid(&ner) {
      fail("r D != D r");
    }
    for sigma in monotone(p) {
      let h = self.homotopy(g, &sigma)?;
      if !self.is_valid(&h) {
        fail("H(x, sigma) is not a valid element");
        continue;
      }
      let flipped: Vec<bool> = sigma.iter().rev().copied().collect();
      if self.dual_grid(&h) != self.homotopy(&dg, &flipped)? {
        fail("D H(x, sigma) != H(Dx, sigma omega)");
      }
      for i in 0..=p {
        if p > 0 {
          let mut s = sigma.clone();
          s.remove(i);
          if self.face(&h, i) != self.homotopy(&self.face(g, i), &s)? {
            fail("d_i H != H d_i");
          }
        }
        let mut s = sigma.clone();
        s.insert(i, sigma[i]);
        if self.degeneracy(&h, i) != self.homotopy(&self.degeneracy(g, i), &s)? {
          fail("s_i H != H s_i");
        }
      }
    }
    Ok(())
  }

  /// Checks `r (Ne) = id` on the coproduct side at level `p` for strings of length `n`.
  fn check_retraction(&self, k: usize, p: usize, failures: &mut Vec<String>) -> Result<u64> {
    let n = 2 * k + 1;
    let mut count = 0;
    let mut objects = Vec::new();
    self.for_each(0, p, |g| {
      if g.hor[0].iter().all(|&h| self.cat().is_identity(h))
        && g.m[0].iter().all(|v| v.iter().all(|&x| x == 0))
      {
        objects.push((g.obj[0].clone(), g.vert[0].clone()));
      }
    });
    for (diag, vert) in objects {
      let sizes = self.dm.size(diag[0], diag[0]);
      for code in 0..sizes.pow(n as u32) {
        let mut entries = vec![vec![Vec::new(); p + 1]; n];
        let mut rest = code;
        for row in entries.iter_mut() {
          let v0: Vec<u32> = self.dm.elements(diag[0], diag[0]).nth(rest % sizes).unwrap();
          rest /= sizes;
          row[0] = v0;
          for j in 1..=p {
            let moved = self.dm.push(vert[j - 1], diag[j - 1], &row[j - 1]);
            row[j] = self.dm.pull(self.inv(vert[j - 1]), diag[j], &moved);
          }
        }
        let g = self.embed(&diag, &vert, &entries);
        if !self.is_valid(&g) {
          failures.push(format!("embedded element invalid: {g:?}"));
          continue;
        }
        let (d2, v2, e2) = self.swallow(&g)?;
        if d2 != diag || v2 != vert || e2 != entries {
          failures.push(format!("r(Ne) != id at {g:?}"));
        }
        count += 1;
      }
    }
    Ok(count)
  }

  /// Exhaustive verification for all `(k, p)` with `k <= max_k`, `p <= max_p`, and at most `bound` elements.
  pub fn verify(&self, max_k: usize, max_p: usize, bound: u128) -> Result<SwallowReport> {
    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    for k in 0..=max_k {
      for p in 0..=max_p {
        let count = self.count(k, p);
        if count > bound {
          skipped.push((k, p, format!("{count} elements exceed the enumeration bound {bound}")));
          continue;
        }
        let mut failures = Vec::new();
        let mut elements = 0u64;
        let mut err = None;
        self.for_each(k, p, |g| {
          elements += 1;
          if err.is_none() {
            if let Err(e) = self.check_element(g, &mut failures) {
              err = Some(e);
            }
          }
        });
        if let Some(e) = err {
          return Err(e);
        }
        self.check_retraction(k, p, &mut failures)?;
        cases.push(SwallowCase { k, p, elements, failures });
      }
    }
    Ok(SwallowReport { cases, skipped })
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn counts_match_enumeration() {
    let b = SwallowBase::preset();
    for (k, p) in [(0, 0), (0, 1), (1, 0)] {
      let mut n = 0u128;
      b.for_each(k, p, |g| {
        assert!(b.is_valid(g));
        n += 1;
      });
      assert_eq!(n, b.count(k, p));
    }
  }

  #[test]
  fn small_cases_hold() {
    let b = SwallowBase::preset();
    let rep = b.verify(1, 1, 20_000).unwrap();
    assert!(rep.holds(), "{:?}", rep.cases);
  }

  #[test]
  fn the_unit_conjugation_is_needed() {
    let b = SwallowBase::preset();
    let mut broken = 0;
    b.for_each(1, 1, |g| {
      if broken > 0 {
        return;
      }
      let h = b.homotopy(g, &[false, true]).unwrap();
      assert!(b.is_valid(&h));
      let mut bad = h.clone();
      bad.vert = g.vert.clone();
      if !b.is_valid(&bad) {
        broken += 1;
      }
    });
    assert_eq!(broken, 1);
  }
}
