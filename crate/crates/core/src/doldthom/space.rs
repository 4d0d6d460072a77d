use std::{
  collections::{BTreeMap, HashMap},
  sync::Arc,
};

use super::coeff::{Elem, GAbelianGroup};
use crate::{
  equivariance::FiniteGSet,
  error::{invalid, Error, Result},
  sset::{ops, wedge, Simplex, SimplicialGSet, SimplicialMap},
};

/// A finitely supported labelling of simplices, basepoint excluded.
pub type Chain = BTreeMap<usize, Elem>;

/// `M(X)` levelwise through degree `top`: level `n` is `M` tensored with the non-base `n`-simplices.
#[derive(Clone, Debug)]
pub struct DoldThom {
  pub coeff: Arc<GAbelianGroup>,
  pub space: Arc<SimplicialGSet>,
  pub top: usize,
  basis: Vec<Vec<Simplex>>,
  index: Vec<HashMap<Simplex, usize>>,
}

impl DoldThom {
  pub fn new(coeff: &Arc<GAbelianGroup>, space: &Arc<SimplicialGSet>, top: usize) -> Result<Self> {
    if coeff.group() != space.group() {
      return Err(Error::MixedGroups);
    }
    if top > space.truncation() {
      return invalid(format!("degree {top} exceeds the truncation {}", space.truncation()));
    }
    let basis: Vec<Vec<Simplex>> = (0..=top)
      .map(|n| space.simplices(n).into_iter().filter(|s| !s.is_basepoint()).collect())
      .collect();
    let index =
      basis.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
    Ok(Self { coeff: coeff.clone(), space: space.clone(), top, basis, index })
  }

  pub fn rank(&self, n: usize) -> usize {
    self.basis[n].len()
  }

  pub fn basis(&self, n: usize) -> &[Simplex] {
    &self.basis[n]
  }

  pub fn index_of(&self, s: &Simplex) -> Option<usize> {
    self.index[s.level()].get(s).copied()
  }

  pub fn generator(&self, b: usize, m: &Elem) -> Chain {
    let mut c = Chain::new();
    if !self.coeff.is_zero(m) {
      c.insert(b, self.coeff.reduce(m.clone()));
    }
    c
  }

  fn accumulate(&self, out: &mut Chain, s: &Simplex, m: &Elem) {
    if s.is_basepoint() {
      return;
    }
    let i = self.index_of(s).expect("simplex in range");
    let v = match out.get(&i) {
      Some(x) => self.coeff.add(x, m),
      None => m.clone(),
    };
    if self.coeff.is_zero(&v) {
      out.remove(&i);
    } else {
      out.insert(i, v);
    }
  }

  /// `theta^*` for a monotone map `theta: [k] -> [n]`.
  pub fn apply(&self, theta: &[u8], n: usize, c: &Chain) -> Chain {
    let mut out = Chain::new();
    for (&b, m) in c {
      let s = self.basis[n][b].clone();
      let t = self.space.apply(theta, &s);
      self.accumulate(&mut out, &t, m);
    }
    out
  }

  pub fn face(&self, i: usize, n: usize, c: &Chain) -> Chain {
    self.apply(&ops::coface(n, i), n, c)
  }

  pub fn degeneracy(&self, i: usize, n: usize, c: &Chain) -> Chain {
    self.apply(&ops::codegeneracy(n, i), n, c)
  }

  /// The diagonal action `g(m x) = (g m)(g x)`.
  pub fn act(&self, g: usize, n: usize, c: &Chain) -> Chain {
    let mut out = Chain::new();
    for (&b, m) in c {
      let t = self.space.act(g, &self.basis[n][b]);
      self.accumulate(&mut out, &t, &self.coeff.act(g, m));
    }
    out
  }

  /// The transfer `f_*({m_x})_y = sum over f(x) = y of m_x`.
  pub fn push(&self, f: &SimplicialMap, target: &DoldThom, n: usize, c: &Chain) -> Chain {
    let mut out = Chain::new();
    for (&b, m) in c {
      target.accumulate(&mut out, &f.apply(&self.basis[n][b]), m);
    }
    out
  }
}

/// `prod_J M(X)` with `(g m)_j = g m_{g^{-1} j}`.
#[derive(Clone, Debug)]
pub struct IndexedProduct {
  pub factor: DoldThom,
  pub j: FiniteGSet,
}

impl IndexedProduct {
  pub fn face(&self, i: usize, n: usize, c: &[Chain]) -> Vec<Chain> {
    c.iter().map(|x| self.factor.face(i, n, x)).collect()
  }

  pub fn degeneracy(&self, i: usize, n: usize, c: &[Chain]) -> Vec<Chain> {
    c.iter().map(|x| self.factor.degeneracy(i, n, x)).collect()
  }

  pub fn act(&self, g: usize, n: usize, c: &[Chain]) -> Vec<Chain> {
    let mut out = vec![Chain::new(); c.len()];
    for (j, x) in c.iter().enumerate() {
      out[self.j.act(g, j)] = self.factor.act(g, n, x);
    }
    out
  }
}

/// Outcome of a levelwise isomorphism check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
  pub levels: usize,
  pub generators: usize,
  pub checks: usize,
  pub counterexample: Option<String>,
}

impl IsoReport {
  pub fn passed(&self) -> bool {
    self.counterexample.is_none()
  }
}

/// Checks that `M(wedge_J X) -> prod_J M(X)`, induced by the projections, is an isomorphism
/// of simplicial G-abelian groups through degree `top`.
pub fn verify_wedge_iso(
  coeff: &Arc<GAbelianGroup>,
  x: &Arc<SimplicialGSet>,
  j: &FiniteGSet,
  top: usize,
) -> Result<IsoReport> {
  if j.is_empty() {
    return invalid("empty index set");
  }
  let w = wedge(&vec![x.clone(); j.len()], Some(j))?;
  let top = top.min(w.space.truncation()).min(x.truncation());
  let dw = DoldThom::new(coeff, &w.space, top)?;
  let dx = DoldThom::new(coeff, x, top)?;
  let prod = IndexedProduct { factor: dx.clone(), j: j.clone() };
  let projections: Vec<SimplicialMap> = (0..j.len())
    .map(|k| {
      SimplicialMap::from_fn(&w.space, x, |c| match w.origin[c.dim][c.idx] {
        Some((i, cell)) if i == k => Simplex::nondegenerate(cell),
        _ => Simplex::basepoint(c.dim),
      })
    })
    .collect();
  let compare = |n: usize, c: &Chain| -> Vec<Chain> {
    projections.iter().map(|p| dw.push(p, &dx, n, c)).collect()
  };
  let labels: Vec<Elem> = match coeff.elements() {
    Some(all) => all.into_iter().filter(|m| !coeff.is_zero(m)).collect(),
    None => vec![vec![1; coeff.rank()], vec![-2; coeff.rank()]],
  };
  let mut report = IsoReport { levels: top + 1, generators: 0, checks: 0, counterexample: None };
  let fail =
    |n: usize, s: &Simplex, what: &str| Some(format!("{what} fails at level {n} on {s:?}"));
  for n in 0..=top {
    let mut hit = vec![vec![false; dx.rank(n)]; j.len()];
    for b in 0..dw.rank(n) {
      report.generators += 1;
      let s = &dw.basis(n)[b];
      let unit = &labels[0];
      let image = compare(n, &dw.generator(b, unit));
      let support: Vec<(usize, usize, &Elem)> = image
        .iter()
        .enumerate()
        .flat_map(|(k, c)| c.iter().map(move |(&i, m)| (k, i, m)))
        .collect();
      if support.len() != 1 || support[0].2 != unit {
        report.counterexample = fail(n, s, "generator correspondence");
        return Ok(report);
      }
      let (k, i, _) = support[0];
      if hit[k][i] {
        report.counterexample = fail(n, s, "injectivity");
        return Ok(report);
      }
      hit[k][i] = true;
      for m in &labels {
        let c = dw.generator(b, m);
        let img = compare(n, &c);
        for i in 0..=n {
          report.checks += 1;
          if n > 0 && compare(n - 1, &dw.face(i, n, &c)) != prod.face(i, n, &img) {
            report.counterexample = fail(n, s, &format!("face d_{i}"));
            return Ok(report);
          }
          if n < top && compare(n + 1, &dw.degeneracy(i, n, &c)) != prod.degeneracy(i, n, &img) {
            report.counterexample = fail(n, s, &format!("degeneracy s_{i}"));
            return Ok(report);
          }
        }
        for g in coeff.group().elements() {
          report.checks += 1;
          if compare(n, &dw.act(g, n, &c)) != prod.act(g, n, &img) {
            report.counterexample = fail(n, s, &format!("equivariance under {g}"));
            return Ok(report);
          }
        }
      }
    }
    if hit.iter().flatten().any(|h| !h) {
      report.counterexample = Some(format!("surjectivity fails at level {n}"));
      return Ok(report);
    }
  }
  Ok(report)
}
