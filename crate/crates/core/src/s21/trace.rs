use std::sync::Arc;

use serde::Serialize;

use crate::{
  doldthom::{dt_fixed, GAbelianGroup},
  equivariance::{Ext, ExtInt, FiniteGroup, SubgroupLattice},
  error::{invalid, Error, Result},
  homology::{equivariant_conn_space, reduced_homology, Connectivity},
  sset::{edgewise_subdivide, Builder, RealSimplicialSet, Simplex, SimplicialGSet, Subdivision},
};

/// Levels past this are never needed for the inputs we accept.
const MAX_LEVEL: usize = 6;

/// A toy coefficient system: a 1-reduced Real simplicial set `S` with the same `Z/2`-module
/// `N_s = N` at every simplex, the involution of `N` acting on `N_s` for `s = ws`.
pub struct CoeffSystem {
  pub base: RealSimplicialSet,
  pub coeff: Arc<GAbelianGroup>,
  sd: Subdivision,
}

impl CoeffSystem {
  pub fn new(base: RealSimplicialSet, coeff: &Arc<GAbelianGroup>) -> Result<Self> {
    if coeff.group().order() != 2 {
      return Err(Error::MixedGroups);
    }
    let s = base.underlying();
    if s.num_cells(0) > 1 || s.num_cells(1) > 0 {
      return invalid("coefficient system is not 1-reduced");
    }
    let sd = edgewise_subdivide(&base)?;
    Ok(Self { base, coeff: coeff.clone(), sd })
  }

  /// `fixed` copies of `S^{2,1}` and `pairs` swapped pairs of 2-cells, all faces at the basepoint.
  pub fn bouquet(fixed: usize, pairs: usize, coeff: &Arc<GAbelianGroup>) -> Result<Self> {
    let mut b = Builder::new(&FiniteGroup::trivial());
    let mut w = Vec::new();
    for i in 0..fixed + 2 * pairs {
      b.add_cell(2, vec![Simplex::basepoint(1); 3]);
      w.push(if i < fixed {
        i
      } else if (i - fixed) % 2 == 0 {
        i + 1
      } else {
        i - 1
      });
    }
    let space = b.build()?;
    let w = if fixed + pairs == 0 { vec![vec![0]] } else { vec![vec![0], Vec::new(), w] };
    Self::new(RealSimplicialSet::new(space, w)?, coeff)
  }

  /// `S^{2,1} v S^{2,1}` with constant `Z/2`.
  pub fn toy() -> Self {
    let c2 = FiniteGroup::cyclic(2);
    Self::bouquet(2, 0, &Arc::new(GAbelianGroup::trivial(&c2, &[2]))).unwrap()
  }

  /// The shift `(conn S + 1, conn (sd_e S)^{Z/2} + 1)` that puts the first space at spectrum level.
  pub fn normalization(&self) -> Result<(ExtInt, ExtInt)> {
    let lattice = self.sd.space.lattice();
    let (fixed, _) = self.sd.space.fixed_points(&lattice, lattice.top());
    let a = reduced_homology(self.base.underlying()).connectivity().value;
    let b = reduced_homology(&fixed).connectivity().value;
    if !a.is_finite() || !b.is_finite() {
      return Err(Error::Unsupported("coefficient system has contractible fixed points".into()));
    }
    Ok((a + Ext::Fin(1), b + Ext::Fin(1)))
  }
}

/// Level `q` of `KR(S; N(X)) -> HR(S; N(X))`: `∨_{s in S_q} N_s(X) -> ⊕_{s in S_q} N_s(X)`, and on
/// fixed points `∨_{s fixed} N_s(X)^{Z/2} -> ⊕_{s fixed} N_s(X)^{Z/2} ⊕ ⊕_{free orbits} N_s(X)`,
/// indexed by `(sd_e S)_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceLevel {
  pub q: usize,
  pub summands: usize,
  pub fixed: usize,
  pub free_orbits: usize,
}

impl TraceLevel {
  /// Cardinalities of the wedge and the sum in simplicial degree `n` of `N(X)`, given `|N(X)_n|`.
  pub fn sizes(&self, group_order: u128) -> (u128, u128) {
    let wedge = 1 + self.summands as u128 * (group_order - 1);
    (wedge, group_order.pow(self.summands as u32))
  }

  pub fn is_injective(&self, group_order: u128) -> bool {
    let (w, s) = self.sizes(group_order);
    w <= s
  }
}

pub fn kr_hr_levels(sys: &CoeffSystem, q: usize) -> TraceLevel {
  let summands = sys.base.simplices(q).iter().filter(|s| !s.is_basepoint()).count();
  let sd = &sys.sd.space;
  let (mut fixed, mut moved) = (0, 0);
  for s in sd.simplices(q).iter().filter(|s| !s.is_basepoint()) {
    if sd.act(1, s) == *s {
      fixed += 1;
    } else {
      moved += 1;
    }
  }
  TraceLevel { q, summands, fixed, free_orbits: moved / 2 }
}

/// `∨_k Y -> ∏_k Y` for `c`-connected `Y` is `(2c + 1)`-connected; the cross terms of the Kunneth
/// formula start in degree `2c + 2`.
fn wedge_to_product(k: usize, c: ExtInt) -> ExtInt {
  if k < 2 {
    Ext::PosInf
  } else {
    c.scale(2) + Ext::Fin(1)
  }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelConn {
  pub level: TraceLevel,
  pub underlying: ExtInt,
  pub fixed_points: ExtInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceConn {
  pub x_conn: ExtInt,
  pub x_fixed_conn: ExtInt,
  /// `conn N(X)` and `conn N(X)^{Z/2}` from the Moore homology.
  pub n_conn: ExtInt,
  pub n_fixed_conn: ExtInt,
  pub normalization: (ExtInt, ExtInt),
  pub levels: Vec<LevelConn>,
  pub measured: (ExtInt, ExtInt),
  pub bound: (ExtInt, ExtInt),
  pub window_limited: bool,
}

impl TraceConn {
  pub fn holds(&self) -> bool {
    self.measured.0 >= self.bound.0 && self.measured.1 >= self.bound.1
  }
}

fn conn_bound(c: Connectivity) -> (ExtInt, bool) {
  (c.value, c.window_limited)
}

/// Measures the connectivity of the trace map `KR(S; N(X)) -> HR(S; N(X))` levelwise and combines
/// the levels with `conn |f| >= min_q (conn f_q + q)`, against
/// `(2 conn X + 1, min{2 conn X^{Z/2}, conn X} + 1)`.
pub fn trace_conn(sys: &CoeffSystem, x: &Arc<SimplicialGSet>) -> Result<TraceConn> {
  if x.group().order() != 2 {
    return Err(Error::MixedGroups);
  }
  let lattice = Arc::new(SubgroupLattice::new(x.group())?);
  let (e, g) = (lattice.trivial(), lattice.top());
  let xc = equivariant_conn_space(x, &lattice);
  let (n_conn, w1) = conn_bound(dt_fixed(&sys.coeff, x, &lattice, e)?.homology()?.connectivity());
  let (n_fixed_conn, w2) =
    conn_bound(dt_fixed(&sys.coeff, x, &lattice, g)?.homology()?.connectivity());
  let normalization = sys.normalization()?;

  let floor_u = wedge_to_product(2, n_conn);
  let floor_f = wedge_to_product(2, n_fixed_conn).min(n_conn + Ext::Fin(1));
  let (mut best_u, mut best_f) = (Ext::PosInf, Ext::PosInf);
  let mut levels = Vec::new();
  for q in 0..=MAX_LEVEL {
    let lq = Ext::Fin(q as i64);
    if lq + floor_u >= best_u && lq + floor_f >= best_f {
      break;
    }
    if q == MAX_LEVEL {
      return Err(Error::Unsupported(
        "trace connectivity not settled by the scanned levels".into(),
      ));
    }
    let level = kr_hr_levels(sys, q);
    let underlying = wedge_to_product(level.summands, n_conn);
    let free = if level.free_orbits > 0 { n_conn + Ext::Fin(1) } else { Ext::PosInf };
    let fixed_points = wedge_to_product(level.fixed, n_fixed_conn).min(free);
    best_u = best_u.min(underlying + lq);
    best_f = best_f.min(fixed_points + lq);
    levels.push(LevelConn { level, underlying, fixed_points });
  }
  let (cx, cf) = (xc.at(e), xc.at(g));
  Ok(TraceConn {
    x_conn: cx,
    x_fixed_conn: cf,
    n_conn,
    n_fixed_conn,
    normalization,
    levels,
    measured: (best_u - normalization.0, best_f - normalization.1),
    bound: (cx.scale(2) + Ext::Fin(1), cf.scale(2).min(cx) + Ext::Fin(1)),
    window_limited: w1 || w2,
  })
}

/// Ten double suspensions `S^2 smash Y` with different fixed-point behaviour.
pub fn curated_inputs() -> Vec<(String, Arc<SimplicialGSet>)> {
  use crate::{
    equivariance::FiniteGSet,
    sset::{real_circle, rep_sphere, smash, sphere, wedge},
  };
  let g = FiniteGroup::cyclic(2);
  let s = |n| Arc::new(sphere(&g, n));
  let sigma = {
    let sd = edgewise_subdivide(&real_circle()).unwrap().space;
    Arc::new(sd.with_truncation(sd.truncation()))
  };
  let rho = rep_sphere(&g, &FiniteGSet::free(&g, 1)).unwrap();
  let swapped = |n| wedge(&[s(n), s(n)], Some(&FiniteGSet::free(&g, 1))).unwrap().space;
  let sm = |a: &Arc<SimplicialGSet>, b: &Arc<SimplicialGSet>| smash(a, b).unwrap();
  let s2 = s(2);
  vec![
    ("S^2", s2.clone()),
    ("S^3", sm(&s2, &s(1))),
    ("S^4", sm(&s2, &s(2))),
    ("S^2 ^ S^sigma", sm(&s2, &sigma)),
    ("S^2 ^ S^rho", sm(&s2, &rho)),
    ("S^2 ^ S^sigma ^ S^1", sm(&sm(&s2, &sigma), &s(1))),
    ("S^2 ^ S^sigma ^ S^sigma", sm(&sm(&s2, &sigma), &sigma)),
    ("S^2 ^ (S^1 v S^1)", sm(&s2, &swapped(1))),
    ("S^2 ^ (S^2 v S^2)", sm(&s2, &swapped(2))),
    ("S^2 ^ S^rho ^ S^sigma", sm(&sm(&s2, &rho), &sigma)),
  ]
  .into_iter()
  .map(|(n, x)| (n.to_string(), x))
  .collect()
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn reduced_levels_are_trivial() {
    let sys = CoeffSystem::toy();
    let l = kr_hr_levels(&sys, 0);
    assert_eq!((l.summands, l.fixed, l.free_orbits), (0, 0, 0));
    assert_eq!(kr_hr_levels(&sys, 1).summands, 0);
    assert_eq!(kr_hr_levels(&sys, 2).summands, 2);
  }

  #[test]
  fn subdivided_levels_count_the_odd_levels() {
    let sys =
      CoeffSystem::bouquet(1, 1, &Arc::new(GAbelianGroup::trivial(&FiniteGroup::cyclic(2), &[2])))
        .unwrap();
    for q in 0..4 {
      let l = kr_hr_levels(&sys, q);
      let odd = sys.base.simplices(2 * q + 1).iter().filter(|s| !s.is_basepoint()).count();
      assert_eq!(l.fixed + 2 * l.free_orbits, odd);
      // w fixes s_q x exactly for the fixed cells
      assert_eq!(l.fixed, if q == 0 { 0 } else { q });
      assert!(l.is_injective(4));
    }
  }

  #[test]
  fn not_one_reduced() {
    let coeff = Arc::new(GAbelianGroup::trivial(&FiniteGroup::cyclic(2), &[2]));
    assert!(CoeffSystem::new(crate::sset::real_circle(), &coeff).is_err());
  }

  #[test]
  fn zero_coefficients_give_an_equivalence() {
    let c2 = FiniteGroup::cyclic(2);
    let sys = CoeffSystem::bouquet(2, 0, &Arc::new(GAbelianGroup::trivial(&c2, &[]))).unwrap();
    let x = Arc::new(crate::sset::sphere(&c2, 2));
    let r = trace_conn(&sys, &x).unwrap();
    assert_eq!(r.measured, (Ext::PosInf, Ext::PosInf));
  }

  #[test]
  fn toy_normalization() {
    assert_eq!(CoeffSystem::toy().normalization().unwrap(), (Ext::Fin(2), Ext::Fin(1)));
  }

  #[test]
  fn curated_inputs_meet_the_bound() {
    let sys = CoeffSystem::toy();
    for (name, x) in curated_inputs() {
      let r = trace_conn(&sys, &x).unwrap();
      assert!(r.holds(), "{name}: {r:?}");
      assert!(!r.window_limited);
    }
  }
}
