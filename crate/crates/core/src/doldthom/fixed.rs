use std::{collections::HashMap, sync::Arc};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{
  coeff::{Elem, FixedSummand, GAbelianGroup},
  space::{Chain, DoldThom, IsoReport},
};
use crate::{
  equivariance::{min_below, ConnFn, Ext, ExtInt, SubgroupLattice},
  error::{invalid, Error, Result},
  homology::{equivariant_conn_space, Connectivity, FgChainComplex, HomologyReport, SparseMatrix},
  sset::{Cell, Simplex, SimplicialGSet, SimplicialMap, BASE},
};

/// One orbit `[x]` of non-base nondegenerate cells, contributing `M^{H_x}`.
#[derive(Clone, Debug)]
pub struct OrbitSummand {
  pub rep: Cell,
  pub stabilizer: usize,
  /// One element of `H` per point of the orbit, the identity first.
  pub cosets: Vec<usize>,
  pub summand: FixedSummand,
  pub offset: usize,
}

/// The normalized Moore complex of `M(X)^H` in orbit form.
#[derive(Clone, Debug)]
pub struct FixedComplex {
  pub coeff: Arc<GAbelianGroup>,
  pub space: Arc<SimplicialGSet>,
  pub lattice: Arc<SubgroupLattice>,
  pub subgroup: usize,
  pub levels: Vec<Vec<OrbitSummand>>,
  pub moore: FgChainComplex,
  orbit_of: Vec<Vec<Option<usize>>>,
}

/// `(M(X))^H` as `sum over orbits [x] of M^{H_x}`, with its Moore differential.
pub fn dt_fixed(
  coeff: &Arc<GAbelianGroup>,
  x: &Arc<SimplicialGSet>,
  lattice: &Arc<SubgroupLattice>,
  h: usize,
) -> Result<FixedComplex> {
  if coeff.group() != x.group() || lattice.group() != x.group() {
    return Err(Error::MixedGroups);
  }
  let hs = lattice.elements(h);
  let mut summands: HashMap<usize, FixedSummand> = HashMap::new();
  let mut levels = Vec::new();
  let mut orbit_of = Vec::new();
  for d in 0..=x.dim() {
    let mut level: Vec<OrbitSummand> = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; x.num_cells(d)];
    let mut offset = 0;
    for c in x.cells(d).filter(|&c| c != BASE) {
      if owner[c.idx].is_some() {
        continue;
      }
      let mut cosets = Vec::new();
      let mut stab = 0u64;
      for &g in &hs {
        let gc = x.act_cell(g, c);
        if gc == c {
          stab |= 1 << g;
        }
        if owner[gc.idx].is_none() {
          owner[gc.idx] = Some(level.len());
          cosets.push(g);
        }
      }
      let stabilizer = lattice.index_of_mask(stab).expect("stabilizers are subgroups");
      let summand = match summands.get(&stabilizer) {
        Some(s) => s.clone(),
        None => {
          let s = coeff.fixed_summand(lattice, stabilizer)?;
          summands.insert(stabilizer, s.clone());
          s
        }
      };
      let g = summand.gens.len();
      level.push(OrbitSummand { rep: c, stabilizer, cosets, summand, offset });
      offset += g;
    }
    levels.push(level);
    orbit_of.push(owner);
  }
  let mut fc = FixedComplex {
    coeff: coeff.clone(),
    space: x.clone(),
    lattice: lattice.clone(),
    subgroup: h,
    levels,
    moore: FgChainComplex { levels: Vec::new(), lifts: Vec::new(), reliable: 0, complete: false },
    orbit_of,
  };
  let mut lifts = vec![SparseMatrix::zero(0, fc.gens(0))];
  for d in 1..=x.dim() {
    let mut m = SparseMatrix::zero(fc.gens(d - 1), fc.gens(d));
    for o in 0..fc.levels[d].len() {
      let ob = &fc.levels[d][o];
      for (k, gen) in ob.summand.gens.iter().enumerate() {
        let mut acc: HashMap<usize, Elem> = HashMap::new();
        for &g in &ob.cosets {
          let gx = x.act_cell(g, ob.rep);
          let gm = coeff.act(g, gen);
          for (i, f) in x.cell_faces(gx).iter().enumerate() {
            if let Some(t) = fc.rep_orbit(f) {
              let term = coeff.scale(if i % 2 == 0 { 1 } else { -1 }, &gm);
              let e = acc.entry(t).or_insert_with(|| coeff.zero());
              *e = coeff.add(e, &term);
            }
          }
        }
        for (t, v) in acc {
          let target = &fc.levels[d - 1][t];
          let Some(cs) = target.summand.coords(&v) else {
            return invalid(format!(
              "boundary of orbit {:?} is not fixed by its stabilizer",
              ob.rep
            ));
          };
          for (i, c) in cs.into_iter().enumerate() {
            m.add(target.offset + i, ob.offset + k, c);
          }
        }
      }
    }
    lifts.push(m);
  }
  let complete = !x.is_truncated();
  fc.moore = FgChainComplex {
    levels: fc
      .levels
      .iter()
      .map(|l| l.iter().map(|o| o.summand.presentation.clone()).collect())
      .collect(),
    lifts,
    reliable: if complete { usize::MAX } else { x.truncation().saturating_sub(1) },
    complete,
  };
  Ok(fc)
}

impl FixedComplex {
  pub fn gens(&self, d: usize) -> usize {
    self.levels.get(d).map_or(0, |l| l.iter().map(|o| o.summand.gens.len()).sum())
  }

  pub fn dim(&self) -> usize {
    self.levels.len().saturating_sub(1)
  }

  /// The orbit of `s` when `s` is exactly the representative of a nondegenerate orbit.
  fn rep_orbit(&self, s: &Simplex) -> Option<usize> {
    if s.is_degenerate() || s.is_basepoint() {
      return None;
    }
    let o = self.orbit_of[s.cell.dim][s.cell.idx]?;
    (self.levels[s.cell.dim][o].rep == s.cell).then_some(o)
  }

  pub fn homology(&self) -> Result<HomologyReport> {
    self.moore.homology()
  }

  /// The element `sum over h in H/H_x of (h m)(h x)` of `M(X)^H`.
  pub fn embed(&self, dt: &DoldThom, d: usize, o: usize, m: &Elem) -> Chain {
    let ob = &self.levels[d][o];
    let mut c = Chain::new();
    for &g in &ob.cosets {
      let s = self.space.act(g, &Simplex::nondegenerate(ob.rep));
      let i = dt.index_of(&s).expect("nondegenerate simplex");
      let v = self.coeff.act(g, m);
      if !self.coeff.is_zero(&v) {
        c.insert(i, v);
      }
    }
    c
  }

  /// The induced map `M(f)^H` on orbit generators, as integral lifts per degree.
  pub fn map_to(&self, f: &SimplicialMap, target: &FixedComplex) -> Result<Vec<SparseMatrix>> {
    if self.subgroup != target.subgroup
      || !Arc::ptr_eq(&f.source, &self.space)
      || !Arc::ptr_eq(&f.target, &target.space)
    {
      return invalid("map does not match the fixed complexes");
    }
    let mut out = Vec::new();
    for d in 0..=self.dim() {
      let mut m = SparseMatrix::zero(target.gens(d), self.gens(d));
      for ob in &self.levels[d] {
        for (k, gen) in ob.summand.gens.iter().enumerate() {
          let mut acc: HashMap<usize, Elem> = HashMap::new();
          for &g in &ob.cosets {
            let y = f.apply(&self.space.act(g, &Simplex::nondegenerate(ob.rep)));
            if let Some(t) = target.rep_orbit(&y) {
              let e = acc.entry(t).or_insert_with(|| self.coeff.zero());
              *e = self.coeff.add(e, &self.coeff.act(g, gen));
            }
          }
          for (t, v) in acc {
            let tb = &target.levels[d][t];
            let Some(cs) = tb.summand.coords(&v) else {
              return invalid("image label is not fixed by the target stabilizer");
            };
            for (i, c) in cs.into_iter().enumerate() {
              m.add(tb.offset + i, ob.offset + k, c);
            }
          }
        }
      }
      out.push(m);
    }
    Ok(out)
  }

  /// Two-route check: orbit generators embed as `H`-invariant elements of `M(X)`, and the orbit
  /// differential agrees with the alternating face sum computed in `M(X)` modulo degeneracies.
  pub fn verify_against(&self, dt: &DoldThom) -> IsoReport {
    let top = self.dim().min(dt.top);
    let hs = self.lattice.elements(self.subgroup);
    let mut report = IsoReport { levels: top + 1, generators: 0, checks: 0, counterexample: None };
    let nondegenerate = |c: Chain, n: usize| -> Chain {
      c.into_iter().filter(|(i, _)| !dt.basis(n)[*i].is_degenerate()).collect()
    };
    for d in 0..=top {
      for (o, ob) in self.levels[d].iter().enumerate() {
        for (k, gen) in ob.summand.gens.iter().enumerate() {
          report.generators += 1;
          let e = self.embed(dt, d, o, gen);
          for &g in &hs {
            report.checks += 1;
            if dt.act(g, d, &e) != e {
              report.counterexample =
                Some(format!("orbit {:?} does not embed as an invariant", ob.rep));
              return report;
            }
          }
          if d == 0 {
            continue;
          }
          report.checks += 1;
          let mut direct = Chain::new();
          for i in 0..=d {
            let f = dt.face(i, d, &e);
            for (b, m) in f {
              let m = self.coeff.scale(if i % 2 == 0 { 1 } else { -1 }, &m);
              let v = match direct.get(&b) {
                Some(x) => self.coeff.add(x, &m),
                None => m,
              };
              if self.coeff.is_zero(&v) {
                direct.remove(&b);
              } else {
                direct.insert(b, v);
              }
            }
          }
          let direct = nondegenerate(direct, d - 1);
          let column: Vec<(usize, BigInt)> = self.moore.lifts[d].column(ob.offset + k).to_vec();
          let mut via = Chain::new();
          for tb_idx in 0..self.levels[d - 1].len() {
            let tb = &self.levels[d - 1][tb_idx];
            let mut v = self.coeff.zero();
            for (r, c) in &column {
              if (tb.offset..tb.offset + tb.summand.gens.len()).contains(r) {
                let c = c.to_i64().unwrap_or_default();
                v = self.coeff.add(&v, &self.coeff.scale(c, &tb.summand.gens[r - tb.offset]));
              }
            }
            if !self.coeff.is_zero(&v) {
              via.extend(self.embed(dt, d - 1, tb_idx, &v));
            }
          }
          if via != direct {
            report.counterexample = Some(format!("differential disagrees on orbit {:?}", ob.rep));
            return report;
          }
        }
      }
    }
    report
  }
}

/// Fixed-point Moore homology of `M(X)` for one subgroup per conjugacy class.
#[derive(Clone, Debug)]
pub struct BredonEntry {
  pub subgroup: usize,
  pub order: usize,
  pub report: HomologyReport,
}

pub fn bredon(
  coeff: &Arc<GAbelianGroup>,
  x: &Arc<SimplicialGSet>,
  lattice: &Arc<SubgroupLattice>,
) -> Result<Vec<BredonEntry>> {
  (0..lattice.num_classes())
    .map(|c| {
      let h = lattice.class_rep(c);
      Ok(BredonEntry {
        subgroup: h,
        order: lattice.order(h),
        report: dt_fixed(coeff, x, lattice, h)?.homology()?,
      })
    })
    .collect()
}

/// Measured `conn M(X)^H` against `min over K <= H of conn X^K`.
#[derive(Clone, Debug)]
pub struct ConnPreservation {
  pub measured: Vec<Connectivity>,
  pub bound: ConnFn,
  pub holds: bool,
}

impl ConnPreservation {
  pub fn margin(&self, class: usize) -> ExtInt {
    let b = self.bound.class_values()[class];
    match (self.measured[class].value, b) {
      (Ext::PosInf, Ext::PosInf) => Ext::Fin(0),
      (m, b) => m - b,
    }
  }
}

pub fn verify_conn_preservation(
  coeff: &Arc<GAbelianGroup>,
  x: &Arc<SimplicialGSet>,
  lattice: &Arc<SubgroupLattice>,
) -> Result<ConnPreservation> {
  let bound = min_below(&equivariant_conn_space(x, lattice));
  let measured: Vec<Connectivity> = (0..lattice.num_classes())
    .map(|c| Ok(dt_fixed(coeff, x, lattice, lattice.class_rep(c))?.homology()?.connectivity()))
    .collect::<Result<_>>()?;
  let holds =
    measured.iter().zip(bound.class_values()).all(|(m, b)| m.value >= *b || m.window_limited);
  Ok(ConnPreservation { measured, bound, holds })
}

#[cfg(test)]
mod tests {
  use num_traits::Zero;
  use rand::SeedableRng;
  use rand_chacha::ChaCha8Rng;

  use super::*;
  use crate::{
    equivariance::{FiniteGSet, FiniteGroup},
    homology::{homology, reduced_chains, ChainComplex, Presented},
    sset::{edgewise_subdivide, point, real_circle, rep_sphere, samples, sphere, wedge},
  };

  fn c2() -> (FiniteGroup, Arc<SubgroupLattice>) {
    let g = FiniteGroup::cyclic(2);
    let l = Arc::new(SubgroupLattice::new(&g).unwrap());
    (g, l)
  }

  /// Invariant integral chains `C(X; Z_chi)^H`, computed by lattice kernels instead of orbits.
  fn invariant_chains(
    x: &SimplicialGSet,
    chi: &[i64],
    lattice: &SubgroupLattice,
    h: usize,
  ) -> ChainComplex {
    let c = reduced_chains(x);
    let offset = |d: usize| if d == 0 { 1 } else { 0 };
    let bases: Vec<Vec<Vec<BigInt>>> = (0..c.ranks.len())
      .map(|d| {
        let n = c.ranks[d];
        let rows: Vec<Vec<BigInt>> = lattice
          .elements(h)
          .iter()
          .flat_map(|&g| {
            (0..n).map(move |i| {
              let mut r = vec![BigInt::zero(); n];
              r[i] -= 1;
              (r, g, i)
            })
          })
          .map(|(mut r, g, i)| {
            for j in 0..n {
              let gj = x.act_cell(g, Cell { dim: d, idx: j + offset(d) }).idx - offset(d);
              if gj == i {
                r[j] += chi[g];
              }
            }
            r
          })
          .collect();
        if rows.is_empty() || n == 0 {
          return (0..n).map(|j| (0..n).map(|i| BigInt::from((i == j) as i64)).collect()).collect();
        }
        let snf = crate::homology::smith_normal_form(&rows, n);
        (snf.diagonal.len()..n).map(|j| snf.v.iter().map(|r| r[j].clone()).collect()).collect()
      })
      .collect();
    let mut boundaries = Vec::new();
    for d in 0..c.ranks.len() {
      let mut m = SparseMatrix::zero(if d == 0 { 0 } else { bases[d - 1].len() }, bases[d].len());
      if d > 0 {
        let lower = Presented::new(c.ranks[d - 1], bases[d - 1].clone()).unwrap();
        for (j, v) in bases[d].iter().enumerate() {
          let image = c.boundaries[d].apply(v);
          for (i, x) in lower.solve(&image).unwrap().into_iter().enumerate() {
            m.add(i, j, x);
          }
        }
      }
      boundaries.push(m);
    }
    ChainComplex::new(bases.iter().map(|b| b.len()).collect(), boundaries, c.reliable, c.complete)
      .unwrap()
  }

  #[test]
  fn spheres_with_integer_coefficients() {
    let (g, l) = c2();
    let z = Arc::new(GAbelianGroup::trivial(&g, &[0]));
    let s2 = Arc::new(sphere(&g, 2));
    let b = bredon(&z, &s2, &l).unwrap();
    assert!(b[0].report.degree(2).is_z());
    let s1 = Arc::new(sphere(&g, 1));
    assert!(dt_fixed(&z, &s1, &l, 0).unwrap().homology().unwrap().degree(1).is_z());
    let pt = Arc::new(point(&g));
    assert!(bredon(&z, &pt, &l).unwrap().iter().all(|e| e
      .report
      .degrees
      .iter()
      .all(|d| d.is_zero())));
  }

  #[test]
  fn free_orbit_of_edges() {
    let (g, l) = c2();
    let m = Arc::new(GAbelianGroup::preset(&g, "z4neg").unwrap());
    let s1 = Arc::new(sphere(&g, 1));
    let x = wedge(&[s1.clone(), s1], Some(&FiniteGSet::free(&g, 1))).unwrap().space;
    let f = dt_fixed(&m, &x, &l, l.top()).unwrap();
    assert_eq!(f.levels[1].len(), 1);
    assert_eq!(f.levels[1][0].summand.presentation.structure(), vec![BigInt::from(4)]);
    assert!(f.homology().unwrap().degree(1).torsion == vec![BigInt::from(4)]);
  }

  #[test]
  fn orbit_form_matches_invariants_in_the_dold_thom_space() {
    let (g, l) = c2();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..8 {
      let m = Arc::new(GAbelianGroup::random(&g, &mut rng, 16));
      let x = samples::random_z2_space(&mut rng, 3);
      let dt = DoldThom::new(&m, &x, x.dim().min(4)).unwrap();
      for h in 0..l.len() {
        let rep = dt_fixed(&m, &x, &l, h).unwrap().verify_against(&dt);
        assert!(rep.passed(), "{:?}", rep.counterexample);
      }
    }
  }

  #[test]
  fn sign_coefficients_two_routes() {
    let (g, l) = c2();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spaces = [
      Arc::new(edgewise_subdivide(&real_circle()).unwrap().space.as_ref().clone()),
      rep_sphere(&g, &FiniteGSet::free(&g, 1)).unwrap(),
      samples::random_z2_space(&mut rng, 3),
      samples::random_z2_space(&mut rng, 3),
    ];
    for name in ["z", "zsign"] {
      let m = Arc::new(GAbelianGroup::preset(&g, name).unwrap());
      let chi: Vec<i64> = g.elements().map(|e| m.act(e, &vec![1])[0]).collect();
      for x in &spaces {
        for h in 0..l.len() {
          let a = dt_fixed(&m, x, &l, h).unwrap().homology().unwrap();
          let b = homology(&invariant_chains(x, &chi, &l, h)).unwrap();
          for d in 0..x.dim() {
            assert_eq!(a.degree(d), b.degree(d), "{name} H_{d} over subgroup {h}");
          }
        }
      }
    }
  }

  #[test]
  fn sd_circle_fixed_points() {
    let (g, l) = c2();
    let z = Arc::new(GAbelianGroup::trivial(&g, &[0]));
    let sd = Arc::new(edgewise_subdivide(&real_circle()).unwrap().space.as_ref().clone());
    let b = bredon(&z, &sd, &l).unwrap();
    assert!(b[0].report.degree(1).is_z());
  }

  #[test]
  fn regular_sphere_connectivity_is_preserved() {
    let (g, l) = c2();
    let x = rep_sphere(&g, &FiniteGSet::free(&g, 2)).unwrap();
    let m = Arc::new(GAbelianGroup::preset(&g, "z4neg").unwrap());
    let c = verify_conn_preservation(&m, &x, &l).unwrap();
    assert_eq!(c.bound.class_values(), &[Ext::Fin(3), Ext::Fin(1)]);
    assert!(c.holds);
  }
}
