use serde::Serialize;

use super::{
  level::{Diagram, Level},
  shape::Shape,
};
use crate::{
  dualcat::Duality,
  error::{invalid, Result},
};

/// An object of `S^{2,1}_p DC`: vertices `(c_theta, d_theta, phi_theta: d_theta -> D c_theta)`.
/// `c` is covariant; `d_maps[rho -> theta]` goes `d_theta -> d_rho`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrictObject {
  pub c: Diagram,
  pub d_ranks: Vec<usize>,
  pub d_maps: Vec<usize>,
  pub phi: Vec<usize>,
}

/// A morphism `(a_theta: c_theta -> c'_theta, b_theta: d'_theta -> d_theta)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrictMorphism {
  pub a: Vec<usize>,
  pub b: Vec<usize>,
}

/// `S^{2,1}_p` over the strictification of `P_A` with the duality `D`.
pub struct StrictLevel<'a, 'b> {
  pub level: &'b Level<'a>,
  pub dual: &'b Duality,
}

impl StrictLevel<'_, '_> {
  fn shape(&self) -> &Shape {
    &self.level.shape
  }

  /// `X -> (X, D X pointwise, id)`.
  pub fn standard(&self, x: &Diagram) -> StrictObject {
    let cat = &self.level.mc.cat;
    StrictObject {
      c: x.clone(),
      d_ranks: x.ranks.iter().map(|&k| self.dual.obj[k]).collect(),
      d_maps: x.maps.iter().map(|&f| self.dual.mor[f]).collect(),
      phi: x.ranks.iter().map(|&k| cat.id(self.dual.obj[k])).collect(),
    }
  }

  pub fn validate(&self, x: &StrictObject) -> Result<()> {
    self.level.check(&x.c)?;
    let cat = &self.level.mc.cat;
    let s = self.shape();
    for t in 0..s.objects.len() {
      let f = x.phi[t];
      if cat.src(f) != x.d_ranks[t] || cat.tgt(f) != self.dual.obj[x.c.ranks[t]] || !cat.is_iso(f) {
        return invalid("phi is not an isomorphism d -> Dc");
      }
    }
    for (i, &(r, t)) in s.arrows.iter().enumerate() {
      let b = x.d_maps[i];
      if cat.src(b) != x.d_ranks[t] || cat.tgt(b) != x.d_ranks[r] {
        return invalid("contravariant part has the wrong shape");
      }
      if cat.compose(x.phi[r], b) != cat.compose(self.dual.mor[x.c.maps[i]], x.phi[t]) {
        return invalid("phi is not natural");
      }
    }
    Ok(())
  }

  /// `(DX)_theta = (d, c, D(phi) eta_c)` at `omega theta omega`, with the roles of the two parts swapped.
  pub fn dual_object(&self, x: &StrictObject) -> StrictObject {
    let s = self.shape();
    let cat = &self.level.mc.cat;
    let flip = |i: usize| {
      let (r, t) = s.arrows[i];
      s.arrow(s.omega[t], s.omega[r]).unwrap()
    };
    let n = s.objects.len();
    StrictObject {
      c: Diagram {
        ranks: (0..n).map(|t| x.d_ranks[s.omega[t]]).collect(),
        maps: (0..s.arrows.len()).map(|i| x.d_maps[flip(i)]).collect(),
      },
      d_ranks: (0..n).map(|t| x.c.ranks[s.omega[t]]).collect(),
      d_maps: (0..s.arrows.len()).map(|i| x.c.maps[flip(i)]).collect(),
      phi: (0..n)
        .map(|t| {
          let u = s.omega[t];
          cat.compose(self.dual.mor[x.phi[u]], self.dual.eta[x.c.ranks[u]])
        })
        .collect(),
    }
  }

  /// `D(a, b) = (b, a)` reindexed along `omega`.
  pub fn dual_morphism(&self, f: &StrictMorphism) -> StrictMorphism {
    let s = self.shape();
    StrictMorphism {
      a: (0..s.objects.len()).map(|t| f.b[s.omega[t]]).collect(),
      b: (0..s.objects.len()).map(|t| f.a[s.omega[t]]).collect(),
    }
  }

  /// The morphism of `S^{2,1}_p DC` over a natural map `a: c -> c'`; `b` is forced by `phi`.
  pub fn lift(&self, x: &StrictObject, y: &StrictObject, a: &[usize]) -> Option<StrictMorphism> {
    let cat = &self.level.mc.cat;
    let b = (0..a.len())
      .map(|t| Some(cat.compose_path(&[y.phi[t], self.dual.mor[a[t]], cat.inverse(x.phi[t])?])))
      .collect::<Option<Vec<_>>>()?;
    Some(StrictMorphism { a: a.to_vec(), b })
  }
}

/// The object `x` pulled back along `f: [m] -> [p]`, for `lower` the shape at `m`.
pub fn reindex(upper: &Shape, lower: &Shape, f: &[usize], x: &StrictObject) -> StrictObject {
  let obj = upper.precompose(lower, f);
  let arrow = |i: usize| {
    let (r, t) = lower.arrows[i];
    upper.arrow(obj[r], obj[t]).unwrap()
  };
  StrictObject {
    c: Diagram {
      ranks: obj.iter().map(|&t| x.c.ranks[t]).collect(),
      maps: (0..lower.arrows.len()).map(|i| x.c.maps[arrow(i)]).collect(),
    },
    d_ranks: obj.iter().map(|&t| x.d_ranks[t]).collect(),
    d_maps: (0..lower.arrows.len()).map(|i| x.d_maps[arrow(i)]).collect(),
    phi: obj.iter().map(|&t| x.phi[t]).collect(),
  }
}

/// Checks that the duality on `S^{2,1}_p DC` is a strict involution and that
/// `D d_i = d_{p-i} D` and `D s_i = s_{p-i} D`.
#[derive(Clone, Debug, Serialize)]
pub struct StrictDualityReport {
  pub p: usize,
  pub objects: usize,
  pub valid: bool,
  pub involution: bool,
  pub faces: bool,
  pub degeneracies: bool,
}

impl StrictDualityReport {
  pub fn holds(&self) -> bool {
    self.valid && self.involution && self.faces && self.degeneracies
  }
}

pub fn check_strict_duality(
  upper: &StrictLevel,
  lower: Option<&StrictLevel>,
  higher: Option<&StrictLevel>,
  objects: &[StrictObject],
) -> StrictDualityReport {
  let p = upper.shape().p;
  let mut all: Vec<StrictObject> = objects.to_vec();
  all.extend(objects.iter().map(|x| upper.dual_object(x)));
  let valid = all.iter().all(|x| upper.validate(x).is_ok());
  let involution = all.iter().all(|x| upper.dual_object(&upper.dual_object(x)) == *x);
  let faces = lower.map_or(true, |lo| {
    (0..=p).all(|i| {
      all.iter().all(|x| {
        let di = |y: &StrictObject, j: usize| {
          reindex(upper.shape(), lo.shape(), &super::shape::coface(p, j), y)
        };
        let face = di(x, i);
        lo.validate(&face).is_ok() && lo.dual_object(&face) == di(&upper.dual_object(x), p - i)
      })
    })
  });
  let degeneracies = higher.map_or(true, |hi| {
    (0..=p).all(|i| {
      all.iter().all(|x| {
        let si = |y: &StrictObject, j: usize| {
          reindex(upper.shape(), hi.shape(), &super::shape::codegeneracy(p, j), y)
        };
        let deg = si(x, i);
        hi.validate(&deg).is_ok() && hi.dual_object(&deg) == si(&upper.dual_object(x), p - i)
      })
    })
  });
  StrictDualityReport { p, objects: all.len(), valid, involution, faces, degeneracies }
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::{
    dualcat::strictify,
    wall::{ModCat, WallRing},
  };

  #[test]
  fn strict_duality_on_levels() {
    for name in ["F2", "Z4", "F3"] {
      let ring = WallRing::preset(name).unwrap();
      let mc = ModCat::new(&ring, 1).unwrap();
      let d = mc.duality().unwrap();
      let levels: Vec<Level> = (0..=4).map(|p| Level::new(p, &mc)).collect();
      let strict: Vec<StrictLevel> =
        levels.iter().map(|l| StrictLevel { level: l, dual: &d }).collect();
      for p in 1..=3 {
        let objs: Vec<StrictObject> =
          levels[p].oracle(1).iter().map(|(_, x)| strict[p].standard(x)).collect();
        let rep =
          check_strict_duality(&strict[p], Some(&strict[p - 1]), Some(&strict[p + 1]), &objs);
        assert!(rep.holds(), "{name} {rep:?}");
      }
    }
  }

  #[test]
  fn level_two_duality_is_the_strictified_duality() {
    let ring = WallRing::cyclic_sign(4);
    let mc = ModCat::new(&ring, 1).unwrap();
    let d = mc.duality().unwrap();
    let st = strictify(&mc.cat, &d).unwrap();
    let level = Level::new(2, &mc);
    let sl = StrictLevel { level: &level, dual: &d };
    let t = level.shape.object([0, 1, 2]);
    for (_, x) in level.oracle(1) {
      let ox = sl.standard(&x);
      for y in [ox.clone(), sl.dual_object(&ox)] {
        let here = st.object(y.c.ranks[t], y.d_ranks[t], y.phi[t]).unwrap();
        let dy = sl.dual_object(&y);
        assert_eq!(
          st.duality.obj[here],
          st.object(dy.c.ranks[t], dy.d_ranks[t], dy.phi[t]).unwrap()
        );
      }
    }
  }

  #[test]
  fn dual_morphisms_compose_contravariantly() {
    let ring = WallRing::cyclic_sign(4);
    let mc = ModCat::new(&ring, 1).unwrap();
    let d = mc.duality().unwrap();
    let level = Level::new(3, &mc);
    let sl = StrictLevel { level: &level, dual: &d };
    let cat = &mc.cat;
    for (_, x) in level.oracle(1) {
      let ox = sl.standard(&x);
      let autos = level.isomorphisms(&x, &x, usize::MAX);
      for f in &autos {
        for g in &autos {
          let (mf, mg) = (sl.lift(&ox, &ox, f).unwrap(), sl.lift(&ox, &ox, g).unwrap());
          let gf: Vec<usize> = (0..f.len()).map(|t| cat.compose(g[t], f[t])).collect();
          let dgf = sl.dual_morphism(&sl.lift(&ox, &ox, &gf).unwrap());
          let (df, dg) = (sl.dual_morphism(&mf), sl.dual_morphism(&mg));
          let composite: Vec<usize> = (0..f.len()).map(|t| cat.compose(df.a[t], dg.a[t])).collect();
          assert_eq!(dgf.a, composite);
        }
      }
    }
  }
}
