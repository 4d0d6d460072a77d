use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::level::{Diagram, Level, Transformation};
use crate::{
  dualcat::{Duality, TableBimodule},
  error::{Error, Result},
  homology::smith_normal_form,
};

/// A family `m_theta` in `M(X_theta, Y_theta)`, one coordinate vector per object of the shape.
pub type Family = Vec<Vec<u32>>;

/// `X(psi)^* m_theta = Y(psi)_* m_rho` for every arrow `psi: rho -> theta`.
pub fn is_compatible(
  level: &Level,
  hm: &TableBimodule,
  x: &Diagram,
  y: &Diagram,
  m: &Family,
) -> bool {
  level.shape.arrows.iter().all(|&(r, t)| {
    r == t
      || hm.pull(level.map(x, r, t), y.ranks[t], &m[t])
        == hm.push(level.map(y, r, t), x.ranks[r], &m[r])
  })
}

fn positions(level: &Level, hm: &TableBimodule, x: &Diagram, y: &Diagram) -> Vec<usize> {
  (0..level.shape.objects.len()).map(|t| hm.rank[x.ranks[t]][y.ranks[t]]).collect()
}

/// `M_p(X, Y)` by filtering all of `sum_theta M(X_theta, Y_theta)`.
pub fn extend_by_search(
  level: &Level,
  hm: &TableBimodule,
  x: &Diagram,
  y: &Diagram,
  limit: usize,
) -> Result<Vec<Family>> {
  let ranks = positions(level, hm, x, y);
  let total: usize = ranks.iter().sum();
  let size = (hm.q as usize).checked_pow(total as u32).filter(|&s| s <= limit);
  let Some(size) = size else {
    return Err(Error::Unsupported(format!("{total} coordinates over Z/{}", hm.q)));
  };
  let mut out = Vec::new();
  for code in 0..size {
    let mut rest = code;
    let m: Family = ranks
      .iter()
      .map(|&r| {
        (0..r)
          .map(|_| {
            let c = (rest % hm.q as usize) as u32;
            rest /= hm.q as usize;
            c
          })
          .collect()
      })
      .collect();
    if is_compatible(level, hm, x, y, &m) {
      out.push(m);
    }
  }
  Ok(out)
}

/// `M_p(X, Y)` as the kernel mod `q` of the constraint matrix, read off its Smith normal form.
#[derive(Clone, Debug)]
pub struct KernelMod {
  pub order: BigInt,
  pub generators: Vec<Family>,
}

pub fn extend_by_smith(level: &Level, hm: &TableBimodule, x: &Diagram, y: &Diagram) -> KernelMod {
  let ranks = positions(level, hm, x, y);
  let start: Vec<usize> =
    ranks.iter().scan(0, |acc, &r| Some(std::mem::replace(acc, *acc + r))).collect();
  let cols: usize = ranks.iter().sum();
  let q = hm.q;
  let mut rows: Vec<Vec<BigInt>> = Vec::new();
  for &(r, t) in level.shape.arrows.iter().filter(|a| a.0 != a.1) {
    let pull = &hm.pull[level.map(x, r, t)][y.ranks[t]];
    let push = &hm.push[level.map(y, r, t)][x.ranks[r]];
    for i in 0..hm.rank[x.ranks[r]][y.ranks[t]] {
      let mut row = vec![BigInt::zero(); cols];
      for (j, &v) in pull[i].iter().enumerate() {
        row[start[t] + j] += v;
      }
      for (j, &v) in push[i].iter().enumerate() {
        row[start[r] + j] -= v;
      }
      rows.push(row);
    }
  }
  let qb = BigInt::from(q);
  let mut order = BigInt::from(1);
  let mut gens: Vec<Vec<BigInt>> = Vec::new();
  let basis =
    |v: &[Vec<BigInt>], i: usize| -> Vec<BigInt> { v.iter().map(|row| row[i].clone()).collect() };
  if rows.is_empty() {
    for i in 0..cols {
      order *= &qb;
      gens.push((0..cols).map(|j| BigInt::from(u32::from(i == j))).collect());
    }
  } else {
    let snf = smith_normal_form(&rows, cols);
    for i in 0..cols {
      let d = snf.diagonal.get(i).cloned().unwrap_or_else(BigInt::zero);
      let g = if d.is_zero() { qb.clone() } else { d.gcd(&qb) };
      if g > BigInt::from(1) {
        order *= &g;
        let step = &qb / &g;
        gens.push(basis(&snf.v, i).iter().map(|e| e * &step).collect());
      }
    }
  }
  let generators = gens
    .into_iter()
    .map(|g| {
      let flat: Vec<u32> = g.iter().map(|e| e.mod_floor(&qb).to_u32().unwrap()).collect();
      (0..ranks.len()).map(|t| flat[start[t]..start[t] + ranks[t]].to_vec()).collect()
    })
    .collect();
  KernelMod { order, generators }
}

/// The subgroup generated by `gens`, enumerated.
pub fn span(q: u32, zero: &Family, gens: &[Family], limit: usize) -> Option<HashSet<Family>> {
  let mut seen: HashSet<Family> = HashSet::from([zero.clone()]);
  let mut frontier = vec![zero.clone()];
  while let Some(v) = frontier.pop() {
    for g in gens {
      let w: Family =
        v.iter().zip(g).map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x + y) % q).collect()).collect();
      if seen.insert(w.clone()) {
        if seen.len() > limit {
          return None;
        }
        frontier.push(w);
      }
    }
  }
  Some(seen)
}

/// Both routes for `M_p(X, Y)`.
#[derive(Clone, Debug, Serialize)]
pub struct ExtensionComparison {
  pub search_order: usize,
  pub smith_order: String,
  pub agree: bool,
}

pub fn compare_routes(
  level: &Level,
  hm: &TableBimodule,
  x: &Diagram,
  y: &Diagram,
  limit: usize,
) -> Result<ExtensionComparison> {
  let found: HashSet<Family> = extend_by_search(level, hm, x, y, limit)?.into_iter().collect();
  let k = extend_by_smith(level, hm, x, y);
  let zero: Family = positions(level, hm, x, y).iter().map(|&r| vec![0; r]).collect();
  let spanned = span(hm.q, &zero, &k.generators, limit);
  let agree = spanned.as_ref() == Some(&found) && k.order == BigInt::from(found.len());
  Ok(ExtensionComparison { search_order: found.len(), smith_order: k.order.to_string(), agree })
}

/// `(J_p m)_theta = J(m_{omega theta omega})`, an element of `M_p(DY, DX)`.
pub fn dual_family(
  level: &Level,
  hm: &TableBimodule,
  x: &Diagram,
  y: &Diagram,
  m: &Family,
) -> Family {
  let s = &level.shape;
  (0..s.objects.len())
    .map(|t| hm.apply_j(x.ranks[s.omega[t]], y.ranks[s.omega[t]], &m[s.omega[t]]))
    .collect()
}

/// `g_* m` for `g: Y -> Y'`.
pub fn push_family(hm: &TableBimodule, x: &Diagram, g: &Transformation, m: &Family) -> Family {
  (0..m.len()).map(|t| hm.push(g[t], x.ranks[t], &m[t])).collect()
}

/// `f^* m` for `f: X' -> X`.
pub fn pull_family(hm: &TableBimodule, y: &Diagram, f: &Transformation, m: &Family) -> Family {
  (0..m.len()).map(|t| hm.pull(f[t], y.ranks[t], &m[t])).collect()
}

/// `M_p(X, Y)` for split objects, enumerated from its Smith generators.
pub fn extension_elements(
  level: &Level,
  hm: &TableBimodule,
  x: &Diagram,
  y: &Diagram,
  limit: usize,
) -> Result<Vec<Family>> {
  let k = extend_by_smith(level, hm, x, y);
  let zero: Family = positions(level, hm, x, y).iter().map(|&r| vec![0; r]).collect();
  let mut v: Vec<Family> = span(hm.q, &zero, &k.generators, limit)
    .ok_or_else(|| Error::Unsupported(format!("M_p has order {}", k.order)))?
    .into_iter()
    .collect();
  v.sort();
  Ok(v)
}

pub fn dual_lands(
  level: &Level,
  hm: &TableBimodule,
  d: &Duality,
  x: &Diagram,
  y: &Diagram,
  m: &Family,
) -> bool {
  let (dx, dy) = (level.dual(x, d), level.dual(y, d));
  is_compatible(level, hm, &dy, &dx, &dual_family(level, hm, x, y, m))
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::wall::{hm_bimodule, ModCat, WallBimodule, WallRing};

  fn setup(ring: &WallRing, m: &WallBimodule, bound: usize) -> (ModCat, TableBimodule) {
    let mc = ModCat::new(ring, bound).unwrap();
    let hm = hm_bimodule(&mc, m).unwrap();
    (mc, hm)
  }

  #[test]
  fn level_two_is_the_bimodule() {
    let f3 = WallRing::prime_field(3);
    let (mc, hm) = setup(&f3, &WallBimodule::regular(&f3), 2);
    let level = Level::new(2, &mc);
    for (_, x) in level.oracle(2) {
      for (_, y) in level.oracle(2) {
        let t = level.shape.object([0, 1, 2]);
        let k = extend_by_smith(&level, &hm, &x, &y);
        assert_eq!(k.order, BigInt::from(3u32.pow((x.ranks[t] * y.ranks[t]) as u32)));
      }
    }
  }

  #[test]
  fn zero_bimodule_extends_to_zero() {
    let f2 = WallRing::prime_field(2);
    let (mc, hm) = setup(&f2, &WallBimodule::zero(&f2), 1);
    let level = Level::new(3, &mc);
    for (_, x) in level.oracle(1) {
      assert_eq!(extend_by_smith(&level, &hm, &x, &x).order, BigInt::from(1));
    }
  }

  #[test]
  fn routes_agree() {
    for (ring, bound) in
      [(WallRing::prime_field(2), 2), (WallRing::cyclic_sign(4), 1), (WallRing::prime_field(3), 1)]
    {
      let (mc, hm) = setup(&ring, &WallBimodule::regular(&ring), bound);
      for p in [2, 3] {
        let level = Level::new(p, &mc);
        let objs = level.oracle(bound);
        for (_, x) in &objs {
          for (_, y) in &objs {
            let cmp = compare_routes(&level, &hm, x, y, 1 << 20).unwrap();
            assert!(cmp.agree, "{} p={p} {cmp:?}", ring.name);
          }
        }
      }
    }
  }

  #[test]
  fn routes_agree_off_objects() {
    // zero maps between rank-one vertices: not exact, but the compatible families still make sense
    let z4 = WallRing::cyclic_sign(4);
    let (mc, hm) = setup(&z4, &WallBimodule::regular(&z4), 1);
    let level = Level::new(3, &mc);
    let s = &level.shape;
    let t = [s.object([0, 1, 2]), s.object([0, 1, 3]), s.object([0, 2, 3]), s.object([1, 2, 3])];
    let mut ranks = vec![0; s.objects.len()];
    for &v in &t {
      ranks[v] = 1;
    }
    let maps = s
      .arrows
      .iter()
      .map(|&(a, b)| {
        if a == b {
          mc.cat.id(ranks[a])
        } else {
          mc.morphism(ranks[a], ranks[b], &vec![0; ranks[a] * ranks[b]])
        }
      })
      .collect();
    let x = Diagram { ranks, maps };
    assert!(level.check(&x).is_err());
    let cmp = compare_routes(&level, &hm, &x, &x, 1 << 20).unwrap();
    assert!(cmp.agree);
  }

  #[test]
  fn duality_and_functoriality() {
    for ring in [WallRing::cyclic_sign(4), WallRing::prime_field(3)] {
      let (mc, hm) = setup(&ring, &WallBimodule::regular(&ring), 1);
      let d = mc.duality().unwrap();
      let level = Level::new(3, &mc);
      for (_, x) in level.oracle(1) {
        let ms = extension_elements(&level, &hm, &x, &x, 1 << 16).unwrap();
        let autos = level.isomorphisms(&x, &x, usize::MAX);
        for m in &ms {
          assert!(dual_lands(&level, &hm, &d, &x, &x, m));
          for g in &autos {
            assert!(is_compatible(&level, &hm, &x, &x, &push_family(&hm, &x, g, m)));
            assert!(is_compatible(&level, &hm, &x, &x, &pull_family(&hm, &x, g, m)));
          }
        }
      }
    }
  }
}
