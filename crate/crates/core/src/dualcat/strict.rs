use std::collections::HashMap;

use serde::Serialize;

use super::cat::{check_equivalence, is_natural, Duality, EquivalenceReport, FinCat, Functor};
use crate::error::{invalid, Error, Result};

/// The strictification `DC` of a category with duality.
///
/// Objects are triples `(c, d, phi)` with `phi: d -> Dc` an isomorphism; morphisms
/// `(c, d, phi) -> (c', d', phi')` are pairs `(a: c -> c', b: d' -> d)` with `phi b = D(a) phi'`.
#[derive(Clone, Debug)]
pub struct Strictified {
  pub cat: FinCat,
  pub duality: Duality,
  pub objects: Vec<(usize, usize, usize)>,
  pub morphisms: Vec<(usize, usize)>,
  pub projection: Functor,
  index: HashMap<(usize, usize, usize, usize), usize>,
  obj_index: HashMap<(usize, usize, usize), usize>,
}

impl Strictified {
  pub fn object(&self, c: usize, d: usize, phi: usize) -> Option<usize> {
    self.obj_index.get(&(c, d, phi)).copied()
  }

  /// The morphism `(a, b): x -> y`, if it satisfies the compatibility condition.
  pub fn morphism(&self, x: usize, y: usize, a: usize, b: usize) -> Option<usize> {
    self.index.get(&(x, y, a, b)).copied()
  }
}

pub fn strictify(c: &FinCat, d: &Duality) -> Result<Strictified> {
  d.validate(c)?;
  let mut objects = Vec::new();
  for x in 0..c.num_objects() {
    for y in 0..c.num_objects() {
      for &phi in &c.isos(y, d.obj[x]) {
        objects.push((x, y, phi));
      }
    }
  }
  let obj_index: HashMap<_, _> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
  let mut arrows = Vec::new();
  let mut morphisms = Vec::new();
  let mut index = HashMap::new();
  for (xi, &(cx, dx, px)) in objects.iter().enumerate() {
    for (yi, &(cy, dy, py)) in objects.iter().enumerate() {
      for &a in c.hom(cx, cy) {
        for &b in c.hom(dy, dx) {
          if c.compose(px, b) == c.compose(d.mor[a], py) {
            index.insert((xi, yi, a, b), arrows.len());
            arrows.push((xi, yi));
            morphisms.push((a, b));
          }
        }
      }
    }
  }
  let ids = (0..objects.len())
    .map(|x| {
      let (cx, dx, _) = objects[x];
      index[&(x, x, c.id(cx), c.id(dx))]
    })
    .collect();
  let cat = FinCat::from_fn(objects.len(), arrows.clone(), ids, |g, f| {
    let (a, b) = morphisms[g];
    let (a2, b2) = morphisms[f];
    index.get(&(arrows[f].0, arrows[g].1, c.compose(a, a2), c.compose(b2, b))).copied()
  })?;
  let dual_obj: Vec<usize> = objects
    .iter()
    .map(|&(x, y, phi)| obj_index[&(y, x, c.compose(d.mor[phi], d.eta[x]))])
    .collect();
  let dual_mor: Vec<usize> = (0..morphisms.len())
    .map(|f| {
      let (x, y) = arrows[f];
      let (a, b) = morphisms[f];
      index
        .get(&(dual_obj[y], dual_obj[x], b, a))
        .copied()
        .ok_or_else(|| Error::CheckFailed(format!("dual of morphism {f} is not compatible")))
    })
    .collect::<Result<_>>()?;
  let duality = Duality::strict(&cat, dual_obj, dual_mor)?;
  if !duality.is_strict(&cat) {
    return Err(Error::CheckFailed("strictified duality is not strict".into()));
  }
  let projection = Functor::new(
    &cat,
    c,
    objects.iter().map(|o| o.0).collect(),
    morphisms.iter().map(|m| m.0).collect(),
  )?;
  Ok(Strictified { cat, duality, objects, morphisms, projection, index, obj_index })
}

/// The category `sym A` of symmetric forms in a category with strict duality.
///
/// Objects are `(a, k)` with `k: a -> Da` an isomorphism and `D(k) = k`;
/// morphisms `f: (a, k) -> (a', k')` satisfy `k = D(f) k' f`.
#[derive(Clone, Debug)]
pub struct SymCat {
  pub cat: FinCat,
  pub objects: Vec<(usize, usize)>,
  pub underlying: Vec<usize>,
  index: HashMap<(usize, usize, usize), usize>,
}

impl SymCat {
  pub fn object(&self, a: usize, k: usize) -> Option<usize> {
    self.objects.iter().position(|&o| o == (a, k))
  }

  pub fn morphism(&self, x: usize, y: usize, f: usize) -> Option<usize> {
    self.index.get(&(x, y, f)).copied()
  }
}

pub fn sym(a: &FinCat, d: &Duality) -> Result<SymCat> {
  if !d.is_strict(a) {
    return invalid("sym requires a strict duality");
  }
  let objects: Vec<(usize, usize)> = (0..a.num_objects())
    .flat_map(|x| a.isos(x, d.obj[x]).into_iter().filter(|&k| d.mor[k] == k).map(move |k| (x, k)))
    .collect();
  let mut arrows = Vec::new();
  let mut underlying = Vec::new();
  let mut index = HashMap::new();
  for (xi, &(x, k)) in objects.iter().enumerate() {
    for (yi, &(y, k2)) in objects.iter().enumerate() {
      for &f in a.hom(x, y) {
        if a.compose_path(&[f, k2, d.mor[f]]) == k {
          index.insert((xi, yi, f), arrows.len());
          arrows.push((xi, yi));
          underlying.push(f);
        }
      }
    }
  }
  let ids = objects.iter().enumerate().map(|(xi, &(x, _))| index[&(xi, xi, a.id(x))]).collect();
  let cat = FinCat::from_fn(objects.len(), arrows.clone(), ids, |g, f| {
    index.get(&(arrows[f].0, arrows[g].1, a.compose(underlying[g], underlying[f]))).copied()
  })?;
  Ok(SymCat { cat, objects, underlying, index })
}

#[derive(Clone, Debug, Serialize)]
pub struct SymReport {
  pub sym_objects: usize,
  pub sym_dc_objects: usize,
  pub p_after_s_is_identity: bool,
  pub s_after_p_iso_natural: bool,
  pub p_equivalence: EquivalenceReport,
}

impl SymReport {
  pub fn holds(&self) -> bool {
    self.p_after_s_is_identity && self.s_after_p_iso_natural && self.p_equivalence.is_equivalence()
  }
}

/// The functors `p: sym DA -> sym A` and `s: sym A -> sym DA` for a strict duality, with
/// the natural isomorphism `s p => id` whose component at `((c, d, phi), k)` is `(id_c, phi)`.
pub struct SymEquivalences {
  pub dual: Strictified,
  pub sym_a: SymCat,
  pub sym_da: SymCat,
  pub p: Functor,
  pub s: Functor,
  pub witness: Vec<usize>,
}

pub fn sym_equivalences(a: &FinCat, d: &Duality) -> Result<SymEquivalences> {
  let dual = strictify(a, d)?;
  let sym_a = sym(a, d)?;
  let sym_da = sym(&dual.cat, &dual.duality)?;
  let mut p_obj = Vec::new();
  for &(x, k) in &sym_da.objects {
    let (c, _, phi) = dual.objects[x];
    let (k1, k2) = dual.morphisms[k];
    if k1 != k2 {
      return Err(Error::CheckFailed("self-dual morphism with distinct components".into()));
    }
    let form = a.compose(phi, k1);
    p_obj.push(
      sym_a.object(c, form).ok_or_else(|| Error::CheckFailed("p lands outside sym A".into()))?,
    );
  }
  let p_mor = (0..sym_da.cat.num_morphisms())
    .map(|f| {
      let (x, y) = (sym_da.cat.src(f), sym_da.cat.tgt(f));
      sym_a
        .morphism(p_obj[x], p_obj[y], dual.morphisms[sym_da.underlying[f]].0)
        .ok_or_else(|| Error::CheckFailed("p is not defined on a morphism".into()))
    })
    .collect::<Result<_>>()?;
  let p = Functor::new(&sym_da.cat, &sym_a.cat, p_obj, p_mor)?;
  let mut s_obj = Vec::new();
  for &(x, k) in &sym_a.objects {
    let dx = d.obj[x];
    let obj = dual.object(x, dx, a.id(dx)).expect("standard object");
    let k_d = dual.morphism(obj, dual.duality.obj[obj], k, k).expect("standard form");
    s_obj.push(
      sym_da.object(obj, k_d).ok_or_else(|| Error::CheckFailed("s lands outside sym DA".into()))?,
    );
  }
  let s_mor = (0..sym_a.cat.num_morphisms())
    .map(|f| {
      let (x, y) = (sym_a.cat.src(f), sym_a.cat.tgt(f));
      let g = sym_a.underlying[f];
      let (ox, oy) = (sym_da.objects[s_obj[x]].0, sym_da.objects[s_obj[y]].0);
      let gd = dual.morphism(ox, oy, g, d.mor[g]).expect("D(f) pairs with f");
      sym_da
        .morphism(s_obj[x], s_obj[y], gd)
        .ok_or_else(|| Error::CheckFailed("s is not defined on a morphism".into()))
    })
    .collect::<Result<_>>()?;
  let s = Functor::new(&sym_a.cat, &sym_da.cat, s_obj, s_mor)?;
  let sp = p.then(&s);
  let witness = (0..sym_da.cat.num_objects())
    .map(|y| {
      let x = sym_da.objects[y].0;
      let (c, _, phi) = dual.objects[x];
      let from = sym_da.objects[sp.obj[y]].0;
      let u = dual.morphism(from, x, a.id(c), phi).expect("(id, phi) is compatible");
      sym_da
        .morphism(sp.obj[y], y, u)
        .ok_or_else(|| Error::CheckFailed("(id, phi) is not a form map".into()))
    })
    .collect::<Result<_>>()?;
  Ok(SymEquivalences { dual, sym_a, sym_da, p, s, witness })
}

impl SymEquivalences {
  pub fn report(&self) -> SymReport {
    let sp = self.p.then(&self.s);
    let id = Functor::identity(&self.sym_da.cat);
    SymReport {
      sym_objects: self.sym_a.cat.num_objects(),
      sym_dc_objects: self.sym_da.cat.num_objects(),
      p_after_s_is_identity: self.s.then(&self.p) == Functor::identity(&self.sym_a.cat),
      s_after_p_iso_natural: is_natural(
        &self.sym_da.cat,
        &self.sym_da.cat,
        &sp,
        &id,
        &self.witness,
        true,
      ),
      p_equivalence: check_equivalence(&self.sym_da.cat, &self.sym_a.cat, &self.p),
    }
  }
}

/// The data produced from an equivalence `F: A -> B` commuting with strict dualities.
pub struct StrictInverse {
  /// `(a_b, eps_b)` for every object `b` of `B`.
  pub choices: Vec<(usize, usize)>,
  pub inverse: Functor,
  /// `xi_b: F' D b -> D F' b`.
  pub xi: Vec<usize>,
  pub dual_a: Strictified,
  pub dual_b: Strictified,
  pub dual_inverse: Functor,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrictInverseReport {
  pub xi_natural: bool,
  pub xi_self_dual: bool,
  pub commutes_with_duality: bool,
  pub dual_inverse_equivalence: EquivalenceReport,
}

impl StrictInverseReport {
  pub fn holds(&self) -> bool {
    self.xi_natural
      && self.xi_self_dual
      && self.commutes_with_duality
      && self.dual_inverse_equivalence.is_equivalence()
  }
}

pub fn strict_inverse(
  a: &FinCat,
  da: &Duality,
  b: &FinCat,
  db: &Duality,
  f: &Functor,
) -> Result<StrictInverse> {
  f.validate(a, b)?;
  if !da.is_strict(a) || !db.is_strict(b) || !f.commutes_with(da, db) {
    return invalid("F must commute with strict dualities");
  }
  let eq = check_equivalence(a, b, f);
  if !eq.is_equivalence() {
    return Err(Error::CheckFailed(format!("F is not an equivalence: {:?}", eq.failure)));
  }
  let choices: Vec<(usize, usize)> =
    eq.witnesses.iter().map(|w| w.expect("essential surjectivity")).collect();
  let mut preimage = HashMap::new();
  for h in 0..a.num_morphisms() {
    preimage.insert((a.src(h), a.tgt(h), f.mor[h]), h);
  }
  let pull = |x: usize, y: usize, g: usize| preimage[&(x, y, g)];
  let eps_inv: Vec<usize> = choices.iter().map(|&(_, e)| b.inverse(e).unwrap()).collect();
  let inv_obj: Vec<usize> = choices.iter().map(|c| c.0).collect();
  let inv_mor: Vec<usize> = (0..b.num_morphisms())
    .map(|g| {
      let (x, y) = (b.src(g), b.tgt(g));
      pull(inv_obj[x], inv_obj[y], b.compose_path(&[choices[x].1, g, eps_inv[y]]))
    })
    .collect();
  let inverse = Functor::new(b, a, inv_obj.clone(), inv_mor)?;
  let xi = (0..b.num_objects())
    .map(|y| {
      let dy = db.obj[y];
      pull(inv_obj[dy], da.obj[inv_obj[y]], b.compose(db.mor[choices[y].1], choices[dy].1))
    })
    .collect::<Vec<_>>();
  let dual_a = strictify(a, da)?;
  let dual_b = strictify(b, db)?;
  let obj = dual_b
    .objects
    .iter()
    .map(|&(x, y, phi)| {
      let form = a.compose(xi[x], inverse.mor[phi]);
      dual_a
        .object(inv_obj[x], inv_obj[y], form)
        .ok_or_else(|| Error::CheckFailed("D(F', xi) object".into()))
    })
    .collect::<Result<Vec<_>>>()?;
  let mor = (0..dual_b.cat.num_morphisms())
    .map(|g| {
      let (x, y) = (dual_b.cat.src(g), dual_b.cat.tgt(g));
      let (p, q) = dual_b.morphisms[g];
      dual_a
        .morphism(obj[x], obj[y], inverse.mor[p], inverse.mor[q])
        .ok_or_else(|| Error::CheckFailed("D(F', xi) morphism".into()))
    })
    .collect::<Result<Vec<_>>>()?;
  let dual_inverse = Functor::new(&dual_b.cat, &dual_a.cat, obj, mor)?;
  Ok(StrictInverse { choices, inverse, xi, dual_a, dual_b, dual_inverse })
}

impl StrictInverse {
  pub fn report(&self, a: &FinCat, da: &Duality, b: &FinCat, db: &Duality) -> StrictInverseReport {
    let inv = &self.inverse;
    let xi_natural = (0..b.num_morphisms()).all(|g| {
      let (x, y) = (b.src(g), b.tgt(g));
      a.is_iso(self.xi[x])
        && a.compose(self.xi[x], inv.mor[db.mor[g]]) == a.compose(da.mor[inv.mor[g]], self.xi[y])
    });
    let xi_self_dual = (0..b.num_objects()).all(|x| self.xi[db.obj[x]] == da.mor[self.xi[x]]);
    StrictInverseReport {
      xi_natural,
      xi_self_dual,
      commutes_with_duality: self
        .dual_inverse
        .commutes_with(&self.dual_b.duality, &self.dual_a.duality),
      dual_inverse_equivalence: check_equivalence(
        &self.dual_b.cat,
        &self.dual_a.cat,
        &self.dual_inverse,
      ),
    }
  }
}

/// The functor `A -> DA`, `a -> (a, Da, id)`, `f -> (f, Df)`, for a strict duality.
pub fn standard_embedding(a: &FinCat, d: &Duality, dual: &Strictified) -> Result<Functor> {
  let obj: Vec<usize> = (0..a.num_objects())
    .map(|x| {
      dual
        .object(x, d.obj[x], a.id(d.obj[x]))
        .ok_or_else(|| Error::CheckFailed("standard object".into()))
    })
    .collect::<Result<_>>()?;
  let mor = (0..a.num_morphisms())
    .map(|f| {
      dual
        .morphism(obj[a.src(f)], obj[a.tgt(f)], f, d.mor[f])
        .ok_or_else(|| Error::CheckFailed("standard morphism".into()))
    })
    .collect::<Result<_>>()?;
  Functor::new(a, &dual.cat, obj, mor)
}

/// Product of two finite categories; the morphism `(f, g)` is `f * |B| + g`.
pub fn product(a: &FinCat, b: &FinCat) -> FinCat {
  let (na, nb) = (a.num_objects(), b.num_objects());
  let mb = b.num_morphisms();
  let arrows = (0..a.num_morphisms() * mb)
    .map(|k| {
      let (f, g) = (k / mb, k % mb);
      (a.src(f) * nb + b.src(g), a.tgt(f) * nb + b.tgt(g))
    })
    .collect();
  let ids = (0..na * nb).map(|o| a.id(o / nb) * mb + b.id(o % nb)).collect();
  FinCat::from_fn(na * nb, arrows, ids, |h, k| {
    Some(a.compose(h / mb, k / mb) * mb + b.compose(h % mb, k % mb))
  })
  .expect("product category")
}

pub fn product_duality(a: &FinCat, da: &Duality, b: &FinCat, db: &Duality) -> Result<Duality> {
  let (nb, mb) = (b.num_objects(), b.num_morphisms());
  let cat = product(a, b);
  let obj = (0..a.num_objects() * nb).map(|o| da.obj[o / nb] * nb + db.obj[o % nb]).collect();
  let mor = (0..a.num_morphisms() * mb).map(|k| da.mor[k / mb] * mb + db.mor[k % mb]).collect();
  let eta = (0..a.num_objects() * nb).map(|o| da.eta[o / nb] * mb + db.eta[o % nb]).collect();
  Duality::new(&cat, obj, mor, eta)
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::equivariance::FiniteGroup;

  fn s3() -> (FinCat, Duality) {
    let g = FiniteGroup::symmetric3();
    let c = FinCat::group(&g);
    let d = Duality::group_inverse(&g, &c);
    (c, d)
  }

  #[test]
  fn strictification_projects_to_an_equivalence() {
    let (c, d) = s3();
    let dc = strictify(&c, &d).unwrap();
    assert_eq!(dc.cat.num_objects(), 6);
    assert!(check_equivalence(&dc.cat, &c, &dc.projection).is_equivalence());
  }

  #[test]
  fn nonstrict_duality_strictifies() {
    let g = FiniteGroup::cyclic(4);
    let c = FinCat::group(&g);
    let inv: Vec<usize> = g.elements().map(|x| g.inv(x)).collect();
    let d = Duality::new(&c, vec![0], inv, vec![2]).unwrap();
    assert!(!d.is_strict(&c));
    let dc = strictify(&c, &d).unwrap();
    assert!(dc.duality.is_strict(&dc.cat));
    assert!(check_equivalence(&dc.cat, &c, &dc.projection).is_equivalence());
  }

  #[test]
  fn sym_of_s3_with_inversion() {
    let (c, d) = s3();
    let s = sym(&c, &d).unwrap();
    // self-dual elements under inversion are the involutions and the identity
    assert_eq!(s.objects.len(), 4);
    let eq = sym_equivalences(&c, &d).unwrap();
    assert!(eq.report().holds(), "{:?}", eq.report());
  }

  #[test]
  fn strict_inverse_of_the_standard_embedding() {
    let c = FinCat::codiscrete(2);
    let d = Duality::codiscrete(2, vec![1, 0]).unwrap();
    let dc = strictify(&c, &d).unwrap();
    let f = standard_embedding(&c, &d, &dc).unwrap();
    assert!(f.commutes_with(&d, &dc.duality));
    let inv = strict_inverse(&c, &d, &dc.cat, &dc.duality, &f).unwrap();
    let rep = inv.report(&c, &d, &dc.cat, &dc.duality);
    assert!(rep.holds(), "{rep:?}");
  }
}
