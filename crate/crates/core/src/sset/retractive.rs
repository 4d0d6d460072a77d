use std::{collections::HashMap, sync::Arc};

use super::{
  build::{self, product, pushout},
  set::{Cell, Simplex, SimplicialGSet, SimplicialMap},
};
use crate::{
  equivariance::FiniteGSet,
  error::{invalid, Error, Result},
};

/// A space `X` over and under a base `B`: `p: X -> B`, `s: B -> X` with `p s = id`.
#[derive(Clone, Debug)]
pub struct RetractiveGSset {
  pub total: Arc<SimplicialGSet>,
  pub base: Arc<SimplicialGSet>,
  pub p: SimplicialMap,
  pub s: SimplicialMap,
}

impl RetractiveGSset {
  pub fn new(p: SimplicialMap, s: SimplicialMap) -> Result<Self> {
    if !Arc::ptr_eq(&p.source, &s.target) || !Arc::ptr_eq(&p.target, &s.source) {
      return invalid("p and s must go between the same spaces");
    }
    p.validate()?;
    s.validate()?;
    s.check_injective()?;
    for c in s.source.all_cells() {
      if p.apply(s.cell_image(c)) != Simplex::nondegenerate(c) {
        return invalid(format!("p s is not the identity on {c:?}"));
      }
    }
    Ok(Self { total: p.source.clone(), base: p.target.clone(), p, s })
  }

  /// A pointed space viewed over the one-point base.
  pub fn over_point(x: &Arc<SimplicialGSet>) -> Self {
    let pt = Arc::new(build::point(x.group()));
    let p = SimplicialMap::constant(x, &pt);
    let s = SimplicialMap::constant(&pt, x);
    Self { total: x.clone(), base: pt, p, s }
  }

  /// `X x B` over `B` with the projection and the basepoint section.
  pub fn product_with_base(x: &Arc<SimplicialGSet>, b: &Arc<SimplicialGSet>) -> Result<Self> {
    let prod = product(&[x.clone(), b.clone()], None)?;
    let p = prod.projection(1);
    let s = SimplicialMap::from_fn(b, &prod.space, |c| {
      prod.tuple(&[Simplex::basepoint(c.dim), Simplex::nondegenerate(c)]).unwrap()
    });
    Self::new(p, s)
  }
}

fn same_base(x: &RetractiveGSset, y: &RetractiveGSset) -> bool {
  Arc::ptr_eq(&x.base, &y.base) || *x.base == *y.base
}

/// The fiberwise smash product: `X x_B Y` with `X v_B Y` collapsed onto `B`.
pub fn smash_over_base(x: &RetractiveGSset, y: &RetractiveGSset) -> Result<RetractiveGSset> {
  if !same_base(x, y) {
    return Err(Error::MismatchedBase);
  }
  let b = &x.base;
  let prod = product(&[x.total.clone(), y.total.clone()], None)?;
  let keep: Vec<Vec<bool>> = (0..=prod.space.dim())
    .map(|d| {
      prod
        .space
        .cells(d)
        .map(|c| {
          let comps = prod.components(c);
          x.p.apply(&comps[0]) == y.p.apply(&comps[1])
        })
        .collect()
    })
    .collect();
  let (fiber_product, incl) = prod.space.subcomplex(&keep)?;
  let back: HashMap<Cell, Cell> =
    fiber_product.all_cells().map(|c| (incl.cell_image(c).cell, c)).collect();
  let to_fp = |s: Simplex| Simplex { surj: s.surj, cell: back[&s.cell] };
  let fiber_wedge = pushout(&x.s, &y.s)?;
  let w = &fiber_wedge.space;
  let y_cells = |c: Cell| c.idx < y.total.num_cells(c.dim);
  let x_origin: HashMap<Cell, Cell> = x
    .total
    .all_cells()
    .filter(|&xc| !fiber_wedge.from_x.cell_image(xc).is_degenerate())
    .map(|xc| (fiber_wedge.from_x.cell_image(xc).cell, xc))
    .collect();
  let x_cell_of = |c: Cell| x_origin[&c];
  let wedge_to_fp = SimplicialMap::from_fn(w, &fiber_product, |c| {
    if y_cells(c) {
      let yc = Simplex::nondegenerate(c);
      let bx = x.s.apply(&y.p.apply(&yc));
      to_fp(prod.tuple(&[bx, yc]).unwrap())
    } else {
      let xc = Simplex::nondegenerate(x_cell_of(c));
      let by = y.s.apply(&x.p.apply(&xc));
      to_fp(prod.tuple(&[xc, by]).unwrap())
    }
  });
  let wedge_to_base = SimplicialMap::from_fn(w, b, |c| {
    if y_cells(c) {
      y.p.apply(&Simplex::nondegenerate(c))
    } else {
      x.p.apply(&Simplex::nondegenerate(x_cell_of(c)))
    }
  });
  let result = pushout(&wedge_to_fp, &wedge_to_base)?;
  let total = result.space.clone();
  let fp_origin: HashMap<Cell, Cell> = fiber_product
    .all_cells()
    .filter(|&f| !result.from_x.cell_image(f).is_degenerate())
    .map(|f| (result.from_x.cell_image(f).cell, f))
    .collect();
  let p = SimplicialMap::from_fn(&total, b, |c| {
    if c.idx < b.num_cells(c.dim) {
      Simplex::nondegenerate(c)
    } else {
      x.p.apply(&prod.components(incl.cell_image(fp_origin[&c]).cell)[0])
    }
  });
  let s = result.from_y.clone();
  RetractiveGSset::new(p, s)
}

/// `S^{R[I]}_B X = X smash_B (S^{R[I]} x B)`.
pub fn suspension_over_base(x: &RetractiveGSset, i: &FiniteGSet) -> Result<RetractiveGSset> {
  let sphere = build::rep_sphere(x.base.group(), i)?;
  let sb = RetractiveGSset::product_with_base(&sphere, &x.base)?;
  smash_over_base(x, &sb)
}
