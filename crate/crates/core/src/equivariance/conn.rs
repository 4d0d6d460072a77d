use std::{
  fmt,
  ops::{Add, Neg, Sub},
  sync::Arc,
};

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::lattice::SubgroupLattice;
use crate::error::{invalid, Error, Result};

/// An integer or rational extended by both infinities; the derived order puts `NegInf` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ext<T> {
  NegInf,
  Fin(T),
  PosInf,
}

pub type ExtInt = Ext<i64>;
pub type ExtRat = Ext<Rational64>;

impl<T> Ext<T> {
  pub fn is_finite(&self) -> bool {
    matches!(self, Ext::Fin(_))
  }

  pub fn finite(self) -> Option<T> {
    match self {
      Ext::Fin(t) => Some(t),
      _ => None,
    }
  }
}

impl<T: Add<Output = T>> Add for Ext<T> {
  type Output = Self;

  fn add(self, rhs: Self) -> Self {
    match (self, rhs) {
      (Ext::PosInf, _) | (_, Ext::PosInf) => Ext::PosInf,
      (Ext::NegInf, _) | (_, Ext::NegInf) => Ext::NegInf,
      (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
    }
  }
}

impl<T: Neg<Output = T>> Neg for Ext<T> {
  type Output = Self;

  fn neg(self) -> Self {
    match self {
      Ext::PosInf => Ext::NegInf,
      Ext::NegInf => Ext::PosInf,
      Ext::Fin(a) => Ext::Fin(-a),
    }
  }
}

impl<T: Add<Output = T> + Neg<Output = T>> Sub for Ext<T> {
  type Output = Self;

  fn sub(self, rhs: Self) -> Self {
    self + -rhs
  }
}

impl ExtInt {
  pub fn scale(self, k: i64) -> Self {
    match self {
      Ext::Fin(a) => Ext::Fin(a * k),
      other if k > 0 => other,
      _ => Ext::Fin(0),
    }
  }

  pub fn to_rat(self) -> ExtRat {
    match self {
      Ext::Fin(a) => Ext::Fin(Rational64::from_integer(a)),
      Ext::PosInf => Ext::PosInf,
      Ext::NegInf => Ext::NegInf,
    }
  }
}

impl ExtRat {
  pub fn floor(self) -> ExtInt {
    match self {
      Ext::Fin(a) => Ext::Fin(a.numer().div_floor(a.denom())),
      Ext::PosInf => Ext::PosInf,
      Ext::NegInf => Ext::NegInf,
    }
  }
}

impl<T: fmt::Display> fmt::Display for Ext<T> {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match self {
      Ext::NegInf => write!(f, "-inf"),
      Ext::Fin(a) => write!(f, "{a}"),
      Ext::PosInf => write!(f, "inf"),
    }
  }
}

fn min_of<T: Ord>(it: impl IntoIterator<Item = Ext<T>>) -> Ext<T> {
  it.into_iter().min().unwrap_or(Ext::PosInf)
}

/// A conjugation-invariant function on subgroups, stored once per conjugacy class.
#[derive(Clone, Debug)]
pub struct ClassFn<T> {
  lattice: Arc<SubgroupLattice>,
  values: Vec<Ext<T>>,
}

pub type ConnFn = ClassFn<i64>;
pub type ConnFnQ = ClassFn<Rational64>;

impl<T: PartialEq> PartialEq for ClassFn<T> {
  fn eq(&self, other: &Self) -> bool {
    same_group(&self.lattice, &other.lattice) && self.values == other.values
  }
}

fn same_group(a: &Arc<SubgroupLattice>, b: &Arc<SubgroupLattice>) -> bool {
  Arc::ptr_eq(a, b) || a.group() == b.group()
}

impl<T: Copy + Ord> ClassFn<T> {
  /// Values are listed per conjugacy class in lattice order.
  pub fn from_classes(lattice: &Arc<SubgroupLattice>, values: Vec<Ext<T>>) -> Result<Self> {
    if values.len() != lattice.num_classes() {
      return invalid(format!(
        "expected {} class values, got {}",
        lattice.num_classes(),
        values.len()
      ));
    }
    Ok(Self { lattice: lattice.clone(), values })
  }

  /// Builds from a value per subgroup, rejecting functions that are not conjugation-invariant.
  pub fn from_subgroups(lattice: &Arc<SubgroupLattice>, values: &[Ext<T>]) -> Result<Self> {
    if values.len() != lattice.len() {
      return invalid("one value per subgroup required");
    }
    for (h, v) in values.iter().enumerate() {
      if *v != values[lattice.class_rep(lattice.class_of(h))] {
        return invalid(format!("value at subgroup {h} is not conjugation-invariant"));
      }
    }
    let values = (0..lattice.num_classes()).map(|c| values[lattice.class_rep(c)]).collect();
    Ok(Self { lattice: lattice.clone(), values })
  }

  pub fn from_fn(lattice: &Arc<SubgroupLattice>, f: impl Fn(usize) -> Ext<T>) -> Self {
    let values = (0..lattice.num_classes()).map(|c| f(lattice.class_rep(c))).collect();
    Self { lattice: lattice.clone(), values }
  }

  pub fn constant(lattice: &Arc<SubgroupLattice>, v: Ext<T>) -> Self {
    Self { lattice: lattice.clone(), values: vec![v; lattice.num_classes()] }
  }

  pub fn lattice(&self) -> &Arc<SubgroupLattice> {
    &self.lattice
  }

  /// Value at the subgroup with lattice index `h`.
  pub fn at(&self, h: usize) -> Ext<T> {
    self.values[self.lattice.class_of(h)]
  }

  pub fn class_values(&self) -> &[Ext<T>] {
    &self.values
  }

  fn zip(&self, other: &Self, f: impl Fn(Ext<T>, Ext<T>) -> Ext<T>) -> Result<Self> {
    if !same_group(&self.lattice, &other.lattice) {
      return Err(Error::MixedGroups);
    }
    let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
    Ok(Self { lattice: self.lattice.clone(), values })
  }

  pub fn min(&self, other: &Self) -> Result<Self> {
    self.zip(other, |a, b| a.min(b))
  }

  /// Pointwise `self <= other`.
  pub fn le(&self, other: &Self) -> Result<bool> {
    if !same_group(&self.lattice, &other.lattice) {
      return Err(Error::MixedGroups);
    }
    Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
  }

  /// Pointwise minimum of a family; the empty family gives the constant `+inf`.
  pub fn min_all<'a>(
    lattice: &Arc<SubgroupLattice>,
    fs: impl IntoIterator<Item = &'a Self>,
  ) -> Result<Self>
  where
    T: 'a,
  {
    fs.into_iter().try_fold(Self::constant(lattice, Ext::PosInf), |acc, f| acc.min(f))
  }
}

impl<T: Copy + Ord + Add<Output = T>> ClassFn<T> {
  pub fn sum(&self, other: &Self) -> Result<Self> {
    self.zip(other, |a, b| a + b)
  }

  pub fn shift(&self, k: T) -> Self {
    Self {
      lattice: self.lattice.clone(),
      values: self.values.iter().map(|&v| v + Ext::Fin(k)).collect(),
    }
  }
}

impl ConnFn {
  pub fn to_rat(&self) -> ConnFnQ {
    ClassFn {
      lattice: self.lattice.clone(),
      values: self.values.iter().map(|v| v.to_rat()).collect(),
    }
  }
}

impl ConnFnQ {
  pub fn floor(&self) -> ConnFn {
    ClassFn {
      lattice: self.lattice.clone(),
      values: self.values.iter().map(|v| v.floor()).collect(),
    }
  }
}

impl<T: fmt::Display> fmt::Display for ClassFn<T> {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "(")?;
    for (i, v) in self.values.iter().enumerate() {
      if i > 0 {
        write!(f, ",")?;
      }
      write!(f, "{v}")?;
    }
    write!(f, ")")
  }
}

/// `nu(H) = sum_i min_{K <= H} (conn e_i^K - c(K))`, evaluated exactly and floored.
pub fn excision_bound(e_conns: &[ConnFn], c: &ConnFnQ) -> Result<ConnFn> {
  let lattice = c.lattice();
  for e in e_conns {
    if !same_group(e.lattice(), lattice) {
      return Err(Error::MixedGroups);
    }
  }
  let nu = ConnFnQ::from_fn(lattice, |h| {
    e_conns.iter().fold(Ext::Fin(Rational64::from_integer(0)), |acc, e| {
      acc + min_of(lattice.subgroups_below(h).map(|k| e.at(k).to_rat() - c.at(k)))
    })
  });
  Ok(nu.floor())
}

#[derive(Clone, Debug, PartialEq)]
pub struct WedgeBound {
  pub theta: ConnFn,
  /// Conjugacy classes where `v = +inf` makes the bound vacuous.
  pub unbounded: Vec<usize>,
}

/// `theta(H) = min{2 conn p^H, min_{K < H} conn p^K} - v(H)`.
pub fn wedge_bound(p_conn: &ConnFn, v: &ConnFn) -> Result<WedgeBound> {
  if !same_group(p_conn.lattice(), v.lattice()) {
    return Err(Error::MixedGroups);
  }
  let lattice = p_conn.lattice();
  let theta = ConnFn::from_fn(lattice, |h| {
    let proper = min_of(lattice.proper_subgroups(h).map(|k| p_conn.at(k)));
    let v = v.at(h);
    if v == Ext::PosInf {
      Ext::NegInf
    } else {
      p_conn.at(h).scale(2).min(proper) - v
    }
  });
  let unbounded =
    (0..lattice.num_classes()).filter(|&c| v.class_values()[c] == Ext::PosInf).collect();
  Ok(WedgeBound { theta, unbounded })
}

/// The connectivity claimed for the wedge-to-product comparison map:
/// `min{2 conn p^H - 1, min_{K < H} conn p^K}` with `conn p` the connectivity of the map `p`.
pub fn indexed_wedge_bound(p_conn: &ConnFn) -> ConnFn {
  let lattice = p_conn.lattice();
  ConnFn::from_fn(lattice, |h| {
    let proper = min_of(lattice.proper_subgroups(h).map(|k| p_conn.at(k)));
    (p_conn.at(h).scale(2) - Ext::Fin(1)).min(proper)
  })
}

/// The same comparison with the loop shift on the second term restored:
/// `min{2 conn p^H - 1, min_{K < H} conn p^K - 1}`.
pub fn indexed_wedge_bound_looped(p_conn: &ConnFn) -> ConnFn {
  let lattice = p_conn.lattice();
  ConnFn::from_fn(lattice, |h| {
    let proper = min_of(lattice.proper_subgroups(h).map(|k| p_conn.at(k) - Ext::Fin(1)));
    (p_conn.at(h).scale(2) - Ext::Fin(1)).min(proper)
  })
}

/// Lower bound `min_{K <= H} conn X^K` for the fixed points of a Dold-Thom space.
pub fn min_below(f: &ConnFn) -> ConnFn {
  let lattice = f.lattice();
  ConnFn::from_fn(lattice, |h| min_of(lattice.subgroups_below(h).map(|k| f.at(k))))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticityCertificate {
  pub rho: ConnFn,
  pub q: ConnFnQ,
  pub v: ConnFn,
}

impl AnalyticityCertificate {
  pub fn zero(lattice: &Arc<SubgroupLattice>) -> Self {
    Self {
      rho: ConnFn::constant(lattice, Ext::Fin(0)),
      q: ConnFnQ::constant(lattice, Ext::Fin(Rational64::from_integer(0))),
      v: ConnFn::constant(lattice, Ext::Fin(0)),
    }
  }
}

/// Subtracts the fixed-point connectivity gain of a sphere from `rho`.
pub fn certificate_shift(
  cert: &AnalyticityCertificate,
  gain: &ConnFn,
) -> Result<AnalyticityCertificate> {
  if !same_group(cert.rho.lattice(), gain.lattice()) {
    return Err(Error::MixedGroups);
  }
  if gain.class_values().iter().any(|v| !v.is_finite()) {
    return invalid("sphere gain must be finite");
  }
  Ok(AnalyticityCertificate {
    rho: cert.rho.zip(gain, |a, b| a - b)?,
    q: cert.q.clone(),
    v: cert.v.clone(),
  })
}

/// Gain `conn (S^V)^H + 1` from the measured fixed-point connectivities of a sphere.
pub fn sphere_gain(sphere_conn: &ConnFn) -> ConnFn {
  sphere_conn.shift(1)
}

/// `|I/H|`, the fixed-point dimension of the permutation sphere of a G-set.
pub fn permutation_sphere_gain(
  lattice: &Arc<SubgroupLattice>,
  i: &super::gset::FiniteGSet,
) -> ConnFn {
  ConnFn::from_fn(lattice, |h| Ext::Fin(i.analyze(lattice, h).orbits.len() as i64))
}

#[cfg(test)]
mod tests {
  use proptest::prelude::*;

  use super::*;
  use crate::equivariance::{FiniteGSet, FiniteGroup};

  fn lat(g: FiniteGroup) -> Arc<SubgroupLattice> {
    Arc::new(SubgroupLattice::new(&g).unwrap())
  }

  fn f(l: &Arc<SubgroupLattice>, v: &[i64]) -> ConnFn {
    ConnFn::from_classes(l, v.iter().map(|&x| Ext::Fin(x)).collect()).unwrap()
  }

  fn zero_q(l: &Arc<SubgroupLattice>) -> ConnFnQ {
    ConnFnQ::constant(l, Ext::Fin(Rational64::from_integer(0)))
  }

  #[test]
  fn pointwise_algebra() {
    let l = lat(FiniteGroup::cyclic(2));
    assert_eq!(f(&l, &[2, 1]).min(&f(&l, &[3, 0])).unwrap(), f(&l, &[2, 0]));
    assert_eq!(f(&l, &[2, 1]).shift(1), f(&l, &[3, 2]));
    assert_eq!(ConnFn::min_all(&l, []).unwrap(), ConnFn::constant(&l, Ext::PosInf));
    let inf = ConnFn::constant(&l, Ext::PosInf);
    assert_eq!(inf.sum(&f(&l, &[1, 1])).unwrap(), inf);
    assert_eq!(inf.min(&f(&l, &[4, 5])).unwrap(), f(&l, &[4, 5]));
    assert!(f(&l, &[1, 1]).le(&f(&l, &[1, 2])).unwrap());
  }

  #[test]
  fn mixed_groups_are_rejected() {
    let a = lat(FiniteGroup::cyclic(2));
    let b = lat(FiniteGroup::cyclic(3));
    assert_eq!(f(&a, &[0, 0]).min(&f(&b, &[0, 0])), Err(Error::MixedGroups));
    assert!(excision_bound(&[f(&a, &[0, 0])], &zero_q(&b)).is_err());
  }

  #[test]
  fn non_invariant_functions_are_rejected() {
    let l = lat(FiniteGroup::symmetric3());
    let mut vals = vec![Ext::Fin(0i64); l.len()];
    vals[1] = Ext::Fin(5);
    assert!(ConnFn::from_subgroups(&l, &vals).is_err());
  }

  #[test]
  fn excision_examples() {
    let l = lat(FiniteGroup::cyclic(2));
    let nu = excision_bound(&[f(&l, &[2, 1]), f(&l, &[3, 2])], &zero_q(&l)).unwrap();
    assert_eq!(nu, f(&l, &[5, 3]));
    let e = f(&l, &[1, 4]);
    assert_eq!(excision_bound(&[e.clone()], &zero_q(&l)).unwrap(), min_below(&e));
  }

  #[test]
  fn rational_c_floors() {
    let l = lat(FiniteGroup::trivial());
    let c = ConnFnQ::constant(&l, Ext::Fin(Rational64::new(1, 2)));
    assert_eq!(excision_bound(&[f(&l, &[3])], &c).unwrap(), f(&l, &[2]));
    assert_eq!(excision_bound(&[f(&l, &[3]), f(&l, &[3])], &c).unwrap(), f(&l, &[5]));
  }

  #[test]
  fn wedge_examples() {
    let l = lat(FiniteGroup::cyclic(2));
    let w = wedge_bound(&f(&l, &[3, 1]), &f(&l, &[0, 0])).unwrap();
    assert_eq!(w.theta, f(&l, &[6, 2]));
    assert!(w.unbounded.is_empty());
    let t = lat(FiniteGroup::trivial());
    assert_eq!(wedge_bound(&f(&t, &[4]), &f(&t, &[1])).unwrap().theta, f(&t, &[7]));
    let v = ConnFn::from_classes(&l, vec![Ext::Fin(0), Ext::PosInf]).unwrap();
    let w = wedge_bound(&f(&l, &[3, 1]), &v).unwrap();
    assert_eq!(w.unbounded, vec![1]);
    assert_eq!(w.theta.at(1), Ext::NegInf);
  }

  #[test]
  fn indexed_wedge_bounds() {
    let l = lat(FiniteGroup::cyclic(2));
    assert_eq!(indexed_wedge_bound(&f(&l, &[2, 2])), f(&l, &[3, 2]));
    assert_eq!(indexed_wedge_bound_looped(&f(&l, &[2, 2])), f(&l, &[3, 1]));
  }

  #[test]
  fn certificate_shift_examples() {
    let l = lat(FiniteGroup::cyclic(2));
    let cert = AnalyticityCertificate::zero(&l);
    let shifted = certificate_shift(&cert, &f(&l, &[1, 0])).unwrap();
    assert_eq!(shifted.rho, f(&l, &[-1, 0]));
    assert_eq!(shifted.q, cert.q);
    assert_eq!(certificate_shift(&cert, &f(&l, &[0, 0])).unwrap(), cert);
    let bad = ConnFn::constant(&l, Ext::PosInf);
    assert!(certificate_shift(&cert, &bad).is_err());
  }

  #[test]
  fn regular_sphere_gain() {
    let g = FiniteGroup::cyclic(2);
    let l = lat(g.clone());
    assert_eq!(permutation_sphere_gain(&l, &FiniteGSet::free(&g, 1)), f(&l, &[2, 1]));
    assert_eq!(permutation_sphere_gain(&l, &FiniteGSet::free(&g, 2)), f(&l, &[4, 2]));
  }

  fn c2_fn() -> impl Strategy<Value = (i64, i64)> {
    (-3i64..8, -3i64..8)
  }

  proptest! {
    #[test]
    fn excision_is_monotone(a in c2_fn(), b in c2_fn(), bump in (0i64..3, 0i64..3), c in -2i64..3) {
      let l = lat(FiniteGroup::cyclic(2));
      let cq = ConnFnQ::constant(&l, Ext::Fin(Rational64::from_integer(c)));
      let low = excision_bound(&[f(&l, &[a.0, a.1]), f(&l, &[b.0, b.1])], &cq).unwrap();
      let high = excision_bound(&[f(&l, &[a.0 + bump.0, a.1 + bump.1]), f(&l, &[b.0, b.1])], &cq).unwrap();
      prop_assert!(low.le(&high).unwrap());
    }

    #[test]
    fn wedge_bound_at_most_twice(p in c2_fn()) {
      let l = lat(FiniteGroup::cyclic(2));
      let pc = f(&l, &[p.0, p.1]);
      let w = wedge_bound(&pc, &f(&l, &[0, 0])).unwrap();
      prop_assert!(w.theta.le(&pc.sum(&pc).unwrap()).unwrap());
    }

    #[test]
    fn results_are_class_functions(vals in proptest::collection::vec(-2i64..6, 4)) {
      let l = lat(FiniteGroup::symmetric3());
      let e = f(&l, &vals);
      let nu = excision_bound(&[e.clone()], &zero_q(&l)).unwrap();
      for cls in l.classes() {
        for &h in cls {
          prop_assert_eq!(nu.at(h), nu.at(cls[0]));
        }
      }
    }
  }
}
