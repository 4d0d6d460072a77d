use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::{
  equivariance::{FiniteGroup, SubgroupLattice},
  error::{invalid, Error, Result},
  homology::{smith_normal_form, Presented},
};

/// Coordinates in `Z/d_1 + ... + Z/d_n`; `d_i = 0` marks a free summand.
pub type Elem = Vec<i64>;

/// A finitely generated abelian group with additive G-action, `g` acting by `action[g]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAbelianGroup {
  group: FiniteGroup,
  name: String,
  orders: Vec<u64>,
  action: Vec<Vec<Vec<i64>>>,
}

impl GAbelianGroup {
  pub fn new(group: &FiniteGroup, orders: Vec<u64>, action: Vec<Vec<Vec<i64>>>) -> Result<Self> {
    let n = orders.len();
    if action.len() != group.order()
      || action.iter().any(|a| a.len() != n || a.iter().any(|r| r.len() != n))
    {
      return invalid("one square action matrix per group element required");
    }
    if orders.contains(&0) && orders.iter().any(|&d| d != 0) {
      return Err(Error::Unsupported("mixed free and torsion coefficients".into()));
    }
    if orders.contains(&1) {
      return invalid("cyclic orders must be 0 or at least 2");
    }
    let m = Self { group: group.clone(), name: format!("{orders:?}"), orders, action };
    m.validate()?;
    Ok(m)
  }

  fn validate(&self) -> Result<()> {
    let n = self.orders.len();
    let basis = |j: usize| -> Elem { (0..n).map(|i| (i == j) as i64).collect() };
    for g in self.group.elements() {
      for (j, &d) in self.orders.iter().enumerate() {
        if d != 0 {
          let col: Elem = (0..n).map(|i| self.action[g][i][j] * d as i64).collect();
          if !self.is_zero(&col) {
            return invalid(format!("element {g} does not define a homomorphism"));
          }
        }
      }
      for h in self.group.elements() {
        for j in 0..n {
          let lhs = self.act(self.group.mul(g, h), &basis(j));
          let rhs = self.act(g, &self.act(h, &basis(j)));
          if lhs != rhs {
            return invalid(format!("action is not associative at ({g}, {h})"));
          }
        }
      }
    }
    for j in 0..n {
      if self.act(self.group.id(), &basis(j)) != self.reduce(basis(j)) {
        return invalid("identity does not act trivially");
      }
    }
    Ok(())
  }

  pub fn trivial(group: &FiniteGroup, orders: &[u64]) -> Self {
    let n = orders.len();
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    Self::new(group, orders.to_vec(), vec![id; group.order()]).unwrap()
  }

  /// `Z/n` (or `Z` for `n = 0`) with `g` acting by `chi[g]`.
  pub fn cyclic(group: &FiniteGroup, n: u64, chi: &[i64]) -> Result<Self> {
    Self::new(group, vec![n], chi.iter().map(|&c| vec![vec![c]]).collect())
  }

  /// `chi(g) = -1` exactly off the index-2 subgroup `ker`, given as a membership mask.
  pub fn signed(group: &FiniteGroup, n: u64, ker: impl Fn(usize) -> bool) -> Result<Self> {
    let chi: Vec<i64> = group.elements().map(|g| if ker(g) { 1 } else { -1 }).collect();
    Self::cyclic(group, n, &chi)
  }

  pub fn with_name(mut self, name: &str) -> Self {
    self.name = name.to_string();
    self
  }

  /// Named coefficient groups over `group`: `z`, `z2`, `z4`, `f3`, `z4neg`, `f3neg`, `zsign`, `f2sq-swap`.
  pub fn preset(group: &FiniteGroup, name: &str) -> Result<Self> {
    let nontrivial = |g: usize| g != group.id();
    let sign = |n: u64| {
      if group.order() != 2 {
        return Err(Error::Unsupported(format!("'{name}' needs G = Z/2")));
      }
      Self::signed(group, n, |g| !nontrivial(g))
    };
    let m = match name {
      "z" => Self::trivial(group, &[0]),
      "z2" | "f2" => Self::trivial(group, &[2]),
      "z4" => Self::trivial(group, &[4]),
      "f3" => Self::trivial(group, &[3]),
      "z4neg" => sign(4)?,
      "f3neg" => sign(3)?,
      "f5neg" => sign(5)?,
      "zsign" => sign(0)?,
      "f2sq-swap" => {
        if group.order() != 2 {
          return Err(Error::Unsupported(format!("'{name}' needs G = Z/2")));
        }
        let action = group
          .elements()
          .map(|g| {
            if nontrivial(g) {
              vec![vec![0, 1], vec![1, 0]]
            } else {
              vec![vec![1, 0], vec![0, 1]]
            }
          })
          .collect();
        Self::new(group, vec![2, 2], action)?
      }
      _ => return Err(Error::Validation(format!("unknown coefficient preset '{name}'"))),
    };
    Ok(m.with_name(name))
  }

  /// A random finite coefficient group with at most `max_order` elements.
  pub fn random(group: &FiniteGroup, rng: &mut impl Rng, max_order: u64) -> Self {
    const SHAPES: &[&[u64]] = &[
      &[2],
      &[3],
      &[4],
      &[5],
      &[7],
      &[8],
      &[2, 2],
      &[2, 4],
      &[3, 3],
      &[4, 4],
      &[2, 2, 2],
      &[2, 2, 4],
      &[16],
      &[9],
      &[2, 8],
    ];
    let shapes: Vec<&[u64]> =
      SHAPES.iter().copied().filter(|s| s.iter().product::<u64>() <= max_order).collect();
    let orders = shapes[rng.gen_range(0..shapes.len())].to_vec();
    let n = orders.len();
    let gens = group.generators();
    for _ in 0..400 {
      let mats: Vec<Vec<Vec<i64>>> = gens
        .iter()
        .map(|_| {
          (0..n).map(|i| (0..n).map(|_| rng.gen_range(0..orders[i] as i64)).collect()).collect()
        })
        .collect();
      if let Some(action) = extend_action(group, &gens, &mats, &orders) {
        if let Ok(m) = Self::new(group, orders.clone(), action) {
          return m;
        }
      }
    }
    Self::trivial(group, &orders)
  }

  pub fn group(&self) -> &FiniteGroup {
    &self.group
  }

  pub fn name(&self) -> &str {
    &self.name
  }

  pub fn orders(&self) -> &[u64] {
    &self.orders
  }

  pub fn rank(&self) -> usize {
    self.orders.len()
  }

  pub fn is_finite(&self) -> bool {
    !self.orders.contains(&0)
  }

  /// Number of elements, or `None` when infinite.
  pub fn order(&self) -> Option<u64> {
    self.is_finite().then(|| self.orders.iter().product())
  }

  /// `Some(p)` when the group is an `F_p`-vector space for a prime `p`.
  pub fn prime_exponent(&self) -> Option<u64> {
    let p = *self.orders.first()?;
    (p >= 2 && self.orders.iter().all(|&d| d == p) && (2..p).all(|k| p % k != 0)).then_some(p)
  }

  pub fn zero(&self) -> Elem {
    vec![0; self.orders.len()]
  }

  pub fn reduce(&self, mut v: Elem) -> Elem {
    for (x, &d) in v.iter_mut().zip(&self.orders) {
      if d != 0 {
        *x = x.rem_euclid(d as i64);
      }
    }
    v
  }

  pub fn is_zero(&self, v: &[i64]) -> bool {
    self.reduce(v.to_vec()).iter().all(|&x| x == 0)
  }

  pub fn add(&self, a: &[i64], b: &[i64]) -> Elem {
    self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
  }

  pub fn scale(&self, k: i64, a: &[i64]) -> Elem {
    self.reduce(a.iter().map(|x| k * x).collect())
  }

  pub fn act(&self, g: usize, m: &[i64]) -> Elem {
    let a = &self.action[g];
    self.reduce(a.iter().map(|row| row.iter().zip(m).map(|(x, y)| x * y).sum()).collect())
  }

  pub fn action_matrices(&self) -> &[Vec<Vec<i64>>] {
    &self.action
  }

  /// All elements in mixed-radix order; `None` for infinite groups.
  pub fn elements(&self) -> Option<Vec<Elem>> {
    let total = self.order()?;
    Some(
      (0..total)
        .map(|mut k| {
          self
            .orders
            .iter()
            .map(|&d| {
              let x = (k % d) as i64;
              k /= d;
              x
            })
            .collect()
        })
        .collect(),
    )
  }

  /// A presentation of the fixed subgroup `M^K` with generators given as elements.
  pub fn fixed_summand(&self, lattice: &SubgroupLattice, k: usize) -> Result<FixedSummand> {
    let ks = lattice.elements(k);
    if let Some(all) = self.elements() {
      let fixed: Vec<Elem> =
        all.into_iter().filter(|m| ks.iter().all(|&g| self.act(g, m) == *m)).collect();
      let mut gens: Vec<Elem> = Vec::new();
      let mut coords: HashMap<Elem, Vec<i64>> = HashMap::from([(self.zero(), Vec::new())]);
      for m in &fixed {
        if coords.contains_key(m) {
          continue;
        }
        gens.push(m.clone());
        coords = self.span(&gens);
      }
      let presentation = self.relation_lattice(&gens)?;
      let coords = coords.into_iter().map(|(m, c)| (m, pad(c, gens.len()))).collect();
      return Ok(FixedSummand { gens, presentation, coords: Coords::Table(coords) });
    }
    let n = self.orders.len();
    let rows: Vec<Vec<BigInt>> = ks
      .iter()
      .flat_map(|&g| (0..n).map(move |i| (g, i)))
      .map(|(g, i)| (0..n).map(|j| BigInt::from(self.action[g][i][j] - (i == j) as i64)).collect())
      .collect();
    let kernel = integer_kernel(&rows, n);
    let gens: Vec<Elem> =
      kernel.iter().map(|v| v.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
    let basis = Presented::new(n, kernel)?;
    Ok(FixedSummand {
      presentation: Presented::free(gens.len()),
      gens,
      coords: Coords::Lattice(basis),
    })
  }

  fn span(&self, gens: &[Elem]) -> HashMap<Elem, Vec<i64>> {
    let mut seen: HashMap<Elem, Vec<i64>> = HashMap::from([(self.zero(), vec![0; gens.len()])]);
    let mut frontier = vec![self.zero()];
    while let Some(m) = frontier.pop() {
      for (i, g) in gens.iter().enumerate() {
        let next = self.add(&m, g);
        if !seen.contains_key(&next) {
          let mut c = seen[&m].clone();
          c[i] += 1;
          seen.insert(next.clone(), c);
          frontier.push(next);
        }
      }
    }
    seen
  }

  /// Relations among `gens`: the kernel of `Z^gens -> M`.
  fn relation_lattice(&self, gens: &[Elem]) -> Result<Presented> {
    let (g, n) = (gens.len(), self.orders.len());
    let a: Vec<Vec<BigInt>> = (0..n)
      .map(|i| {
        (0..g)
          .map(|j| BigInt::from(gens[j][i]))
          .chain((0..n).map(|j| BigInt::from(if i == j { self.orders[i] } else { 0 })))
          .collect()
      })
      .collect();
    let kernel = integer_kernel(&a, g + n);
    Presented::new(g, kernel.into_iter().map(|v| v[..g].to_vec()).collect())
  }
}

fn pad(mut c: Vec<i64>, n: usize) -> Vec<i64> {
  c.resize(n, 0);
  c
}

/// Kernel basis of an integer matrix with `cols` columns, as column vectors.
fn integer_kernel(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
  if rows.is_empty() {
    return (0..cols).map(|j| (0..cols).map(|i| BigInt::from((i == j) as i64)).collect()).collect();
  }
  let snf = smith_normal_form(rows, cols);
  let r = snf.diagonal.len();
  (r..cols).map(|j| snf.v.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Extends generator matrices to the whole group, or `None` if they violate a relation.
fn extend_action(
  group: &FiniteGroup,
  gens: &[usize],
  mats: &[Vec<Vec<i64>>],
  orders: &[u64],
) -> Option<Vec<Vec<Vec<i64>>>> {
  let n = orders.len();
  let red = |m: Vec<Vec<i64>>| -> Vec<Vec<i64>> {
    m.into_iter()
      .enumerate()
      .map(|(i, r)| r.into_iter().map(|x| x.rem_euclid(orders[i] as i64)).collect())
      .collect()
  };
  let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
    red((0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect())
  };
  let id: Vec<Vec<i64>> = red((0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect());
  let mut out: Vec<Option<Vec<Vec<i64>>>> = vec![None; group.order()];
  out[group.id()] = Some(id);
  let mut stack = vec![group.id()];
  while let Some(h) = stack.pop() {
    for (k, &g) in gens.iter().enumerate() {
      let gh = group.mul(g, h);
      let m = mul(&mats[k], out[h].as_ref().unwrap());
      match &out[gh] {
        Some(existing) if *existing != m => return None,
        Some(_) => {}
        None => {
          out[gh] = Some(m);
          stack.push(gh);
        }
      }
    }
  }
  out.into_iter().collect()
}

#[derive(Clone, Debug)]
enum Coords {
  Table(HashMap<Elem, Vec<i64>>),
  Lattice(Presented),
}

/// `M^K` as a presented group together with a coordinate map into it.
#[derive(Clone, Debug)]
pub struct FixedSummand {
  pub gens: Vec<Elem>,
  pub presentation: Presented,
  coords: Coords,
}

impl FixedSummand {
  /// Coordinates of `m` in the generators, or `None` if `m` is not `K`-fixed.
  pub fn coords(&self, m: &Elem) -> Option<Vec<BigInt>> {
    match &self.coords {
      Coords::Table(t) => t.get(m).map(|c| c.iter().map(|&x| BigInt::from(x)).collect()),
      Coords::Lattice(p) => {
        let v: Vec<BigInt> = m.iter().map(|&x| BigInt::from(x)).collect();
        if v.iter().all(Zero::is_zero) {
          return Some(vec![BigInt::zero(); self.gens.len()]);
        }
        p.solve(&v)
      }
    }
  }

  pub fn is_zero(&self) -> bool {
    self.gens.is_empty()
  }
}

#[cfg(test)]
mod tests {
  use rand::SeedableRng;
  use rand_chacha::ChaCha8Rng;

  use super::*;

  fn c2() -> (FiniteGroup, SubgroupLattice) {
    let g = FiniteGroup::cyclic(2);
    let l = SubgroupLattice::new(&g).unwrap();
    (g, l)
  }

  #[test]
  fn z4_with_negation() {
    let (g, l) = c2();
    let m = GAbelianGroup::preset(&g, "z4neg").unwrap();
    assert_eq!(m.act(1, &vec![1]), vec![3]);
    let top = m.fixed_summand(&l, l.top()).unwrap();
    assert_eq!(top.gens, vec![vec![2]]);
    assert_eq!(top.presentation.structure(), vec![BigInt::from(2)]);
    let bottom = m.fixed_summand(&l, 0).unwrap();
    assert_eq!(bottom.presentation.structure(), vec![BigInt::from(4)]);
    assert_eq!(top.coords(&vec![1]), None);
  }

  #[test]
  fn swap_and_integers() {
    let (g, l) = c2();
    let m = GAbelianGroup::preset(&g, "f2sq-swap").unwrap();
    let top = m.fixed_summand(&l, l.top()).unwrap();
    assert_eq!(top.gens, vec![vec![1, 1]]);
    let zs = GAbelianGroup::preset(&g, "zsign").unwrap();
    assert!(zs.fixed_summand(&l, l.top()).unwrap().is_zero());
    let f = zs.fixed_summand(&l, 0).unwrap();
    assert_eq!(f.coords(&vec![-3]), Some(vec![BigInt::from(-3)]));
  }

  #[test]
  fn bad_actions_are_rejected() {
    let (g, _) = c2();
    assert!(GAbelianGroup::cyclic(&g, 4, &[1, 2]).is_err());
    assert!(GAbelianGroup::new(&g, vec![2, 0], vec![vec![vec![1, 0], vec![0, 1]]; 2]).is_err());
  }

  #[test]
  fn random_groups_are_valid() {
    let (g, l) = c2();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
      let m = GAbelianGroup::random(&g, &mut rng, 16);
      assert!(m.order().unwrap() <= 16);
      for h in 0..l.len() {
        let f = m.fixed_summand(&l, h).unwrap();
        let size: BigInt = f.presentation.structure().iter().product();
        let count = m
          .elements()
          .unwrap()
          .iter()
          .filter(|x| l.elements(h).iter().all(|&k| m.act(k, x) == **x))
          .count();
        assert_eq!(size, BigInt::from(count));
      }
    }
  }
}
