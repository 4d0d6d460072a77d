use super::{group::FiniteGroup, lattice::SubgroupLattice};
use crate::error::{invalid, Result};

/// A finite G-set; `action[g][x]` is the image of point `x` under `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGSet {
  action: Vec<Vec<usize>>,
  basepoint: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitData {
  /// H-orbits of the points, each listed with its smallest point first.
  pub orbits: Vec<Vec<usize>>,
  /// Stabilizer in H of each orbit representative, as a lattice index.
  pub stabilizers: Vec<usize>,
  pub fixed: Vec<usize>,
}

impl FiniteGSet {
  pub fn new(
    group: &FiniteGroup,
    action: Vec<Vec<usize>>,
    basepoint: Option<usize>,
  ) -> Result<Self> {
    if action.len() != group.order() {
      return invalid("one permutation per group element required");
    }
    let n = action[0].len();
    for perm in &action {
      let mut seen = vec![false; n];
      if perm.len() != n || perm.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
        return invalid("action table is not a permutation");
      }
    }
    if action[group.id()].iter().enumerate().any(|(i, &x)| i != x) {
      return invalid("identity acts nontrivially");
    }
    for g in group.elements() {
      for h in group.elements() {
        for x in 0..n {
          if action[group.mul(g, h)][x] != action[g][action[h][x]] {
            return invalid(format!("action fails at ({g},{h},{x})"));
          }
        }
      }
    }
    if let Some(b) = basepoint {
      if b >= n || group.elements().any(|g| action[g][b] != b) {
        return invalid("basepoint must be fixed");
      }
    }
    Ok(Self { action, basepoint })
  }

  pub fn trivial(group: &FiniteGroup, n: usize) -> Self {
    Self { action: vec![(0..n).collect(); group.order()], basepoint: None }
  }

  /// `n` copies of G with left multiplication.
  pub fn free(group: &FiniteGroup, n: usize) -> Self {
    let k = group.order();
    let action = group
      .elements()
      .map(|g| (0..n * k).map(|x| (x / k) * k + group.mul(g, x % k)).collect())
      .collect();
    Self { action, basepoint: None }
  }

  /// The left cosets G/H with the left translation action.
  pub fn cosets(lattice: &SubgroupLattice, h: usize) -> Self {
    let g = lattice.group();
    let mut reps: Vec<u64> = Vec::new();
    let coset = |a: usize| lattice.elements(h).iter().fold(0u64, |acc, &x| acc | 1 << g.mul(a, x));
    for a in g.elements() {
      let c = coset(a);
      if !reps.contains(&c) {
        reps.push(c);
      }
    }
    let action = g
      .elements()
      .map(|x| {
        reps
          .iter()
          .map(|&c| {
            let a = c.trailing_zeros() as usize;
            let image = coset(g.mul(x, a));
            reps.iter().position(|&r| r == image).unwrap()
          })
          .collect()
      })
      .collect();
    Self { action, basepoint: None }
  }

  pub fn disjoint_union(&self, other: &Self) -> Self {
    let n = self.len();
    let action = self
      .action
      .iter()
      .zip(&other.action)
      .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&x| x + n)).collect())
      .collect();
    Self { action, basepoint: self.basepoint }
  }

  pub fn len(&self) -> usize {
    self.action[0].len()
  }

  pub fn is_empty(&self) -> bool {
    self.len() == 0
  }

  pub fn act(&self, g: usize, x: usize) -> usize {
    self.action[g][x]
  }

  pub fn basepoint(&self) -> Option<usize> {
    self.basepoint
  }

  pub fn action_table(&self) -> &[Vec<usize>] {
    &self.action
  }

  /// Orbits, stabilizers and fixed points for the restricted action of subgroup `h`.
  pub fn analyze(&self, lattice: &SubgroupLattice, h: usize) -> OrbitData {
    let hs = lattice.elements(h);
    let mut seen = vec![false; self.len()];
    let mut orbits = Vec::new();
    let mut stabilizers = Vec::new();
    for x in 0..self.len() {
      if seen[x] {
        continue;
      }
      let mut orbit: Vec<usize> = hs.iter().map(|&g| self.act(g, x)).collect();
      orbit.sort_unstable();
      orbit.dedup();
      for &y in &orbit {
        seen[y] = true;
      }
      let stab: Vec<usize> = hs.iter().copied().filter(|&g| self.act(g, x) == x).collect();
      stabilizers.push(lattice.index_of(&stab).expect("stabilizers are subgroups"));
      orbits.push(orbit);
    }
    let fixed = (0..self.len()).filter(|&x| hs.iter().all(|&g| self.act(g, x) == x)).collect();
    OrbitData { orbits, stabilizers, fixed }
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  fn c2() -> (FiniteGroup, SubgroupLattice) {
    let g = FiniteGroup::cyclic(2);
    let l = SubgroupLattice::new(&g).unwrap();
    (g, l)
  }

  #[test]
  fn free_orbit() {
    let (g, l) = c2();
    let j = FiniteGSet::free(&g, 1);
    let d = j.analyze(&l, l.top());
    assert_eq!(d.orbits, vec![vec![0, 1]]);
    assert_eq!(d.stabilizers, vec![l.trivial()]);
    assert!(d.fixed.is_empty());
  }

  #[test]
  fn trivial_two_points() {
    let (g, l) = c2();
    let j = FiniteGSet::trivial(&g, 2);
    let d = j.analyze(&l, l.top());
    assert_eq!(d.orbits.len(), 2);
    assert!(d.stabilizers.iter().all(|&s| s == l.top()));
    assert_eq!(d.fixed, vec![0, 1]);
  }

  #[test]
  fn n_copies_of_g() {
    let g = FiniteGroup::symmetric3();
    let l = SubgroupLattice::new(&g).unwrap();
    let j = FiniteGSet::free(&g, 3);
    assert!(FiniteGSet::new(&g, j.action_table().to_vec(), None).is_ok());
    let d = j.analyze(&l, l.top());
    assert_eq!(d.orbits.len(), 3);
    assert!(d.stabilizers.iter().all(|&s| s == l.trivial()));
  }

  #[test]
  fn cosets_have_the_right_stabilizers() {
    let g = FiniteGroup::cyclic(4);
    let l = SubgroupLattice::new(&g).unwrap();
    let j = FiniteGSet::cosets(&l, 1);
    assert_eq!(j.len(), 2);
    let d = j.analyze(&l, l.top());
    assert_eq!(d.stabilizers, vec![1]);
  }

  #[test]
  fn invalid_actions_are_rejected() {
    let (g, _) = c2();
    assert!(FiniteGSet::new(&g, vec![vec![0, 1], vec![0, 0]], None).is_err());
    assert!(FiniteGSet::new(&g, vec![vec![1, 0], vec![1, 0]], None).is_err());
    assert!(FiniteGSet::new(&g, vec![vec![0, 1], vec![1, 0]], Some(0)).is_err());
  }
}
