use std::collections::BTreeSet;

use super::group::FiniteGroup;
use crate::error::{Error, Result};

pub const DEFAULT_GROUP_BOUND: usize = 24;

/// All subgroups of a finite group, as bitmasks over the elements, sorted by order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupLattice {
  group: FiniteGroup,
  subgroups: Vec<u64>,
  class_of: Vec<usize>,
  classes: Vec<Vec<usize>>,
}

fn closure(g: &FiniteGroup, mut mask: u64) -> u64 {
  mask |= 1 << g.id();
  loop {
    let mut next = mask;
    for a in g.elements().filter(|&a| mask >> a & 1 == 1) {
      for b in g.elements().filter(|&b| mask >> b & 1 == 1) {
        next |= 1 << g.mul(a, b);
      }
    }
    if next == mask {
      return mask;
    }
    mask = next;
  }
}

pub(crate) fn is_subgroup_mask(g: &FiniteGroup, mask: u64) -> bool {
  if mask >> g.id() & 1 == 0 {
    return false;
  }
  let members: Vec<usize> = g.elements().filter(|&a| mask >> a & 1 == 1).collect();
  members
    .iter()
    .all(|&a| mask >> g.inv(a) & 1 == 1 && members.iter().all(|&b| mask >> g.mul(a, b) & 1 == 1))
}

impl SubgroupLattice {
  pub fn new(group: &FiniteGroup) -> Result<Self> {
    Self::with_bound(group, DEFAULT_GROUP_BOUND)
  }

  /// Enumerates subgroups by closing every known subgroup under one more element until stable.
  pub fn with_bound(group: &FiniteGroup, bound: usize) -> Result<Self> {
    let n = group.order();
    if n > bound || n > 64 {
      return Err(Error::GroupTooLarge(n, bound.min(64)));
    }
    let mut found: BTreeSet<u64> = BTreeSet::new();
    let mut frontier = vec![closure(group, 0)];
    found.insert(frontier[0]);
    while let Some(h) = frontier.pop() {
      for x in group.elements() {
        let k = closure(group, h | 1 << x);
        if found.insert(k) {
          frontier.push(k);
        }
      }
    }
    let mut subgroups: Vec<u64> = found.into_iter().collect();
    subgroups.sort_by_key(|&m| (m.count_ones(), m));
    let conj = |g: usize, m: u64| {
      group
        .elements()
        .filter(|&a| m >> a & 1 == 1)
        .fold(0u64, |acc, a| acc | 1 << group.conjugate(g, a))
    };
    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..subgroups.len() {
      if class_of[i] != usize::MAX {
        continue;
      }
      let mut members: Vec<usize> = group
        .elements()
        .map(|g| conj(g, subgroups[i]))
        .map(|m| subgroups.iter().position(|&s| s == m).expect("conjugate is a subgroup"))
        .collect();
      members.sort_unstable();
      members.dedup();
      for &j in &members {
        class_of[j] = classes.len();
      }
      classes.push(members);
    }
    Ok(Self { group: group.clone(), subgroups, class_of, classes })
  }

  pub fn group(&self) -> &FiniteGroup {
    &self.group
  }

  pub fn len(&self) -> usize {
    self.subgroups.len()
  }

  pub fn is_empty(&self) -> bool {
    self.subgroups.is_empty()
  }

  pub fn mask(&self, h: usize) -> u64 {
    self.subgroups[h]
  }

  pub fn elements(&self, h: usize) -> Vec<usize> {
    self.group.elements().filter(|&a| self.subgroups[h] >> a & 1 == 1).collect()
  }

  pub fn order(&self, h: usize) -> usize {
    self.subgroups[h].count_ones() as usize
  }

  pub fn contains(&self, h: usize, g: usize) -> bool {
    self.subgroups[h] >> g & 1 == 1
  }

  /// Whether subgroup `k` is contained in subgroup `h`.
  pub fn is_le(&self, k: usize, h: usize) -> bool {
    self.subgroups[k] & !self.subgroups[h] == 0
  }

  pub fn trivial(&self) -> usize {
    0
  }

  pub fn top(&self) -> usize {
    self.subgroups.len() - 1
  }

  pub fn index_of_mask(&self, mask: u64) -> Option<usize> {
    self.subgroups.iter().position(|&m| m == mask)
  }

  /// Looks up the subgroup with exactly these elements.
  pub fn index_of(&self, elements: &[usize]) -> Result<usize> {
    let mask = elements.iter().fold(0u64, |acc, &a| if a < 64 { acc | 1 << a } else { acc });
    if elements.iter().any(|&a| a >= self.group.order()) || !is_subgroup_mask(&self.group, mask) {
      return Err(Error::NotSubgroup(elements.to_vec()));
    }
    Ok(self.index_of_mask(mask).expect("every subgroup is enumerated"))
  }

  pub fn class_of(&self, h: usize) -> usize {
    self.class_of[h]
  }

  pub fn classes(&self) -> &[Vec<usize>] {
    &self.classes
  }

  pub fn num_classes(&self) -> usize {
    self.classes.len()
  }

  pub fn class_rep(&self, c: usize) -> usize {
    self.classes[c][0]
  }

  pub fn subgroups_below(&self, h: usize) -> impl Iterator<Item = usize> + '_ {
    (0..self.len()).filter(move |&k| self.is_le(k, h))
  }

  pub fn proper_subgroups(&self, h: usize) -> impl Iterator<Item = usize> + '_ {
    (0..self.len()).filter(move |&k| k != h && self.is_le(k, h))
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  fn brute_force_subgroups(g: &FiniteGroup) -> Vec<u64> {
    let n = g.order();
    let mut out: Vec<u64> = (0u64..1 << n).filter(|&m| is_subgroup_mask(g, m)).collect();
    out.sort_by_key(|&m| (m.count_ones(), m));
    out
  }

  #[test]
  fn c2_has_two_classes() {
    let l = SubgroupLattice::new(&FiniteGroup::cyclic(2)).unwrap();
    assert_eq!(l.len(), 2);
    assert_eq!(l.num_classes(), 2);
  }

  #[test]
  fn c4_is_a_chain() {
    let l = SubgroupLattice::new(&FiniteGroup::cyclic(4)).unwrap();
    assert_eq!(l.len(), 3);
    assert_eq!(l.num_classes(), 3);
    assert!(l.is_le(0, 1) && l.is_le(1, 2));
    assert_eq!(l.elements(1), vec![0, 2]);
  }

  #[test]
  fn s3_has_six_subgroups_four_classes() {
    let l = SubgroupLattice::new(&FiniteGroup::symmetric3()).unwrap();
    assert_eq!(l.len(), 6);
    assert_eq!(l.num_classes(), 4);
  }

  #[test]
  fn closure_matches_brute_force() {
    for name in ["C1", "C2", "C3", "C4", "S3", "V4"] {
      let g = FiniteGroup::preset(name).unwrap();
      let l = SubgroupLattice::new(&g).unwrap();
      assert_eq!(l.subgroups, brute_force_subgroups(&g), "{name}");
      assert_eq!(l.mask(l.top()).count_ones() as usize, g.order());
      assert_eq!(l.order(l.trivial()), 1);
    }
  }

  #[test]
  fn non_subgroups_are_rejected() {
    let l = SubgroupLattice::new(&FiniteGroup::cyclic(4)).unwrap();
    assert!(l.index_of(&[0, 1]).is_err());
    assert!(l.index_of(&[1, 2]).is_err());
    assert!(l.index_of(&[0, 7]).is_err());
    assert_eq!(l.index_of(&[0, 2]).unwrap(), 1);
  }

  #[test]
  fn bound_is_enforced() {
    let g = FiniteGroup::cyclic(5);
    assert!(matches!(SubgroupLattice::with_bound(&g, 4), Err(Error::GroupTooLarge(5, 4))));
  }
}
