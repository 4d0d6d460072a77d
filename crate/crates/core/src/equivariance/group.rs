use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A finite group given by its full multiplication table on `0..order`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteGroup {
  name: String,
  mul: Vec<Vec<usize>>,
  inv: Vec<usize>,
  id: usize,
}

impl PartialEq for FiniteGroup {
  fn eq(&self, other: &Self) -> bool {
    self.mul == other.mul
  }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
  /// Builds a group from a Cayley table, checking every group axiom on the full table.
  pub fn from_table(name: impl Into<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
    let n = mul.len();
    if n == 0 {
      return invalid("empty group table");
    }
    for row in &mul {
      if row.len() != n || row.iter().any(|&x| x >= n) {
        return invalid("group table is not total");
      }
    }
    let id = match (0..n).find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a)) {
      Some(e) => e,
      None => return invalid("no identity element"),
    };
    let mut inv = vec![0; n];
    for a in 0..n {
      match (0..n).find(|&b| mul[a][b] == id && mul[b][a] == id) {
        Some(b) => inv[a] = b,
        None => return invalid(format!("element {a} has no inverse")),
      }
    }
    for a in 0..n {
      for b in 0..n {
        for c in 0..n {
          if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
            return invalid(format!("associativity fails at ({a},{b},{c})"));
          }
        }
      }
    }
    Ok(Self { name: name.into(), mul, inv, id })
  }

  pub fn trivial() -> Self {
    Self::cyclic(1)
  }

  pub fn cyclic(n: usize) -> Self {
    let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let inv = (0..n).map(|a| (n - a) % n).collect();
    Self { name: format!("C{n}"), mul, inv, id: 0 }
  }

  /// The symmetric group on three letters; elements are permutations in lexicographic order.
  pub fn symmetric3() -> Self {
    let perms: Vec<[usize; 3]> =
      vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let mul = perms
      .iter()
      .map(|a| perms.iter().map(|b| index([a[b[0]], a[b[1]], a[b[2]]])).collect())
      .collect();
    Self::from_table("S3", mul).expect("S3 table")
  }

  pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
    let (n, m) = (a.order(), b.order());
    let mul = (0..n * m)
      .map(|x| (0..n * m).map(|y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m)).collect())
      .collect();
    Self::from_table(format!("{}x{}", a.name, b.name), mul).expect("product table")
  }

  /// Named presets accepted by the command line.
  pub fn preset(name: &str) -> Option<Self> {
    match name {
      "C1" | "1" | "trivial" => Some(Self::trivial()),
      "C2" | "Z/2" => Some(Self::cyclic(2)),
      "C3" | "Z/3" => Some(Self::cyclic(3)),
      "C4" | "Z/4" => Some(Self::cyclic(4)),
      "S3" => Some(Self::symmetric3()),
      "C2xC2" | "V4" => Some(Self::product(&Self::cyclic(2), &Self::cyclic(2))),
      _ => None,
    }
  }

  pub fn name(&self) -> &str {
    &self.name
  }

  pub fn order(&self) -> usize {
    self.mul.len()
  }

  pub fn id(&self) -> usize {
    self.id
  }

  pub fn mul(&self, a: usize, b: usize) -> usize {
    self.mul[a][b]
  }

  pub fn inv(&self, a: usize) -> usize {
    self.inv[a]
  }

  pub fn elements(&self) -> std::ops::Range<usize> {
    0..self.order()
  }

  pub fn table(&self) -> &[Vec<usize>] {
    &self.mul
  }

  pub fn conjugate(&self, g: usize, x: usize) -> usize {
    self.mul(self.mul(g, x), self.inv(g))
  }

  pub fn is_trivial(&self) -> bool {
    self.order() == 1
  }

  /// A generating set, chosen greedily in element order.
  pub fn generators(&self) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![false; self.order()];
    span[self.id] = true;
    for g in self.elements() {
      if span[g] {
        continue;
      }
      gens.push(g);
      let mut stack: Vec<usize> = (0..self.order()).filter(|&x| span[x]).collect();
      while let Some(x) = stack.pop() {
        for &s in &gens {
          let y = self.mul(s, x);
          if !span[y] {
            span[y] = true;
            stack.push(y);
          }
        }
      }
    }
    gens
  }
}

impl fmt::Display for FiniteGroup {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{}", self.name)
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn broken_tables_are_rejected() {
    assert!(FiniteGroup::from_table("x", vec![vec![0, 1], vec![0, 1]]).is_err());
    assert!(FiniteGroup::from_table("x", vec![]).is_err());
    assert!(FiniteGroup::from_table("x", vec![vec![0, 1], vec![1]]).is_err());
  }

  #[test]
  fn presets_validate() {
    for name in ["C1", "C2", "C3", "C4", "S3", "V4"] {
      let g = FiniteGroup::preset(name).unwrap();
      assert!(FiniteGroup::from_table(name, g.table().to_vec()).is_ok());
    }
    assert_eq!(FiniteGroup::symmetric3().order(), 6);
  }

  #[test]
  fn s3_is_not_abelian() {
    let g = FiniteGroup::symmetric3();
    assert!(g.elements().any(|a| g.elements().any(|b| g.mul(a, b) != g.mul(b, a))));
  }
}
