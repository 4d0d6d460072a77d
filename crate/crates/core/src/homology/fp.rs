use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::matrix::SparseMatrix;

/// A dense matrix over the prime field `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
  pub p: u64,
  pub rows: usize,
  pub cols: usize,
  pub data: Vec<Vec<u64>>,
}

impl FpMatrix {
  pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
    Self { p, rows, cols, data: vec![vec![0; cols]; rows] }
  }

  pub fn identity(p: u64, n: usize) -> Self {
    let mut m = Self::zero(p, n, n);
    for i in 0..n {
      m.data[i][i] = 1 % p;
    }
    m
  }

  pub fn from_sparse(m: &SparseMatrix, p: u64) -> Self {
    let mut out = Self::zero(p, m.rows, m.cols);
    let big = BigInt::from(p);
    for (i, j, v) in m.entries() {
      out.data[i][j] = v.mod_floor(&big).to_u64().unwrap();
    }
    out
  }

  pub fn from_columns(p: u64, rows: usize, cols: &[Vec<u64>]) -> Self {
    let mut out = Self::zero(p, rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
      for i in 0..rows {
        out.data[i][j] = c[i] % p;
      }
    }
    out
  }

  pub fn column(&self, j: usize) -> Vec<u64> {
    self.data.iter().map(|r| r[j]).collect()
  }

  pub fn columns(&self) -> Vec<Vec<u64>> {
    (0..self.cols).map(|j| self.column(j)).collect()
  }

  pub fn is_zero(&self) -> bool {
    self.data.iter().flatten().all(|&x| x == 0)
  }

  pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
    assert_eq!(self.cols, other.rows);
    let mut out = Self::zero(self.p, self.rows, other.cols);
    for i in 0..self.rows {
      for k in 0..self.cols {
        let a = self.data[i][k];
        if a != 0 {
          for j in 0..other.cols {
            out.data[i][j] = (out.data[i][j] + a * other.data[k][j]) % self.p;
          }
        }
      }
    }
    out
  }

  pub fn apply(&self, x: &[u64]) -> Vec<u64> {
    self
      .data
      .iter()
      .map(|r| r.iter().zip(x).fold(0, |acc, (a, b)| (acc + a * b) % self.p))
      .collect()
  }

  /// `[self | other]`.
  pub fn hcat(&self, other: &FpMatrix) -> FpMatrix {
    assert_eq!(self.rows, other.rows);
    let data = self
      .data
      .iter()
      .zip(&other.data)
      .map(|(a, b)| a.iter().chain(b).copied().collect())
      .collect();
    Self { p: self.p, rows: self.rows, cols: self.cols + other.cols, data }
  }

  fn inv(&self, a: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % self.p, self.p - 2);
    while e > 0 {
      if e & 1 == 1 {
        r = r * b % self.p;
      }
      b = b * b % self.p;
      e >>= 1;
    }
    r
  }

  /// Reduced row echelon form and its pivot columns.
  fn rref(&self) -> (Vec<Vec<u64>>, Vec<usize>) {
    let p = self.p;
    let mut a = self.data.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..self.cols {
      let Some(k) = (r..self.rows).find(|&k| a[k][c] != 0) else { continue };
      a.swap(r, k);
      let iv = self.inv(a[r][c]);
      for x in a[r].iter_mut() {
        *x = *x * iv % p;
      }
      for k in 0..self.rows {
        if k != r && a[k][c] != 0 {
          let f = a[k][c];
          let row = a[r].clone();
          for (x, y) in a[k].iter_mut().zip(row) {
            *x = (*x + p - f * y % p) % p;
          }
        }
      }
      pivots.push(c);
      r += 1;
      if r == self.rows {
        break;
      }
    }
    (a, pivots)
  }

  pub fn rank(&self) -> usize {
    self.rref().1.len()
  }

  pub fn nullity(&self) -> usize {
    self.cols - self.rank()
  }

  /// A basis of the null space, as columns.
  pub fn kernel(&self) -> FpMatrix {
    let (a, pivots) = self.rref();
    let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
    let cols: Vec<Vec<u64>> = free
      .iter()
      .map(|&f| {
        let mut v = vec![0; self.cols];
        v[f] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
          v[pc] = (self.p - a[r][f]) % self.p;
        }
        v
      })
      .collect();
    Self::from_columns(self.p, self.cols, &cols)
  }

  /// Some `x` with `self x = b`.
  pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
    let aug = self.hcat(&Self::from_columns(self.p, self.rows, &[b.to_vec()]));
    let (a, pivots) = aug.rref();
    if pivots.last() == Some(&self.cols) {
      return None;
    }
    let mut x = vec![0; self.cols];
    for (r, &pc) in pivots.iter().enumerate() {
      x[pc] = a[r][self.cols];
    }
    Some(x)
  }
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn kernel_and_solve() {
    let m = FpMatrix { p: 3, rows: 2, cols: 3, data: vec![vec![1, 2, 0], vec![0, 0, 1]] };
    assert_eq!(m.rank(), 2);
    let k = m.kernel();
    assert_eq!(k.cols, 1);
    assert!(m.mul(&k).is_zero());
    let x = m.solve(&[2, 1]).unwrap();
    assert_eq!(m.apply(&x), vec![2, 1]);
    let n = FpMatrix { p: 2, rows: 2, cols: 1, data: vec![vec![1], vec![1]] };
    assert_eq!(n.solve(&[1, 0]), None);
  }
}
