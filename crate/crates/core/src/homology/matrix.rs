use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A sparse integer matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
  pub rows: usize,
  pub cols: usize,
  columns: Vec<Vec<(usize, BigInt)>>,
}

impl SparseMatrix {
  pub fn zero(rows: usize, cols: usize) -> Self {
    Self { rows, cols, columns: vec![Vec::new(); cols] }
  }

  /// Adds `v` to entry `(r, c)`.
  pub fn add(&mut self, r: usize, c: usize, v: impl Into<BigInt>) {
    let v = v.into();
    if v.is_zero() {
      return;
    }
    let col = &mut self.columns[c];
    match col.binary_search_by_key(&r, |e| e.0) {
      Ok(i) => {
        col[i].1 += v;
        if col[i].1.is_zero() {
          col.remove(i);
        }
      }
      Err(i) => col.insert(i, (r, v)),
    }
  }

  pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
    &self.columns[c]
  }

  pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
    self.columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
  }

  pub fn nnz(&self) -> usize {
    self.columns.iter().map(|c| c.len()).sum()
  }

  pub fn is_zero(&self) -> bool {
    self.columns.iter().all(|c| c.is_empty())
  }

  pub fn from_dense(a: &[Vec<BigInt>], cols: usize) -> Self {
    let mut m = Self::zero(a.len(), cols);
    for (r, row) in a.iter().enumerate() {
      for (c, v) in row.iter().enumerate() {
        m.add(r, c, v.clone());
      }
    }
    m
  }

  pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
    let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
    for (r, c, v) in self.entries() {
      d[r][c] = v.clone();
    }
    d
  }

  /// `self * other`.
  pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
    assert_eq!(self.cols, other.rows, "dimension mismatch");
    let mut out = SparseMatrix::zero(self.rows, other.cols);
    for (c, col) in other.columns.iter().enumerate() {
      for (k, v) in col {
        for (r, w) in &self.columns[*k] {
          out.add(*r, c, v * w);
        }
      }
    }
    out
  }

  pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
    let mut y = vec![BigInt::zero(); self.rows];
    for (r, c, v) in self.entries() {
      y[r] += v * &x[c];
    }
    y
  }

  /// Nonzero invariant factors, ascending, each dividing the next.
  pub fn invariant_factors(&self) -> Vec<BigInt> {
    if let Some(small) = self.to_small() {
      if let Some((ones, rest)) = eliminate::<i64>(small, self.cols) {
        return finish(ones, rest);
      }
    }
    let big: Vec<Vec<(usize, BigInt)>> = self.row_major();
    let (ones, rest) = eliminate::<BigInt>(big, self.cols).expect("big integers never overflow");
    finish(ones, rest)
  }

  pub fn rank(&self) -> usize {
    self.invariant_factors().len()
  }

  fn row_major(&self) -> Vec<Vec<(usize, BigInt)>> {
    let mut rows = vec![Vec::new(); self.rows];
    for (c, col) in self.columns.iter().enumerate() {
      for (r, v) in col {
        rows[*r].push((c, v.clone()));
      }
    }
    rows
  }

  fn to_small(&self) -> Option<Vec<Vec<(usize, i64)>>> {
    let mut rows = vec![Vec::new(); self.rows];
    for (c, col) in self.columns.iter().enumerate() {
      for (r, v) in col {
        rows[*r].push((c, v.to_i64()?));
      }
    }
    Some(rows)
  }

  /// Rank over the prime field `F_p`.
  pub fn rank_mod(&self, p: u64) -> usize {
    let m = BigInt::from(p);
    let rows: Vec<Vec<(usize, u64)>> = self
      .row_major()
      .into_iter()
      .map(|r| {
        r.into_iter()
          .filter_map(|(c, v)| {
            let v = v.mod_floor(&m).to_u64().unwrap();
            (v != 0).then_some((c, v))
          })
          .collect()
      })
      .collect();
    rank_mod_p(rows, p)
  }
}

fn finish(ones: usize, rest: Vec<Vec<BigInt>>) -> Vec<BigInt> {
  let mut out = vec![BigInt::one(); ones];
  out.extend(smith_diagonal(rest));
  out
}

/// Integer-like coefficients for sparse elimination; `None` signals overflow.
trait Coef: Clone + PartialEq {
  fn is_nil(&self) -> bool;
  fn is_unit(&self) -> bool;
  fn sub_mul(&self, f: &Self, g: &Self) -> Option<Self>;
  fn mul(&self, g: &Self) -> Option<Self>;
  fn neg_mul(&self, g: &Self) -> Option<Self>;
  fn into_big(self) -> BigInt;
}

impl Coef for i64 {
  fn is_nil(&self) -> bool {
    *self == 0
  }

  fn is_unit(&self) -> bool {
    *self == 1 || *self == -1
  }

  fn sub_mul(&self, f: &Self, g: &Self) -> Option<Self> {
    self.checked_sub(f.checked_mul(*g)?)
  }

  fn mul(&self, g: &Self) -> Option<Self> {
    self.checked_mul(*g)
  }

  fn neg_mul(&self, g: &Self) -> Option<Self> {
    self.checked_mul(*g)?.checked_neg()
  }

  fn into_big(self) -> BigInt {
    BigInt::from(self)
  }
}

impl Coef for BigInt {
  fn is_nil(&self) -> bool {
    Zero::is_zero(self)
  }

  fn is_unit(&self) -> bool {
    self.abs().is_one()
  }

  fn sub_mul(&self, f: &Self, g: &Self) -> Option<Self> {
    Some(self - f * g)
  }

  fn mul(&self, g: &Self) -> Option<Self> {
    Some(self * g)
  }

  fn neg_mul(&self, g: &Self) -> Option<Self> {
    Some(-(self * g))
  }

  fn into_big(self) -> BigInt {
    self
  }
}

fn merge_sub<T: Coef>(
  target: &[(usize, T)],
  pivot_row: &[(usize, T)],
  f: &T,
) -> Option<Vec<(usize, T)>> {
  let mut out = Vec::with_capacity(target.len() + pivot_row.len());
  let (mut i, mut j) = (0, 0);
  while i < target.len() || j < pivot_row.len() {
    if j == pivot_row.len() || (i < target.len() && target[i].0 < pivot_row[j].0) {
      out.push(target[i].clone());
      i += 1;
    } else if i == target.len() || pivot_row[j].0 < target[i].0 {
      out.push((pivot_row[j].0, f.neg_mul(&pivot_row[j].1)?));
      j += 1;
    } else {
      let v = target[i].1.sub_mul(f, &pivot_row[j].1)?;
      if !v.is_nil() {
        out.push((target[i].0, v));
      }
      i += 1;
      j += 1;
    }
  }
  Some(out)
}

/// Eliminates unit pivots, returning their count and the dense remainder.
fn eliminate<T: Coef>(
  mut rows: Vec<Vec<(usize, T)>>,
  ncols: usize,
) -> Option<(usize, Vec<Vec<BigInt>>)> {
  let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); ncols];
  for (r, row) in rows.iter().enumerate() {
    for (c, _) in row {
      col_rows[*c].insert(r);
    }
  }
  let mut removed = vec![false; rows.len()];
  let mut heap: BinaryHeap<std::cmp::Reverse<(usize, usize)>> = rows
    .iter()
    .enumerate()
    .filter(|(_, r)| !r.is_empty())
    .map(|(i, r)| std::cmp::Reverse((r.len(), i)))
    .collect();
  let mut ones = 0;
  while let Some(std::cmp::Reverse((len, r))) = heap.pop() {
    if removed[r] || rows[r].len() != len || len == 0 {
      continue;
    }
    let pivot =
      rows[r].iter().filter(|(_, v)| v.is_unit()).min_by_key(|(c, _)| col_rows[*c].len()).cloned();
    let Some((pc, pv)) = pivot else { continue };
    let pivot_row = std::mem::take(&mut rows[r]);
    removed[r] = true;
    for (c, _) in &pivot_row {
      col_rows[*c].remove(&r);
    }
    let others: Vec<usize> = col_rows[pc].iter().copied().collect();
    for r2 in others {
      let a = rows[r2].iter().find(|(c, _)| *c == pc).unwrap().1.clone();
      let f = a.mul(&pv)?;
      let new_row = merge_sub(&rows[r2], &pivot_row, &f)?;
      for (c, _) in &rows[r2] {
        col_rows[*c].remove(&r2);
      }
      for (c, _) in &new_row {
        col_rows[*c].insert(r2);
      }
      rows[r2] = new_row;
      heap.push(std::cmp::Reverse((rows[r2].len(), r2)));
    }
    ones += 1;
  }
  let live_cols: Vec<usize> = (0..ncols).filter(|&c| !col_rows[c].is_empty()).collect();
  let pos: std::collections::HashMap<usize, usize> =
    live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
  let mut dense = Vec::new();
  for (r, row) in rows.into_iter().enumerate() {
    if removed[r] || row.is_empty() {
      continue;
    }
    let mut d = vec![BigInt::zero(); live_cols.len()];
    for (c, v) in row {
      d[pos[&c]] = v.into_big();
    }
    dense.push(d);
  }
  Some((ones, dense))
}

/// Diagonal of the Smith normal form (nonzero entries only).
pub fn smith_diagonal(a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
  let cols = a.first().map_or(0, |r| r.len());
  let snf = smith_normal_form_impl(a, cols, false);
  snf.diagonal
}

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal with each entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
  pub d: Vec<Vec<BigInt>>,
  pub u: Vec<Vec<BigInt>>,
  pub v: Vec<Vec<BigInt>>,
  /// `V^{-1}`, so coordinates in the column basis are `V^{-1} x`.
  pub v_inv: Vec<Vec<BigInt>>,
  pub diagonal: Vec<BigInt>,
}

pub fn smith_normal_form(a: &[Vec<BigInt>], cols: usize) -> SmithNormalForm {
  smith_normal_form_impl(a.to_vec(), cols, true)
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
  (0..n)
    .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
    .collect()
}

fn smith_normal_form_impl(mut a: Vec<Vec<BigInt>>, n: usize, track: bool) -> SmithNormalForm {
  let m = a.len();
  let (mut u, mut v, mut vi) =
    if track { (identity(m), identity(n), identity(n)) } else { (vec![], vec![], vec![]) };
  let row_op =
    |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
      let s = a[src].clone();
      for (x, y) in a[dst].iter_mut().zip(s) {
        *x -= q * y;
      }
      if track {
        let s = u[src].clone();
        for (x, y) in u[dst].iter_mut().zip(s) {
          *x -= q * y;
        }
      }
    };
  let col_op = |a: &mut Vec<Vec<BigInt>>,
                v: &mut Vec<Vec<BigInt>>,
                vi: &mut Vec<Vec<BigInt>>,
                dst: usize,
                src: usize,
                q: &BigInt| {
    for row in a.iter_mut() {
      let s = row[src].clone();
      row[dst] -= q * s;
    }
    if track {
      for row in v.iter_mut() {
        let s = row[src].clone();
        row[dst] -= q * s;
      }
      let d = vi[dst].clone();
      for (x, y) in vi[src].iter_mut().zip(d) {
        *x += q * y;
      }
    }
  };
  let mut diagonal = Vec::new();
  let mut t = 0;
  while t < m.min(n) {
    let best = (t..m)
      .flat_map(|i| (t..n).map(move |j| (i, j)))
      .filter(|&(i, j)| !a[i][j].is_zero())
      .min_by_key(|&(i, j)| a[i][j].abs());
    let Some((bi, bj)) = best else { break };
    a.swap(t, bi);
    if track {
      u.swap(t, bi);
    }
    for row in a.iter_mut() {
      row.swap(t, bj);
    }
    if track {
      for row in v.iter_mut() {
        row.swap(t, bj);
      }
      vi.swap(t, bj);
    }
    loop {
      let mut clean = true;
      for i in t + 1..m {
        if !a[i][t].is_zero() {
          let q = a[i][t].div_floor(&a[t][t]);
          row_op(&mut a, &mut u, i, t, &q);
          if !a[i][t].is_zero() {
            clean = false;
          }
        }
      }
      for j in t + 1..n {
        if !a[t][j].is_zero() {
          let q = a[t][j].div_floor(&a[t][t]);
          col_op(&mut a, &mut v, &mut vi, j, t, &q);
          if !a[t][j].is_zero() {
            clean = false;
          }
        }
      }
      if !clean {
        let in_col = (t + 1..m).filter(|&i| !a[i][t].is_zero()).map(|i| (a[i][t].abs(), true, i));
        let in_row = (t + 1..n).filter(|&j| !a[t][j].is_zero()).map(|j| (a[t][j].abs(), false, j));
        let (_, is_row, k) = in_col.chain(in_row).min().expect("a remainder is nonzero");
        if is_row {
          a.swap(t, k);
          if track {
            u.swap(t, k);
          }
        } else {
          for row in a.iter_mut() {
            row.swap(t, k);
          }
          if track {
            for row in v.iter_mut() {
              row.swap(t, k);
            }
            vi.swap(t, k);
          }
        }
        continue;
      }
      let bad = (t + 1..m)
        .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
      match bad {
        Some((i, _)) => {
          let minus_one = -BigInt::one();
          row_op(&mut a, &mut u, t, i, &minus_one);
        }
        None => break,
      }
    }
    if a[t][t].is_negative() {
      for x in a[t].iter_mut() {
        *x = -x.clone();
      }
      if track {
        for x in u[t].iter_mut() {
          *x = -x.clone();
        }
      }
    }
    diagonal.push(a[t][t].clone());
    t += 1;
  }
  SmithNormalForm { d: a, u, v, v_inv: vi, diagonal }
}

/// Gaussian elimination over `F_p` on sparse rows of reduced residues.
fn rank_mod_p(mut rows: Vec<Vec<(usize, u64)>>, p: u64) -> usize {
  let inv = |a: u64| -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
      if e & 1 == 1 {
        r = r * b % p;
      }
      b = b * b % p;
      e >>= 1;
    }
    r
  };
  let mut pivots: std::collections::HashMap<usize, Vec<(usize, u64)>> =
    std::collections::HashMap::new();
  let mut rank = 0;
  for row in rows.iter_mut() {
    let mut cur: std::collections::BTreeMap<usize, u64> = row.iter().copied().collect();
    loop {
      let Some((&c, &v)) = cur.iter().next() else { break };
      match pivots.get(&c) {
        Some(prow) => {
          for &(pc, pv) in prow {
            let e = cur.entry(pc).or_insert(0);
            *e = (*e + p - v * pv % p) % p;
            if *e == 0 {
              cur.remove(&pc);
            }
          }
        }
        None => {
          let iv = inv(v);
          pivots.insert(c, cur.iter().map(|(&k, &x)| (k, x * iv % p)).collect());
          rank += 1;
          break;
        }
      }
    }
  }
  rank
}

#[cfg(test)]
mod tests {
  use proptest::prelude::*;

  use super::*;

  fn big(a: &[&[i64]]) -> Vec<Vec<BigInt>> {
    a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
  }

  fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let k = b.len();
    let n = b.first().map_or(0, |r| r.len());
    a.iter().map(|r| (0..n).map(|j| (0..k).map(|t| &r[t] * &b[t][j]).sum()).collect()).collect()
  }

  #[test]
  fn snf_small() {
    let a = big(&[&[2, 4], &[6, 8]]);
    let s = smith_normal_form(&a, 2);
    assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
    assert_eq!(matmul(&matmul(&s.u, &a), &s.v), s.d);
    assert_eq!(matmul(&s.v, &s.v_inv), identity(2));
  }

  #[test]
  fn degenerate_shapes() {
    assert!(SparseMatrix::zero(3, 0).invariant_factors().is_empty());
    assert!(SparseMatrix::zero(0, 3).invariant_factors().is_empty());
    assert_eq!(SparseMatrix::from_dense(&identity(4), 4).rank(), 4);
  }

  #[test]
  fn mod_p_rank() {
    let m = SparseMatrix::from_dense(&big(&[&[2, 0], &[0, 3]]), 2);
    assert_eq!(m.rank_mod(2), 1);
    assert_eq!(m.rank_mod(3), 1);
    assert_eq!(m.rank_mod(5), 2);
  }

  proptest! {
    #[test]
    fn snf_is_a_factorization(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-6i64..7, 25)) {
      let a: Vec<Vec<BigInt>> = (0..rows).map(|i| (0..cols).map(|j| BigInt::from(seed[i * 5 + j])).collect()).collect();
      let s = smith_normal_form(&a, cols);
      prop_assert_eq!(matmul(&matmul(&s.u, &a), &s.v), s.d.clone());
      prop_assert_eq!(matmul(&s.v, &s.v_inv), identity(cols));
      for w in s.diagonal.windows(2) {
        prop_assert!(w[1].is_multiple_of(&w[0]));
      }
      for i in 0..rows {
        for j in 0..cols {
          if i != j {
            prop_assert!(s.d[i][j].is_zero());
          }
        }
      }
      let sparse = SparseMatrix::from_dense(&a, cols);
      prop_assert_eq!(sparse.invariant_factors(), s.diagonal.clone());
      prop_assert_eq!(sparse.rank_mod(7) <= sparse.rank(), true);
    }
  }
}
