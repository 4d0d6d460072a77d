//! Monotone maps between ordinals `[n] = {0,...,n}`, stored as value lists.

pub fn identity(n: usize) -> Vec<u8> {
  (0..=n as u8).collect()
}

/// The constant map `[n] -> [0]`.
pub fn constant(n: usize) -> Vec<u8> {
  vec![0; n + 1]
}

/// `(a . b)(t) = a(b(t))`.
pub fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
  b.iter().map(|&t| a[t as usize]).collect()
}

pub fn is_identity(a: &[u8]) -> bool {
  a.iter().enumerate().all(|(i, &v)| v as usize == i)
}

/// The coface `delta_i: [n-1] -> [n]` skipping `i`.
pub fn coface(n: usize, i: usize) -> Vec<u8> {
  (0..n).map(|t| if t < i { t as u8 } else { t as u8 + 1 }).collect()
}

/// The codegeneracy `sigma_i: [n+1] -> [n]` hitting `i` twice.
pub fn codegeneracy(n: usize, i: usize) -> Vec<u8> {
  (0..=n + 1).map(|t| if t <= i { t as u8 } else { t as u8 - 1 }).collect()
}

/// Splits a monotone map into a surjection followed by the sorted image.
pub fn epi_mono(theta: &[u8]) -> (Vec<u8>, Vec<u8>) {
  let mut image: Vec<u8> = Vec::with_capacity(theta.len());
  let mut epi = Vec::with_capacity(theta.len());
  for &v in theta {
    if image.last() != Some(&v) {
      image.push(v);
    }
    epi.push(image.len() as u8 - 1);
  }
  (epi, image)
}

/// Positions `i` with `s(i) = s(i+1)`, as a bitmask.
pub fn flats(s: &[u8]) -> u32 {
  s.windows(2).enumerate().fold(0, |acc, (i, w)| if w[0] == w[1] { acc | 1 << i } else { acc })
}

pub fn surjection_from_flats(n: usize, mask: u32) -> Vec<u8> {
  let mut out = Vec::with_capacity(n + 1);
  let mut v = 0u8;
  out.push(0);
  for i in 0..n {
    if mask >> i & 1 == 0 {
      v += 1;
    }
    out.push(v);
  }
  out
}

/// Removes the flats in `mask` from `s`, giving the unique `s'` with `s = s' . collapse(mask)`.
pub fn remove_flats(s: &[u8], mask: u32) -> Vec<u8> {
  s.iter()
    .enumerate()
    .filter(|&(t, _)| t == 0 || mask >> (t - 1) & 1 == 0)
    .map(|(_, &v)| v)
    .collect()
}

/// All monotone surjections `[n] -> [m]`.
pub fn surjections(n: usize, m: usize) -> Vec<Vec<u8>> {
  if m > n {
    return Vec::new();
  }
  subsets(n, n - m).into_iter().map(|mask| surjection_from_flats(n, mask)).collect()
}

/// All `k`-element subsets of `0..n` as bitmasks, in increasing order.
pub fn subsets(n: usize, k: usize) -> Vec<u32> {
  let mut out = Vec::new();
  fn go(start: usize, n: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
    if k == 0 {
      out.push(acc);
      return;
    }
    for i in start..n {
      if n - i < k {
        break;
      }
      go(i + 1, n, k - 1, acc | 1 << i, out);
    }
  }
  go(0, n, k, 0, &mut out);
  out.sort_unstable();
  out
}

/// All monotone maps `[k] -> [n]`.
pub fn monotone_maps(k: usize, n: usize) -> Vec<Vec<u8>> {
  let mut out = Vec::new();
  let mut cur = Vec::with_capacity(k + 1);
  fn go(k: usize, n: u8, lo: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if cur.len() == k + 1 {
      out.push(cur.clone());
      return;
    }
    for v in lo..=n {
      cur.push(v);
      go(k, n, v, cur, out);
      cur.pop();
    }
  }
  go(k, n as u8, 0, &mut cur, &mut out);
  out
}

/// `omega_n(i) = n - i`, conjugating a monotone map `[k] -> [n]`.
pub fn reverse(theta: &[u8], n: usize) -> Vec<u8> {
  theta.iter().rev().map(|&v| n as u8 - v).collect()
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn factorization_recomposes() {
    for theta in monotone_maps(3, 4) {
      let (e, m) = epi_mono(&theta);
      assert_eq!(compose(&m, &e), theta);
      assert_eq!(*e.last().unwrap() as usize + 1, m.len());
    }
  }

  #[test]
  fn flats_round_trip() {
    for s in surjections(5, 2) {
      assert_eq!(surjection_from_flats(5, flats(&s)), s);
    }
    assert_eq!(surjections(4, 2).len(), 6);
    assert_eq!(monotone_maps(2, 3).len(), 20);
  }

  #[test]
  fn removing_flats() {
    let s = vec![0, 0, 1, 1, 2];
    let mask = 0b0001;
    let r = remove_flats(&s, mask);
    assert_eq!(compose(&r, &surjection_from_flats(4, mask)), s);
  }

  #[test]
  fn reversal_conjugates_cofaces_and_codegeneracies() {
    for n in 1..5 {
      for i in 0..=n {
        assert_eq!(reverse(&coface(n, i), n), coface(n, n - i));
      }
      for i in 0..n {
        assert_eq!(reverse(&codegeneracy(n - 1, i), n - 1), codegeneracy(n - 1, n - 1 - i));
      }
    }
  }
}
