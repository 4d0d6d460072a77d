use serde::Serialize;

use crate::error::{invalid, Result};

/// Coordinates of an element of `(Z/q)^dim` encoded as `sum c_i q^i`.
pub(crate) fn decode(q: u32, dim: usize, mut code: usize) -> Vec<u32> {
  (0..dim)
    .map(|_| {
      let c = (code % q as usize) as u32;
      code /= q as usize;
      c
    })
    .collect()
}

pub(crate) fn encode(q: u32, coords: &[u32]) -> usize {
  coords.iter().rev().fold(0, |acc, &c| acc * q as usize + c as usize)
}

/// A finite ring with anti-involution: additive group `(Z/q)^dim`, an anti-automorphism `w`
/// and a unit `eps` with `w(w(a)) = eps a eps^{-1}`.
#[derive(Clone, Debug, Serialize)]
pub struct WallRing {
  pub name: String,
  pub q: u32,
  pub dim: usize,
  mul: Vec<usize>,
  add: Vec<usize>,
  w: Vec<usize>,
  eps: usize,
  one: usize,
}

impl WallRing {
  /// Validates the ring axioms, that `w` is an additive anti-automorphism with `w(1) = 1`,
  /// and `w^2 = eps (-) eps^{-1}`.
  pub fn new(
    name: impl Into<String>,
    q: u32,
    dim: usize,
    mul: Vec<usize>,
    w: Vec<usize>,
    eps: usize,
  ) -> Result<Self> {
    let size = (q as usize).pow(dim as u32);
    if mul.len() != size * size || w.len() != size || eps >= size {
      return invalid("ring tables have the wrong size");
    }
    if mul.iter().chain(&w).any(|&x| x >= size) {
      return invalid("ring tables out of range");
    }
    let add = (0..size * size)
      .map(|ab| {
        let (a, b) = (decode(q, dim, ab / size), decode(q, dim, ab % size));
        encode(q, &a.iter().zip(&b).map(|(x, y)| (x + y) % q).collect::<Vec<_>>())
      })
      .collect();
    let mut r = Self { name: name.into(), q, dim, mul, add, w, eps, one: 0 };
    let one = (0..size).find(|&e| (0..size).all(|a| r.mul(e, a) == a && r.mul(a, e) == a));
    let Some(one) = one else { return invalid("ring has no unit") };
    r.one = one;
    for a in 0..size {
      for b in 0..size {
        for c in 0..size {
          if r.mul(r.mul(a, b), c) != r.mul(a, r.mul(b, c)) {
            return invalid("multiplication is not associative");
          }
          if r.mul(a, r.add(b, c)) != r.add(r.mul(a, b), r.mul(a, c))
            || r.mul(r.add(a, b), c) != r.add(r.mul(a, c), r.mul(b, c))
          {
            return invalid("multiplication is not distributive");
          }
        }
      }
    }
    let Some(eps_inv) = r.inverse(eps) else { return invalid("eps is not a unit") };
    let mut seen = vec![false; size];
    for a in 0..size {
      seen[r.w[a]] = true;
      for b in 0..size {
        if r.w(r.add(a, b)) != r.add(r.w(a), r.w(b)) {
          return invalid("w is not additive");
        }
        if r.w(r.mul(a, b)) != r.mul(r.w(b), r.w(a)) {
          return invalid("w is not an anti-homomorphism");
        }
      }
      if r.w(r.w(a)) != r.mul(r.mul(eps, a), eps_inv) {
        return invalid("w^2 is not conjugation by eps");
      }
    }
    if seen.iter().any(|s| !s) || r.w(one) != one {
      return invalid("w is not bijective and unital");
    }
    Ok(r)
  }

  pub fn size(&self) -> usize {
    (self.q as usize).pow(self.dim as u32)
  }

  pub fn zero(&self) -> usize {
    0
  }

  pub fn one(&self) -> usize {
    self.one
  }

  pub fn eps(&self) -> usize {
    self.eps
  }

  pub fn mul(&self, a: usize, b: usize) -> usize {
    self.mul[a * self.size() + b]
  }

  pub fn add(&self, a: usize, b: usize) -> usize {
    self.add[a * self.size() + b]
  }

  pub fn neg(&self, a: usize) -> usize {
    (0..self.size()).find(|&b| self.add(a, b) == 0).unwrap()
  }

  pub fn sub(&self, a: usize, b: usize) -> usize {
    self.add(a, self.neg(b))
  }

  pub fn w(&self, a: usize) -> usize {
    self.w[a]
  }

  pub fn w_inv(&self, a: usize) -> usize {
    self.w.iter().position(|&x| x == a).unwrap()
  }

  pub fn inverse(&self, a: usize) -> Option<usize> {
    (0..self.size()).find(|&b| self.mul(a, b) == self.one && self.mul(b, a) == self.one)
  }

  pub fn coords(&self, a: usize) -> Vec<u32> {
    decode(self.q, self.dim, a)
  }

  /// The condition `w(eps) = eps^{-1}` under which `eta` on free modules is coherent.
  pub fn eta_coherent(&self) -> bool {
    self.inverse(self.eps) == Some(self.w(self.eps))
  }

  pub fn is_commutative(&self) -> bool {
    (0..self.size()).all(|a| (0..self.size()).all(|b| self.mul(a, b) == self.mul(b, a)))
  }

  pub fn prime_field(p: u32) -> Self {
    let n = p as usize;
    let mul = (0..n * n).map(|ab| (ab / n) * (ab % n) % n).collect();
    Self::new(format!("F{p}"), p, 1, mul, (0..n).collect(), 1).expect("prime field")
  }

  /// `Z/n` with the identity involution and `eps = -1`.
  pub fn cyclic_sign(n: u32) -> Self {
    let m = n as usize;
    let mul = (0..m * m).map(|ab| (ab / m) * (ab % m) % m).collect();
    Self::new(format!("Z/{n}(-1)"), n, 1, mul, (0..m).collect(), m - 1).expect("cyclic ring")
  }

  /// 2x2 matrices over `F_2` with transposition; entries `(a, b; c, d)` are bits 0..3.
  pub fn matrices_f2() -> Self {
    let entry = |x: usize, i: usize| (x >> i) & 1;
    let mul = (0..256)
      .map(|xy| {
        let (x, y) = (xy / 16, xy % 16);
        let (a, b, c, d) = (entry(x, 0), entry(x, 1), entry(x, 2), entry(x, 3));
        let (e, f, g, h) = (entry(y, 0), entry(y, 1), entry(y, 2), entry(y, 3));
        ((a * e + b * g) & 1)
          | ((a * f + b * h) & 1) << 1
          | ((c * e + d * g) & 1) << 2
          | ((c * f + d * h) & 1) << 3
      })
      .collect();
    let w = (0..16)
      .map(|x| entry(x, 0) | entry(x, 2) << 1 | entry(x, 1) << 2 | entry(x, 3) << 3)
      .collect();
    Self::new("M2(F2)", 2, 4, mul, w, 0b1001).expect("matrix ring")
  }

  pub fn preset(name: &str) -> Option<Self> {
    match name {
      "F2" => Some(Self::prime_field(2)),
      "F3" => Some(Self::prime_field(3)),
      "Z4" | "Z/4" => Some(Self::cyclic_sign(4)),
      "M2F2" | "M2(F2)" => Some(Self::matrices_f2()),
      _ => None,
    }
  }
}

/// An `A`-bimodule `M` with additive `h: M -> M` satisfying `h(a m) = h(m) w(a)`,
/// `h(m a) = w(a) h(m)` and `h(h(m)) = eps m eps^{-1}`.
#[derive(Clone, Debug, Serialize)]
pub struct WallBimodule {
  pub name: String,
  pub dim: usize,
  left: Vec<usize>,
  right: Vec<usize>,
  h: Vec<usize>,
  size: usize,
}

impl WallBimodule {
  pub fn new(
    ring: &WallRing,
    name: impl Into<String>,
    dim: usize,
    left: Vec<usize>,
    right: Vec<usize>,
    h: Vec<usize>,
  ) -> Result<Self> {
    let size = (ring.q as usize).pow(dim as u32);
    let n = ring.size();
    if left.len() != n * size || right.len() != size * n || h.len() != size {
      return invalid("bimodule tables have the wrong size");
    }
    let m = Self { name: name.into(), dim, left, right, h, size };
    let q = ring.q;
    let add = |x: usize, y: usize| {
      let (a, b) = (decode(q, dim, x), decode(q, dim, y));
      encode(q, &a.iter().zip(&b).map(|(s, t)| (s + t) % q).collect::<Vec<_>>())
    };
    let eps_inv = ring.inverse(ring.eps()).unwrap();
    for x in 0..size {
      if m.left(ring.one(), x) != x || m.right(x, ring.one()) != x {
        return invalid("unit does not act trivially");
      }
      if m.h(m.h(x)) != m.right(m.left(ring.eps(), x), eps_inv) {
        return invalid("h^2 is not conjugation by eps");
      }
      for y in 0..size {
        if m.h(add(x, y)) != add(m.h(x), m.h(y)) {
          return invalid("h is not additive");
        }
      }
      for a in 0..n {
        if m.h(m.left(a, x)) != m.right(m.h(x), ring.w(a))
          || m.h(m.right(x, a)) != m.left(ring.w(a), m.h(x))
        {
          return invalid("h is not compatible with w");
        }
        for b in 0..n {
          if m.left(a, m.left(b, x)) != m.left(ring.mul(a, b), x)
            || m.right(m.right(x, a), b) != m.right(x, ring.mul(a, b))
            || m.left(a, m.right(x, b)) != m.right(m.left(a, x), b)
            || m.left(ring.add(a, b), x) != add(m.left(a, x), m.left(b, x))
            || m.right(x, ring.add(a, b)) != add(m.right(x, a), m.right(x, b))
          {
            return invalid("bimodule axioms fail");
          }
        }
        for y in 0..size {
          if m.left(a, add(x, y)) != add(m.left(a, x), m.left(a, y))
            || m.right(add(x, y), a) != add(m.right(x, a), m.right(y, a))
          {
            return invalid("actions are not additive");
          }
        }
      }
    }
    Ok(m)
  }

  /// `A` as a bimodule over itself with `h = w`.
  pub fn regular(ring: &WallRing) -> Self {
    let n = ring.size();
    let table = (0..n * n).map(|ab| ring.mul(ab / n, ab % n)).collect::<Vec<_>>();
    Self::new(
      ring,
      format!("{}", ring.name),
      ring.dim,
      table.clone(),
      table,
      (0..n).map(|a| ring.w(a)).collect(),
    )
    .expect("regular bimodule")
  }

  pub fn zero(ring: &WallRing) -> Self {
    let n = ring.size();
    Self::new(ring, "0", 0, vec![0; n], vec![0; n], vec![0]).expect("zero bimodule")
  }

  /// `M(X) = sum over the non-base points of M`, with `h(m)_x = h(m_{tau(x)})`.
  pub fn of_pointed_set(ring: &WallRing, m: &WallBimodule, tau: &[usize]) -> Result<Self> {
    let k = tau.len();
    if tau.iter().any(|&t| t >= k) || (0..k).any(|x| tau[tau[x]] != x) {
      return invalid("tau must be an involution of the non-base points");
    }
    let base = m.size;
    let size = base.pow(k as u32);
    let split =
      |x: usize| -> Vec<usize> { (0..k).map(|i| x / base.pow(i as u32) % base).collect() };
    let join = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &c| acc * base + c) };
    let n = ring.size();
    let left = (0..n * size)
      .map(|ax| join(&split(ax % size).iter().map(|&c| m.left(ax / size, c)).collect::<Vec<_>>()))
      .collect();
    let right = (0..size * n)
      .map(|xa| join(&split(xa / n).iter().map(|&c| m.right(c, xa % n)).collect::<Vec<_>>()))
      .collect();
    let h = (0..size)
      .map(|x| {
        let v = split(x);
        join(&(0..k).map(|i| m.h(v[tau[i]])).collect::<Vec<_>>())
      })
      .collect();
    Self::new(ring, format!("{}^{k}", m.name), m.dim * k, left, right, h)
  }

  pub fn size(&self) -> usize {
    self.size
  }

  pub fn left(&self, a: usize, x: usize) -> usize {
    self.left[a * self.size + x]
  }

  pub fn right(&self, x: usize, a: usize) -> usize {
    self.right[x * (self.right.len() / self.size) + a]
  }

  pub fn h(&self, x: usize) -> usize {
    self.h[x]
  }

  pub fn h_inv(&self, x: usize) -> usize {
    self.h.iter().position(|&y| y == x).unwrap()
  }
}

/// The semidirect ring `A x| M` with `(a, m)(a', m') = (aa', am' + ma')`,
/// `w(a, m) = (w(a), h(m))` and unit `(eps, 0)`; the element `(a, m)` is `a + |A| m`.
pub fn semidirect_ring(ring: &WallRing, m: &WallBimodule) -> Result<WallRing> {
  let (n, s) = (ring.size(), m.size());
  let q = ring.q;
  let madd = |x: usize, y: usize| {
    let (a, b) = (decode(q, m.dim, x), decode(q, m.dim, y));
    encode(q, &a.iter().zip(&b).map(|(u, v)| (u + v) % q).collect::<Vec<_>>())
  };
  let mul = (0..n * s * n * s)
    .map(|xy| {
      let (x, y) = (xy / (n * s), xy % (n * s));
      let ((a, u), (b, v)) = ((x % n, x / n), (y % n, y / n));
      ring.mul(a, b) + n * madd(m.left(a, v), m.right(u, b))
    })
    .collect();
  let w = (0..n * s).map(|x| ring.w(x % n) + n * m.h(x / n)).collect();
  WallRing::new(format!("{}x|{}", ring.name, m.name), q, ring.dim + m.dim, mul, w, ring.eps())
}

/// All bijections `A -> B` preserving addition, multiplication and the unit.
pub fn ring_isomorphisms(a: &WallRing, b: &WallRing) -> Vec<Vec<usize>> {
  let n = a.size();
  if n != b.size() || n > 8 {
    return Vec::new();
  }
  let mut out = Vec::new();
  let mut perm: Vec<usize> = (0..n).collect();
  permute(&mut perm, 0, &mut |p| {
    let ok = p[a.one()] == b.one()
      && (0..n).all(|x| {
        (0..n).all(|y| p[a.add(x, y)] == b.add(p[x], p[y]) && p[a.mul(x, y)] == b.mul(p[x], p[y]))
      });
    if ok {
      out.push(p.to_vec());
    }
  });
  out
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
  if k == v.len() {
    return f(v);
  }
  for i in k..v.len() {
    v.swap(k, i);
    permute(v, k + 1, f);
    v.swap(k, i);
  }
}

/// `F_2[x]/(x^2)` with elements `a + bx` encoded as bits.
pub fn dual_numbers_f2() -> WallRing {
  let mul = (0..16)
    .map(|xy| {
      let (x, y) = (xy / 4, xy % 4);
      let (a, b, c, d) = (x & 1, x >> 1, y & 1, y >> 1);
      (a * c) & 1 | ((a * d + b * c) & 1) << 1
    })
    .collect();
  WallRing::new("F2[x]/x^2", 2, 2, mul, (0..4).collect(), 1).expect("dual numbers")
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn presets_validate_and_are_coherent() {
    for name in ["F2", "F3", "Z4", "M2F2"] {
      let r = WallRing::preset(name).unwrap();
      assert!(r.eta_coherent(), "{name}");
      WallBimodule::regular(&r);
    }
    assert!(!WallRing::matrices_f2().is_commutative());
  }

  #[test]
  fn eps_coherence_is_a_separate_condition() {
    let mul = (0..25).map(|ab| (ab / 5) * (ab % 5) % 5).collect();
    let r = WallRing::new("F5(2)", 5, 1, mul, (0..5).collect(), 2).unwrap();
    assert!(!r.eta_coherent());
  }

  #[test]
  fn broken_involution_is_rejected() {
    let mul = (0..9).map(|ab| (ab / 3) * (ab % 3) % 3).collect();
    assert!(WallRing::new("x", 3, 1, mul, vec![0, 2, 1], 1).is_err());
  }

  #[test]
  fn trivial_square_zero_extension_is_the_dual_numbers() {
    let f2 = WallRing::prime_field(2);
    let r = semidirect_ring(&f2, &WallBimodule::regular(&f2)).unwrap();
    assert_eq!(r.size(), 4);
    assert!(!ring_isomorphisms(&r, &dual_numbers_f2()).is_empty());
    assert!(ring_isomorphisms(&r, &WallRing::prime_field(2)).is_empty());
  }

  #[test]
  fn sign_circle_bimodule() {
    let r = WallRing::prime_field(3);
    let m = WallBimodule::of_pointed_set(&r, &WallBimodule::regular(&r), &[2, 1, 0]).unwrap();
    assert_eq!(m.size(), 27);
    // (m1, m2, m3) -> (h m3, h m2, h m1)
    assert_eq!(m.h(1), 9);
  }
}
