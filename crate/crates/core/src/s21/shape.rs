use std::collections::HashMap;

/// The poset `Cat([2], [p])` of monotone maps `[2] -> [p]` under the pointwise order, with the
/// strict duality `theta -> omega theta omega`.
#[derive(Clone, Debug)]
pub struct Shape {
  pub p: usize,
  pub objects: Vec<[usize; 3]>,
  /// Pairs `(rho, theta)` with `rho <= theta`, identities included.
  pub arrows: Vec<(usize, usize)>,
  pub omega: Vec<usize>,
  pub covers: Vec<Vec<usize>>,
  index: HashMap<[usize; 3], usize>,
  arrow_index: HashMap<(usize, usize), usize>,
}

fn le(a: &[usize; 3], b: &[usize; 3]) -> bool {
  (0..3).all(|i| a[i] <= b[i])
}

impl Shape {
  pub fn new(p: usize) -> Self {
    let mut objects = Vec::new();
    for a in 0..=p {
      for b in a..=p {
        for c in b..=p {
          objects.push([a, b, c]);
        }
      }
    }
    let index: HashMap<[usize; 3], usize> =
      objects.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let n = objects.len();
    let mut arrows = Vec::new();
    for r in 0..n {
      for t in 0..n {
        if le(&objects[r], &objects[t]) {
          arrows.push((r, t));
        }
      }
    }
    let arrow_index = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let omega = objects.iter().map(|t| index[&[p - t[2], p - t[1], p - t[0]]]).collect();
    let covers = (0..n)
      .map(|r| {
        (0..n)
          .filter(|&t| {
            t != r
              && le(&objects[r], &objects[t])
              && !(0..n).any(|s| {
                s != r && s != t && le(&objects[r], &objects[s]) && le(&objects[s], &objects[t])
              })
          })
          .collect()
      })
      .collect();
    Self { p, objects, arrows, omega, covers, index, arrow_index }
  }

  pub fn object(&self, t: [usize; 3]) -> usize {
    self.index[&t]
  }

  pub fn arrow(&self, r: usize, t: usize) -> Option<usize> {
    self.arrow_index.get(&(r, t)).copied()
  }

  pub fn is_injective(&self, t: usize) -> bool {
    let o = self.objects[t];
    o[0] < o[1] && o[1] < o[2]
  }

  /// The labels `(a, b)`, `1 <= a < b <= p`, of the retractions `0^a 1^{b-a} 2^{p-b+1}` of some `theta`.
  pub fn labels(&self) -> Vec<(usize, usize)> {
    (1..=self.p).flat_map(|a| (a + 1..=self.p).map(move |b| (a, b))).collect()
  }

  /// The labels of the retractions of `theta`: `theta_0 < a <= theta_1 < b <= theta_2`.
  pub fn retractions(&self, t: usize) -> Vec<(usize, usize)> {
    let o = self.objects[t];
    self
      .labels()
      .into_iter()
      .filter(|&(a, b)| o[0] < a && a <= o[1] && o[1] < b && b <= o[2])
      .collect()
  }

  /// Monotone `psi: [3] -> [p]`.
  pub fn quadruples(&self) -> Vec<[usize; 4]> {
    let p = self.p;
    let mut out = Vec::new();
    for a in 0..=p {
      for b in a..=p {
        for c in b..=p {
          for d in c..=p {
            out.push([a, b, c, d]);
          }
        }
      }
    }
    out
  }

  /// `d_j psi` as an object.
  pub fn face_of(&self, psi: &[usize; 4], j: usize) -> usize {
    let v: Vec<usize> = (0..4).filter(|&i| i != j).map(|i| psi[i]).collect();
    self.object([v[0], v[1], v[2]])
  }

  /// For `f: [m] -> [p]` given by values, the induced map `Cat([2],[m]) -> Cat([2],[p])` on objects.
  pub fn precompose(&self, lower: &Shape, f: &[usize]) -> Vec<usize> {
    lower.objects.iter().map(|t| self.object([f[t[0]], f[t[1]], f[t[2]]])).collect()
  }
}

/// `delta_i: [p-1] -> [p]`, skipping `i`.
pub fn coface(p: usize, i: usize) -> Vec<usize> {
  (0..p).map(|k| if k < i { k } else { k + 1 }).collect()
}

/// `sigma_i: [p+1] -> [p]`, repeating `i`.
pub fn codegeneracy(p: usize, i: usize) -> Vec<usize> {
  (0..=p + 1).map(|k| if k <= i { k } else { k - 1 }).collect()
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn omega_is_an_order_reversing_involution() {
    for p in 0..5 {
      let s = Shape::new(p);
      for &(r, t) in &s.arrows {
        assert!(s.arrow(s.omega[t], s.omega[r]).is_some());
      }
      assert!((0..s.objects.len()).all(|t| s.omega[s.omega[t]] == t));
    }
  }

  #[test]
  fn retraction_labels() {
    let s = Shape::new(2);
    let t = s.object([0, 1, 2]);
    assert_eq!(s.retractions(t), vec![(1, 2)]);
    let s = Shape::new(3);
    assert_eq!(s.retractions(s.object([0, 1, 3])), vec![(1, 2), (1, 3)]);
    assert!(s.retractions(s.object([0, 2, 2])).is_empty());
  }

  #[test]
  fn covers_change_one_coordinate() {
    let s = Shape::new(3);
    for r in 0..s.objects.len() {
      for &t in &s.covers[r] {
        let d: usize = (0..3).map(|i| s.objects[t][i] - s.objects[r][i]).sum();
        assert_eq!(d, 1);
      }
    }
  }
}
