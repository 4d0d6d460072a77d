//! Seeded random inputs for property checks and the command line.

use std::sync::Arc;

use rand::{seq::SliceRandom, Rng};

use super::{
  build::{ordered_complex, rep_sphere, smash, sphere, wedge},
  real::{
    edgewise_subdivide, real_circle, real_delta, real_ordered_complex, real_quotient, real_smash,
    real_sphere, RealSimplicialSet,
  },
  set::SimplicialGSet,
};
use crate::equivariance::{FiniteGSet, FiniteGroup};

/// Random simplices on `0..n`, each of dimension at most `max_dim`.
fn random_simplices(rng: &mut impl Rng, n: usize, max_dim: usize, count: usize) -> Vec<Vec<usize>> {
  (0..count)
    .map(|_| {
      let k = rng.gen_range(0..=max_dim.min(n - 1));
      let mut v: Vec<usize> = (0..n).collect();
      v.shuffle(rng);
      let mut s = v[..=k].to_vec();
      s.sort_unstable();
      s
    })
    .collect()
}

/// A random finite `Z/2`-set with at most `max_len` points.
pub fn random_z2_set(rng: &mut impl Rng, max_len: usize) -> FiniteGSet {
  let g = FiniteGroup::cyclic(2);
  loop {
    let free = rng.gen_range(0..=max_len / 2);
    let fixed = rng.gen_range(0..=max_len - 2 * free);
    if free + fixed == 0 {
      continue;
    }
    return FiniteGSet::free(&g, free).disjoint_union(&FiniteGSet::trivial(&g, fixed));
  }
}

/// A random pointed simplicial `Z/2`-set of dimension at most `max_dim` (at least 1).
pub fn random_z2_space(rng: &mut impl Rng, max_dim: usize) -> Arc<SimplicialGSet> {
  let g = FiniteGroup::cyclic(2);
  let max_dim = max_dim.max(1);
  match rng.gen_range(0..6) {
    0 => Arc::new(sphere(&g, rng.gen_range(1..=max_dim))),
    1 if max_dim >= 2 => rep_sphere(&g, &FiniteGSet::free(&g, 1)).unwrap(),
    2 => {
      let sd = edgewise_subdivide(&real_circle()).unwrap().space;
      let sd = Arc::new(sd.with_truncation(sd.truncation()));
      if max_dim >= 2 && rng.gen_bool(0.5) {
        smash(&sd, &Arc::new(sphere(&g, 1))).unwrap()
      } else {
        sd
      }
    }
    3 => {
      let x = Arc::new(sphere(&g, rng.gen_range(1..=max_dim)));
      wedge(&[x.clone(), x], Some(&FiniteGSet::free(&g, 1))).unwrap().space
    }
    4 => {
      let n = rng.gen_range(2..=4);
      let count = rng.gen_range(1..=3);
      let base = random_simplices(rng, n, max_dim.min(2), count);
      let doubled: Vec<Vec<usize>> =
        base.iter().flat_map(|s| [s.clone(), s.iter().map(|v| v + n).collect()]).collect();
      let swap: Vec<Vec<usize>> =
        vec![(0..2 * n).collect(), (0..2 * n).map(|v| (v + n) % (2 * n)).collect()];
      Arc::new(ordered_complex(&g, &doubled, None, Some(&swap)).unwrap().0)
    }
    _ => {
      let a = Arc::new(sphere(&g, 1));
      let b = random_z2_space(rng, max_dim - 1);
      if max_dim >= 2 && b.dim() < max_dim {
        smash(&a, &b).unwrap()
      } else {
        b
      }
    }
  }
}

/// `S^2` smashed with a random space of dimension at most `max_dim - 2`; all fixed points are simply connected.
pub fn random_double_suspension(rng: &mut impl Rng, max_dim: usize) -> Arc<SimplicialGSet> {
  let g = FiniteGroup::cyclic(2);
  let inner = if max_dim < 3 || rng.gen_bool(0.25) {
    Arc::new(sphere(&g, 0))
  } else {
    random_z2_space(rng, max_dim - 2)
  };
  smash(&Arc::new(sphere(&g, 2)), &inner).unwrap()
}

/// A random finite Real simplicial set of dimension at most `max_dim`.
pub fn random_real(rng: &mut impl Rng, max_dim: usize) -> RealSimplicialSet {
  let max_dim = max_dim.max(1);
  match rng.gen_range(0..5) {
    0 => real_sphere(rng.gen_range(1..=max_dim.min(3))),
    1 => real_delta(rng.gen_range(1..=max_dim.min(3))),
    2 => {
      let n = rng.gen_range(1..=4);
      let count = rng.gen_range(1..=3);
      let s = random_simplices(rng, n + 1, max_dim.min(2), count);
      real_ordered_complex(n, &s).unwrap()
    }
    3 if max_dim >= 2 => real_smash(&real_circle(), &real_circle()).unwrap(),
    _ => {
      let n = rng.gen_range(1..=3);
      let d = real_delta(n);
      let vertices_only: Vec<Vec<bool>> = (0..=d.underlying().dim())
        .map(|k| (0..d.underlying().num_cells(k)).map(|_| k == 0).collect())
        .collect();
      real_quotient(&d, &vertices_only).unwrap()
    }
  }
}

#[cfg(test)]
mod tests {
  use rand::SeedableRng;
  use rand_chacha::ChaCha8Rng;

  use super::*;

  #[test]
  fn samples_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
      let x = random_z2_space(&mut rng, 4);
      x.validate().unwrap();
      assert!(x.dim() <= 4);
      let y = random_double_suspension(&mut rng, 4);
      y.validate().unwrap();
      random_real(&mut rng, 3).validate().unwrap();
    }
  }
}
