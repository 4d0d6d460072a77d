use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reks::{
  equivariance::{Ext, FiniteGSet, FiniteGroup, SubgroupLattice},
  homology::{equivariant_conn_space, reduced_homology},
  sset::{edgewise_subdivide, indexed_wedge_product, product, real_sphere, samples, smash, sphere},
};

#[test]
fn smash_with_s0_is_the_identity() {
  let g = FiniteGroup::cyclic(2);
  let s2 = Arc::new(sphere(&g, 2));
  let x = smash(&s2, &Arc::new(sphere(&g, 0))).unwrap();
  assert_eq!(reduced_homology(&x).degrees, reduced_homology(&s2).degrees);
}

#[test]
fn product_of_two_spheres() {
  let g = FiniteGroup::trivial();
  let s2 = Arc::new(sphere(&g, 2));
  let p = product(&[s2.clone(), s2], None).unwrap();
  let h = reduced_homology(&p.space);
  assert_eq!(h.degree(2).betti, 2);
  assert!(h.degree(3).is_zero());
  assert!(h.degree(4).is_z());
}

#[test]
fn wedge_into_product_of_spheres() {
  let g = FiniteGroup::cyclic(2);
  let s2 = Arc::new(sphere(&g, 2));
  let iwp = indexed_wedge_product(&s2, &FiniteGSet::free(&g, 1)).unwrap();
  let h = reduced_homology(&iwp.product.space);
  assert_eq!(h.degree(2).betti, 2);
  assert!(h.degree(4).is_z());
  assert_eq!(reduced_homology(&iwp.wedge.space).degree(2).betti, 2);
}

#[test]
fn subdivided_spheres() {
  for n in 1..=4 {
    let sd = edgewise_subdivide(&real_sphere(n)).unwrap();
    let h = reduced_homology(&sd.space);
    assert!(h.degree(n).is_z(), "S^{n}");
    let l = sd.space.lattice();
    let (fixed, _) = sd.space.fixed_points(&l, l.top());
    // the reversal of Delta[n] fixes a disc of dimension n / 2
    assert!(reduced_homology(&fixed).degree(n / 2).is_z(), "S^{n} fixed");
  }
}

#[test]
fn double_suspensions_are_simply_connected() {
  let l = Arc::new(SubgroupLattice::new(&FiniteGroup::cyclic(2)).unwrap());
  let mut rng = ChaCha8Rng::seed_from_u64(9);
  for _ in 0..20 {
    let x = samples::random_double_suspension(&mut rng, 4);
    let c = equivariant_conn_space(&x, &l);
    assert!(c.class_values().iter().all(|&v| v >= Ext::Fin(1)), "{c}");
    assert!(c.at(l.trivial()).is_finite());
  }
}

proptest! {
  #![proptest_config(ProptestConfig::with_cases(24))]

  #[test]
  fn subdivision_preserves_homology(seed in any::<u64>()) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = samples::random_real(&mut rng, 3);
    let sd = edgewise_subdivide(&z).unwrap();
    let (a, b) = (reduced_homology(z.underlying()), reduced_homology(&sd.space));
    for n in 0..=4 {
      prop_assert_eq!(a.degree(n), b.degree(n));
    }
  }
}
