use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reks::{
  doldthom::{verify_cofiber_les, verify_wedge_iso, DoldThom, GAbelianGroup},
  equivariance::{FiniteGSet, FiniteGroup, SubgroupLattice},
  sset::{cone, edgewise_subdivide, real_circle, samples, sphere, wedge, SimplicialMap},
};

fn c2() -> (FiniteGroup, Arc<SubgroupLattice>) {
  let g = FiniteGroup::cyclic(2);
  let l = Arc::new(SubgroupLattice::new(&g).unwrap());
  (g, l)
}

#[test]
fn wedge_iso_on_the_subdivided_sign_circle() {
  let (g, _) = c2();
  let m = Arc::new(GAbelianGroup::preset(&g, "z4neg").unwrap());
  let x = Arc::new(edgewise_subdivide(&real_circle()).unwrap().space.as_ref().clone());
  let rep = verify_wedge_iso(&m, &x, &FiniteGSet::free(&g, 1), 5).unwrap();
  assert!(rep.passed(), "{:?}", rep.counterexample);
  assert_eq!(rep.levels, 6);
  let single = verify_wedge_iso(&m, &x, &FiniteGSet::trivial(&g, 1), 5).unwrap();
  assert!(single.passed());
}

#[test]
fn wedge_iso_random() {
  let (g, _) = c2();
  let mut rng = ChaCha8Rng::seed_from_u64(1);
  for _ in 0..4 {
    let m = Arc::new(GAbelianGroup::random(&g, &mut rng, 16));
    let x = samples::random_z2_space(&mut rng, 3);
    let j = samples::random_z2_set(&mut rng, 3);
    let rep = verify_wedge_iso(&m, &x, &j, 4).unwrap();
    assert!(rep.passed(), "{:?}", rep.counterexample);
  }
}

#[test]
fn fold_map_adds_labels() {
  let (g, _) = c2();
  let m = Arc::new(GAbelianGroup::trivial(&g, &[5]));
  let s1 = Arc::new(sphere(&g, 1));
  let w = wedge(&[s1.clone(), s1.clone()], None).unwrap();
  let fold = SimplicialMap::from_fn(&w.space, &s1, |c| match w.origin[c.dim][c.idx] {
    Some((_, cell)) => reks::sset::Simplex::nondegenerate(cell),
    None => reks::sset::Simplex::basepoint(0),
  });
  let dw = DoldThom::new(&m, &w.space, 1).unwrap();
  let ds = DoldThom::new(&m, &s1, 1).unwrap();
  let mut c = dw.generator(0, &vec![2]);
  c.extend(dw.generator(1, &vec![4]));
  let pushed = dw.push(&fold, &ds, 1, &c);
  assert_eq!(pushed.values().cloned().collect::<Vec<_>>(), vec![vec![1]]);
}

#[test]
fn cone_cofibre_sequences_are_exact() {
  let (g, l) = c2();
  let mut rng = ChaCha8Rng::seed_from_u64(2);
  for name in ["f2", "f3neg", "f2sq-swap"] {
    let m = Arc::new(GAbelianGroup::preset(&g, name).unwrap());
    let x = samples::random_z2_space(&mut rng, 2);
    let (_, inc) = cone(&x).unwrap();
    for r in verify_cofiber_les(&m, &inc, &l, 4).unwrap() {
      assert!(r.passed(), "{name}: {:?} {:?}", r.counterexample, r.spots);
    }
  }
}
