//! One line per acceptance criterion; exits non-zero if any criterion fails.

use std::{
  process::ExitCode,
  sync::Arc,
  time::{Duration, Instant},
};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reks::{
  doldthom::{verify_cofiber_les, verify_conn_preservation, verify_wedge_iso, GAbelianGroup},
  dualcat::{
    standard_embedding, strict_inverse, strictify, swallow::SwallowBase, sym_equivalences, Duality,
    FinCat,
  },
  equivariance::{
    certificate_shift, excision_bound, indexed_wedge_bound, sphere_gain, AnalyticityCertificate,
    ConnFn, ConnFnQ, Ext, FiniteGroup, SubgroupLattice,
  },
  homology::{equivariant_conn, equivariant_conn_space, reduced_homology},
  s21::{curated_inputs, trace_conn, verify_split_pa, CoeffSystem},
  sset::{cone, edgewise_subdivide, indexed_wedge_product, real_circle, samples, wedge},
  wall::{WallBimodule, WallRing},
};

/// Every inequality and identity below is exact.
const TOLERANCE: i64 = 0;
const LES_DEGREE: usize = 4;
const SD_DEGREE: usize = 4;
const WEDGE_ISO_LEVEL: usize = 5;

struct Outcome {
  pass: bool,
  detail: String,
}

fn c2() -> (FiniteGroup, Arc<SubgroupLattice>) {
  let g = FiniteGroup::cyclic(2);
  let l = Arc::new(SubgroupLattice::new(&g).unwrap());
  (g, l)
}

fn fin(v: i64) -> Ext<i64> {
  Ext::Fin(v)
}

fn dt_wedge_iso() -> Outcome {
  let (g, _) = c2();
  let mut rng = ChaCha8Rng::seed_from_u64(101);
  let mut failures = Vec::new();
  let mut checks = 0;
  for i in 0..25 {
    let m = Arc::new(GAbelianGroup::random(&g, &mut rng, 16));
    let x = samples::random_z2_space(&mut rng, 4);
    let j = samples::random_z2_set(&mut rng, 3);
    assert!(m.order().is_some_and(|o| o <= 16) && x.dim() <= 4);
    match verify_wedge_iso(&m, &x, &j, WEDGE_ISO_LEVEL) {
      Ok(r) => {
        checks += r.checks;
        if let Some(c) = r.counterexample {
          failures.push(format!("#{i}: {c}"));
        }
      }
      Err(e) => failures.push(format!("#{i}: {e}")),
    }
  }
  Outcome {
    pass: failures.is_empty(),
    detail: format!("25 inputs, {checks} checks, failures {failures:?}"),
  }
}

fn lemma_bound() -> Outcome {
  let (_, l) = c2();
  let mut rng = ChaCha8Rng::seed_from_u64(102);
  let mut violations = Vec::new();
  for i in 0..20 {
    let x = samples::random_double_suspension(&mut rng, 3);
    let j = samples::random_z2_set(&mut rng, 2);
    let iwp = indexed_wedge_product(&x, &j).unwrap();
    let (measured, limited) = equivariant_conn(&iwp.comparison, &l);
    let bound = indexed_wedge_bound(&equivariant_conn_space(&x, &l).shift(1));
    let ok = bound.shift(-TOLERANCE).le(&measured).unwrap();
    if !ok && !limited {
      violations.push(format!("#{i} |J|={} measured {measured} bound {bound}", j.len()));
    }
  }
  Outcome {
    pass: violations.is_empty(),
    detail: format!("20 inputs, {} violations {violations:?}", violations.len()),
  }
}

fn conn_preservation() -> Outcome {
  let (g, l) = c2();
  let mut rng = ChaCha8Rng::seed_from_u64(103);
  let mut bad = Vec::new();
  for i in 0..20 {
    let m = Arc::new(GAbelianGroup::random(&g, &mut rng, 16));
    let x = samples::random_double_suspension(&mut rng, 4);
    let r = verify_conn_preservation(&m, &x, &l).unwrap();
    if !r.holds {
      bad.push(format!("#{i} measured {:?} bound {}", r.measured, r.bound));
    }
  }
  Outcome { pass: bad.is_empty(), detail: format!("20 inputs, failures {bad:?}") }
}

fn cofiber_les() -> Outcome {
  let (g, l) = c2();
  let mut rng = ChaCha8Rng::seed_from_u64(104);
  let names = ["f2", "f3neg", "f2sq-swap", "f2", "f3neg"];
  let mut squares = 0;
  let mut bad = Vec::new();
  for (k, name) in names.iter().enumerate() {
    let m = Arc::new(GAbelianGroup::preset(&g, name).unwrap());
    let x = samples::random_z2_space(&mut rng, 2);
    let (_, into_cone) = cone(&x).unwrap();
    let y = samples::random_z2_space(&mut rng, 2);
    let w = wedge(&[x.clone(), y], None).unwrap();
    for i in [into_cone, w.inclusions[0].clone()] {
      squares += 1;
      for r in verify_cofiber_les(&m, &i, &l, LES_DEGREE).unwrap() {
        if !r.passed() {
          bad.push(format!("square {k} ({name}): {:?}", r.counterexample));
        }
      }
    }
  }
  Outcome {
    pass: bad.is_empty() && squares == 10,
    detail: format!("{squares} squares through degree {LES_DEGREE}, failures {bad:?}"),
  }
}

fn swallow() -> Outcome {
  let rep = SwallowBase::preset().verify(2, 3, 2_000_000).unwrap();
  let elements: u64 = rep.cases.iter().map(|c| c.elements).sum();
  let pass = rep.holds() && rep.covered_k() == vec![0, 1, 2];
  Outcome {
    pass,
    detail: format!(
      "{} (k, p) cases, {elements} elements, k covered {:?}, skipped {:?}",
      rep.cases.len(),
      rep.covered_k(),
      rep.skipped
    ),
  }
}

fn sym() -> Outcome {
  let z3 = FiniteGroup::cyclic(3);
  let z4 = FiniteGroup::cyclic(4);
  let cats = [
    ("Z/3 with inversion", FinCat::group(&z3), None),
    ("Z/4 with inversion", FinCat::group(&z4), None),
    (
      "codiscrete pair with swap",
      FinCat::codiscrete(2),
      Some(Duality::codiscrete(2, vec![1, 0]).unwrap()),
    ),
  ];
  let mut bad = Vec::new();
  for (name, c, d) in cats {
    let d = d.unwrap_or_else(|| {
      Duality::group_inverse(if name.starts_with("Z/3") { &z3 } else { &z4 }, &c)
    });
    let rep = sym_equivalences(&c, &d).unwrap().report();
    if !rep.holds() {
      bad.push(format!("{name}: {rep:?}"));
    }
    let dc = strictify(&c, &d).unwrap();
    let f = standard_embedding(&c, &d, &dc).unwrap();
    let inv = strict_inverse(&c, &d, &dc.cat, &dc.duality, &f).unwrap();
    let r = inv.report(&c, &d, &dc.cat, &dc.duality);
    if !r.holds() {
      bad.push(format!("{name} D(F', xi): {r:?}"));
    }
  }
  Outcome { pass: bad.is_empty(), detail: format!("3 categories, failures {bad:?}") }
}

fn split_pa() -> Outcome {
  let f2 = WallRing::prime_field(2);
  let m = WallBimodule::regular(&f2);
  let start = Instant::now();
  let p2 = verify_split_pa(&f2, &m, 2, 2, 2).unwrap();
  let p3 = verify_split_pa(&f2, &m, 3, 2, 1).unwrap();
  let t = start.elapsed();
  let pass = p2.holds() && p3.holds() && t < Duration::from_secs(600);
  Outcome {
    pass,
    detail: format!(
      "p=2: {} classes, {} morphisms, holds {}; p=3: {} classes, {} morphisms, holds {}; {:.1}s",
      p2.classes,
      p2.morphisms_checked,
      p2.holds(),
      p3.classes,
      p3.morphisms_checked,
      p3.holds(),
      t.as_secs_f64()
    ),
  }
}

fn certificates() -> Outcome {
  let (_, l) = c2();
  let s11 = edgewise_subdivide(&real_circle()).unwrap().space;
  let gain = sphere_gain(&equivariant_conn_space(&s11, &l));
  let shifted = certificate_shift(&AnalyticityCertificate::zero(&l), &gain).unwrap();
  let expected = ConnFn::from_classes(&l, vec![fin(-1), fin(0)]).unwrap();
  let cert_ok = shifted.rho == expected;

  let t = Arc::new(SubgroupLattice::new(&FiniteGroup::trivial()).unwrap());
  let mut rng = ChaCha8Rng::seed_from_u64(108);
  let mut mismatches = 0;
  for _ in 0..100 {
    let n = rng.gen_range(1..=4);
    let ks: Vec<i64> = (0..=n).map(|_| rng.gen_range(-2..12)).collect();
    let c = Rational64::new(rng.gen_range(-4..9), rng.gen_range(1..7));
    let e: Vec<ConnFn> = ks.iter().map(|&k| ConnFn::constant(&t, fin(k))).collect();
    let nu = excision_bound(&e, &ConnFnQ::constant(&t, Ext::Fin(c))).unwrap();
    let classical = (Rational64::from_integer(ks.iter().sum())
      - c * Rational64::from_integer(n as i64 + 1))
    .floor()
    .to_integer();
    if nu.at(0) != fin(classical + TOLERANCE) {
      mismatches += 1;
    }
  }
  Outcome {
    pass: cert_ok && mismatches == 0,
    detail: format!("rho = {}, excision mismatches {mismatches}/100", shifted.rho),
  }
}

fn trace() -> Outcome {
  let sys = CoeffSystem::toy();
  let mut bad = Vec::new();
  let mut rows = Vec::new();
  for (name, x) in curated_inputs() {
    let r = trace_conn(&sys, &x).unwrap();
    rows
      .push(format!("{name} ({},{}) >= ({},{})", r.measured.0, r.measured.1, r.bound.0, r.bound.1));
    if !r.holds() || r.window_limited {
      bad.push(name);
    }
  }
  Outcome {
    pass: bad.is_empty() && rows.len() == 10,
    detail: format!("failures {bad:?}; {}", rows.join(", ")),
  }
}

fn subdivision() -> Outcome {
  let mut rng = ChaCha8Rng::seed_from_u64(110);
  let mut bad = Vec::new();
  for i in 0..15 {
    let z = samples::random_real(&mut rng, 3);
    let sd = edgewise_subdivide(&z).unwrap().space;
    let (a, b) = (reduced_homology(z.underlying()), reduced_homology(&sd));
    let top = SD_DEGREE.min(a.reliable).min(b.reliable);
    if top < SD_DEGREE && !(a.complete && b.complete) {
      bad.push(format!("#{i}: homology only reliable through {top}"));
    }
    if (0..=SD_DEGREE).any(|n| a.degree(n) != b.degree(n)) {
      bad.push(format!("#{i}: {a:?} vs {b:?}"));
    }
  }
  let (_, l) = c2();
  let s11 = edgewise_subdivide(&real_circle()).unwrap().space;
  let (fixed, _) = s11.fixed_points(&l, l.top());
  let h0 = reduced_homology(&fixed).degree(0);
  Outcome {
    pass: bad.is_empty() && h0.is_z(),
    detail: format!("15 inputs, failures {bad:?}; fixed H_0 of sd_e S^(1,1) is Z: {}", h0.is_z()),
  }
}

fn main() -> ExitCode {
  let criteria: [(&str, fn() -> Outcome, u64); 10] = [
    ("dold-thom wedge/product isomorphism", dt_wedge_iso, 60),
    ("indexed wedge connectivity bound", lemma_bound, 120),
    ("connectivity preservation", conn_preservation, 120),
    ("cofiber long exact sequences", cofiber_les, 300),
    ("swallowing identities", swallow, 300),
    ("sym equivalences", sym, 300),
    ("split square-zero levelwise equivalence", split_pa, 600),
    ("certificate arithmetic", certificates, 60),
    ("trace map connectivity", trace, 300),
    ("edgewise subdivision", subdivision, 300),
  ];
  let mut failed = 0;
  for (i, (name, run, budget)) in criteria.iter().enumerate() {
    let start = Instant::now();
    let out = run();
    let t = start.elapsed();
    let pass = out.pass && t <= Duration::from_secs(*budget);
    failed += usize::from(!pass);
    println!(
      "criterion {:>2} {} {name} ({:.1}s of {budget}s): {}",
      i + 1,
      if pass { "PASS" } else { "FAIL" },
      t.as_secs_f64(),
      out.detail
    );
  }
  if failed == 0 {
    ExitCode::SUCCESS
  } else {
    println!("{failed} criteria failed");
    ExitCode::FAILURE
  }
}
