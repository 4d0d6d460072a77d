use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reks::{
  doldthom::{bredon, verify_conn_preservation, verify_wedge_iso, GAbelianGroup},
  dualcat::{
    classify_split_extension, standard_embedding, strict_inverse, strictify, swallow::SwallowBase,
    sym_equivalences, Duality, FinCat,
  },
  equivariance::{
    certificate_shift, excision_bound, indexed_wedge_bound, sphere_gain, wedge_bound,
    AnalyticityCertificate, ConnFn, FiniteGSet, FiniteGroup, SubgroupLattice,
  },
  homology::{equivariant_conn, equivariant_conn_space},
  s21::{compare_with_oracle, curated_inputs, trace_conn, verify_split_pa, CoeffSystem, Level},
  sset::{indexed_wedge_product, samples, SimplicialGSet},
  wall::{split_square_zero, ModCat},
};
use serde_json::{json, Value};

use crate::input::{self, conn_json, ext_json, label, schema, usize_field, CliError, CliResult};

pub const DEFAULT_TOP: usize = 5;

#[derive(Default)]
pub struct Outcome {
  pub results: Vec<Value>,
  pub failures: Vec<Value>,
}

impl Outcome {
  fn push(&mut self, result: Value, failure: Option<Value>) {
    self.results.push(result);
    self.failures.extend(failure);
  }
}

fn c2() -> CliResult<(FiniteGroup, Arc<SubgroupLattice>)> {
  let g = FiniteGroup::cyclic(2);
  let l = input::lattice(&g)?;
  Ok((g, l))
}

fn conn_value(f: &ConnFn) -> Value {
  conn_json(f.lattice(), f.class_values())
}

fn space_of(item: &Value, dim: Option<usize>) -> CliResult<Arc<SimplicialGSet>> {
  input::space(
    item
      .get("space")
      .ok_or_else(|| CliError::Schema(format!("missing field 'space' in {item}")))?,
    dim,
  )
}

pub fn conn(items: &[Value], dim: Option<usize>) -> CliResult<Outcome> {
  let mut out = Outcome::default();
  for item in items {
    let x = space_of(item, dim)?;
    let l = input::lattice(x.group())?;
    let mut r = json!({ "space": label(&item["space"]), "conn": conn_value(&equivariant_conn_space(&x, &l)) });
    if let Some(j) = item.get("j") {
      let j = input::gset(x.group(), j)?;
      let iwp = indexed_wedge_product(&x, &j)?;
      let (measured, limited) = equivariant_conn(&iwp.comparison, &l);
      let bound = indexed_wedge_bound(&equivariant_conn_space(&x, &l).shift(1));
      r["wedge_to_product"] = json!({
        "j_size": j.len(),
        "measured": conn_value(&measured),
        "window_limited": limited,
        "bound": conn_value(&bound),
      });
    }
    out.push(r, None);
  }
  Ok(out)
}

pub fn bredon_cmd(items: &[Value], dim: Option<usize>) -> CliResult<Outcome> {
  let mut out = Outcome::default();
  for item in items {
    let x = space_of(item, dim)?;
    let m = input::coeff(x.group(), item.get("coeff").unwrap_or(&json!("z")))?;
    let l = input::lattice(x.group())?;
    let entries: Vec<Value> = bredon(&m, &x, &l)?
      .into_iter()
      .map(|e| json!({ "subgroup": e.subgroup, "subgroup_order": e.order, "homology": e.report.to_json() }))
      .collect();
    out.push(
      json!({ "space": label(&item["space"]), "coeff": m.name(), "fixed_points": entries }),
      None,
    );
  }
  Ok(out)
}

/// Named dt-linearity inputs.
pub fn dt_preset(name: &str) -> CliResult<Value> {
  let (coeff, space, j) = match name {
    "z4neg-s11-freeorbit" => ("z4neg", "S11", json!("free")),
    "f3neg-srho-freeorbit" => ("f3neg", "Srho", json!("free")),
    "f2sq-swap-s2-mixed" => ("f2sq-swap", "S2", json!({ "trivial": 1, "free": 1 })),
    "zsign-s21-twofixed" => ("zsign", "S21", json!({ "trivial": 2 })),
    _ => return schema(format!("unknown preset '{name}'")),
  };
  Ok(json!({ "coeff": coeff, "space": space, "j": j }))
}

struct DtCase {
  label: String,
  coeff: Arc<GAbelianGroup>,
  space: Arc<SimplicialGSet>,
  j: Option<FiniteGSet>,
  top: usize,
}

fn dt_cases(
  items: &[Value],
  dim: Option<usize>,
  count: usize,
  seed: u64,
  with_j: bool,
) -> CliResult<Vec<DtCase>> {
  let mut cases = Vec::new();
  for item in items {
    let space = space_of(item, dim)?;
    let coeff = input::coeff(space.group(), item.get("coeff").unwrap_or(&json!("z")))?;
    let j = if with_j {
      Some(input::gset(space.group(), item.get("j").unwrap_or(&json!("free")))?)
    } else {
      None
    };
    let top = usize_field(item, "top", Some(DEFAULT_TOP))?;
    cases.push(DtCase { label: label(&item["space"]), coeff, space, j, top });
  }
  let (g, _) = c2()?;
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  for i in 0..count {
    let coeff = Arc::new(GAbelianGroup::random(&g, &mut rng, 16));
    let (space, j) = if with_j {
      (samples::random_z2_space(&mut rng, 4), Some(samples::random_z2_set(&mut rng, 3)))
    } else {
      (samples::random_double_suspension(&mut rng, 4), None)
    };
    let space = match dim {
      Some(d) => Arc::new(space.with_truncation(d)),
      None => space,
    };
    cases.push(DtCase {
      label: format!("random #{i} (seed {seed})"),
      coeff,
      space,
      j,
      top: DEFAULT_TOP,
    });
  }
  Ok(cases)
}

pub fn dt_linearity(
  items: &[Value],
  dim: Option<usize>,
  count: usize,
  seed: u64,
) -> CliResult<Outcome> {
  let mut out = Outcome::default();
  for c in dt_cases(items, dim, count, seed, true)? {
    let j = c.j.expect("j");
    let r = verify_wedge_iso(&c.coeff, &c.space, &j, c.top)?;
    let result = json!({
      "space": c.label,
      "coeff": c.coeff.name(),
      "j_size": j.len(),
      "levels": r.levels,
      "generators": r.generators,
      "checks": r.checks,
      "pass": r.passed(),
    });
    let fail = r
      .counterexample
      .map(|e| json!({ "space": c.label, "coeff": c.coeff.name(), "counterexample": e }));
    out.push(result, fail);
  }
  Ok(out)
}

pub fn dt_conn(items: &[Value], dim: Option<usize>, count: usize, seed: u64) -> CliResult<Outcome> {
  let mut out = Outcome::default();
  for c in dt_cases(items, dim, count, seed, false)? {
    let l = input::lattice(c.space.group())?;
    let r = verify_conn_preservation(&c.coeff, &c.space, &l)?;
    let measured: Vec<_> = r.measured.iter().map(|m| m.value).collect();
    let result = json!({
      "space": c.label,
      "coeff": c.coeff.name(),
      "measured": conn_json(&l, &measured),
      "window_limited": r.measured.iter().any(|m| m.window_limited),
      "bound": conn_value(&r.bound),
      "pass": r.holds,
    });
    let fail = (!r.holds).then(|| result.clone());
    out.push(result, fail);
  }
  Ok(out)
}

pub fn swallow(max_k: usize, max_p: usize, bound: u128) -> CliResult<Outcome> {
  let rep = SwallowBase::preset().verify(max_k, max_p, bound)?;
  let mut out = Outcome::default();
  for c in &rep.cases {
    let result =
      json!({ "k": c.k, "p": c.p, "elements": c.elements, "pass": c.failures.is_empty() });
    let fail =
      (!c.failures.is_empty()).then(|| json!({ "k": c.k, "p": c.p, "failures": c.failures }));
    out.push(result, fail);
  }
  for (k, p, why) in &rep.skipped {
    out.push(json!({ "k": k, "p": p, "skipped": why }), None);
  }
  if rep.cases.is_empty() {
    out.failures.push(json!("no (k, p) case fits the enumeration bound"));
  }
  Ok(out)
}

pub fn sym_defaults() -> Vec<Value> {
  vec![
    json!({ "group": "C3" }),
    json!({ "group": "C4" }),
    json!({ "codiscrete": 2, "perm": [1, 0] }),
  ]
}

pub fn sym(items: &[Value]) -> CliResult<Outcome> {
  let mut out = Outcome::default();
  for item in items {
    let (name, c, d) = if let Some(g) = item.get("group") {
      let g = input::group(g)?;
      let c = FinCat::group(&g);
      let d = Duality::group_inverse(&g, &c);
      (format!("{} with inversion", g.name()), c, d)
    } else {
      let n = usize_field(item, "codiscrete", None)?;
      let perm: Vec<usize> = match item.get("perm") {
        Some(p) => serde_json::from_value(p.clone())
          .map_err(|e| CliError::Schema(format!("bad perm: {e}")))?,
        None => (0..n).collect(),
      };
      (
        format!("codiscrete({n}) with {perm:?}"),
        FinCat::codiscrete(n),
        Duality::codiscrete(n, perm)?,
      )
    };
    let rep = sym_equivalences(&c, &d)?.report();
    let dc = strictify(&c, &d)?;
    let f = standard_embedding(&c, &d, &dc)?;
    let inv =
      strict_inverse(&c, &d, &dc.cat, &dc.duality, &f)?.report(&c, &d, &dc.cat, &dc.duality);
    let pass = rep.holds() && inv.holds();
    let result = json!({ "category": name, "sym": rep, "strict_inverse": inv, "pass": pass });
    let fail = (!pass).then(|| result.clone());
    out.push(result, fail);
  }
  Ok(out)
}

fn ring_and_bimodule(item: &Value) -> CliResult<(reks::wall::WallRing, reks::wall::WallBimodule)> {
  let r = input::ring(item.get("ring").unwrap_or(&json!("F2")))?;
  let m = input::bimodule(&r, item.get("bimodule").unwrap_or(&json!("regular")))?;
  Ok((r, m))
}

pub fn split_ext(items: &[Value]) -> CliResult<Outcome> {
  let mut out = Outcome::default();
  for item in items {
    let (r, m) = ring_and_bimodule(item)?;
    let rank = usize_field(item, "rank", Some(2))?;
    let sq = split_square_zero(&r, &m, rank)?;
    let (b, c) = (sq.total.additive()?, sq.base.additive()?);
    let u: Vec<usize> = (0..=rank).map(|k| sq.base.cat.id(k)).collect();
    for isos_only in [false, true] {
      let rep = classify_split_extension(&b, &c, &sq.p, &sq.s, &u, isos_only)?;
      let pass = rep.holds();
      let result =
        json!({ "ring": r.name, "bimodule": m.name, "rank": rank, "report": rep, "pass": pass });
      let fail = (!pass).then(|| result.clone());
      out.push(result, fail);
    }
  }
  Ok(out)
}

pub fn split_pa(items: &[Value]) -> CliResult<Outcome> {
  let mut out = Outcome::default();
  for item in items {
    let (r, m) = ring_and_bimodule(item)?;
    let p = usize_field(item, "p", Some(2))?;
    let bound = usize_field(item, "bound", Some(2))?;
    let direct = usize_field(item, "direct_bound", Some(bound))?;
    let rep = verify_split_pa(&r, &m, p, bound, direct)?;
    let pass = rep.holds();
    let result = json!({ "report": rep, "pass": pass });
    let fail = (!pass).then(|| result.clone());
    out.push(result, fail);
  }
  Ok(out)
}

pub fn s21_enumerate(items: &[Value]) -> CliResult<Outcome> {
  let mut out = Outcome::default();
  for item in items {
    let r = input::ring(item.get("ring").unwrap_or(&json!("F2")))?;
    let p = usize_field(item, "p", Some(2))?;
    let bound = usize_field(item, "bound", Some(2))?;
    let mc = ModCat::new(&r, bound)?;
    let rep = compare_with_oracle(&Level::new(p, &mc), bound)?;
    let pass = rep.holds();
    let result = json!({ "ring": r.name, "report": rep, "pass": pass });
    let fail = (!pass).then(|| result.clone());
    out.push(result, fail);
  }
  Ok(out)
}

pub fn trace_defaults() -> Vec<Value> {
  curated_inputs().into_iter().map(|(name, _)| json!({ "curated": name })).collect()
}

pub fn trace(items: &[Value], dim: Option<usize>) -> CliResult<Outcome> {
  let mut out = Outcome::default();
  let curated = curated_inputs();
  for item in items {
    let (name, x) = match item.get("curated") {
      Some(n) => {
        let n = n.as_str().unwrap_or_default();
        let x = curated
          .iter()
          .find(|(c, _)| c == n)
          .ok_or_else(|| CliError::Schema(format!("unknown curated input '{n}'")))?;
        (x.0.clone(), x.1.clone())
      }
      None => (label(&item["space"]), space_of(item, dim)?),
    };
    let coeff = input::coeff(x.group(), item.get("coeff").unwrap_or(&json!("z2")))?;
    let sys = CoeffSystem::bouquet(
      usize_field(item, "fixed", Some(2))?,
      usize_field(item, "pairs", Some(0))?,
      &coeff,
    )?;
    let r = trace_conn(&sys, &x)?;
    let pair = |p: &(reks::equivariance::ExtInt, reks::equivariance::ExtInt)| {
      json!([ext_json(&p.0), ext_json(&p.1)])
    };
    let levels: Vec<Value> = r
      .levels
      .iter()
      .map(|l| json!({ "level": l.level, "underlying": ext_json(&l.underlying), "fixed_points": ext_json(&l.fixed_points) }))
      .collect();
    let pass = r.holds();
    let result = json!({
      "input": name,
      "coeff": coeff.name(),
      "x_conn": ext_json(&r.x_conn),
      "x_fixed_conn": ext_json(&r.x_fixed_conn),
      "n_conn": ext_json(&r.n_conn),
      "n_fixed_conn": ext_json(&r.n_fixed_conn),
      "normalization": pair(&r.normalization),
      "levels": levels,
      "measured": pair(&r.measured),
      "bound": pair(&r.bound),
      "window_limited": r.window_limited,
      "pass": pass,
    });
    let fail = (!pass).then(|| result.clone());
    out.push(result, fail);
  }
  Ok(out)
}

pub fn bounds(items: &[Value], dim: Option<usize>) -> CliResult<Outcome> {
  let mut out = Outcome::default();
  for item in items {
    let g = input::group(item.get("group").unwrap_or(&json!("C2")))?;
    let l = input::lattice(&g)?;
    let result = if let Some(cert) = item.get("cert") {
      let mut c = match cert.as_str() {
        Some("rho0") => AnalyticityCertificate::zero(&l),
        Some(s) => return schema(format!("unknown certificate '{s}'")),
        None => AnalyticityCertificate {
          rho: input::conn_fn(&l, &cert["rho"])?,
          q: input::conn_fn_q(&l, &cert["q"])?,
          v: input::conn_fn(&l, &cert["v"])?,
        },
      };
      let smash = item.get("smash").and_then(Value::as_array).cloned().unwrap_or_default();
      for s in &smash {
        let x = input::space(s, dim)?;
        c = certificate_shift(&c, &sphere_gain(&equivariant_conn_space(&x, &l)))?;
      }
      json!({
        "rho": c.rho.to_string(),
        "certificate": {
          "rho": conn_value(&c.rho),
          "q": conn_json(c.q.lattice(), c.q.class_values()),
          "v": conn_value(&c.v),
        },
        "smash": smash.iter().map(label).collect::<Vec<_>>(),
      })
    } else if let Some(e) = item.get("excision") {
      let conns =
        e["e"].as_array().ok_or_else(|| CliError::Schema("excision needs an array 'e'".into()))?;
      let conns: Vec<ConnFn> =
        conns.iter().map(|c| input::conn_fn(&l, c)).collect::<CliResult<_>>()?;
      let nu = excision_bound(&conns, &input::conn_fn_q(&l, &e["c"])?)?;
      json!({ "excision": conn_value(&nu) })
    } else if let Some(w) = item.get("wedge") {
      let p = input::conn_fn(&l, &w["p"])?;
      let wb = wedge_bound(&p, &input::conn_fn(&l, &w["v"])?)?;
      json!({ "wedge": { "theta": conn_value(&wb.theta), "unbounded": wb.unbounded, "indexed": conn_value(&indexed_wedge_bound(&p)) } })
    } else {
      return schema(format!("bounds item needs 'cert', 'excision' or 'wedge': {item}"));
    };
    out.push(result, None);
  }
  Ok(out)
}
