//! JSON input schemas. Every object accepts either a preset name or an explicit table.

use std::{fmt, sync::Arc};

use num_rational::Rational64;
use reks::{
  doldthom::GAbelianGroup,
  equivariance::{ConnFn, ConnFnQ, Ext, FiniteGSet, FiniteGroup, SubgroupLattice},
  sset::{
    edgewise_subdivide, real_circle, real_sphere, rep_sphere, sphere, Builder, Simplex,
    SimplicialGSet,
  },
  wall::{WallBimodule, WallRing},
};
use serde_json::Value;

#[derive(Debug)]
pub enum CliError {
  Schema(String),
  Core(reks::Error),
}

impl fmt::Display for CliError {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match self {
      CliError::Schema(s) => write!(f, "schema error: {s}"),
      CliError::Core(e) => write!(f, "{e}"),
    }
  }
}

impl From<reks::Error> for CliError {
  fn from(e: reks::Error) -> Self {
    CliError::Core(e)
  }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn schema<T>(msg: impl Into<String>) -> CliResult<T> {
  Err(CliError::Schema(msg.into()))
}

fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
  v.get(key).ok_or_else(|| CliError::Schema(format!("missing field '{key}' in {v}")))
}

pub fn usize_field(v: &Value, key: &str, default: Option<usize>) -> CliResult<usize> {
  match (v.get(key), default) {
    (None, Some(d)) => Ok(d),
    (None, None) => schema(format!("missing field '{key}' in {v}")),
    (Some(x), _) => x
      .as_u64()
      .map(|n| n as usize)
      .ok_or_else(|| CliError::Schema(format!("'{key}' must be a non-negative integer"))),
  }
}

pub fn str_field<'a>(v: &'a Value, key: &str, default: &'a str) -> CliResult<&'a str> {
  match v.get(key) {
    None => Ok(default),
    Some(x) => x.as_str().ok_or_else(|| CliError::Schema(format!("'{key}' must be a string"))),
  }
}

fn parse<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> CliResult<T> {
  serde_json::from_value(v.clone()).map_err(|e| CliError::Schema(format!("bad {what}: {e}")))
}

/// A preset name, or `{"name", "table"}` with a multiplication table.
pub fn group(v: &Value) -> CliResult<FiniteGroup> {
  if let Some(name) = v.as_str() {
    return FiniteGroup::preset(name)
      .ok_or_else(|| CliError::Schema(format!("unknown group '{name}'")));
  }
  let table: Vec<Vec<usize>> = parse(field(v, "table")?, "group table")?;
  Ok(FiniteGroup::from_table(str_field(v, "name", "G")?, table)?)
}

pub fn lattice(g: &FiniteGroup) -> CliResult<Arc<SubgroupLattice>> {
  Ok(Arc::new(SubgroupLattice::new(g)?))
}

fn c2() -> FiniteGroup {
  FiniteGroup::cyclic(2)
}

fn space_preset(name: &str) -> CliResult<SimplicialGSet> {
  let g = c2();
  let sd =
    |z| -> CliResult<SimplicialGSet> { Ok(Arc::unwrap_or_clone(edgewise_subdivide(&z)?.space)) };
  match name {
    "point" | "S0" | "S1" | "S2" | "S3" | "S4" | "S5" => {
      let n = name.strip_prefix('S').map_or(0, |d| d.parse().unwrap());
      Ok(if name == "point" { reks::sset::point(&g) } else { sphere(&g, n) })
    }
    "S11" | "Ssigma" => sd(real_circle()),
    "S21" => sd(real_sphere(2)),
    "S31" => sd(real_sphere(3)),
    "Srho" => Ok(Arc::unwrap_or_clone(rep_sphere(&g, &gset(&g, &Value::String("free".into()))?)?)),
    _ => schema(format!("unknown space preset '{name}'")),
  }
}

/// A preset name, or `{"group", "vertices", "cells", "action"}`. `vertices` counts the
/// vertices besides the basepoint, `cells[k]` lists the face simplices of each
/// `(k+1)`-cell and `action[g][d]` permutes the `d`-cells; a missing action is trivial.
pub fn space(v: &Value, truncation: Option<usize>) -> CliResult<Arc<SimplicialGSet>> {
  let x = if let Some(name) = v.as_str() {
    space_preset(name)?
  } else {
    let g = group(v.get("group").unwrap_or(&Value::String("C2".into())))?;
    let mut b = Builder::new(&g);
    for _ in 0..usize_field(v, "vertices", Some(0))? {
      b.add_vertex();
    }
    let cells: Vec<Vec<Vec<Simplex>>> =
      parse(v.get("cells").unwrap_or(&Value::Array(Vec::new())), "cells")?;
    let top = cells.len();
    for (k, level) in cells.into_iter().enumerate() {
      for faces in level {
        if faces.len() != k + 2 {
          return schema(format!("a {}-cell needs {} faces", k + 1, k + 2));
        }
        b.add_cell(k + 1, faces);
      }
    }
    let action: Option<Vec<Vec<Vec<usize>>>> =
      v.get("action").map(|a| parse(a, "action")).transpose()?;
    if let Some(a) = &action {
      if a.len() != g.order() {
        return schema("one action table per group element required");
      }
      for d in 0..=top {
        if a.iter().any(|t| t.get(d).map_or(0, Vec::len) != b.num_cells(d)) {
          return schema(format!("action on {d}-cells has the wrong length"));
        }
      }
    }
    b.build_with(|g, d, i| action.as_ref().map_or(i, |a| a[g][d][i]))?
  };
  Ok(Arc::new(match truncation {
    Some(d) => x.with_truncation(d),
    None => x,
  }))
}

/// A preset name, or `{"orders", "action"}` with one integer matrix per group element.
pub fn coeff(g: &FiniteGroup, v: &Value) -> CliResult<Arc<GAbelianGroup>> {
  if let Some(name) = v.as_str() {
    return Ok(Arc::new(GAbelianGroup::preset(g, name)?));
  }
  let orders: Vec<u64> = parse(field(v, "orders")?, "orders")?;
  let action: Vec<Vec<Vec<i64>>> = match v.get("action") {
    Some(a) => parse(a, "coefficient action")?,
    None => return Ok(Arc::new(GAbelianGroup::trivial(g, &orders))),
  };
  Ok(Arc::new(GAbelianGroup::new(g, orders, action)?))
}

/// `"free"`, `"trivial"`, `{"trivial": n, "free": k}` or `{"action": [[...]]}`.
pub fn gset(g: &FiniteGroup, v: &Value) -> CliResult<FiniteGSet> {
  let (trivial, free) = match v.as_str() {
    Some("free") => (0, 1),
    Some("trivial") => (1, 0),
    Some(s) => return schema(format!("unknown G-set '{s}'")),
    None if v.get("action").is_some() => {
      return Ok(FiniteGSet::new(g, parse(&v["action"], "G-set action")?, None)?);
    }
    None => (usize_field(v, "trivial", Some(0))?, usize_field(v, "free", Some(0))?),
  };
  let n = g.order();
  let action = g
    .elements()
    .map(|x| {
      (0..trivial)
        .chain((0..free).flat_map(|o| (0..n).map(move |y| trivial + o * n + g.mul(x, y))))
        .collect()
    })
    .collect();
  Ok(FiniteGSet::new(g, action, None)?)
}

pub fn ring(v: &Value) -> CliResult<WallRing> {
  let name = v.as_str().ok_or_else(|| CliError::Schema("ring must be a preset name".into()))?;
  WallRing::preset(name).ok_or_else(|| CliError::Schema(format!("unknown ring '{name}'")))
}

pub fn bimodule(r: &WallRing, v: &Value) -> CliResult<WallBimodule> {
  match v.as_str() {
    Some("regular") => Ok(WallBimodule::regular(r)),
    Some("zero") => Ok(WallBimodule::zero(r)),
    _ => schema(format!("unknown bimodule {v}; expected \"regular\" or \"zero\"")),
  }
}

fn ext_int(v: &Value) -> CliResult<Ext<i64>> {
  match v {
    Value::String(s) if s == "inf" => Ok(Ext::PosInf),
    Value::String(s) if s == "-inf" => Ok(Ext::NegInf),
    _ => v
      .as_i64()
      .map(Ext::Fin)
      .ok_or_else(|| CliError::Schema(format!("expected an integer or \"inf\", got {v}"))),
  }
}

fn ext_rat(v: &Value) -> CliResult<Ext<Rational64>> {
  match v {
    Value::String(s) if s == "inf" => Ok(Ext::PosInf),
    Value::String(s) if s == "-inf" => Ok(Ext::NegInf),
    Value::String(s) => {
      s.parse().map(Ext::Fin).map_err(|_| CliError::Schema(format!("bad rational '{s}'")))
    }
    _ => v
      .as_i64()
      .map(|n| Ext::Fin(Rational64::from_integer(n)))
      .ok_or_else(|| CliError::Schema(format!("bad rational {v}"))),
  }
}

fn values(v: &Value) -> CliResult<&Vec<Value>> {
  v.as_array().ok_or_else(|| CliError::Schema(format!("expected an array, got {v}")))
}

/// One value per conjugacy class of subgroups, in lattice order.
pub fn conn_fn(l: &Arc<SubgroupLattice>, v: &Value) -> CliResult<ConnFn> {
  Ok(ConnFn::from_classes(l, values(v)?.iter().map(ext_int).collect::<CliResult<_>>()?)?)
}

pub fn conn_fn_q(l: &Arc<SubgroupLattice>, v: &Value) -> CliResult<ConnFnQ> {
  Ok(ConnFnQ::from_classes(l, values(v)?.iter().map(ext_rat).collect::<CliResult<_>>()?)?)
}

pub fn ext_json<T: fmt::Display>(e: &Ext<T>) -> Value {
  match e {
    Ext::Fin(_) => {
      serde_json::from_str(&e.to_string()).unwrap_or_else(|_| Value::String(e.to_string()))
    }
    _ => Value::String(e.to_string()),
  }
}

pub fn conn_json<T: fmt::Display>(l: &SubgroupLattice, values: &[Ext<T>]) -> Value {
  Value::Array(
    values
      .iter()
      .enumerate()
      .map(|(c, v)| serde_json::json!({ "subgroup_order": l.order(l.class_rep(c)), "value": ext_json(v) }))
      .collect(),
  )
}

pub fn label(v: &Value) -> String {
  v.as_str().map_or_else(|| "explicit".to_string(), str::to_string)
}
