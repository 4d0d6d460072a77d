//! `reks`: reproducible verification runs with JSON (or flattened CSV) reports.
//!
//! Exit code 0 when every check passes, 1 when a check fails (the report carries the
//! counterexamples) and 2 on usage or schema errors, including an empty input set.

mod commands;
mod input;

use std::{fs, path::PathBuf, process::ExitCode};

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::Outcome;
use input::{schema, CliError, CliResult};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
  name = "reks",
  version,
  about = "Finite models for equivariant calculus and Real algebraic K-theory"
)]
struct Cli {
  #[command(subcommand)]
  command: Command,
  /// JSON input files; an array in a file is read as several inputs.
  #[arg(long, global = true)]
  input: Vec<PathBuf>,
  /// Write the report here instead of stdout.
  #[arg(long, global = true)]
  out: Option<PathBuf>,
  /// Truncation dimension for input spaces; REKS_MAX_DIM takes precedence.
  #[arg(long, global = true)]
  dim: Option<usize>,
  #[arg(long, global = true, default_value_t = 0)]
  seed: u64,
  #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
  format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
  Json,
  Csv,
}

#[derive(Subcommand)]
enum Command {
  /// Fixed-point connectivities of spaces, and of wedge-to-product maps when `j` is given.
  Conn,
  /// Homology of the Dold-Thom fixed points for every conjugacy class.
  Bredon,
  #[command(subcommand)]
  Verify(Check),
  /// Connectivity of the trace map on a coefficient system.
  TraceConn,
  /// Certificate, excision and wedge bound calculators.
  Bounds(BoundsArgs),
  #[command(subcommand)]
  S21(S21Command),
}

#[derive(Subcommand)]
enum Check {
  /// Levelwise Dold-Thom isomorphism from indexed wedges to indexed products.
  DtLinearity(RandomArgs),
  /// Dold-Thom fixed points are at least as connected as the space predicts.
  DtConn(RandomArgs),
  /// Swallowing identities of the real nerve.
  Swallow(SwallowArgs),
  /// Sym equivalences and strict inverses for categories with duality.
  Sym,
  /// Classification of a split square-zero extension of additive categories.
  SplitExt,
  /// Levelwise equivalence for the split square-zero extension of a Wall ring.
  SplitPa,
}

#[derive(Subcommand)]
enum S21Command {
  /// Compare enumerated diagrams with the classification oracle.
  Enumerate,
  /// Same as `verify split-pa`.
  VerifySplit,
  /// Same as `trace-conn`.
  TraceConn,
}

#[derive(Args)]
struct RandomArgs {
  /// Named inputs, added to those read from --input.
  #[arg(long)]
  preset: Vec<String>,
  /// Number of random inputs drawn from --seed.
  #[arg(long, default_value_t = 0)]
  count: usize,
}

#[derive(Args)]
struct SwallowArgs {
  #[arg(long, default_value_t = 2)]
  max_k: usize,
  #[arg(long, default_value_t = 3)]
  max_p: usize,
  /// Largest number of elements enumerated for a single (k, p).
  #[arg(long, default_value_t = 2_000_000)]
  bound: u128,
}

#[derive(Args)]
struct BoundsArgs {
  /// Start from a named certificate (`rho0`).
  #[arg(long)]
  cert: Option<String>,
  /// Spheres smashed into the certificate, as space presets.
  #[arg(long, requires = "cert")]
  smash: Vec<String>,
}

fn read_inputs(paths: &[PathBuf]) -> CliResult<Vec<Value>> {
  let mut items = Vec::new();
  for p in paths {
    let text =
      fs::read_to_string(p).map_err(|e| CliError::Schema(format!("{}: {e}", p.display())))?;
    match serde_json::from_str(&text)
      .map_err(|e| CliError::Schema(format!("{}: {e}", p.display())))?
    {
      Value::Array(a) => items.extend(a),
      v => items.push(v),
    }
  }
  Ok(items)
}

/// Inputs from files, else `defaults`; either way the set must be non-empty.
fn items_or(cli: &Cli, defaults: Vec<Value>) -> CliResult<Vec<Value>> {
  let items = if cli.input.is_empty() { defaults } else { read_inputs(&cli.input)? };
  if items.is_empty() {
    return schema("empty input set");
  }
  Ok(items)
}

fn truncation(cli: &Cli) -> CliResult<Option<usize>> {
  match std::env::var("REKS_MAX_DIM") {
    Ok(s) => s
      .trim()
      .parse()
      .map(Some)
      .map_err(|_| CliError::Schema(format!("REKS_MAX_DIM must be a number, got '{s}'"))),
    Err(_) => Ok(cli.dim),
  }
}

fn random_items(cli: &Cli, args: &RandomArgs) -> CliResult<Vec<Value>> {
  let mut items = if cli.input.is_empty() { Vec::new() } else { read_inputs(&cli.input)? };
  for p in &args.preset {
    items.push(commands::dt_preset(p)?);
  }
  if items.is_empty() && args.count == 0 {
    return schema("empty input set");
  }
  Ok(items)
}

fn run(cli: &Cli) -> CliResult<(&'static str, Outcome)> {
  let dim = truncation(cli)?;
  Ok(match &cli.command {
    Command::Conn => ("conn", commands::conn(&items_or(cli, Vec::new())?, dim)?),
    Command::Bredon => ("bredon", commands::bredon_cmd(&items_or(cli, Vec::new())?, dim)?),
    Command::TraceConn | Command::S21(S21Command::TraceConn) => {
      ("trace-conn", commands::trace(&items_or(cli, commands::trace_defaults())?, dim)?)
    }
    Command::Bounds(b) => {
      let flags =
        b.cert.as_ref().map(|c| vec![json!({ "cert": c, "smash": b.smash })]).unwrap_or_default();
      let items = if flags.is_empty() { items_or(cli, Vec::new())? } else { flags };
      ("bounds", commands::bounds(&items, dim)?)
    }
    Command::Verify(Check::DtLinearity(a)) => (
      "verify dt-linearity",
      commands::dt_linearity(&random_items(cli, a)?, dim, a.count, cli.seed)?,
    ),
    Command::Verify(Check::DtConn(a)) => {
      ("verify dt-conn", commands::dt_conn(&random_items(cli, a)?, dim, a.count, cli.seed)?)
    }
    Command::Verify(Check::Swallow(a)) => {
      ("verify swallow", commands::swallow(a.max_k, a.max_p, a.bound)?)
    }
    Command::Verify(Check::Sym) => {
      ("verify sym", commands::sym(&items_or(cli, commands::sym_defaults())?)?)
    }
    Command::Verify(Check::SplitExt) => {
      ("verify split-ext", commands::split_ext(&items_or(cli, vec![json!({})])?)?)
    }
    Command::Verify(Check::SplitPa) | Command::S21(S21Command::VerifySplit) => {
      ("verify split-pa", commands::split_pa(&items_or(cli, vec![json!({})])?)?)
    }
    Command::S21(S21Command::Enumerate) => {
      ("s21 enumerate", commands::s21_enumerate(&items_or(cli, vec![json!({})])?)?)
    }
  })
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
  let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
  match v {
    Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, rows)),
    Value::Array(a) if !a.is_empty() => {
      a.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, rows))
    }
    Value::String(s) => rows.push((prefix.to_string(), s.clone())),
    _ => rows.push((prefix.to_string(), v.to_string())),
  }
}

fn csv_field(s: &str) -> String {
  if s.contains([',', '"', '\n']) {
    format!("\"{}\"", s.replace('"', "\"\""))
  } else {
    s.to_string()
  }
}

fn render(report: &Value, format: Format) -> String {
  match format {
    Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
    Format::Csv => {
      let mut rows = Vec::new();
      flatten("", report, &mut rows);
      let mut s = String::from("key,value\n");
      for (k, v) in rows {
        s += &format!("{},{}\n", csv_field(&k), csv_field(&v));
      }
      s
    }
  }
}

fn emit(cli: &Cli, text: &str) -> Result<(), String> {
  match &cli.out {
    Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
    None => {
      print!("{text}");
      Ok(())
    }
  }
}

fn main() -> ExitCode {
  let cli = Cli::parse();
  let (command, outcome) = match run(&cli) {
    Ok(r) => r,
    Err(e) => {
      eprintln!("reks: {e}");
      let report = json!({ "error": e.to_string(), "kind": if matches!(e, CliError::Schema(_)) { "schema" } else { "input" } });
      let _ = emit(&cli, &render(&report, cli.format));
      return ExitCode::from(2);
    }
  };
  let pass = outcome.failures.is_empty();
  let mut report =
    json!({ "command": command, "pass": pass, "seed": cli.seed, "results": outcome.results });
  if !pass {
    report["counterexamples"] = Value::Array(outcome.failures);
  }
  if let Err(e) = emit(&cli, &render(&report, cli.format)) {
    eprintln!("reks: {e}");
    return ExitCode::from(2);
  }
  if pass {
    ExitCode::SUCCESS
  } else {
    eprintln!("reks: {command} failed; see counterexamples in the report");
    ExitCode::from(1)
  }
}
