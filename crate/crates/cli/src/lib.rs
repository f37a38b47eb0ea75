//! Command-line front end. Every command produces one JSON report; see
//! `schema/report_v1.json`.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use blockatlas::abelian::p_torsion;
use blockatlas::arith::{primitive_primes, Family, GroupTypeTag, PrimePower};
use blockatlas::fusion::{
    default_d_max, defect_bound_report, derived_inequality_check, fusion_closure_from, is_single_d_series_from,
};
use blockatlas::langlands::{bijection_check, cornqs_check, dual_side_torsor, lemma38_checks};
use blockatlas::rootdata::{self, derived_and_abelianized, kottwitz_target, RootDatumWithAction};
use blockatlas::unipotent::external;
use blockatlas::unipotent::{check_block_hypotheses, ell_blocks_from, Classical, SeriesSource};
use blockatlas::{Error, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

pub mod grid;

pub const REPORT_SCHEMA: &str = "report_v1";

/// Reports carry no randomness; the seed is echoed for the report format.
pub const SEED: u64 = 0;

#[derive(Parser, Debug)]
#[command(name = "blockatlas", version, about = "Unipotent blocks, fusion and torsor computations")]
pub struct Cli {
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Data file for exceptional types (schema exceptional_v1).
    #[arg(long, global = true, value_name = "FILE")]
    pub data: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// List the unipotent labels of a type.
    Unipotent(TypeArgs),
    /// Partition the labels into d-series.
    Series(SeriesArgs),
    /// Unipotent ℓ-blocks for a good odd ℓ not dividing q.
    Blocks(BlocksArgs),
    /// Fusion closure over all admissible d ≤ dmax.
    Fusion(FusionArgs),
    /// Whether the labels form a single D-series.
    DseriesCheck(DSeriesArgs),
    /// Defect bounds and the derived inequality on 1-series.
    DefectBounds(TypeArgs),
    /// Primitive prime divisors of q^d - 1.
    Zsygmondy(ZsygmondyArgs),
    /// Fundamental group, Kottwitz target and derived/abelian split.
    Pi1(Pi1Args),
    /// Component groups and the lattice checks behind them.
    Components(DatumArgs),
    /// Compare the group-side and dual-side torsors.
    Bijection(DatumArgs),
    /// Check the derived/abelianized criterion for vanishing p-torsion.
    Cornqs(DatumArgs),
    /// Run a batch of commands from a config file.
    Grid(GridArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TypeArgs {
    /// Family: A, 2A, B, C, D, 2D, or an exceptional family with --data.
    #[arg(long = "type")]
    #[serde(rename = "type")]
    pub ty: String,
    /// Rank n; optional for exceptional families.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SeriesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ty: TypeArgs,
    #[arg(long)]
    pub d: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BlocksArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ty: TypeArgs,
    /// Prime power q.
    #[arg(long)]
    pub q: u64,
    /// Good odd prime not dividing q.
    #[arg(long)]
    pub ell: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FusionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ty: TypeArgs,
    /// Prime power q.
    #[arg(long)]
    pub q: u64,
    /// Largest d considered; defaults to 2(n+1).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dmax: Option<u32>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DSeriesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ty: TypeArgs,
    /// Comma-separated set of d.
    #[arg(long = "dset", visible_alias = "D", value_delimiter = ',', required = true)]
    pub dset: Vec<u32>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ZsygmondyArgs {
    /// Base q ≥ 2.
    #[arg(long)]
    pub q: u64,
    /// Exponent d ≥ 1.
    #[arg(long)]
    pub d: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Pi1Args {
    /// `catalog:NAME` or a JSON datum file.
    #[arg(long)]
    pub datum: String,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DatumArgs {
    /// `catalog:NAME` or a JSON datum file.
    #[arg(long)]
    pub datum: String,
    #[arg(long)]
    pub p: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GridArgs {
    /// Grid config: one `<command> key=value ...` job per line.
    #[arg(long)]
    pub config: PathBuf,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Unipotent(_) => "unipotent",
            Command::Series(_) => "series",
            Command::Blocks(_) => "blocks",
            Command::Fusion(_) => "fusion",
            Command::DseriesCheck(_) => "dseries-check",
            Command::DefectBounds(_) => "defect-bounds",
            Command::Zsygmondy(_) => "zsygmondy",
            Command::Pi1(_) => "pi1",
            Command::Components(_) => "components",
            Command::Bijection(_) => "bijection",
            Command::Cornqs(_) => "cornqs",
            Command::Grid(_) => "grid",
        }
    }

    fn inputs(&self) -> Value {
        let v = match self {
            Command::Unipotent(a) | Command::DefectBounds(a) => serde_json::to_value(a),
            Command::Series(a) => serde_json::to_value(a),
            Command::Blocks(a) => serde_json::to_value(a),
            Command::Fusion(a) => serde_json::to_value(a),
            Command::DseriesCheck(a) => serde_json::to_value(a),
            Command::Zsygmondy(a) => serde_json::to_value(a),
            Command::Pi1(a) => serde_json::to_value(a),
            Command::Components(a) | Command::Bijection(a) | Command::Cornqs(a) => serde_json::to_value(a),
            Command::Grid(a) => serde_json::to_value(a),
        };
        v.expect("arguments serialize")
    }
}

/// A finished invocation: process exit code and the report.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

impl Outcome {
    pub fn render(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(&self.report).expect("report serializes")
        } else {
            serde_json::to_string(&self.report).expect("report serializes")
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        1
    } else {
        2
    }
}

pub fn error_value(e: &Error) -> Value {
    let mut v = json!({ "kind": e.kind(), "message": e.to_string() });
    if let Error::Parse { line, column, .. } = e {
        v["line"] = json!(line);
        v["column"] = json!(column);
    }
    v
}

fn engine() -> Value {
    json!({ "name": "blockatlas", "version": env!("CARGO_PKG_VERSION") })
}

pub fn envelope(command: &str, inputs: Value, result: &Result<Value>) -> Outcome {
    let mut report = json!({
        "schema": REPORT_SCHEMA,
        "engine": engine(),
        "command": command,
        "inputs": inputs,
        "seed": SEED,
    });
    let code = match result {
        Ok(v) => {
            report["status"] = json!("ok");
            report["result"] = v.clone();
            0
        }
        Err(e) => {
            report["status"] = json!("error");
            report["error"] = error_value(e);
            exit_code(e)
        }
    };
    Outcome { code, report }
}

/// Parses `args` (including the program name) and runs the command.
/// `--help` and `--version` come back as `Err` with the text to print.
pub fn run_args<I, T>(args: I) -> std::result::Result<(Outcome, bool), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    Ok((run(&cli.command, cli.data.as_deref()), cli.pretty))
}

pub fn usage_error(e: &clap::Error) -> Outcome {
    let err = Error::InvalidArgument(e.to_string().trim().to_string());
    envelope("usage", Value::Null, &Err(err))
}

pub fn run(command: &Command, data: Option<&Path>) -> Outcome {
    let mut inputs = command.inputs();
    if let (Some(d), true) = (data, uses_data(command)) {
        inputs["data"] = json!(d.display().to_string());
    }
    if let Command::Grid(args) = command {
        return grid::run_grid(args, data, inputs);
    }
    let result = execute(command, data);
    envelope(command.name(), inputs, &result)
}

fn uses_data(command: &Command) -> bool {
    matches!(
        command,
        Command::Unipotent(_) | Command::Series(_) | Command::Blocks(_) | Command::Fusion(_) | Command::DseriesCheck(_)
    )
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Invariant(format!("report serialization: {e}")))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn family(args: &TypeArgs) -> Result<Family> {
    args.ty
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("unknown family `{}`", args.ty)))
}

fn type_tag(args: &TypeArgs) -> Result<GroupTypeTag> {
    let family = family(args)?;
    let rank = match (args.rank, family.exceptional_rank()) {
        (Some(r), _) => r,
        (None, Some(r)) => r,
        (None, None) => return Err(Error::InvalidArgument(format!("--rank is required for type {family}"))),
    };
    GroupTypeTag::new(family, rank)
}

/// Built-in series data for classical types; the data file for exceptional ones.
pub fn series_source(args: &TypeArgs, data: Option<&Path>) -> Result<Box<dyn SeriesSource>> {
    let ty = type_tag(args)?;
    if ty.family.is_classical() {
        return Ok(Box::new(Classical(ty)));
    }
    let path = data.ok_or_else(|| {
        Error::NotSupported(format!("{ty}: no built-in data for exceptional types; pass --data FILE"))
    })?;
    external::load(&read_file(path)?)?
        .into_iter()
        .find(|s| s.type_tag() == ty)
        .map(|s| Box::new(s) as Box<dyn SeriesSource>)
        .ok_or_else(|| Error::NotSupported(format!("{ty}: not present in {}", path.display())))
}

pub fn load_datum(spec: &str) -> Result<RootDatumWithAction> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        return rootdata::catalog_entry(name);
    }
    let mut rd = RootDatumWithAction::from_json(&read_file(Path::new(spec))?)?;
    if rd.name.is_empty() {
        rd.name = spec.to_string();
    }
    Ok(rd)
}

fn execute(command: &Command, data: Option<&Path>) -> Result<Value> {
    match command {
        Command::Unipotent(a) => {
            let src = series_source(a, data)?;
            let labels: Vec<String> = src.labels()?.iter().map(ToString::to_string).collect();
            Ok(json!({ "type": src.type_tag().to_string(), "count": labels.len(), "labels": labels }))
        }
        Command::Series(a) => {
            let src = series_source(&a.ty, data)?;
            let part = src.d_series(a.d)?;
            Ok(json!({ "series_count": part.len(), "partition": to_value(&part)? }))
        }
        Command::Blocks(a) => {
            let src = series_source(&a.ty, data)?;
            let q = PrimePower::new(a.q)?;
            let d = check_block_hypotheses(src.type_tag(), q, a.ell)?;
            let part = ell_blocks_from(src.as_ref(), q, a.ell)?;
            Ok(json!({ "d": d, "block_count": part.len(), "partition": to_value(&part)? }))
        }
        Command::Fusion(a) => {
            let src = series_source(&a.ty, data)?;
            let q = PrimePower::new(a.q)?;
            let d_max = a.dmax.unwrap_or_else(|| default_d_max(src.type_tag()));
            to_value(&fusion_closure_from(src.as_ref(), q, d_max)?)
        }
        Command::DseriesCheck(a) => {
            let src = series_source(&a.ty, data)?;
            let d_set: BTreeSet<u32> = a.dset.iter().copied().collect();
            to_value(&is_single_d_series_from(src.as_ref(), &d_set)?)
        }
        Command::DefectBounds(a) => {
            let ty = type_tag(a)?;
            let bounds = defect_bound_report(ty)?;
            let bounds_hold = bounds.iter().all(|r| r.satisfied);
            let derived = if ty.rank >= 2 {
                Some(derived_inequality_check(ty)?)
            } else {
                None
            };
            let derived_holds = derived.as_ref().map(|d| d.holds);
            Ok(json!({
                "type": ty.to_string(),
                "bounds": to_value(&bounds)?,
                "bounds_hold": bounds_hold,
                "derived": to_value(&derived)?,
                "holds": bounds_hold && derived_holds.unwrap_or(true),
            }))
        }
        Command::Zsygmondy(a) => {
            if a.q < 2 || a.d == 0 {
                return Err(Error::InvalidArgument("need q >= 2 and d >= 1".into()));
            }
            let all = primitive_primes(a.q, a.d)?;
            let odd = all.iter().copied().find(|&l| l != 2);
            Ok(json!({
                "q": a.q,
                "d": a.d,
                "primitive_primes": all,
                "odd_witness": odd.map_or(json!("none"), |l| json!(l)),
            }))
        }
        Command::Pi1(a) => {
            let rd = load_datum(&a.datum)?;
            let g = rootdata::pi1(&rd)?;
            let k = kottwitz_target(&rd)?;
            let da = derived_and_abelianized(&rd)?;
            let mut v = json!({
                "datum": rd.name,
                "pi1": g.group.to_string(),
                "kottwitz_target": k.to_string(),
                "pi1_der": da.pi1_der.to_string(),
                "cochar_ab": da.cochar_ab.to_string(),
                "exact": da.exact,
            });
            if let Some(p) = a.p {
                if !blockatlas::arith::is_prime(p) {
                    return Err(Error::InvalidArgument(format!("{p} is not prime")));
                }
                v["p"] = json!(p);
                v["pi1_p_torsion"] = json!(p_torsion(&g.group, p).group.to_string());
                v["kottwitz_p_torsion"] = json!(p_torsion(&k, p).group.to_string());
            }
            if !da.exact {
                return Err(Error::Invariant(format!("{}: sequence is not exact", rd.name)));
            }
            Ok(v)
        }
        Command::Components(a) => {
            let rd = load_datum(&a.datum)?;
            let lemma = lemma38_checks(&rd, a.p)?;
            if !lemma.holds {
                return Err(Error::Invariant(format!("{} p={}: component checks failed: {lemma:?}", rd.name, a.p)));
            }
            Ok(json!({
                "torus_components": lemma.torus_components.to_string(),
                "dual_side": dual_side_torsor(&rd, a.p)?.to_string(),
                "checks": to_value(&lemma)?,
            }))
        }
        Command::Bijection(a) => {
            let rd = load_datum(&a.datum)?;
            let r = bijection_check(&rd, a.p)?;
            if !r.equal {
                return Err(Error::Invariant(format!(
                    "{} p={}: torsor orders differ ({} vs {})",
                    rd.name, a.p, r.group_side_order, r.dual_side_order
                )));
            }
            to_value(&r)
        }
        Command::Cornqs(a) => {
            let rd = load_datum(&a.datum)?;
            let r = cornqs_check(&rd, a.p)?;
            if !r.consistent {
                return Err(Error::Invariant(format!("{} p={}: inconsistent chain {r:?}", rd.name, a.p)));
            }
            to_value(&r)
        }
        Command::Grid(_) => unreachable!("grid is dispatched in run"),
    }
}
