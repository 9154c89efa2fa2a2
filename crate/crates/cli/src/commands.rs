//! Argument parsing and command dispatch.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sieveforge::convergence::{tychonoff_check, Point};
use sieveforge::coverage::check_topology;
use sieveforge::filters::{
    check_basis, check_filter, check_subbase, enumerate_filters, enumerate_ultrafilters, filter_from_basis,
    is_ultrafilter, saturate_subbase, Saturation,
};
use sieveforge::functors::{image_law_report, is_filter_preserving};
use sieveforge::laws::{run_laws, LAW_IDS};
use sieveforge::{Carrier, CoverAssignment, Error, Method, Obj, Site, Verdict, DEFAULT_MAX_SIEVES};
use thiserror::Error as ThisError;

use crate::model::{parse_document, resolve, BlockKind, Item, ModelError, Workspace};
use crate::report::{Check, LawSummary, Report};

pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "sieveforge", version, about = "Filters, Grothendieck topologies and compactness on finite sites")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Enumeration budget; defaults to SIEVEFORGE_BUDGET or 2^20.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Per-object ceiling on enumerated sieves.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SIEVES)]
    pub max_sieves: u64,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Lattice,
    Category,
    Topology,
    Filter,
    Basis,
    Subbase,
    Functor,
}

impl CheckKind {
    fn block(self) -> BlockKind {
        match self {
            CheckKind::Lattice => BlockKind::Lattice,
            CheckKind::Category => BlockKind::Category,
            CheckKind::Topology => BlockKind::Topology,
            CheckKind::Filter => BlockKind::Filter,
            CheckKind::Basis => BlockKind::Basis,
            CheckKind::Subbase => BlockKind::Subbase,
            CheckKind::Functor => BlockKind::Functor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnumKind {
    Sieves,
    Filters,
    Ultrafilters,
    Points,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Ultrafilter,
    Exhaustive,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Ultrafilter => Method::Ultrafilter,
            MethodArg::Exhaustive => Method::Exhaustive,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate blocks of one kind against their axioms.
    Check {
        kind: CheckKind,
        model: PathBuf,
        /// Block to check; all blocks of the kind by default.
        #[arg(long)]
        name: Option<String>,
        /// Require the strict form of B2 for bases.
        #[arg(long)]
        strict_basis: bool,
        /// Source assignment for functor checks.
        #[arg(long)]
        source: Option<String>,
        /// Target assignment for functor checks.
        #[arg(long)]
        target: Option<String>,
        /// Filter basis whose image is checked; the trivial filter by default.
        #[arg(long)]
        basis: Option<String>,
    },
    /// List sieves, filters, ultrafilters or points of a carrier.
    Enumerate {
        what: EnumKind,
        model: PathBuf,
        /// Lattice or category block; the first one by default.
        #[arg(long)]
        on: Option<String>,
        #[arg(long, visible_alias = "element")]
        object: Option<String>,
    },
    /// Decide whether a filter converges to a point.
    Converge {
        model: PathBuf,
        #[arg(long)]
        topology: Option<String>,
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, visible_alias = "element")]
        object: String,
        #[arg(long)]
        point: String,
    },
    /// Closure of a sieve: the points all of whose cover-neighborhoods meet it.
    Closure {
        model: PathBuf,
        #[arg(long)]
        topology: Option<String>,
        #[arg(long, visible_alias = "element")]
        object: String,
        /// Members separated by commas or spaces; empty for the empty sieve.
        #[arg(long, allow_hyphen_values = true)]
        sieve: String,
    },
    /// Cluster and limit points of a filter.
    Cluster {
        model: PathBuf,
        #[arg(long)]
        topology: Option<String>,
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, visible_alias = "element")]
        object: String,
    },
    /// Quasi-compactness, Hausdorff and compactness of an object.
    Compact {
        model: PathBuf,
        #[arg(long)]
        topology: Option<String>,
        #[arg(long, visible_alias = "element")]
        object: String,
        #[arg(long, value_enum, default_value = "ultrafilter")]
        method: MethodArg,
    },
    /// Check that the meet of compact elements is compact.
    Tychonoff {
        model: PathBuf,
        #[arg(long)]
        topology: Option<String>,
        #[arg(long = "element", visible_alias = "object", required = true)]
        elements: Vec<String>,
        #[arg(long, value_enum, default_value = "ultrafilter")]
        method: MethodArg,
    },
    /// Run the law suite over the seeded corpus.
    Laws {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "default")]
        corpus: String,
        /// Comma-separated law identifiers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Model(Box<ModelError>),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Model(Box::new(e))
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IoError",
            CliError::Model(m) => match **m {
                ModelError::Syntax { .. } => "SyntaxError",
                ModelError::UnresolvedReference { .. } => "UnresolvedReference",
                ModelError::Validation { .. } => "ValidationError",
            },
            CliError::Usage(_) => "UsageError",
            CliError::Core(_) => "Error",
        }
    }

    fn witness(&self) -> Option<sieveforge::Witness> {
        match self {
            CliError::Model(m) => m.witness().cloned(),
            CliError::Core(e) => e.witness().cloned(),
            _ => None,
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI on `args` (without the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("sieveforge".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let echo = std::iter::once("sieveforge")
        .chain(args.iter().map(String::as_str).filter(|a| *a != "--timing"))
        .collect::<Vec<_>>()
        .join(" ");
    let start = Instant::now();
    let mut report = match execute(&cli, &echo) {
        Ok(r) => r,
        Err(e) => Report::error(echo, e.kind(), e.to_string(), e.witness()),
    };
    report.settle();
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1000.0);
    }
    let stdout = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Outcome {
        code: report.status.exit_code(),
        stdout,
        stderr: String::new(),
    }
}

fn budget(cli: &Cli) -> Result<u64, CliError> {
    if let Some(b) = cli.budget {
        return Ok(b);
    }
    match std::env::var("SIEVEFORGE_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("SIEVEFORGE_BUDGET must be a non-negative integer, found `{v}`"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load(cli: &Cli, path: &PathBuf) -> Result<Workspace, CliError> {
    Ok(crate::model::parse_model(&read(path)?, cli.max_sieves)?)
}

fn pick<'a>(ws: &'a Workspace, kind: BlockKind, name: Option<&'a str>) -> Result<&'a str, CliError> {
    match name {
        Some(n) => match ws.names_of(kind).contains(&n) {
            true => Ok(n),
            false => Err(CliError::Usage(format!("no {kind} block named `{n}`"))),
        },
        None => ws
            .names_of(kind)
            .first()
            .copied()
            .ok_or_else(|| CliError::Usage(format!("model has no {kind} block"))),
    }
}

fn assignment<'a>(ws: &'a Workspace, kind: BlockKind, name: Option<&'a str>) -> Result<(&'a str, &'a CoverAssignment), CliError> {
    let n = pick(ws, kind, name)?;
    match ws.get(n) {
        Some(Item::Assignment { assignment, .. }) => Ok((n, assignment)),
        _ => unreachable!("picked block is an assignment"),
    }
}

fn site(ws: &Workspace, name: Option<&str>) -> Result<Site, CliError> {
    let (_, j) = assignment(ws, BlockKind::Topology, name)?;
    Ok(Site::new(j.clone())?)
}

fn filter<'a>(ws: &'a Workspace, name: Option<&'a str>, on: &Site) -> Result<&'a CoverAssignment, CliError> {
    let (n, f) = assignment(ws, BlockKind::Filter, name)?;
    on.topology().same_carrier(f)?;
    if let Verdict::Fail(w) = check_filter(f) {
        return Err(CliError::Usage(format!("`{n}` is not a filter: {w}")));
    }
    Ok(f)
}

fn object(car: &Carrier, name: &str) -> Result<Obj, CliError> {
    Ok(car.object(name)?)
}

fn sieve_list(car: &Carrier, c: Obj, ids: impl IntoIterator<Item = usize>) -> Value {
    ids.into_iter().map(|s| car.labels(c, s)).collect::<Vec<_>>().into()
}

fn point_list(car: &Carrier, ps: &[Point]) -> Value {
    ps.iter().map(|p| p.label(car)).collect::<Vec<_>>().into()
}

fn rendered(a: &CoverAssignment) -> Value {
    let mut m = serde_json::Map::new();
    for (o, rows) in a.render() {
        m.insert(o, rows.into());
    }
    Value::Object(m)
}

fn execute(cli: &Cli, echo: &str) -> Result<Report, CliError> {
    let mut report = Report::new(echo.to_string());
    match &cli.command {
        Command::Check { kind, model, name, strict_basis, source, target, basis } => {
            let doc = parse_document(&read(model)?)?;
            let ws = match resolve(doc, cli.max_sieves) {
                Ok(ws) => ws,
                Err(ModelError::Validation { kind: k, block, line, source: err })
                    if k == kind.block()
                        && matches!(k, BlockKind::Lattice | BlockKind::Category | BlockKind::Functor)
                        && name.as_deref().is_none_or(|n| n == block) =>
                {
                    report.push(
                        Check::holds(&block, k.keyword(), false)
                            .message(format!("line {line}: {err}"))
                            .witness(err.witness().cloned())
                            .replay(format!("sieveforge check {k} {} --name {block}", model.display())),
                    );
                    return Ok(report);
                }
                Err(e) => return Err(e.into()),
            };
            let names: Vec<&str> = match name {
                Some(n) => vec![pick(&ws, kind.block(), Some(n))?],
                None => ws.names_of(kind.block()),
            };
            if names.is_empty() {
                return Err(CliError::Usage(format!("model has no {} block", kind.block())));
            }
            let replay = |n: &str| {
                let mut cmd = format!("sieveforge check {} {} --name {n}", kind.block(), model.display());
                if *strict_basis {
                    cmd.push_str(" --strict-basis");
                }
                for (flag, v) in [("--source", source), ("--target", target), ("--basis", basis)] {
                    if let Some(v) = v {
                        cmd.push_str(&format!(" {flag} {v}"));
                    }
                }
                cmd
            };
            let mut data = serde_json::Map::new();
            for n in names {
                let (check, info) = check_block(&ws, n, *strict_basis, source.as_deref(), target.as_deref(), basis.as_deref())?;
                for c in check {
                    report.push(c.replay(replay(n)));
                }
                if !info.is_null() {
                    data.insert(n.to_string(), info);
                }
            }
            report.data = (!data.is_empty()).then_some(Value::Object(data));
        }
        Command::Enumerate { what, model, on, object: obj } => {
            let ws = load(cli, model)?;
            let on = match on {
                Some(n) => n.as_str(),
                None => ws
                    .items()
                    .find(|(_, i)| matches!(i, Item::Lattice(_) | Item::Category(_)))
                    .map(|(n, _)| n)
                    .ok_or_else(|| CliError::Usage("model has no lattice or category block".into()))?,
            };
            let car = ws
                .carrier(on)
                .ok_or_else(|| CliError::Usage(format!("`{on}` is not a lattice or category block")))?;
            let objs: Vec<Obj> = match obj {
                Some(o) => vec![object(car, o)?],
                None => car.objects().collect(),
            };
            let budget = budget(cli)?;
            let data = match what {
                EnumKind::Sieves => {
                    let mut m = serde_json::Map::new();
                    for &c in &objs {
                        m.insert(car.object_name(c).to_string(), sieve_list(car, c, car.sieve_ids(c)));
                    }
                    json!({ "on": on, "sieves": m })
                }
                EnumKind::Filters | EnumKind::Ultrafilters => {
                    let list = if *what == EnumKind::Filters {
                        enumerate_filters(car, budget)?
                    } else {
                        enumerate_ultrafilters(car, budget)?
                    };
                    let key = if *what == EnumKind::Filters { "filters" } else { "ultrafilters" };
                    let list: Vec<Value> = list.iter().map(|f| rendered(f.assignment())).collect();
                    json!({ "on": on, "count": list.len(), key: list })
                }
                EnumKind::Points => {
                    let s = Site::new(CoverAssignment::trivial(car))?;
                    let mut m = serde_json::Map::new();
                    for &c in &objs {
                        m.insert(car.object_name(c).to_string(), point_list(car, &s.points(c)?));
                    }
                    json!({ "on": on, "points": m })
                }
            };
            report.data = Some(data);
        }
        Command::Converge { model, topology, filter: fname, object: o, point } => {
            let ws = load(cli, model)?;
            let s = site(&ws, topology.as_deref())?;
            let f = filter(&ws, fname.as_deref(), &s)?;
            let car = s.carrier().clone();
            let c = object(&car, o)?;
            let p = resolve_point(&ws, &s, point)?;
            let n = s.neighborhood_system(c, &p)?;
            let converges = s.converges(f, c, &p)?;
            report.push(Check::holds(format!("{} at {}", p.label(&car), o), "converges", converges).replay(echo));
            if let Some(v) = &n.filtered_object {
                report.push(Check::new(p.label(&car), "filtered-object", v).replay(echo));
            }
            report.data = Some(json!({
                "object": o,
                "point": p.label(&car),
                "blind": n.g_nbhds.is_empty(),
                "g_neighborhoods": sieve_list(&car, c, n.g_nbhds.iter().copied()),
                "cover_neighborhoods": sieve_list(&car, c, n.cover_nbhds.iter().copied()),
                "converges": converges,
            }));
        }
        Command::Closure { model, topology, object: o, sieve } => {
            let ws = load(cli, model)?;
            let s = site(&ws, topology.as_deref())?;
            let car = s.carrier().clone();
            let c = object(&car, o)?;
            let labels: Vec<&str> = sieve.split([',', ' ']).filter(|x| !x.is_empty()).collect();
            let a = car.parse_sieve(c, &labels)?;
            let closure = s.closure(c, a)?;
            report.data = Some(json!({
                "object": o,
                "sieve": car.labels(c, a),
                "points": point_list(&car, &s.points(c)?),
                "closure": point_list(&car, &closure),
            }));
        }
        Command::Cluster { model, topology, filter: fname, object: o } => {
            let ws = load(cli, model)?;
            let s = site(&ws, topology.as_deref())?;
            let f = filter(&ws, fname.as_deref(), &s)?;
            let car = s.carrier().clone();
            let c = object(&car, o)?;
            let cluster = s.cluster_points(f, c)?;
            let limit = s.limit_points(f, c)?;
            report.data = Some(json!({
                "object": o,
                "cluster_points": point_list(&car, &cluster),
                "limit_points": point_list(&car, &limit),
            }));
        }
        Command::Compact { model, topology, object: o, method } => {
            let ws = load(cli, model)?;
            let s = site(&ws, topology.as_deref())?;
            let c = object(s.carrier(), o)?;
            let r = s.compactness_report(c, (*method).into(), budget(cli)?)?;
            report.push(Check::holds(o, "quasi-compact", r.quasi_compact).replay(echo));
            report.push(Check::holds(o, "hausdorff", r.hausdorff).replay(echo));
            report.data = Some(serde_json::to_value(&r).expect("report"));
        }
        Command::Tychonoff { model, topology, elements, method } => {
            let ws = load(cli, model)?;
            let s = site(&ws, topology.as_deref())?;
            let targets = elements.iter().map(|e| object(s.carrier(), e)).collect::<Result<Vec<_>, _>>()?;
            let v = tychonoff_check(&s, &targets, (*method).into(), budget(cli)?)?;
            let l = s.carrier().require_lattice()?;
            let meet = l.meet_all(targets.iter().map(|c| sieveforge::Elem(c.0)));
            report.push(Check::new(elements.join(","), "tychonoff", &v).replay(echo));
            report.data = Some(json!({ "targets": elements, "meet": l.name(meet) }));
        }
        Command::Laws { seed, corpus, only } => {
            if corpus != "default" {
                return Err(CliError::Usage(format!("unknown corpus `{corpus}`; only `default` is available")));
            }
            if let Some(bad) = only.iter().find(|id| !LAW_IDS.contains(&id.as_str())) {
                return Err(CliError::Usage(format!("unknown law `{bad}`; known laws: {}", LAW_IDS.join(", "))));
            }
            let only = (!only.is_empty()).then_some(only.as_slice());
            report.laws = Some(LawSummary::new(*seed, run_laws(*seed, only)));
        }
    }
    Ok(report)
}

fn resolve_point(ws: &Workspace, s: &Site, label: &str) -> Result<Point, CliError> {
    if let Some(Item::Point { point, .. }) = ws.get(label) {
        return Ok(point.clone());
    }
    Ok(s.point_by_label(label)?)
}

fn check_block(
    ws: &Workspace,
    name: &str,
    strict_basis: bool,
    source: Option<&str>,
    target: Option<&str>,
    basis: Option<&str>,
) -> Result<(Vec<Check>, Value), CliError> {
    let item = ws.get(name).expect("named block exists");
    Ok(match item {
        Item::Lattice(car) => {
            let l = car.require_lattice()?;
            let frame = l.is_frame();
            (
                vec![Check::holds(name, "lattice", true)],
                json!({
                    "elements": l.names(),
                    "frame": frame.is_pass(),
                    "boolean": l.is_boolean(),
                }),
            )
        }
        Item::Category(car) => {
            let cat = car.cat();
            (
                vec![Check::holds(name, "category", true)],
                json!({
                    "objects": cat.object_names(),
                    "morphisms": cat.morphism_count(),
                    "terminal": cat.terminal_objects().iter().map(|&t| cat.object_name(t)).collect::<Vec<_>>(),
                }),
            )
        }
        Item::Assignment { kind, assignment: a, .. } => match kind {
            BlockKind::Topology => (vec![Check::new(name, "topology", &check_topology(a))], Value::Null),
            BlockKind::Filter => {
                let v = check_filter(a);
                let ultra = if v.is_pass() { Some(is_ultrafilter(a)?.is_pass()) } else { None };
                (vec![Check::new(name, "filter", &v)], json!({ "ultrafilter": ultra }))
            }
            BlockKind::Basis => {
                let v = check_basis(a, strict_basis);
                let generated = if v.is_pass() {
                    rendered(filter_from_basis(a)?.assignment())
                } else {
                    Value::Null
                };
                (vec![Check::new(name, "basis", &v)], json!({ "strict": strict_basis, "filter": generated }))
            }
            BlockKind::Subbase => {
                let v = check_subbase(a);
                let (ok, info) = match saturate_subbase(a) {
                    Saturation::Proper(f) => (true, json!({ "filter": rendered(f.assignment()) })),
                    Saturation::Improper(steps) => (false, json!({ "derivation": steps })),
                };
                (
                    vec![Check::new(name, "subbase", &v), Check::holds(name, "proper-saturation", ok)],
                    info,
                )
            }
            _ => unreachable!("assignment kinds"),
        },
        Item::Functor(f) => {
            let mut checks = vec![Check::holds(name, "functor", true)];
            let mut info = serde_json::Map::new();
            match (source, target) {
                (None, None) => {}
                (Some(j), Some(k)) => {
                    let j = assignment_on(ws, j)?;
                    let k = assignment_on(ws, k)?;
                    let v = is_filter_preserving(f, j, k)?;
                    let preserving = v.is_pass();
                    checks.push(Check::new(name, "filter-preserving", &v));
                    if preserving {
                        let b = basis.map(|b| assignment_on(ws, b)).transpose()?;
                        let r = image_law_report(f, j, k, b)?;
                        checks.push(Check::new(name, "image-neighborhoods", &r.neighborhoods));
                        checks.push(Check::new(name, "image-cover-neighborhoods", &r.cover_neighborhoods));
                        checks.push(Check::new(name, "image-basis", &r.basis));
                    }
                    info.insert("filter_preserving".into(), preserving.into());
                }
                _ => return Err(CliError::Usage("--source and --target must be given together".into())),
            }
            (checks, Value::Object(info))
        }
        Item::Point { .. } => unreachable!("points are not checked"),
    })
}

fn assignment_on<'a>(ws: &'a Workspace, name: &str) -> Result<&'a CoverAssignment, CliError> {
    match ws.get(name) {
        Some(Item::Assignment { assignment, .. }) => Ok(assignment),
        _ => Err(CliError::Usage(format!("`{name}` is not a topology, filter, basis or subbase block"))),
    }
}
