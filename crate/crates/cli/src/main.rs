use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;
use serde_json::json;

use borsuk_core::coloring::{
    encode_coloring, greedy_colorable, is_colorable, verify_coloring, DEFAULT_TIMEOUT,
};
use borsuk_core::configs::verify_classification_claims;
use borsuk_core::cover::{verify_cover_membership, verify_low_dim, verify_n9, verify_prop8};
use borsuk_core::graph::{trim, trim2};
use borsuk_core::io::{format_vertex_set, read_vertex_set};
use borsuk_core::search::run_case;
use borsuk_core::{
    BitGraph, CaseSpec, ColoringOutcome, DistanceGraph, Error, ForbiddenFamily, NamedConfig,
    RunOptions, SatSolver, VertexSet,
};

mod manifest;

use manifest::RunManifest;

const EXIT_UNSAT: u8 = 10;
const EXIT_TIMED_OUT: u8 = 20;
const EXIT_USAGE: u8 = 2;
const EXIT_NO_SOLVER: u8 = 64;

#[derive(Parser)]
#[command(
    name = "borsuk",
    version,
    about = "Distance-graph colorings and covering checks on the Boolean cube"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Intersect the radius-k balls around a seed set.
    Trim(TrimArgs),
    /// Trim around an assumption set, dropping vertices that complete a forbidden pattern.
    Trim2(Trim2Args),
    /// Decide whether a distance graph is c-colorable.
    Color(ColorArgs),
    /// Print the DIMACS encoding of a coloring instance.
    Cnf(CnfArgs),
    /// Run one row of the n = 10, k = 6 case table.
    Case(CaseArgs),
    /// Run a closed-form verification pipeline.
    Verify(VerifyArgs),
}

#[derive(Args, Serialize)]
struct TrimArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u8,
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct Trim2Args {
    #[arg(long)]
    k: u8,
    #[arg(long)]
    assume: PathBuf,
    /// Forbidden configuration tags, e.g. K3, K4', K5-e.
    #[arg(long, num_args = 1..)]
    forbid: Vec<String>,
    /// Vertices excluded from the domain.
    #[arg(long)]
    exclude: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone)]
struct SolverArgs {
    /// SAT solver executable; defaults to $SAT_SOLVER.
    #[arg(long)]
    solver: Option<PathBuf>,
    /// Use DSATUR only; failures are reported as undecided.
    #[arg(long)]
    greedy_only: bool,
}

#[derive(Args, Serialize)]
#[group(required = true, multiple = false, id = "input")]
struct GraphInput {
    /// Vertex-set file; needs --k.
    #[arg(long, group = "input")]
    set: Option<PathBuf>,
    /// Graph in DIMACS edge format (`p edge n m`, `e a b`).
    #[arg(long, group = "input")]
    graph: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ColorArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    k: Option<u8>,
    #[arg(long)]
    colors: usize,
    #[arg(long, default_value_t = DEFAULT_TIMEOUT.as_millis() as u64)]
    timeout_ms: u64,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CnfArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    k: Option<u8>,
    #[arg(long)]
    colors: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CaseArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8), conflicts_with = "spec", required_unless_present = "spec")]
    row: Option<u8>,
    /// JSON case specification.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    leaf_budget: Option<u64>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Walk the tree without coloring leaves.
    #[arg(long)]
    count_only: bool,
    #[arg(long)]
    timeout_ms: Option<u64>,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Target {
    N9,
    LowDim,
    #[value(name = "cover-10-4")]
    #[serde(rename = "cover-10-4")]
    Cover104,
    ClassifyCliques,
    CoverMembership,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    target: Target,
    /// Per-instance SAT budget.
    #[arg(long, default_value_t = 600_000)]
    timeout_ms: u64,
    /// Random samples for cover-membership, isometric images per class for classify-cliques.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    solver: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SolverNotConfigured => EXIT_NO_SOLVER,
            Error::UnknownRow(_) | Error::UnknownTag(_) | Error::InvalidCase(_) => EXIT_USAGE,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn write_text(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report<T: Serialize>(
    out: Option<&Path>,
    mut manifest: RunManifest,
    started: Instant,
    result: &T,
) -> Result<(), Failure> {
    manifest.wall_clock_s = started.elapsed().as_secs_f64();
    let text =
        serde_json::to_string_pretty(&json!({ "manifest": manifest, "result": result }))? + "\n";
    write_text(out, &text)?;
    Ok(())
}

fn solver_for(args: &SolverArgs) -> Result<Option<SatSolver>, Failure> {
    if args.greedy_only {
        return Ok(None);
    }
    Ok(Some(SatSolver::from_flag_or_env(args.solver.as_deref())?))
}

fn parse_forbidden(tags: &[String]) -> Result<ForbiddenFamily, Failure> {
    let tags = tags
        .iter()
        .map(|t| t.parse::<NamedConfig>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ForbiddenFamily::named(tags))
}

fn read_edge_graph(path: &Path) -> Result<BitGraph, Failure> {
    let text = std::fs::read_to_string(path)?;
    let mut graph: Option<BitGraph> = None;
    for (idx, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Failure {
            code: 1,
            message: format!("{}:{}: malformed line {line:?}", path.display(), idx + 1),
        };
        match fields.as_slice() {
            [] | ["c", ..] => {}
            ["p", "edge", n, _] => graph = Some(BitGraph::new(n.parse().map_err(|_| bad())?)),
            ["e", a, b] => {
                let g = graph.as_mut().ok_or_else(bad)?;
                let a: usize = a.parse().map_err(|_| bad())?;
                let b: usize = b.parse().map_err(|_| bad())?;
                if a == 0 || b == 0 || a > g.vertex_count() || b > g.vertex_count() || a == b {
                    return Err(bad());
                }
                g.add_edge(a - 1, b - 1);
            }
            _ => return Err(bad()),
        }
    }
    graph.ok_or_else(|| Failure {
        code: 1,
        message: format!("{}: missing `p edge` header", path.display()),
    })
}

fn load_graph(
    input: &GraphInput,
    k: Option<u8>,
    manifest: &mut RunManifest,
) -> Result<BitGraph, Failure> {
    match (&input.set, &input.graph) {
        (Some(set), None) => {
            let k = k.ok_or_else(|| usage("--set needs --k"))?;
            manifest.add_input(set)?;
            Ok(DistanceGraph::build(&read_vertex_set(set)?, k)?
                .graph()
                .clone())
        }
        (None, Some(graph)) => {
            manifest.add_input(graph)?;
            read_edge_graph(graph)
        }
        _ => Err(usage("give exactly one of --set or --graph")),
    }
}

fn cmd_trim(a: TrimArgs) -> CmdResult {
    let seeds = read_vertex_set(&a.set)?;
    if seeds.is_empty() {
        return Err(usage("seed set is empty"));
    }
    if usize::from(seeds.dim()) != a.n {
        return Err(Error::DimensionMismatch(a.n as u8, seeds.dim()).into());
    }
    let t = trim(a.n, a.k, &seeds)?;
    write_text(a.out.as_deref(), &format_vertex_set(&t))?;
    report_size(a.out.is_some(), t.len());
    Ok(0)
}

fn report_size(to_stdout: bool, size: usize) {
    if to_stdout {
        println!("{size}");
    } else {
        eprintln!("{size}");
    }
}

fn cmd_trim2(a: Trim2Args) -> CmdResult {
    let seeds = read_vertex_set(&a.assume)?;
    if seeds.is_empty() {
        return Err(usage("assumption set is empty"));
    }
    let forbidden = parse_forbidden(&a.forbid)?;
    let mut domain = VertexSet::cube(seeds.dim() as usize)?;
    if let Some(ex) = &a.exclude {
        domain = domain.difference(&read_vertex_set(ex)?)?;
    }
    let t = trim2(&domain, a.k, &seeds, &forbidden)?;
    write_text(a.out.as_deref(), &format_vertex_set(&t))?;
    report_size(a.out.is_some(), t.len());
    Ok(0)
}

fn cmd_color(a: ColorArgs) -> CmdResult {
    let started = Instant::now();
    let solver = solver_for(&a.solver)?;
    let mut manifest = RunManifest::new("color", serde_json::to_value(&a)?, solver.as_ref());
    let g = load_graph(&a.input, a.k, &mut manifest)?;
    let outcome = if a.solver.greedy_only {
        greedy_colorable(&g, a.colors)
    } else {
        is_colorable(
            &g,
            a.colors,
            Duration::from_millis(a.timeout_ms),
            solver.as_ref(),
        )?
    };
    let colors_used = match &outcome {
        ColoringOutcome::Colored(assignment) => {
            if !verify_coloring(&g, assignment)? {
                return Err(Failure {
                    code: 1,
                    message: "coloring failed re-verification".into(),
                });
            }
            Some(assignment.color_count())
        }
        _ => None,
    };
    let result = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "colors": a.colors,
        "outcome": outcome.label(),
        "colors_used": colors_used,
        "assignment": match &outcome { ColoringOutcome::Colored(c) => Some(c.colors().to_vec()), _ => None },
    });
    emit_report(a.out.as_deref(), manifest, started, &result)?;
    eprintln!("{}", outcome.label());
    Ok(match outcome {
        ColoringOutcome::Colored(_) => 0,
        ColoringOutcome::UnsatProven => EXIT_UNSAT,
        ColoringOutcome::TimedOut => EXIT_TIMED_OUT,
    })
}

fn cmd_cnf(a: CnfArgs) -> CmdResult {
    if a.colors == 0 {
        return Err(usage("--colors must be positive"));
    }
    let mut manifest = RunManifest::new("cnf", serde_json::to_value(&a)?, None);
    let g = load_graph(&a.input, a.k, &mut manifest)?;
    write_text(a.out.as_deref(), &encode_coloring(&g, a.colors).to_dimacs())?;
    Ok(0)
}

fn cmd_case(a: CaseArgs) -> CmdResult {
    let started = Instant::now();
    let mut spec = match (&a.row, &a.spec) {
        (Some(row), None) => CaseSpec::table_row(*row)?,
        (None, Some(path)) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        _ => return Err(usage("give exactly one of --row or --spec")),
    };
    if a.leaf_budget.is_some() {
        spec.leaf_budget = a.leaf_budget;
    }
    if let Some(t) = a.timeout_ms {
        spec.timeout_ms = t;
    }
    spec.validate()?;
    let solver = if a.count_only {
        None
    } else {
        solver_for(&a.solver)?
    };
    let mut manifest = RunManifest::new(
        "case",
        json!({ "args": &a, "spec": &spec }),
        solver.as_ref(),
    );
    if let Some(p) = &a.spec {
        manifest.add_input(p)?;
    }
    let options = RunOptions {
        solver,
        greedy_only: a.solver.greedy_only,
        jobs: a.jobs,
        checkpoint: a.checkpoint.clone(),
        resume: a.resume,
        count_only: a.count_only,
    };
    let report = run_case(&spec, &options)?;
    info!(
        "row {}: {} leaves in {:.1}s",
        report.row, report.leaves, report.elapsed_s
    );
    emit_report(a.out.as_deref(), manifest, started, &report)?;
    let passed = a.count_only || report.passed();
    eprintln!(
        "row {}: leaves={} colored={} not_colored={}{} -> {}",
        report.row,
        report.leaves,
        report.colored,
        report.not_colored.len(),
        if report.truncated { " (truncated)" } else { "" },
        if passed { "pass" } else { "fail" }
    );
    Ok(if passed { 0 } else { 1 })
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let started = Instant::now();
    let timeout = Duration::from_millis(a.timeout_ms);
    let needs_solver = matches!(a.target, Target::N9 | Target::LowDim | Target::Cover104);
    let solver = if needs_solver {
        Some(SatSolver::from_flag_or_env(a.solver.as_deref())?)
    } else {
        None
    };
    let manifest = RunManifest::new("verify", serde_json::to_value(&a)?, solver.as_ref());
    let out = a.out.as_deref();
    let passed = match a.target {
        Target::N9 | Target::LowDim | Target::Cover104 => {
            let verdict = match a.target {
                Target::N9 => verify_n9(timeout, solver.as_ref())?,
                Target::LowDim => verify_low_dim(timeout, solver.as_ref())?,
                _ => verify_prop8(timeout, solver.as_ref())?,
            };
            for s in &verdict.sets {
                eprintln!(
                    "{:<12} |V|={:<4} k={} c={:<2} {} via {}",
                    s.label, s.size, s.k, s.colors, s.outcome, s.route
                );
            }
            emit_report(out, manifest, started, &verdict)?;
            verdict.passed
        }
        Target::ClassifyCliques => {
            let report = verify_classification_claims(a.samples.unwrap_or(20));
            for c in &report.counts {
                eprintln!("{:<12} sets={:<5} classes={}", c.family, c.sets, c.classes);
            }
            emit_report(out, manifest, started, &report)?;
            report.claims_hold()
        }
        Target::CoverMembership => {
            let report = verify_cover_membership(a.samples.unwrap_or(100_000), a.seed)?;
            eprintln!(
                "samples={} parts={} triangle={} sunflower={} five-set={} trivial={} failures={}",
                report.samples,
                report.parts,
                report.via_triangle,
                report.via_sunflower,
                report.via_five_set,
                report.trivial,
                report.failures.len()
            );
            emit_report(out, manifest, started, &report)?;
            report.failures.is_empty()
        }
    };
    Ok(if passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Trim(a) => cmd_trim(a),
        Command::Trim2(a) => cmd_trim2(a),
        Command::Color(a) => cmd_color(a),
        Command::Cnf(a) => cmd_cnf(a),
        Command::Case(a) => cmd_case(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("borsuk: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
