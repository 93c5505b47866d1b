use branchforge::bounds::{genm_branching_params, BoundReport};
use branchforge::branching::{
    check_branching_with, validate_certificate, BranchingCertificate, BranchingOracle, BranchingOutcome,
};
use branchforge::geometries::{
    affine_levi, biaffine_levi, projective_levi, symplectic_gq_levi, transversal_design_levi, LeviGraph,
};
use branchforge::graph::{parse_edge_list, Graph, Path as GPath, Separability};
use branchforge::roundtree::{build_round_tree, default_base_path};
use branchforge::surface::{pontryagin_pipeline, surface_checks, Complex2D};
use branchforge::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "branchforge",
    version,
    about = "Branching certificates, round trees and surface triangulations"
)]
struct Cli {
    /// Worker threads for parallel searches (default: all cores)
    #[arg(long, global = true, env = "BRANCHFORGE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the incidence graph of a finite geometry as an edge list
    Gen(GenArgs),
    /// Test a property and report it as JSON; exit 1 if it does not hold
    #[command(subcommand)]
    Check(CheckKind),
    /// Check branching and write the certificate
    Certify {
        #[command(flatten)]
        params: BranchingParams,
        /// Certificate output (default: stdout)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Grow and verify a round tree in the Davis complex
    Roundtree(RoundtreeArgs),
    /// Embed a graph in a flag-no-square surface triangulation
    Surface(SurfaceArgs),
    /// Evaluate a closed-form bound
    Bound {
        #[command(subcommand)]
        kind: BoundKind,
        #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Projective,
    Affine,
    Biaffine,
    Td,
    Gq,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Edges,
    Dot,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    /// Field order
    #[arg(short, long)]
    q: u64,
    /// Number of parts (transversal designs only)
    #[arg(short, long)]
    t: Option<u64>,
    #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
    format: GraphFormat,
    /// Output file (default: stdout)
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BranchingParams {
    /// Edge-list file, or - for stdin
    graph: PathBuf,
    #[arg(short)]
    n: usize,
    #[arg(short)]
    m: usize,
}

#[derive(Subcommand)]
enum CheckKind {
    /// The (n, m)-branching condition
    Branching(BranchingParams),
    /// Basic graph invariants (always exits 0)
    Invariants { graph: PathBuf },
    /// Inseparability: triangle-free, connected, no small separating sets
    Inseparable { graph: PathBuf },
    /// A complex JSON file is a flag-no-square closed orientable surface of
    /// positive genus with its marked subcomplex full
    Surface { complex: PathBuf },
}

#[derive(Args)]
struct RoundtreeArgs {
    graph: PathBuf,
    #[arg(short)]
    n: usize,
    #[arg(short)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Base path as comma-separated labels (default: least induced 2-path)
    #[arg(long)]
    path: Option<String>,
    /// Seed for isometry sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertex pairs for isometry sampling
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Stage JSON output
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SurfaceArgs {
    graph: PathBuf,
    /// Complex JSON output
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// OFF output
    #[arg(long)]
    off: Option<PathBuf>,
    /// Branching certificate for the graph, used for the dimension bound
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BoundKind {
    /// 1 + ln n / ln(3m - 7)
    Branching {
        #[arg(short)]
        n: u64,
        #[arg(short)]
        m: u64,
    },
    /// 1 + ln V / ln H
    RoundTree {
        #[arg(short = 'V', long)]
        vertical: u64,
        #[arg(short = 'H', long)]
        horizontal: u64,
    },
    /// Genus lower bound for n-branching graphs with E edges
    Genus {
        #[arg(short)]
        n: u64,
        #[arg(short = 'E', long)]
        edges: u64,
    },
    /// Fewest edges of a girth-5 graph with valence at least n+1
    MinEdges {
        #[arg(short)]
        n: u64,
    },
    /// Branching parameters of a generalized m-gon of order q
    Genm {
        #[arg(short)]
        m: u64,
        #[arg(short)]
        q: u64,
    },
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, std::io::Error),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Record written next to every artifact file.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, Value>,
    input_sha256: BTreeMap<String, String>,
    tool_version: String,
    wall_time_ms: u128,
}

struct Run {
    command: &'static str,
    parameters: BTreeMap<String, Value>,
    inputs: BTreeMap<String, String>,
    started: Instant,
}

impl Run {
    fn new(command: &'static str) -> Run {
        Run {
            command,
            parameters: BTreeMap::new(),
            inputs: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters
            .insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    fn read(&mut self, path: &Path) -> CliResult<String> {
        let text = if path == Path::new("-") {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(path.into(), e))?;
            s
        } else {
            fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))?
        };
        self.inputs
            .insert(path.display().to_string(), hex::encode(Sha256::digest(text.as_bytes())));
        Ok(text)
    }

    fn graph(&mut self, path: &Path) -> CliResult<Graph> {
        Ok(parse_edge_list(&self.read(path)?)?)
    }

    /// Writes `contents` to `path` and its manifest to `path.manifest.json`.
    fn write(&self, path: &Path, contents: &str) -> CliResult<()> {
        fs::write(path, contents).map_err(|e| CliError::Io(path.into(), e))?;
        let manifest = RunManifest {
            command: self.command.into(),
            parameters: self.parameters.clone(),
            input_sha256: self.inputs.clone(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            wall_time_ms: self.started.elapsed().as_millis(),
        };
        let mut mpath = path.as_os_str().to_owned();
        mpath.push(".manifest.json");
        let mpath = PathBuf::from(mpath);
        let text = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
        fs::write(&mpath, text).map_err(|e| CliError::Io(mpath, e))
    }
}

fn print_json(v: &impl Serialize) {
    // Value maps are ordered, so key order is canonical
    let v = serde_json::to_value(v).expect("serializable");
    emit(&(serde_json::to_string_pretty(&v).expect("serializable") + "\n"));
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn exit_for(holds: bool) -> ExitCode {
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_gen(args: &GenArgs) -> CliResult<ExitCode> {
    let mut run = Run::new("gen");
    run.param("q", args.q);
    let levi: LeviGraph = match args.family {
        Family::Projective => projective_levi(args.q)?,
        Family::Affine => affine_levi(args.q)?,
        Family::Biaffine => biaffine_levi(args.q)?,
        Family::Gq => symplectic_gq_levi(args.q)?,
        Family::Td => {
            let t = args.t.ok_or_else(|| Error::BadParams("td needs --t".into()))?;
            run.param("t", t);
            transversal_design_levi(t, args.q)?
        }
    };
    run.param("family", levi.family);
    let text = match args.format {
        GraphFormat::Edges => levi.graph.to_edge_list(&[levi.header()]),
        GraphFormat::Dot => levi.graph.to_dot(),
    };
    match &args.out {
        Some(p) => run.write(p, &text)?,
        None => emit(&text),
    }
    Ok(ExitCode::SUCCESS)
}

fn branching_outcome(run: &mut Run, p: &BranchingParams) -> CliResult<(Graph, BranchingOutcome)> {
    let g = run.graph(&p.graph)?;
    run.param("n", p.n);
    run.param("m", p.m);
    let oracle = BranchingOracle::new(&g, p.m)?;
    let outcome = check_branching_with(&oracle, p.n)?;
    Ok((g, outcome))
}

fn branching_summary(g: &Graph, p: &BranchingParams, outcome: &BranchingOutcome) -> Value {
    let mut v = json!({
        "property": "branching",
        "holds": outcome.is_certified(),
        "n": p.n,
        "m": p.m,
        "graph_sha256": g.sha256(),
    });
    match outcome {
        BranchingOutcome::Certified(c) => v["instances"] = json!(c.entries.len()),
        BranchingOutcome::Failed(f) => {
            v["failure"] = serde_json::from_str(&f.to_json(g)).expect("failure JSON");
        }
    }
    v
}

fn cmd_check(kind: &CheckKind) -> CliResult<ExitCode> {
    let mut run = Run::new("check");
    match kind {
        CheckKind::Branching(p) => {
            let (g, outcome) = branching_outcome(&mut run, p)?;
            print_json(&branching_summary(&g, p, &outcome));
            Ok(exit_for(outcome.is_certified()))
        }
        CheckKind::Invariants { graph } => {
            let g = run.graph(graph)?;
            let (lo, hi) = g.valence_range();
            print_json(&json!({
                "property": "invariants",
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "girth": g.girth(),
                "diameter": g.diameter(),
                "min_valence": lo,
                "max_valence": hi,
                "regular": lo == hi,
                "connected": g.is_connected(),
                "bipartite": g.bipartition().is_some(),
                "triangle_free": g.is_triangle_free(),
                "has_induced_square": g.has_induced_square(),
                "two_edge_connected": g.is_two_edge_connected(),
                "euler_nonplanar": g.euler_nonplanar(),
                "graph_sha256": g.sha256(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        CheckKind::Inseparable { graph } => {
            let g = run.graph(graph)?;
            let (holds, witness) = match g.separability() {
                Ok(Separability::Inseparable) => (true, Value::Null),
                Ok(Separability::Separated(s)) => {
                    (false, json!({ "kind": s.kind, "vertices": g.labels_of(&s.vertices) }))
                }
                Err(Error::NotTriangleFree) => (false, json!({ "kind": "triangle" })),
                Err(e) => return Err(e.into()),
            };
            print_json(&json!({ "property": "inseparable", "holds": holds, "witness": witness }));
            Ok(exit_for(holds))
        }
        CheckKind::Surface { complex } => {
            let k = Complex2D::from_json(&run.read(complex)?)?;
            let r = surface_checks(&k);
            let holds = r.is_closed_surface
                && r.is_orientable
                && r.genus.is_some_and(|g| g >= 1)
                && r.is_flag
                && !r.has_induced_square
                && r.l_full;
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["property"] = json!("surface");
            v["holds"] = json!(holds);
            print_json(&v);
            Ok(exit_for(holds))
        }
    }
}

fn cmd_certify(p: &BranchingParams, out: Option<&Path>) -> CliResult<ExitCode> {
    let mut run = Run::new("certify");
    let (g, outcome) = branching_outcome(&mut run, p)?;
    match &outcome {
        BranchingOutcome::Certified(cert) => {
            let text = cert.to_json(&g) + "\n";
            match out {
                Some(path) => {
                    run.write(path, &text)?;
                    print_json(&branching_summary(&g, p, &outcome));
                }
                None => emit(&text),
            }
            Ok(ExitCode::SUCCESS)
        }
        BranchingOutcome::Failed(_) => {
            print_json(&branching_summary(&g, p, &outcome));
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_roundtree(a: &RoundtreeArgs) -> CliResult<ExitCode> {
    let mut run = Run::new("roundtree");
    let g = run.graph(&a.graph)?;
    run.param("n", a.n);
    run.param("m", a.m);
    run.param("depth", a.depth);
    run.param("seed", a.seed);
    run.param("samples", a.samples);
    let path = match &a.path {
        Some(labels) => {
            run.param("path", labels);
            let vs = g.indices_of(&labels.split(',').map(str::trim).collect::<Vec<_>>())?;
            GPath::new(&g, vs)?
        }
        None => default_base_path(&g, 2)?,
    };
    let oracle = BranchingOracle::new(&g, a.m)?;
    let stage = build_round_tree(&oracle, &path, a.n, a.depth)?;
    let report = stage.verify();
    let iso = stage.sampled_isometry_check(a.samples, a.seed);
    let holds = report.passed() && iso.discrepancies.is_empty();
    if let Some(out) = &a.out {
        run.write(out, &(stage.to_json() + "\n"))?;
    }
    print_json(&json!({
        "holds": holds,
        "base_path": g.labels_of(path.vertices()),
        "verification": report,
        "isometry": iso,
    }));
    Ok(exit_for(holds))
}

fn cmd_surface(a: &SurfaceArgs) -> CliResult<ExitCode> {
    let mut run = Run::new("surface");
    let g = run.graph(&a.graph)?;
    let cert = match &a.certificate {
        Some(p) => {
            let c = BranchingCertificate::from_json(&g, &run.read(p)?)?;
            validate_certificate(&g, &c)?;
            Some(c)
        }
        None => None,
    };
    let out = pontryagin_pipeline(&g, cert.as_ref())?;
    if let Some(p) = &a.out {
        run.write(p, &(out.complex.to_json() + "\n"))?;
    }
    if let Some(p) = &a.off {
        run.write(p, &out.complex.to_off())?;
    }
    let mut v = serde_json::to_value(&out).expect("serializable");
    v["holds"] = json!(out.passed());
    print_json(&v);
    Ok(exit_for(out.passed()))
}

fn cmd_bound(kind: &BoundKind, format: Format) -> CliResult<ExitCode> {
    let report = match *kind {
        BoundKind::Branching { n, m } => BoundReport::branching(n, m)?,
        BoundKind::RoundTree { vertical, horizontal } => BoundReport::mackay(vertical, horizontal)?,
        BoundKind::Genus { n, edges } => BoundReport::genus(n, edges)?,
        BoundKind::MinEdges { n } => BoundReport::min_edges(n),
        BoundKind::Genm { m, q } => {
            let (n, bound) = genm_branching_params(m, q)?;
            let v = json!({ "name": "genm_branching", "inputs": { "m": m, "q": q }, "n": n, "m": bound });
            match format {
                Format::Json => print_json(&v),
                Format::Table => emit(&format!("generalized {m}-gon, q={q}: ({n}, {bound})-branching\n")),
            }
            return Ok(ExitCode::SUCCESS);
        }
    };
    match format {
        Format::Json => print_json(&report),
        Format::Table => {
            let inputs: Vec<String> = report.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
            emit(&format!(
                "{:<20} {:<24} {}\n{:<20} {:<24} {}\n",
                "bound",
                "inputs",
                "value",
                report.name,
                inputs.join(" "),
                report.value
            ));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Check(k) => cmd_check(k),
        Command::Certify { params, out } => cmd_certify(params, out.as_deref()),
        Command::Roundtree(a) => cmd_roundtree(a),
        Command::Surface(a) => cmd_surface(a),
        Command::Bound { kind, format } => cmd_bound(kind, *format),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
