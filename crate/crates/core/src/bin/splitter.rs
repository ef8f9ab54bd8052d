use std::fmt::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use splitter_core::generators::{generate, Family};
use splitter_core::graph::{Graph, Radius, Vertex, VertexSet};
use splitter_core::rank::{Engine, EngineConfig, Rank, DEFAULT_VERTEX_LIMIT};
use splitter_core::server::{self, ServerConfig};
use splitter_core::verify::{run_corpus, CheckReport, CheckSelection, CorpusSpec};
use splitter_core::witness::extract_witness;

#[derive(Parser)]
#[command(
    name = "splitter",
    version,
    about = "Exact solver and verifier for the radius-r splitter game"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Splitter rank with the value of every Connector move.
    Rank(RankArgs),
    /// Progressing Splitter replies per Connector move.
    Progressing(ProgressingArgs),
    /// Bounded-size witness subgraph with its construction certificate.
    Witness(RankArgs),
    /// Check the size bounds and invariants over a corpus.
    Verify(VerifyArgs),
    /// Generate a graph from a family spec.
    Gen(GenArgs),
    /// Serve the game API.
    Serve(ServeArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Edge-list or JSON graph file.
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    /// Inline generator, e.g. `family=grid,rows=3,cols=4`.
    #[arg(long = "gen", value_name = "SPEC")]
    generator: Option<String>,
}

#[derive(Args)]
struct EngineFlags {
    #[arg(long)]
    no_dominance_pruning: bool,
    #[arg(long)]
    no_sandwich_exit: bool,
    #[arg(long)]
    no_component_split: bool,
    #[arg(long, value_name = "N", default_value_t = DEFAULT_VERTEX_LIMIT)]
    limit_vertices: usize,
}

impl EngineFlags {
    fn config(&self, r: Radius) -> EngineConfig {
        let defaults = EngineConfig::new(r);
        let mut cfg = defaults.clone().with_flags(
            defaults.dominance_pruning && !self.no_dominance_pruning,
            !self.no_sandwich_exit,
            !self.no_component_split,
        );
        cfg.vertex_limit = self.limit_vertices;
        cfg
    }
}

#[derive(Args)]
struct Output {
    /// Emit JSON.
    #[arg(long)]
    json: bool,
    /// Write to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl Output {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        let body = if self.json {
            serde_json::to_string_pretty(value)? + "\n"
        } else {
            text()
        };
        match &self.out {
            Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_name = "INT")]
    radius: u32,
    /// Seed for random generator families.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    engine: EngineFlags,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ProgressingArgs {
    #[command(flatten)]
    rank: RankArgs,
    /// Restrict to one Connector move.
    #[arg(long, value_name = "INT")]
    connector: Option<Vertex>,
}

#[derive(Args)]
struct VerifyArgs {
    /// all-labeled, families, gnp, acceptance, or a corpus JSON file.
    #[arg(long, default_value = "acceptance")]
    corpus: String,
    /// Radii to check; repeatable.
    #[arg(long, value_name = "INT")]
    radius: Vec<u32>,
    /// Largest vertex count for all-labeled.
    #[arg(long, value_name = "INT", default_value_t = 5)]
    max_n: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "N")]
    limit_vertices: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long = "gen", value_name = "SPEC")]
    generator: String,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, value_name = "N", default_value_t = DEFAULT_VERTEX_LIMIT)]
    limit_vertices: usize,
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "warn".into()))
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Rank(args) => rank(args)?,
        Command::Progressing(args) => progressing(args)?,
        Command::Witness(args) => witness(args)?,
        Command::Verify(args) => return verify(args),
        Command::Gen(args) => gen(args)?,
        Command::Serve(args) => serve(args)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn load_graph(input: &Input, seed: Option<u64>) -> Result<Graph> {
    if let Some(path) = &input.graph {
        return read_graph(path);
    }
    let spec = input.generator.as_deref().expect("clap requires one input");
    let family = Family::parse_inline(spec, seed)?;
    Ok(generate(&family)?)
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let graph = if text.trim_start().starts_with('{') {
        Graph::from_json(&text)
    } else {
        Graph::parse_edge_list(&text)
    };
    graph.with_context(|| path.display().to_string())
}

fn setup(args: &RankArgs) -> Result<(Engine, Radius)> {
    let r = Radius::new(args.radius)?;
    let graph = load_graph(&args.input, args.seed)?;
    if graph.n() == 0 {
        bail!("the graph has no vertices");
    }
    Ok((Engine::new(Arc::new(graph), args.engine.config(r)), r))
}

fn ids(set: &VertexSet) -> String {
    set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct RankOutput<T: Serialize> {
    n: usize,
    m: usize,
    radius: Radius,
    #[serde(flatten)]
    body: T,
}

fn rank(args: RankArgs) -> Result<()> {
    let (mut engine, r) = setup(&args)?;
    let a = engine.full_arena();
    let analysis = engine.analyze(&a)?;
    let g = engine.root();
    let out = RankOutput {
        n: g.n(),
        m: g.edge_count(),
        radius: r,
        body: &analysis,
    };
    args.output.emit(&out, || {
        let mut s = format!(
            "rank {}\noptimal connectors: {}\n",
            analysis.rank,
            ids(&analysis.optimal_connectors)
        );
        s.push_str("connector  value  best replies\n");
        for c in &analysis.per_connector {
            let _ = writeln!(s, "{:>9}  {:>5}  {}", c.connector, c.value, ids(&c.argmin));
        }
        s
    })
}

#[derive(Serialize)]
struct ProgressingRow {
    connector: Vertex,
    ball: VertexSet,
    ball_rank: Rank,
    progressing: VertexSet,
}

#[derive(Serialize)]
struct ProgressingOutput {
    rank: Rank,
    moves: Vec<ProgressingRow>,
}

fn progressing(args: ProgressingArgs) -> Result<()> {
    let (mut engine, r) = setup(&args.rank)?;
    let a = engine.full_arena();
    let rank = engine.splitter_rank(&a)?;
    let connectors: Vec<Vertex> = match args.connector {
        Some(c) if c < a.graph().n() => vec![c],
        Some(c) => bail!("connector {c} is not a vertex"),
        None => a.members().iter().collect(),
    };
    let mut moves = Vec::with_capacity(connectors.len());
    for c in connectors {
        let ball = a.ball(c, r)?;
        let ball_rank = engine.rank_of(&ball)?;
        let progressing = engine.progressing_moves(&a, c)?;
        moves.push(ProgressingRow {
            connector: c,
            ball,
            ball_rank,
            progressing,
        });
    }
    let out = ProgressingOutput { rank, moves };
    let g = engine.root();
    let out = RankOutput {
        n: g.n(),
        m: g.edge_count(),
        radius: r,
        body: out,
    };
    args.rank.output.emit(&out, || {
        let mut s = format!(
            "rank {}\nconnector  ball rank  #progressing  progressing\n",
            out.body.rank
        );
        for row in &out.body.moves {
            let _ = writeln!(
                s,
                "{:>9}  {:>9}  {:>12}  {}",
                row.connector,
                row.ball_rank,
                row.progressing.len(),
                ids(&row.progressing)
            );
        }
        s
    })
}

fn witness(args: RankArgs) -> Result<()> {
    let (mut engine, _) = setup(&args)?;
    let a = engine.full_arena();
    let w = extract_witness(&mut engine, &a)?;
    let cert = w.certificate();
    args.output.emit(&cert, || {
        format!(
            "rank {}\nwitness size {}\nwitness {}\nlevels {}\n",
            w.rank,
            w.size(),
            ids(&w.h),
            cert.levels.len()
        )
    })
}

fn corpus(args: &VerifyArgs, radii: &[u32]) -> Result<CorpusSpec> {
    let seed = args.seed.unwrap_or(0);
    let mut spec = match args.corpus.as_str() {
        "all-labeled" => CorpusSpec::all_labeled(args.max_n, radii),
        "families" => CorpusSpec::families(radii),
        "gnp" => CorpusSpec::gnp(radii, seed),
        "acceptance" => CorpusSpec::acceptance(radii),
        path => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading corpus {path}"))?;
            let mut spec: CorpusSpec = serde_json::from_str(&text).with_context(|| format!("parsing corpus {path}"))?;
            if !args.radius.is_empty() {
                spec.radii = radii.to_vec();
            }
            spec
        }
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(limit) = args.limit_vertices {
        spec.vertex_limit = limit;
    }
    Ok(spec)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let radii = if args.radius.is_empty() {
        vec![1, 2]
    } else {
        args.radius.clone()
    };
    for &r in &radii {
        Radius::new(r)?;
    }
    let spec = corpus(&args, &radii)?;
    let report = run_corpus(&spec, CheckSelection::default())?;
    args.output.emit(&report, || summary(&report))?;
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn summary(report: &CheckReport) -> String {
    let mut s = format!(
        "corpus {}: {} results, {} violations, {} skipped\n",
        report.spec.corpus.name,
        report.results.len(),
        report.violations.len(),
        report.skipped()
    );
    for v in &report.violations {
        let _ = writeln!(s, "  {} r={} {}: {}", v.graph_id, v.r, v.check, v.detail);
    }
    for r in report.results.iter().filter(|r| r.skipped.is_some()) {
        let _ = writeln!(
            s,
            "  skipped {} r={}: {}",
            r.id,
            r.r,
            r.skipped.as_deref().unwrap_or("")
        );
    }
    s.push_str(if report.pass { "pass\n" } else { "FAIL\n" });
    s
}

fn gen(args: GenArgs) -> Result<()> {
    let family = Family::parse_inline(&args.generator, args.seed)?;
    let graph = generate(&family)?;
    let body = if args.output.json {
        graph.to_json() + "\n"
    } else {
        format!("# {family}\n{}", graph.to_edge_list())
    };
    match &args.output.out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(())
}

fn serve(args: ServeArgs) -> Result<()> {
    let config = ServerConfig {
        vertex_limit: args.limit_vertices,
        ..ServerConfig::default()
    };
    let addr = SocketAddr::from(([127, 0, 0, 1], args.port));
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(server::serve(addr, config))?;
    Ok(())
}
