//! `tmotif`: count δ-temporal motifs in SNAP-style edge lists.

mod matrix_io;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tmotif::graph::{load_edge_list_prefix, open_reader};
use tmotif::verify::{oracle_count_capped, DEFAULT_ORACLE_CAP};
use tmotif::{
    analyze, catalog_csv, count_motifs, gen_random, gen_worstcase, load_edge_list, timescales, write_edge_list,
    Algorithm, ClassSet, CountMatrix, Delta, InstrumentationReport, TemporalGraph,
};

use matrix_io::{parse_matrix, to_csv, to_json, Format, MatrixDoc};

#[derive(Parser, Debug)]
#[command(name = "tmotif", version, about = "Exact δ-temporal motif counts for temporal networks")]
struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count all 36 motifs with up to 3 nodes and 3 edges.
    Count(CountArgs),
    /// Counts per timescale band for an increasing list of deltas.
    Timescales(TimescaleArgs),
    /// Blocking, switching and cycle statistics of a count matrix.
    Analyze(AnalyzeArgs),
    /// Time a counting run and report the work done.
    Bench(BenchArgs),
    /// Write a synthetic edge list.
    Gen(GenArgs),
    /// Brute-force count, cross-checked against the fast counters.
    Oracle(OracleArgs),
    /// List the motif grid.
    Catalog,
}

#[derive(Args, Debug)]
struct Input {
    /// Edge list, `src dst timestamp` per line; gzip is detected. `-` reads stdin.
    input: PathBuf,
}

#[derive(Args, Debug)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    input: Input,
    /// Time window in seconds, or `inf`.
    #[arg(long, short)]
    delta: Delta,
    /// Comma separated subset of pair, star, triangle (or all).
    #[arg(long, default_value = "all")]
    classes: ClassSet,
    #[arg(long, default_value = "fast")]
    algorithm: Algorithm,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Include wall time in JSON output. Makes the output run-dependent.
    #[arg(long)]
    runtime: bool,
    /// Also check the count on the first N edges against the brute-force oracle.
    #[arg(long, value_name = "N")]
    check_prefix: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct TimescaleArgs {
    #[command(flatten)]
    input: Input,
    /// Strictly increasing deltas, e.g. `60,300,3600,inf`.
    #[arg(long, value_delimiter = ',', required = true)]
    deltas: Vec<Delta>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Count matrix written by `count`, CSV or JSON.
    matrix: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, short)]
    delta: Delta,
    #[arg(long, default_value = "fast")]
    algorithm: Algorithm,
    #[arg(long, default_value = "all")]
    classes: ClassSet,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    /// Write here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Uniform random edges between distinct nodes.
    Random {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 100)]
        t_max: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// One heavy pair closing `n` triangles.
    Worstcase {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, short)]
    delta: Delta,
    /// Refuse inputs with more edges than this.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

/// Bad flags or arguments; exit code 1.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Two counting methods disagreed; exit code 3.
#[derive(Debug)]
struct Mismatch(String);

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Mismatch {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Usage>() {
            return 1;
        }
        if cause.is::<Mismatch>() {
            return 3;
        }
        if let Some(e) = cause.downcast_ref::<tmotif::Error>() {
            return match e {
                tmotif::Error::Parse { .. } | tmotif::Error::Io(_) => 2,
                tmotif::Error::InvalidParams(_) | tmotif::Error::OracleCap { .. } => 1,
                _ => 3,
            };
        }
    }
    2
}

fn load(input: &Path) -> Result<TemporalGraph> {
    let (graph, _) = if input == Path::new("-") {
        load_edge_list(io::stdin().lock())
    } else {
        open_reader(input).and_then(load_edge_list)
    }
    .with_context(|| format!("reading {}", input.display()))?;
    Ok(graph)
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn render(matrix: &CountMatrix, doc: impl FnOnce() -> MatrixDoc, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(to_csv(matrix)),
        Format::Json => to_json(&doc()),
    }
}

fn require_positive(delta: Delta) -> Result<()> {
    if delta.get() == 0 {
        return Err(Usage("delta must be positive or `inf`".into()).into());
    }
    Ok(())
}

fn cmd_count(args: CountArgs) -> Result<()> {
    require_positive(args.delta)?;
    let graph = load(&args.input.input)?;
    let start = Instant::now();
    let counted = count_motifs(&graph, args.delta, args.classes, args.algorithm)?;
    let elapsed = start.elapsed();

    if let Some(limit) = args.check_prefix {
        let reader = open_reader(&args.input.input).context("reopening input for the prefix check")?;
        let (prefix, _) = load_edge_list_prefix(reader, limit)?;
        let fast = count_motifs(&prefix, args.delta, ClassSet::ALL, args.algorithm)?.matrix;
        let oracle = oracle_count_capped(&prefix, args.delta, limit.max(DEFAULT_ORACLE_CAP))?;
        if fast != oracle {
            return Err(Mismatch(format!("prefix of {} edges: counters disagree with the oracle", prefix.num_edges())).into());
        }
        eprintln!(
            "prefix check: {} edges, {} instances, matches the oracle",
            prefix.num_edges(),
            oracle.total()
        );
    }

    let text = render(
        &counted.matrix,
        || MatrixDoc {
            delta: args.delta,
            n: graph.num_nodes(),
            m: graph.num_edges(),
            classes: args.classes.names().into_iter().map(String::from).collect(),
            counts: *counted.matrix.rows(),
            runtime_seconds: args.runtime.then_some(elapsed.as_secs_f64()),
        },
        args.format,
    )?;
    emit(&args.output, &text)
}

#[derive(Serialize)]
struct BandDoc {
    lower: Option<Delta>,
    upper: Delta,
    counts: [[u64; 6]; 6],
}

fn cmd_timescales(args: TimescaleArgs) -> Result<()> {
    for &d in &args.deltas {
        require_positive(d)?;
    }
    let graph = load(&args.input.input)?;
    let bands = timescales(&graph, &args.deltas)?;
    let text = match args.format {
        Format::Csv => {
            let mut out = String::from("lower,upper,i,j,count\n");
            for band in &bands {
                let lower = band.lower.map_or(String::new(), |d| d.to_string());
                for (cell, v) in band.counts.iter() {
                    out.push_str(&format!("{lower},{},{},{},{v}\n", band.upper, cell.row(), cell.col()));
                }
            }
            out
        }
        Format::Json => {
            let docs: Vec<BandDoc> = bands
                .iter()
                .map(|b| BandDoc {
                    lower: b.lower,
                    upper: b.upper,
                    counts: *b.counts.rows(),
                })
                .collect();
            to_json(&docs)?
        }
    };
    emit(&args.output, &text)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let text = fs::read_to_string(&args.matrix).with_context(|| format!("reading {}", args.matrix.display()))?;
    let matrix = parse_matrix(&text).with_context(|| format!("parsing {}", args.matrix.display()))?;
    emit(&args.output, &to_json(&analyze(&matrix))?)
}

#[derive(Serialize)]
struct BenchDoc {
    algorithm: String,
    delta: Delta,
    n: usize,
    m: usize,
    #[serde(flatten)]
    report: InstrumentationReport,
    counts: [[u64; 6]; 6],
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    require_positive(args.delta)?;
    // Timing covers loading and preprocessing as well as counting.
    let start = Instant::now();
    let graph = load(&args.input.input)?;
    let counted = count_motifs(&graph, args.delta, args.classes, args.algorithm)?;
    let doc = BenchDoc {
        algorithm: args.algorithm.to_string(),
        delta: args.delta,
        n: graph.num_nodes(),
        m: graph.num_edges(),
        report: InstrumentationReport::new(counted.work, start.elapsed()),
        counts: *counted.matrix.rows(),
    };
    emit(&Output { output: None }, &to_json(&doc)?)
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let (graph, header) = match args.kind {
        GenKind::Random {
            nodes,
            edges,
            t_max,
            seed,
        } => (
            gen_random(nodes, edges, t_max, seed)?,
            format!("tmotif gen random nodes={nodes} edges={edges} t_max={t_max} seed={seed}"),
        ),
        GenKind::Worstcase { n, m } => (gen_worstcase(n, m)?, format!("tmotif gen worstcase n={n} m={m}")),
    };
    let mut buf = Vec::new();
    write_edge_list(&graph, &mut buf, Some(&header))?;
    emit(&Output { output: args.output }, std::str::from_utf8(&buf)?)
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let graph = load(&args.input.input)?;
    let oracle = oracle_count_capped(&graph, args.delta, args.cap)?;
    let fast = count_motifs(&graph, args.delta, ClassSet::ALL, Algorithm::Fast)?.matrix;
    if fast != oracle {
        return Err(Mismatch("fast counters disagree with the oracle".into()).into());
    }
    let text = render(
        &oracle,
        || MatrixDoc {
            delta: args.delta,
            n: graph.num_nodes(),
            m: graph.num_edges(),
            classes: ClassSet::ALL.names().into_iter().map(String::from).collect(),
            counts: *oracle.rows(),
            runtime_seconds: None,
        },
        args.format,
    )?;
    emit(&args.output, &text)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Timescales(a) => cmd_timescales(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Catalog => emit(&Output { output: None }, &catalog_csv()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(1);
        }
        pool = pool.num_threads(n);
    }
    let result = pool
        .build()
        .context("starting worker threads")
        .and_then(|pool| pool.install(|| run(cli)));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
