use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use posort::bench::{run_instance, run_suite, RunOptions, SuiteSpec};
use posort::generate::{self, GraphKind};
use posort::oracle::sample_extension;
use posort::{Dag, Error, LinearOracle};

#[derive(Parser)]
#[command(name = "posort", version, about = "Sort a DAG's vertices against a hidden linear extension")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a DAG in edge-list format.
    Gen(GenArgs),
    /// Sort one graph against an oracle and print a JSON report line.
    Sort(SortArgs),
    /// Run a randomized suite and write a line-delimited JSON report.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    kind: GraphKind,
    /// Vertex count (gnp, path_plus_isolated; random widths for the layered kinds).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Isolated vertices for path_plus_isolated.
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Comma-separated layer widths for layered and chain_of_antichains.
    #[arg(long, value_delimiter = ',')]
    widths: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a random linear extension in permutation format.
    #[arg(long)]
    oracle_out: Option<PathBuf>,
}

#[derive(Args)]
struct SortArgs {
    /// Edge-list file.
    graph: PathBuf,
    /// Permutation file: line i holds the rank of vertex i.
    #[arg(long, conflicts_with = "random_extension", required_unless_present = "random_extension")]
    oracle: Option<PathBuf>,
    /// Sample the hidden order from this seed instead of reading a file.
    #[arg(long)]
    random_extension: Option<u64>,
    /// Include the output order and the full per-insertion trace.
    #[arg(long)]
    trace: bool,
    /// Run the exact bound checks.
    #[arg(long)]
    check: bool,
    /// Also run the baseline sorts and compare outputs.
    #[arg(long)]
    baselines: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    /// Sets n_min = n_max = n.
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    n: Option<usize>,
    /// Graph kinds, cycled by instance index.
    #[arg(long, value_delimiter = ',', default_values_t = [GraphKind::Gnp, GraphKind::Layered])]
    kind: Vec<GraphKind>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the exact bound checks.
    #[arg(long)]
    no_check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Sort(a) => cmd_sort(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("posort: {e}");
            ExitCode::from(2)
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Posort(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn cmd_gen(a: GenArgs) -> Result<bool, CliError> {
    let need_n = || a.n.ok_or_else(|| CliError::Usage(format!("--n is required for {}", a.kind)));
    let widths = || -> Result<Vec<usize>, CliError> {
        if !a.widths.is_empty() {
            return Ok(a.widths.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        Ok(generate::random_widths(need_n()?, &mut rng))
    };
    let g = match a.kind {
        GraphKind::Gnp => generate::gnp(need_n()?, a.p, a.seed)?,
        GraphKind::Layered => generate::layered(&widths()?, a.p, a.seed)?,
        GraphKind::PathPlusIsolated => generate::path_plus_isolated(need_n()?, a.t)?,
        GraphKind::ChainOfAntichains => generate::chain_of_antichains(&widths()?)?,
    };
    emit(a.out.as_deref(), &g.to_edge_list())?;
    if let Some(path) = &a.oracle_out {
        let o = sample_extension(&g, a.seed);
        emit(Some(path), &o.to_permutation())?;
    }
    Ok(true)
}

fn cmd_sort(a: SortArgs) -> Result<bool, CliError> {
    let g = Dag::parse_edge_list(&read(&a.graph)?)?;
    let oracle = match (&a.oracle, a.random_extension) {
        (Some(path), _) => LinearOracle::parse_permutation(&read(path)?, Some(&g))?,
        (None, Some(seed)) => sample_extension(&g, seed),
        (None, None) => unreachable!("clap requires one oracle source"),
    };
    let opts = RunOptions {
        checks: a.check,
        baselines: a.baselines,
        keep_order: a.trace,
        keep_trace: a.trace,
    };
    let record = run_instance(&g, &oracle, opts)?;
    let mut line = serde_json::to_string(&record).expect("records serialize");
    line.push('\n');
    emit(a.out.as_deref(), &line)?;
    if record.failed() {
        eprintln!("posort: a check or differential failed");
    }
    Ok(!record.failed())
}

fn cmd_bench(a: BenchArgs) -> Result<bool, CliError> {
    let (n_min, n_max) = a.n.map_or((a.n_min, a.n_max), |n| (n, n));
    let spec = SuiteSpec {
        count: a.count,
        n_min,
        n_max,
        kinds: a.kind,
        p: a.p,
        t: a.t,
        seed: a.seed,
        checks: !a.no_check,
    };
    let report = run_suite(&spec)?;
    emit(a.out.as_deref(), &report.to_jsonl())?;
    let s = &report.summary;
    eprintln!(
        "{} instances, {} failures; queries main {} / heap_toposort {} / binary_insertion {}",
        s.instances, s.failures, s.queries_main, s.queries_heap_toposort, s.queries_binary_insertion
    );
    Ok(!report.failed())
}
