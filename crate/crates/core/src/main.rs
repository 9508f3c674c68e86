use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use fairdense::aux::Budget;
use fairdense::bench::{bench_run, BenchConfig};
use fairdense::densest::{peel_baseline, tds_exact};
use fairdense::greedy::{fds_greedy, sds_greedy, DEFAULT_K_SCHEDULE};
use fairdense::instances::{gen_clique_reduction, gen_random, gen_synthetic};
use fairdense::rational::{parse_rational, Rational};
use fairdense::report::write_csv;
use fairdense::search::{fds_solve, mds_solve, sds_solve, Backend, SearchConfig};
use fairdense::{io as edges, Error, Result, SolveReport, TemporalGraph};

#[derive(Parser)]
#[command(name = "fairdense", version, about = "Fair dense subgraphs in graph sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem on an edge-list file.
    Solve(SolveArgs),
    /// Generate an instance and write it as an edge list.
    Gen(GenArgs),
    /// Run a benchmark matrix from a TOML config and emit CSV.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the size of an edge-list file.
    Info {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemArg {
    Tds,
    Mds,
    Fds,
    Sds,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Greedy,
    Peel,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Enum,
    Bnb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Synthetic,
    Clique,
    Random,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    problem: ProblemArg,
    #[arg(long, value_enum, default_value = "exact")]
    method: MethodArg,
    /// Largest allowed density gap (FDS).
    #[arg(long, value_parser = rational)]
    alpha: Option<Rational>,
    /// Density floor (SDS).
    #[arg(long, value_parser = rational, conflicts_with = "sigma_nrm")]
    sigma: Option<Rational>,
    /// Density floor as a fraction of the best total density (SDS).
    #[arg(long, value_parser = rational)]
    sigma_nrm: Option<Rational>,
    #[arg(long, value_parser = rational, default_value = "0.01")]
    epsilon: Rational,
    #[arg(long, value_enum, default_value = "bnb")]
    backend: BackendArg,
    /// Tighten epsilon until the search is exact.
    #[arg(long)]
    exactness: bool,
    /// Seconds allowed for each subproblem solve.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    output: OutputArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertices (random).
    #[arg(long)]
    n: Option<usize>,
    /// Snapshots (random).
    #[arg(long)]
    r: Option<usize>,
    /// Edges per snapshot (random).
    #[arg(long)]
    m: Option<usize>,
    /// Single-snapshot edge list for the clique reduction; a random
    /// `G(h_n, h_m)` is drawn when absent.
    #[arg(long)]
    h: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    h_n: usize,
    #[arg(long, default_value_t = 10)]
    h_m: usize,
    /// Clique size (clique).
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
    /// Where to write the planted set and its profile as JSON (synthetic).
    #[arg(long)]
    truth: Option<PathBuf>,
}

fn rational(text: &str) -> std::result::Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn seconds(secs: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(secs).map_err(|_| Error::Input(format!("invalid time limit {secs}")))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn io_error(path: Option<&Path>) -> impl Fn(io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.map_or_else(|| "<stdout>".into(), Path::to_path_buf), source }
}

fn load(path: &Path) -> Result<TemporalGraph> {
    let parsed = edges::load(path)?;
    if parsed.duplicates > 0 {
        eprintln!("warning: dropped {} duplicate edges", parsed.duplicates);
    }
    Ok(parsed.graph)
}

fn run_solve(args: &SolveArgs) -> Result<()> {
    let graph = load(&args.input)?;
    let mut cfg = SearchConfig {
        epsilon: args.epsilon,
        exactness: args.exactness,
        backend: match args.backend {
            BackendArg::Enum => Backend::Enumeration,
            BackendArg::Bnb => Backend::BranchAndBound,
        },
        ..Default::default()
    };
    if let Some(secs) = args.time_limit {
        cfg.aux_budget = Budget::with_time_limit(seconds(secs)?);
    }
    let alpha = || args.alpha.ok_or_else(|| Error::Input("--alpha is required for fds".into()));

    let (report, constraint): (SolveReport, Option<Rational>) = match (args.problem, args.method) {
        (ProblemArg::Tds, MethodArg::Exact) => (tds_exact(&graph), None),
        (ProblemArg::Tds, MethodArg::Peel) => (peel_baseline(&graph), None),
        (ProblemArg::Mds, MethodArg::Exact) => (mds_solve(&graph, &cfg)?, None),
        (ProblemArg::Fds, MethodArg::Exact) => (fds_solve(&graph, alpha()?, &cfg)?, args.alpha),
        (ProblemArg::Fds, MethodArg::Greedy) => (fds_greedy(&graph, alpha()?, &DEFAULT_K_SCHEDULE)?, args.alpha),
        (ProblemArg::Sds, MethodArg::Exact | MethodArg::Greedy) => {
            let d_tds = tds_exact(&graph).objective;
            let (sigma, nrm) = match (args.sigma, args.sigma_nrm) {
                (Some(sigma), _) => (sigma, (!d_tds.is_zero()).then(|| sigma / d_tds)),
                (None, Some(nrm)) => (nrm * d_tds, Some(nrm)),
                (None, None) => return Err(Error::Input("--sigma or --sigma-nrm is required for sds".into())),
            };
            let report = if args.method == MethodArg::Exact {
                sds_solve(&graph, sigma, &cfg)?
            } else {
                sds_greedy(&graph, sigma)?
            };
            (report, nrm)
        }
        (_, _) => {
            return Err(Error::Input(
                "unsupported method: tds takes exact|peel, mds takes exact, fds and sds take exact|greedy".into(),
            ))
        }
    };
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    if !report.certificate.is_certified() {
        eprintln!("warning: result is not certified: {}", report.certificate);
    }

    let out = args.out.as_deref();
    let mut writer = sink(out)?;
    match args.output {
        OutputArg::Json => {
            serde_json::to_writer_pretty(&mut writer, &report.to_json()).map_err(|e| io_error(out)(e.into()))?;
            writeln!(writer).map_err(io_error(out))?;
        }
        OutputArg::Csv => {
            let row = report.row(report.label(), constraint, None);
            write_csv(&mut writer, &[row]).map_err(|e| io_error(out)(e.into()))?;
        }
    }
    writer.flush().map_err(io_error(out))
}

fn run_gen(args: &GenArgs) -> Result<()> {
    let need = |value: Option<usize>, flag: &str| {
        value.ok_or_else(|| Error::Input(format!("--{flag} is required for this kind")))
    };
    let graph = match args.kind {
        KindArg::Synthetic => {
            let (graph, truth) = gen_synthetic(args.seed);
            if let Some(path) = &args.truth {
                let doc = serde_json::json!({
                    "seed": args.seed,
                    "set": truth.set,
                    "edge_counts": truth.profile.edge_counts,
                    "total": truth.profile.total.to_string(),
                    "gap": truth.profile.gap.to_string(),
                });
                let mut w = create(path)?;
                serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| io_error(Some(path))(e.into()))?;
                writeln!(w).and_then(|_| w.flush()).map_err(io_error(Some(path)))?;
            }
            graph
        }
        KindArg::Random => gen_random(need(args.n, "n")?, need(args.r, "r")?, need(args.m, "m")?, args.seed)?,
        KindArg::Clique => {
            let h = match &args.h {
                Some(path) => load(path)?,
                None => gen_random(args.h_n, 1, args.h_m, args.seed)?,
            };
            gen_clique_reduction(&h, args.k)?
        }
    };
    if args.truth.is_some() && args.kind != KindArg::Synthetic {
        eprintln!("warning: --truth only applies to synthetic instances");
    }
    edges::save_to_path(&graph, &args.out)
}

fn run_bench(config: &Path, out: Option<&Path>) -> Result<()> {
    let config = BenchConfig::load(config)?;
    let output = bench_run(&config)?;
    for (row, message) in &output.errors {
        eprintln!("row {}: {message}", row + 1);
    }
    let mut writer = sink(out)?;
    write_csv(&mut writer, &output.rows).map_err(|e| io_error(out)(e.into()))?;
    writer.flush().map_err(io_error(out))
}

fn run_info(input: &Path) -> Result<()> {
    let parsed = edges::load(input)?;
    let g = &parsed.graph;
    println!("n = {}", g.n());
    println!("r = {}", g.r());
    for t in 0..g.r() {
        println!("snapshot {t}: {} edges", g.edge_count(t));
    }
    println!("total edges = {}", g.total_edge_count());
    println!("duplicates dropped = {}", parsed.duplicates);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Gen(args) => run_gen(args),
        Command::Bench { config, out } => run_bench(config, out.as_deref()),
        Command::Info { input } => run_info(input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_infeasible() { 1 } else { 2 })
        }
    }
}
