//! `cvrouter`: graph generation, spectral no-go checks, routing and ensemble
//! statistics for continuous-variable cluster states.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::RunConfig;

/// Stable process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const NO_GO: u8 = 2;
    pub const NOT_IDEAL: u8 = 3;
}

#[derive(Debug, Parser)]
#[command(
    name = "cvrouter",
    version,
    about = "Entanglement routing on continuous-variable graph states"
)]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a graph and write it as JSON.
    Generate(Generate),
    /// Symplectic spectrum of provider A and the routing verdicts.
    Spectrum(Spectrum),
    /// Route an EPR pair between two vertices.
    Route(Route),
    /// Pooled provider-A spectra over a random-graph ensemble.
    Histogram(Histogram),
    /// Four-vertex cycle: closed form, hand solution and impossibility scan.
    SquareOracle(SquareOracle),
}

#[derive(Debug, Args, Default)]
struct TopologyArgs {
    /// grid, complete, ba, as or dd.
    #[arg(long)]
    topology: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Attachment count for ba.
    #[arg(long)]
    m: Option<usize>,
    /// Retention probability for dd.
    #[arg(long)]
    p: Option<f64>,
    /// Master seed; falls back to CVROUTER_SEED, then the config.
    #[arg(long, env = "CVROUTER_SEED")]
    seed: Option<u64>,
    /// Vertices of provider A, comma separated.
    #[arg(long, value_delimiter = ',')]
    partition_a: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
struct Generate {
    #[command(flatten)]
    topology: TopologyArgs,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Spectrum {
    /// Graph JSON written by `generate`.
    graph: PathBuf,
    #[arg(long)]
    s: Option<f64>,
    /// Gate the exit code on the internal verdict instead of the bipartite one.
    #[arg(long)]
    internal: bool,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Cmaes,
    Constructive,
}

#[derive(Debug, Args)]
struct Route {
    #[command(flatten)]
    topology: TopologyArgs,
    /// Use this graph file instead of generating one.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    s: Option<f64>,
    /// Explicit pair as `A,B`.
    #[arg(long, conflicts_with = "scenario")]
    pair: Option<String>,
    /// Client placement scenario: I, II or III.
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long, value_enum, default_value_t = MethodArg::Cmaes)]
    method: MethodArg,
    #[arg(long)]
    max_generations: Option<usize>,
    #[arg(long)]
    f_target: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Histogram {
    #[command(flatten)]
    topology: TopologyArgs,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    graphs: Option<usize>,
    #[arg(long)]
    bins: Option<usize>,
    /// Desk-scale ensemble: 10 graphs of 200 vertices.
    #[arg(long)]
    reduced: bool,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SquareOracle {
    #[arg(long)]
    s: Option<f64>,
    /// Grid points per angle in the scan.
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::SUCCESS });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::USAGE)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let cfg = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Generate(args) => commands::cmd_generate(cfg, args),
        Command::Spectrum(args) => commands::cmd_spectrum(cfg, args),
        Command::Route(args) => commands::cmd_route(cfg, args),
        Command::Histogram(args) => commands::cmd_histogram(cfg, args),
        Command::SquareOracle(args) => commands::cmd_square_oracle(cfg, args),
    }
}
