//! `timtin` command-line front end. Every command prints one JSON document
//! on stdout. Domain errors print `{"error": ...}` and exit 1; usage errors
//! exit 2.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "timtin", version, about = "GDoF evaluation and TIM-TIN decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-user GDoF of a scheme.
    Eval(EvalArgs),
    /// Like `eval`, plus the per-stream successive-cancellation breakdown.
    Sc(EvalArgs),
    /// Finite-SNR rates and slope estimates.
    Oracle(OracleArgs),
    /// Power exponents for treating interference as noise.
    Tin(TinArgs),
    /// Signal-space allocation on a binary topology.
    Tim(TimArgs),
    /// Search or evaluate TIM-TIN decompositions.
    Decompose(DecomposeArgs),
    /// Weighted average of GDoF tuples.
    Timeshare(TimeshareArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Topology file.
    #[arg(short, long)]
    topology: PathBuf,
    /// Scheme file.
    #[arg(short, long)]
    scheme: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(short, long)]
    topology: PathBuf,
    #[arg(short, long)]
    scheme: PathBuf,
    /// SNR values, comma separated; scientific notation accepted.
    #[arg(short = 'P', long = "power", value_delimiter = ',', default_values = ["1e6", "1e10"])]
    powers: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TinArgs {
    #[arg(short, long)]
    topology: PathBuf,
    /// Per-user GDoF targets; without it the symmetric optimum is reported.
    #[arg(long, value_delimiter = ',')]
    target: Option<Vec<String>>,
}

#[derive(Args)]
struct TimArgs {
    /// Topology file; cross links stronger than the threshold are kept.
    #[arg(short, long, required_unless_present = "users", conflicts_with_all = ["users", "links"])]
    topology: Option<PathBuf>,
    #[arg(long, default_value = "0", requires = "topology")]
    threshold: String,
    /// Number of users, with an explicit link list.
    #[arg(long, requires = "links")]
    users: Option<usize>,
    /// Links as receiver:transmitter, 1-based, comma separated.
    #[arg(long, value_delimiter = ',', requires = "users")]
    links: Option<Vec<String>>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(short, long)]
    topology: PathBuf,
    /// Largest number of cross links searched exhaustively.
    #[arg(long, default_value_t = timtin::decomp::DEFAULT_EXHAUSTIVE_CAP)]
    exhaustive_cap: usize,
    /// Write the synthesized scheme of every frontier point into this directory.
    #[arg(long)]
    emit_schemes: Option<PathBuf>,
    /// Evaluate this map file only instead of searching.
    #[arg(long, conflicts_with = "exhaustive_cap")]
    map: Option<PathBuf>,
    /// Per-user TIN targets for `--map` instead of the symmetric optimum.
    #[arg(long, value_delimiter = ',', requires = "map")]
    tin_targets: Option<Vec<String>>,
    /// Run the search on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct TimeshareArgs {
    /// Weights, comma separated, summing to 1.
    #[arg(short, long, value_delimiter = ',', required = true)]
    weights: Vec<String>,
    /// A GDoF tuple, comma separated; repeat once per weight.
    #[arg(long = "tuple", required_unless_present = "from")]
    tuples: Vec<String>,
    /// Take the tuples from the frontier of a `decompose` report.
    #[arg(long, conflicts_with = "tuples")]
    from: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(a) => commands::eval(&a.topology, &a.scheme, false),
        Command::Sc(a) => commands::eval(&a.topology, &a.scheme, true),
        Command::Oracle(a) => commands::oracle(&a.topology, &a.scheme, &a.powers, a.seed),
        Command::Tin(a) => commands::tin(&a.topology, a.target.as_deref()),
        Command::Tim(a) => match (a.topology, a.users, a.links) {
            (Some(t), _, _) => commands::tim_from_file(&t, &a.threshold),
            (None, Some(k), Some(links)) => commands::tim_from_links(k, &links),
            _ => unreachable!("clap enforces one input form"),
        },
        Command::Decompose(a) => match a.map {
            Some(map) => commands::decompose_one(&a.topology, &map, a.tin_targets.as_deref(), a.emit_schemes.as_deref()),
            None => commands::decompose(&a.topology, a.exhaustive_cap, a.sequential, a.emit_schemes.as_deref()),
        },
        Command::Timeshare(a) => commands::timeshare(&a.weights, &a.tuples, a.from.as_deref()),
    };
    match outcome {
        Ok(doc) => {
            println!("{}", commands::render(&doc));
            ExitCode::SUCCESS
        }
        Err(message) => {
            println!("{}", commands::render(&serde_json::json!({ "error": message })));
            ExitCode::from(1)
        }
    }
}
