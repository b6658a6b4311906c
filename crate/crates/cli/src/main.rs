use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fdgame_cli::commands::{self, GraphSource, Options, Outcome};
use fdgame_core::derivation::ClosureOptions;
use fdgame_core::error::Result;
use fdgame_core::game::DEFAULT_PROFILE_GUARD;

/// Functional dependence between players in graph-restricted games:
/// equilibrium enumeration, semantic checks, derivations, and
/// counterexample games.
#[derive(Parser)]
#[command(name = "fdgame", version, max_term_width = 100)]
struct Cli {
    /// Cap on the profile-space size for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_PROFILE_GUARD)]
    guard: u128,

    /// Worker threads for equilibrium enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all pure Nash equilibria of a game file.
    Nash { game: PathBuf },
    /// Check whether a game satisfies a formula; exit 0 true, 1 false.
    Models { game: PathBuf, formula: String },
    /// Decide a query file's goal against its hypotheses.
    Derive {
        query: PathBuf,
        /// Print a checked proof (atom goals only).
        #[arg(long)]
        trace: bool,
        /// Decide by brute-force saturation (small graphs, atom goals).
        #[arg(long)]
        oracle: bool,
    },
    /// Build a verified countermodel game for an underivable atom goal.
    Counterexample {
        query: PathBuf,
        /// Write the game plus witnesses to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample random games over a graph and check the soundness laws.
    Fuzz {
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 3)]
        max_strategies: usize,
    },
    /// Graph file utilities.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Parse a graph file and report its shape.
    Validate { graph: PathBuf },
}

fn run(cli: &Cli) -> Result<Outcome> {
    let opts = Options {
        guard: cli.guard,
        closure: ClosureOptions::default(),
    };
    match &cli.command {
        Command::Nash { game } => commands::cmd_nash(game, &opts),
        Command::Models { game, formula } => commands::cmd_models(game, formula, &opts),
        Command::Derive {
            query,
            trace,
            oracle,
        } => commands::cmd_derive(query, *trace, *oracle, &opts),
        Command::Counterexample { query, out } => {
            commands::cmd_counterexample(query, out.as_deref(), &opts)
        }
        Command::Fuzz {
            graph,
            seed,
            samples,
            max_strategies,
        } => commands::cmd_fuzz(
            GraphSource::Path(graph),
            *seed,
            *samples,
            *max_strategies,
            &opts,
        ),
        Command::Graph {
            command: GraphCommand::Validate { graph },
        } => commands::cmd_graph_validate(graph),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(if outcome.verdict { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
