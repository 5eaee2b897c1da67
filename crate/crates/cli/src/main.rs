mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use gbb_core::GbbError;

/// Best-arm identification experiments on graphical bilinear bandits.
#[derive(Debug, Parser)]
#[command(name = "gbb", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// G-optimal design over a node-arm set
    Design(CommonArgs),
    /// One learner run on one graph
    Learn(CommonArgs),
    /// Greedy bipartite allocation of the best edge-arm
    Allocate(CommonArgs),
    /// Monte-Carlo variance of the one-round design matrix for one graph
    Variance(CommonArgs),
    /// Rounds-to-stop against the number of edges
    SweepEdges(CommonArgs),
    /// Rounds-to-stop against the node-arm dimension
    SweepDim(CommonArgs),
    /// Variance against the number of edges, per family
    SweepVariance(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON config; flags given on the command line override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Graph family (star, complete, circle, matching) or an edge-list file
    #[arg(long)]
    pub graph: Option<String>,
    /// Number of directed edges
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n_nodes: Option<usize>,
    /// Node-arm dimension
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub max_rounds: Option<u64>,
    #[arg(long)]
    pub check_every: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Node-arm CSV, one arm per row
    #[arg(long)]
    pub arms: Option<PathBuf>,
    /// Frank–Wolfe tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Parameter matrix CSV
    #[arg(long)]
    pub m_matrix: Option<PathBuf>,
    /// Linear term CSV (one row); augments arms and parameter
    #[arg(long)]
    pub beta: Option<PathBuf>,
    /// Random unit arms for variance runs
    #[arg(long)]
    pub k: Option<usize>,
    /// Monte-Carlo samples for variance runs
    #[arg(long)]
    pub samples: Option<usize>,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<GbbError>() {
        Some(GbbError::Convergence(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 1,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Design(a) => commands::design(&a),
        Command::Learn(a) => commands::learn(&a),
        Command::Allocate(a) => commands::allocate(&a),
        Command::Variance(a) => commands::variance(&a),
        Command::SweepEdges(a) => commands::sweep_edges(&a),
        Command::SweepDim(a) => commands::sweep_dim(&a),
        Command::SweepVariance(a) => commands::sweep_variance(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
