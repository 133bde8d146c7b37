//! `juggle`: enumerate juggling states, export state graphs, compute and
//! cross-check stationary distributions, and simulate random juggling.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on bad usage.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Debug, Parser)]
#[command(name = "juggle", version, about = "Random juggling as a Markov chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Standard,
    Tl,
    Adddrop,
    Annihilation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Exact,
    Power,
    Simulate,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ListFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    /// Maximum throw height.
    #[arg(long)]
    pub h: usize,
    /// Number of empty slots (standard and tl models only).
    #[arg(long)]
    pub f: Option<usize>,
    /// Lift the default size limits.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the landing states (or TL-states) with f empty slots.
    States {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        tl: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: ListFormat,
        #[arg(long)]
        force: bool,
    },
    /// Export a state graph as DOT or JSON.
    Graph {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
    },
    /// Stationary distribution by closed form, exact solve, power iteration
    /// or simulation; `all` cross-checks them.
    Stationary {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: TableFormat,
    },
    /// Check the identities behind the closed forms for one (h, f).
    Verify {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        f: usize,
        /// Comma-separated: lump, doubly, count, bijection, closedform, all.
        #[arg(long, default_value = "all", value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long)]
        force: bool,
    },
    /// Run one seeded random walk and report occupancy as JSON.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start state (defaults to the first state in canonical order).
        #[arg(long)]
        start: Option<String>,
    },
    /// List TL-states with their set partitions, or check the bijection.
    Partitions {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        roundtrip: bool,
        #[arg(long)]
        force: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::States {
            h,
            f,
            tl,
            format,
            force,
        } => commands::states(h, f, tl, format, force),
        Command::Graph { model, format } => commands::graph(&model, format),
        Command::Stationary {
            model,
            method,
            steps,
            seed,
            tol,
            max_iter,
            format,
        } => commands::stationary(
            &model,
            method,
            commands::SolveOptions {
                steps,
                seed,
                tol,
                max_iter,
            },
            format,
        ),
        Command::Verify {
            h,
            f,
            checks,
            force,
        } => commands::verify(h, f, &checks, force),
        Command::Simulate {
            model,
            steps,
            seed,
            start,
        } => commands::simulate(&model, steps, seed, start.as_deref()),
        Command::Partitions {
            h,
            f,
            roundtrip,
            force,
        } => commands::partitions(h, f, roundtrip, force),
    };
    match outcome {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
