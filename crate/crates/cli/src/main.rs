//! `dgs`: run the graph pipelines from the command line.
//!
//! Exit codes: 0 on success, 1 for input and validation errors, 2 for
//! numerical failures and guard trips.

mod commands;
mod fixture;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dgs_core::WeightedGraph;

use crate::fixture::{Family, FixtureSpec, ValueSpec};

#[derive(Debug, Parser)]
#[command(
    name = "dgs",
    version,
    about = "Discrete Schrödinger operators on weighted graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph file (`v <label> <m> <c>` and `e <label> <label> <b>` lines).
    graph: Option<PathBuf>,
    /// Generated graph: path:N, cycle:N, star:N, z:R or random:N:P.
    #[arg(long, conflicts_with = "graph")]
    fixture: Option<Family>,
    /// Edge weights for a fixture: a number or uniform:LO:HI.
    #[arg(long)]
    weight: Option<ValueSpec>,
    /// Vertex measure for a fixture.
    #[arg(long)]
    measure: Option<ValueSpec>,
    /// Potential for a fixture.
    #[arg(long)]
    potential: Option<ValueSpec>,
    /// Seed for random fixtures, overrides and trials.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<String>,
}

impl GraphArgs {
    pub fn load(&self) -> Result<WeightedGraph> {
        if !(self.tol > 0.0) {
            bail!("--tol must be positive");
        }
        match (&self.graph, self.fixture) {
            (Some(path), None) => {
                if self.weight.is_some() || self.measure.is_some() || self.potential.is_some() {
                    bail!("--weight, --measure and --potential only apply to fixtures");
                }
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read `{}`", path.display()))?;
                Ok(WeightedGraph::parse(&text)?)
            }
            (None, Some(family)) => FixtureSpec {
                family,
                weight: self.weight,
                measure: self.measure,
                potential: self.potential,
                seed: self.seed,
            }
            .build(),
            _ => bail!("give either a graph file or --fixture"),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ground state energy (and optionally the second eigenvalue).
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also compute the second eigenvalue.
        #[arg(long)]
        deflate: bool,
    },
    /// Resolvent-built positive super-solution on a ball around x0.
    Supersol {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short = 'E', long = "energy", allow_negative_numbers = true)]
        energy: f64,
        /// Base point label.
        #[arg(long, default_value = "0")]
        x0: String,
        /// Window radius.
        #[arg(short = 'r', long = "radius", default_value_t = 1)]
        radius: usize,
    },
    /// Explicit Harnack constant of a window.
    Harnack {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short = 'E', long = "energy", allow_negative_numbers = true)]
        energy: f64,
        /// `all`, `ball:LABEL:R` or a comma-separated label list.
        #[arg(long, default_value = "all")]
        window: String,
    },
    /// Shnol quotients of a solution along balls.
    Shnol {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short = 'E', long = "energy", allow_negative_numbers = true)]
        energy: f64,
        /// cos:THETA, geometric:T (integer labels) or file:PATH (`label value` lines).
        #[arg(long)]
        solution: String,
        #[arg(long, default_value = "0")]
        x0: String,
        #[arg(long = "max-radius")]
        max_radius: usize,
        /// Write the quotient table as CSV (`-` for stdout).
        #[arg(long)]
        csv: Option<String>,
        /// Weights alpha for the subexponential test, comma-separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        alphas: Vec<f64>,
        /// Growth budgets delta for the radius search, comma-separated.
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<f64>,
        /// Relative tolerance of the interior solution check.
        #[arg(long = "solution-tol", default_value_t = 1e-9)]
        solution_tol: f64,
    },
    /// Ground state representation check over random test functions.
    GsrCheck {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Also check the super-solution direction at this energy below E0.
        #[arg(short = 'E', long = "energy", allow_negative_numbers = true)]
        energy: Option<f64>,
    },
    /// Boundary measures of a vertex set, and the Cheeger comparison.
    Boundary {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated labels or `ball:LABEL:R`.
        #[arg(long)]
        set: String,
        #[arg(long)]
        cheeger: bool,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum { graph, deflate } => commands::spectrum(&graph, deflate),
        Command::Supersol {
            graph,
            energy,
            x0,
            radius,
        } => commands::supersol(&graph, energy, &x0, radius),
        Command::Harnack {
            graph,
            energy,
            window,
        } => commands::harnack(&graph, energy, &window),
        Command::Shnol {
            graph,
            energy,
            solution,
            x0,
            max_radius,
            csv,
            alphas,
            deltas,
            solution_tol,
        } => commands::shnol(&commands::ShnolArgs {
            graph: &graph,
            energy,
            solution: &solution,
            x0: &x0,
            max_radius,
            csv: csv.as_deref(),
            alphas: &alphas,
            deltas: &deltas,
            solution_tol,
        }),
        Command::GsrCheck {
            graph,
            trials,
            energy,
        } => commands::gsr_check(&graph, trials, energy),
        Command::Boundary {
            graph,
            set,
            cheeger,
        } => commands::boundary(&graph, &set, cheeger),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let numerical = err
        .chain()
        .filter_map(|e| e.downcast_ref::<dgs_core::Error>())
        .any(|e| e.is_numerical())
        || err.downcast_ref::<commands::CheckFailed>().is_some();
    if numerical {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
