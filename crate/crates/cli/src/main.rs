//! `weakval`: weak-value tables, identity checks and strange-value
//! optimization from the command line.
//!
//! Exit codes: 0 success, 1 failed check or non-converged optimization,
//! 2 usage or validation error.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use render::Format;

#[derive(Parser)]
#[command(name = "weakval", version, about = "Weak values of pre- and post-selected quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a table from a built-in scenario.
    Scenario {
        /// `hardy` or `spin`.
        name: String,
        /// Table variant; omit for the scenario's first table.
        #[arg(long)]
        table: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write the scenario as a JSON document.
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
        /// Spin pre-selection amplitude on |0>.
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        /// Spin pre-selection amplitude on |1>.
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        /// Show real and imaginary parts on separate rows.
        #[arg(long)]
        split: bool,
    },
    /// Run the checks declared in a scenario document.
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Find the extremal weak value over post-selections with <phi|psi> = cos(xi).
    Optimize {
        path: PathBuf,
        #[arg(long)]
        observable: String,
        #[arg(long, allow_negative_numbers = true)]
        xi: f64,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Min)]
        objective: ObjectiveArg,
        /// Grid-oracle points per angle.
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Min,
    Max,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scenario {
            name,
            table,
            format,
            export,
            alpha,
            beta,
            split,
        } => commands::scenario(&commands::ScenarioArgs {
            name,
            table,
            format,
            export,
            alpha,
            beta,
            split,
        }),
        Command::Check { path, format } => commands::check(&path, format),
        Command::Optimize {
            path,
            observable,
            xi,
            objective,
            resolution,
            format,
        } => {
            let objective = match objective {
                ObjectiveArg::Min => weakval_core::Objective::Minimize,
                ObjectiveArg::Max => weakval_core::Objective::Maximize,
            };
            commands::optimize(&path, &observable, xi, objective, resolution, format)
        }
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
