use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use muskat::commands;

#[derive(Parser)]
#[command(name = "muskat", version, about = "Regularized Muskat solver and inequality harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one configuration (or an eps continuation) and write its ledger.
    Run {
        config: PathBuf,
        /// Overrides output.dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and write reports.json.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// One run per entry of eps_list or amplitude_list.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the data-adapted weight of the initial data.
    Weights {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, out } => commands::run(config, out.as_deref()),
        Command::Verify { suite, seed, trials, out } => commands::verify(suite, *seed, *trials, out),
        Command::Sweep { config, out } => commands::sweep(config, out.as_deref()),
        Command::Weights { config, out } => commands::weights(config, out.as_deref()),
    };
    match result {
        Ok(s) => s.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.status().into()
        }
    }
}
