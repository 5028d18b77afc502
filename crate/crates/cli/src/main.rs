use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use heatfield_cli::{run, Experiment};

/// Run a heatfield experiment and write its CSV and manifest.
#[derive(Parser, Debug)]
#[command(name = "heatfield", version, about)]
struct Cli {
    /// Experiment to run.
    subcommand: Experiment,
    /// Flat `key = value` config file.
    #[arg(long)]
    config: PathBuf,
    /// CSV output path; the manifest is written to `<out>.manifest.json`.
    #[arg(long)]
    out: Option<PathBuf>,
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
    let outcome = run(cli.subcommand, &cli.config, cli.out.as_deref());
    match &outcome.result {
        Ok(_) => {
            eprintln!(
                "wrote {} and {}",
                outcome.csv.display(),
                outcome.manifest.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("heatfield {}: error: {e}", cli.subcommand);
            ExitCode::from(outcome.exit_code() as u8)
        }
    }
}
