use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lattice_llt::runner::{self, RunOptions};
use lattice_llt::scalar::Mode;
use lattice_llt::Error;

/// Verification suites for lattice local limit theorems and divisor bounds.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suite described by a TOML config; writes a CSV report and a JSON sidecar.
    Run {
        config: PathBuf,
        /// Arithmetic mode, overriding the config.
        #[arg(long)]
        mode: Option<Mode>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Seed for sampling suites, overriding the config.
        #[arg(long)]
        seed: Option<u64>,
        /// CSV output path; the sidecar goes next to it with a .json extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize CSV reports: counts, worst margins, failing rows and fitted slopes.
    Summary { files: Vec<PathBuf> },
    /// List the available suites.
    ListSuites,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config, mode, workers, seed, out } => {
            let opts = RunOptions { mode, seed, out, workers };
            match runner::run(&config, &opts) {
                Ok(outcome) => {
                    let c = runner::Counts::of(&outcome.rows);
                    println!(
                        "{} rows (pass {}, fail {}, n/a {}, error {}) -> {}",
                        outcome.rows.len(),
                        c.pass,
                        c.fail,
                        c.inapplicable,
                        c.error,
                        outcome.csv_path.display()
                    );
                    outcome.status
                }
                Err(e @ Error::Config(_)) => {
                    eprintln!("config error: {e}");
                    3
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Command::Summary { files } => {
            let (text, status) = runner::summarize(&files);
            print!("{text}");
            status
        }
        Command::ListSuites => {
            for (name, about) in runner::list_suites() {
                println!("{name:<16} {about}");
            }
            0
        }
    };
    ExitCode::from(code as u8)
}
