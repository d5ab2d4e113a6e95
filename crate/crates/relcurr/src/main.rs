use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use relcurr::{execute, Command, RunConfig};

/// Exact computations with currents on a free group relative to a
/// malnormal subgroup system.
#[derive(Parser)]
#[command(name = "relcurr", version)]
struct Cli {
    /// Rank of the free group; inferred from the input words if omitted.
    #[arg(long, global = true)]
    rank: Option<usize>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Check malnormality and print L and the word set C.
    Analyze {
        #[arg(long)]
        system: PathBuf,
        /// Also list the stratum S_k.
        #[arg(long, value_name = "K")]
        stratum: Option<usize>,
    },
    /// Value of the rational current of g on the cylinder of w.
    Eval {
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        g: String,
        #[arg(long)]
        w: String,
    },
    /// Signed k-extension of a relative current.
    Extend {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        current: PathBuf,
        #[arg(short)]
        k: usize,
        /// Value at length-one words (rational, default 1).
        #[arg(long)]
        base: Option<String>,
    },
    /// Approximate a relative current by rational currents.
    Approximate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        current: PathBuf,
        #[arg(short)]
        k: usize,
        /// Positive rational scale.
        #[arg(short = 'R')]
        scale: String,
        #[arg(long)]
        tol: Option<String>,
    },
    /// Push a rational current forward along an automorphism.
    Act {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        current: PathBuf,
        /// Comma-separated images of the generators.
        #[arg(long)]
        map: String,
        /// Comma-separated images of the generators under the inverse.
        #[arg(long)]
        inverse: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Exit code 2 is reserved for malnormality witnesses.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let command = match cli.command {
        Sub::Analyze { system, stratum } => Command::Analyze { system, stratum },
        Sub::Eval { system, g, w } => Command::Eval { system, g, w },
        Sub::Extend { system, current, k, base } => Command::Extend { system, current, k, base },
        Sub::Approximate { system, current, k, scale, tol } => Command::Approximate { system, current, k, scale, tol },
        Sub::Act { system, current, map, inverse } => Command::Act { system, current, map, inverse },
    };
    let outcome = execute(&RunConfig { command, rank: cli.rank });
    if let Some(out) = &outcome.stdout {
        let mut stdout = std::io::stdout().lock();
        let _ = writeln!(stdout, "{out}");
    }
    if let Some(err) = &outcome.stderr {
        eprintln!("{err}");
    }
    ExitCode::from(outcome.code)
}
