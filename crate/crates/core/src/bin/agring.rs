use agring::error::Error;
use agring::runner::{run_session, session_with_prime, RunOptions};
use agring::session::parse_session;
use clap::Parser;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

/// Invariants and Buchsbaum certification for graded quotient rings.
#[derive(Parser, Debug)]
#[command(name = "agring", version)]
struct Cli {
    /// Session file; reads stdin when omitted
    file: Option<PathBuf>,

    /// Override the coefficient prime of every declared ring
    #[arg(long)]
    prime: Option<u64>,

    /// Seed for all randomized searches
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Trials for the Buchsbaum sanity sample
    #[arg(long, default_value_t = 12)]
    trials: usize,

    /// Write the collected certificates as JSON to this path
    #[arg(long)]
    json: Option<PathBuf>,

    /// Scan window for reduction searches (default 2d + 10)
    #[arg(long)]
    horizon: Option<usize>,

    /// Exponent bound for usd-sequence sweeps
    #[arg(long, default_value_t = 2)]
    usd_bound: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match &cli.file {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {}", path.display(), e);
                return ExitCode::from(4);
            }
        },
        None => {
            let mut t = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut t) {
                eprintln!("error: cannot read stdin: {}", e);
                return ExitCode::from(4);
            }
            t
        }
    };

    let mut session = match parse_session(&text) {
        Ok(s) => s,
        Err(Error::Parse { line, col, msg }) => {
            eprintln!("parse error at {}:{}: {}", line, col, msg);
            return ExitCode::from(4);
        }
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(4);
        }
    };
    if let Some(p) = cli.prime {
        session = match session_with_prime(&session, p) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {}", e);
                return ExitCode::from(4);
            }
        };
    }

    let opts = RunOptions {
        seed: cli.seed,
        trials: cli.trials,
        usd_bound: cli.usd_bound,
        n_max: cli.horizon,
    };
    let outcome = match run_session(&session, &opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(3);
        }
    };
    print!("{}", outcome.text);
    if let Some(path) = &cli.json {
        let json = serde_json::to_string_pretty(&outcome.certificates)
            .expect("certificates serialize");
        if let Err(e) = std::fs::write(path, json) {
            eprintln!("error: cannot write {}: {}", path.display(), e);
            return ExitCode::from(4);
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
