mod cache;
mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{Ctx, Outcome, RaiseArgs};
use config::Config;
use quatforms::autoforms::HeckeLabel;
use quatforms::Error;

/// Brandt modules, overconvergent slopes and level raising for definite
/// quaternion algebras over Q. Output is a JSON report on stdout.
#[derive(Parser)]
#[command(name = "quatforms", version)]
struct Cli {
    /// TOML file with cache_dir, precision, truncation, prime_bound, conductor_bound.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Leave out elapsed time so that reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timings: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Left ideal classes of the Eichler order of level M in the algebra ramified at q.
    Classset {
        #[arg(long)]
        q: u64,
        #[arg(long = "M")]
        m: u64,
    },
    /// Hecke matrices and eigenvalues at level M and weight k.
    Hecke {
        #[arg(long)]
        q: u64,
        #[arg(long = "M")]
        m: u64,
        /// Working prime; its exponent in M is the p-level.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Operators such as T13, S2 or U (repeatable or comma separated).
        #[arg(long = "op", value_delimiter = ',', required = true)]
        ops: Vec<String>,
    },
    /// Newton slopes of U_p on truncated overconvergent forms.
    Slopes {
        #[arg(long)]
        q: u64,
        #[arg(long = "M")]
        m: u64,
        #[arg(long)]
        p: u64,
        /// "k=2", "k=4,w=6", or "s=<rational>,i=<exponent mod p-1>".
        #[arg(long)]
        weight: String,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long = "prec")]
        prec: Option<u32>,
    },
    /// Valuation of T_ℓ² − (ℓ+1)²S_ℓ along an ordinary branch, per weight.
    Raise {
        #[arg(long)]
        q: u64,
        #[arg(long = "M")]
        m: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u32>,
        #[arg(long = "prec")]
        prec: Option<u32>,
        /// Also search level Mℓ for an ℓ-new weight-2 system congruent to the seed.
        #[arg(long)]
        witness: bool,
    },
    /// Functionals fixed by [[1, p^N'], [0, 1]] on degree ≤ N in g variables.
    Colex {
        #[arg(long)]
        g: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long = "Nprime", default_value_t = 1)]
        n_prime: u32,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Level(_) | Error::RamifiedPlace(_) | Error::MonoidMembership { .. } => 2,
        Error::Precision(_) | Error::FactorizationUndefined(_) | Error::NoSquareRoot { .. } => 3,
        Error::IncompleteClassSet { .. } => 4,
        Error::Internal(_) => 1,
    }
}

fn run(cli: &Cli) -> quatforms::Result<(&'static str, Outcome)> {
    let cfg = Config::load(cli.config.as_deref())?;
    let ctx = Ctx::new(cfg);
    Ok(match &cli.cmd {
        Cmd::Classset { q, m } => ("classset", commands::classset(&ctx, *q, *m)?),
        Cmd::Hecke { q, m, p, k, ops } => {
            let labels = ops.iter().map(|s| s.parse::<HeckeLabel>()).collect::<quatforms::Result<Vec<_>>>()?;
            ("hecke", commands::hecke(&ctx, *q, *m, *p, *k, &labels)?)
        }
        Cmd::Slopes { q, m, p, weight, n, prec } => ("slopes", commands::slopes(&ctx, *q, *m, *p, weight, *n, *prec)?),
        Cmd::Raise { q, m, p, ell, weights, prec, witness } => {
            let a = RaiseArgs { q: *q, level: *m, p: *p, ell: *ell, weights: weights.clone(), m: *prec, witness: *witness };
            ("raise", commands::raise(&ctx, &a)?)
        }
        Cmd::Colex { g, n, p, n_prime } => ("colex", commands::colex(*g, *n, *p, *n_prime)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok((command, out)) => {
            let mut report = json!({
                "command": command,
                "inputs": out.inputs,
                "outputs": out.outputs,
                "notes": out.notes,
            });
            if !cli.no_timings {
                report["timings"] = json!({
                    "elapsed_ms": start.elapsed().as_millis() as u64,
                    "cache": out.cache.map(|c| c.as_str()),
                });
            }
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
