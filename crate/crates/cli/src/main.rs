//! `poslab`: every pipeline of the library as a subcommand.
//!
//! Output is one JSON object per line (CSV where requested). Exit codes: 0 on
//! success, 2 on a violated precondition, 3 when a budget is exceeded, 4 on
//! I/O or parse errors.

mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use poslab::Error;

#[derive(Parser, Debug)]
#[command(name = "poslab", version, about = "Exact positivity and Sidorenko certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Hypergraph file (`r v m` header, then one edge per line).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Named construction instead of a file, e.g. `K:3`, `tight:3:6`, `grid:3`.
    #[arg(long, global = true)]
    pub graph: Option<String>,
    /// Seed for every stochastic step; mandatory where randomness is used.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    /// Work limit: engine terms for `density`, search nodes for `max-code`.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Root bracket width as `p/q`.
    #[arg(long, global = true)]
    pub tol: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Replay the certificates in this file (one JSON object per line).
    #[arg(long, global = true)]
    pub verify: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact t_H(W) for a kernel file or the kernel of a target hypergraph.
    Density {
        /// Kernel JSON: {"r", "parts", "values"} with p/q strings.
        #[arg(long, conflicts_with = "target")]
        kernel: Option<PathBuf>,
        /// Target hypergraph (named construction or file path).
        #[arg(long)]
        target: Option<String>,
    },
    /// Independence polynomial and its smallest positive root.
    Indpoly,
    /// Non-positivity certificate for a connected graph with all degrees odd.
    CertifyOdd,
    /// Non-positivity certificate for the Levi graph of an odd-uniformity hypergraph.
    Levi,
    /// Q-vanishing certificate.
    Qvanish {
        /// Family as JSON, 1-based: `[[1,2],[3]]`.
        #[arg(long)]
        family: String,
    },
    /// The gadget hypergraph H_Q.
    BuildHq {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        family: String,
    },
    /// Exact probability that a labelled copy lies in the tournament hypergraph.
    CopyProb,
    /// Monte Carlo labelled-copy density in G(T_n).
    McDensity {
        #[arg(long)]
        n: usize,
    },
    /// Search for a step kernel with negative density.
    Minimize {
        #[arg(long, default_value_t = 2)]
        parts: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
    },
    /// Tight-cycle report: vanishing table, copy probability, decay.
    CycleDemo {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        n: usize,
    },
    /// Parity-kernel table on the grid, optionally with a witness search.
    GridDemo {
        #[arg(long)]
        r: usize,
        /// Also run the optimizer on the grid (needs --seed).
        #[arg(long)]
        search: bool,
    },
    /// Fourier spectrum of the copy indicator, or one exact coefficient.
    CodeSpectrum {
        #[arg(long)]
        n: usize,
        /// Single graph vector as `n=<n>:<hex>`; prints the exact coefficient.
        #[arg(long)]
        at: Option<String>,
    },
    /// Density bound for codes avoiding copies of H.
    CodeBound {
        #[arg(long)]
        n: usize,
    },
    /// Largest code on K_n avoiding copies of H, by exhaustive search.
    MaxCode {
        #[arg(long)]
        n: usize,
    },
    /// Search for a stable involution.
    StableInvolution,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Precondition(_) | Error::UniformityMismatch { .. } => 2,
        Error::Budget { .. } => 3,
        Error::Parse(_) | Error::Io(_) | Error::Json(_) => 4,
    }
}

fn init_threads() -> poslab::Result<()> {
    let Ok(raw) = std::env::var("POSLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse(format!("POSLAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Precondition(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| match (&cli.verify, &cli.command) {
        (Some(path), None) => verify::run(path),
        (None, Some(cmd)) => commands::run(&cli, cmd),
        (Some(_), Some(_)) => Err(Error::Precondition("--verify takes no subcommand".into())),
        (None, None) => Err(Error::Precondition("no subcommand given; see --help".into())),
    });
    match result {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("poslab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
