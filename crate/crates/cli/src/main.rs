//! `widthlab`: validate triangulations, compute dual-graph widths, build
//! genus certificates, check the width inequalities and run the census.
//!
//! Exit codes: 0 success, 1 invalid input, 2 I/O error, 3 a proved bound
//! failed (which means a bug here, not a property of the input).

mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;
use widthlab_core::solvers::{ExactLimits, Param};

#[derive(Parser)]
#[command(name = "widthlab", version, about = "Width parameters and genus certificates for 3-manifold triangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a gluing table (closed, valid, orientable, connected).
    Check(CheckArgs),
    /// Compute tw, pw, cw and/or cng of a dual graph or an edge list.
    Width(WidthArgs),
    /// Build a linear or graph certificate for a triangulation.
    Certify(CertifyArgs),
    /// Check the width inequalities on every edge list in a directory.
    #[command(name = "verify-ineq")]
    VerifyIneq(IneqArgs),
    /// Enumerate all closed orientable triangulations up to a size and
    /// certify each.
    Census(CensusArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
pub struct CheckArgs {
    /// Gluing-table file.
    pub path: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Largest node counts for the exact solvers.
#[derive(Args, Clone, Copy)]
pub struct LimitArgs {
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..=26))]
    pub max_exact_tw: u64,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..=26))]
    pub max_exact_pw: u64,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..=26))]
    pub max_exact_cw: u64,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..=26))]
    pub max_exact_cng: u64,
}

impl LimitArgs {
    pub fn limits(&self) -> ExactLimits {
        ExactLimits {
            tw: self.max_exact_tw as usize,
            pw: self.max_exact_pw as usize,
            cw: self.max_exact_cw as usize,
            cng: self.max_exact_cng as usize,
        }
    }
}

#[derive(Args)]
pub struct WidthArgs {
    /// Gluing-table file whose dual graph is measured.
    #[arg(required_unless_present = "graph", conflicts_with = "graph")]
    pub path: Option<PathBuf>,
    /// Edge-list file to measure instead of a triangulation.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Parameters to compute (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "tw,pw,cw,cng")]
    pub param: Vec<Param>,
    /// Use the exact solvers (the default).
    #[arg(long, conflicts_with = "heuristic")]
    pub exact: bool,
    /// Use the seeded heuristics; requires --seed.
    #[arg(long, requires = "seed")]
    pub heuristic: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent heuristic restarts.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Directory to write one witness file per parameter into.
    #[arg(long)]
    pub witness_dir: Option<PathBuf>,
    /// Assert (without checking) that the manifold is irreducible.
    #[arg(long, conflicts_with = "graph")]
    pub assert_irreducible: bool,
    /// Assert (without checking) that the manifold is non-Haken.
    #[arg(long, conflicts_with = "graph")]
    pub assert_non_haken: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Linear,
    Graph,
}

#[derive(Args)]
pub struct CertifyArgs {
    /// Gluing-table file.
    pub path: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Layout file (`layout v0 v1 ...`); optimal layout if absent.
    #[arg(long, conflicts_with = "host")]
    pub layout: Option<PathBuf>,
    /// Host-tree file; optimal host if absent.
    #[arg(long)]
    pub host: Option<PathBuf>,
    /// Fix the root arc (index into the host's arc list) instead of
    /// choosing the one with the smallest largest genus.
    #[arg(long)]
    pub root_arc: Option<usize>,
    /// Seed for the heuristic used when the dual graph is too large for the
    /// exact solvers.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Write the full certificate (JSON) to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args)]
pub struct IneqArgs {
    /// Directory of edge-list files.
    pub dir: PathBuf,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args)]
pub struct CensusArgs {
    /// Largest number of tetrahedra.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=3))]
    pub max_tets: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("proved bound violated (this is a bug): {0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Violation(_) => 3,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("WIDTHLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("WIDTHLAB_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Invalid(e.to_string()))
}

/// Exit quietly when stdout is closed early (`widthlab census | head`).
fn restore_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() -> ExitCode {
    restore_sigpipe();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors count as invalid input; help and version are fine
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Check(a) => commands::check(&a),
        Command::Width(a) => commands::width(&a),
        Command::Certify(a) => commands::certify(&a),
        Command::VerifyIneq(a) => commands::verify_ineq(&a),
        Command::Census(a) => commands::census(&a),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("widthlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
