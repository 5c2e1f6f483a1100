mod cache;
mod commands;
mod selftest;

use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "pm",
    version,
    about = "Poset matrices, Pascal embeddings and Dedekind-Pascal counts"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for the parallel searches.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,

    /// Directory for memoized enumerate/ideals results.
    #[arg(long, env = "PM_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Matrices,
    Canonical,
    Counts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Domination,
    Exhaustive,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a matrix is a poset matrix.
    Validate {
        /// Matrix file, or `-` for standard input.
        input: String,
        /// Structured diagnostics on standard output.
        #[arg(long)]
        json: bool,
    },
    /// Index vector of a poset matrix.
    Embed { input: String },
    /// Principal submatrix of the binary Pascal matrix of order N.
    Induce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: String,
    },
    /// Flip transpose of a poset matrix.
    Dual { input: String },
    /// Index vector of the dual poset.
    DualIndex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: String,
    },
    /// All poset matrices of order n, their classes, or the counts.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Emit::Counts)]
        emit: Emit,
    },
    /// Canonical form and the relabeling that produces it.
    Canonical { input: String },
    /// Index vectors reachable from alpha, or its whole class.
    Orbit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = Method::Domination)]
        method: Method,
        #[arg(long, default_value_t = pm_core::domination::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Dedekind-Pascal number D_P(n).
    Ideals {
        #[arg(long)]
        n: usize,
        /// One JSON line per antichain with its ideal and fixed point.
        #[arg(long)]
        list: bool,
        /// Recount by scanning all 2^n Boolean vectors.
        #[arg(long)]
        check_fixed_points: bool,
    },
    /// Dedekind number M(k) as D_P(2^k).
    Dedekind {
        #[arg(long)]
        k: u32,
    },
    /// Run the bundled reference checks.
    Selftest,
}

pub struct Ctx {
    pub format: Format,
    pub cache: Option<cache::Cache>,
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let ctx = Ctx {
        format: cli.format,
        cache: cli.cache_dir.map(cache::Cache::new),
    };
    match cli.command {
        Command::Validate { input, json } => commands::validate(&ctx, &input, json, out),
        Command::Embed { input } => commands::embed(&ctx, &input, out),
        Command::Induce { n, alpha } => commands::induce(&ctx, n, &alpha, out),
        Command::Dual { input } => commands::dual(&ctx, &input, out),
        Command::DualIndex { n, alpha } => commands::dual_index(&ctx, n, &alpha, out),
        Command::Enumerate { n, emit } => commands::enumerate(&ctx, n, emit, out),
        Command::Canonical { input } => commands::canonical(&ctx, &input, out),
        Command::Orbit {
            n,
            alpha,
            method,
            budget,
        } => commands::orbit(&ctx, n, &alpha, method, budget, out),
        Command::Ideals {
            n,
            list,
            check_fixed_points,
        } => commands::ideals(&ctx, n, list, check_fixed_points, out),
        Command::Dedekind { k } => commands::dedekind(&ctx, k, out),
        Command::Selftest => selftest::run(&ctx, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs as usize)
        .build_global()
    {
        eprintln!("pm: {e}");
        return ExitCode::from(3);
    }
    let mut out = BufWriter::new(io::stdout().lock());
    let result = dispatch(cli, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(msg) = e.message() {
                eprintln!("pm: {msg}");
            }
            ExitCode::from(e.code())
        }
    }
}
