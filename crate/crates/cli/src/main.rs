//! `triplex` — build, compose, and verify triples of Steiner triple
//! systems that pairwise share the same blocks, a flower among them.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "triplex",
    version,
    about = "Construct and verify triples of Steiner triple systems with equal \
             pairwise intersections containing a common flower",
    propagate_version = true
)]
struct Cli {
    /// Print only what the exit status already says.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SearchArgs {
    /// Seed for the randomized searches.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Step budget per search attempt.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check a certificate, design, or group divisible design file.
    Verify {
        /// File to check (bare names are also looked up in
        /// $TRIPLEX_DATA_DIR).
        file: PathBuf,
        /// Write a machine-readable report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize a flower-intersection target (r, k) and write the
    /// certificate plus the plan that produced it.
    Realize {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        search: SearchArgs,
        /// Output stem; writes <out>.certificate.json and <out>.plan.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively enumerate a small spectrum and compare with the
    /// recorded values.
    Enumerate {
        /// Flower-intersection spectrum at this replication number.
        #[arg(long, conflicts_with = "latin_n")]
        r: Option<usize>,
        /// Three-way Latin agreement spectrum at this order.
        #[arg(long)]
        latin_n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize three Latin squares of order n agreeing in exactly k cells.
    LatinRealize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        search: SearchArgs,
        /// Parallel restart lanes (seeds seed..seed+jobs; lowest-seed
        /// success wins, so output is deterministic).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute every identity recorded with the embedded catalog.
    PaperCheck {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write all embedded catalog systems as design files.
    ExportCatalog {
        /// Target directory.
        #[arg(long, default_value = "catalog")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    let outcome = match cli.command {
        Command::Verify { file, out } => triplex::cmd_verify(&file, out.as_deref(), quiet),
        Command::Realize { r, k, search, out } => {
            triplex::cmd_realize(r, k, search.seed, search.budget, out.as_deref(), quiet)
        }
        Command::Enumerate { r, latin_n, out } => {
            triplex::cmd_enumerate(r, latin_n, out.as_deref(), quiet)
        }
        Command::LatinRealize { n, k, search, jobs, out } => {
            triplex::cmd_latin_realize(n, k, search.seed, search.budget, jobs, out.as_deref(), quiet)
        }
        Command::PaperCheck { out } => triplex::cmd_paper_check(out.as_deref(), quiet),
        Command::ExportCatalog { out } => triplex::cmd_export_catalog(&out, quiet),
    };
    if outcome.status != 0 {
        eprintln!("error: {}", outcome.summary);
    }
    ExitCode::from(u8::try_from(outcome.status).unwrap_or(1))
}
