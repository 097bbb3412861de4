//! Command-line surface for the hull-singularity toolkit: envelope grids,
//! front emission, identity verification, swallowtail sections, and body
//! classification, with reproducibly stamped CSV/JSON/SVG outputs.
//!
//! Exit codes are a stable contract: 0 success, 1 verification failure,
//! 2 usage or configuration error.  Every output file embeds the SHA-256
//! hash of the resolved run configuration and the seed, and identical
//! configurations produce byte-identical files.

mod cfg;
mod classify;
mod envelope;
mod front;
mod out;
mod swallowtail;
mod verify;

use cfg::FileCfg;
use clap::{Parser, Subcommand};
use out::usage;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "hullfront",
    version,
    about = "Corner envelopes, singular fronts, and convex-hull singularity tools"
)]
struct Cli {
    /// JSON file of flag values for the invoked subcommand (flags win).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every randomized check, recorded in all outputs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a normal-form envelope over a grid.
    Envelope(envelope::EnvelopeArgs),
    /// Emit the singular front of a normal family.
    Front(front::FrontArgs),
    /// Run the identity suites and write a JSON report.
    Verify(verify::VerifyArgs),
    /// Classify the support singularities of a convex body.
    Classify(classify::ClassifyArgs),
    /// Swallowtail-body membership, projection, and sections.
    Swallowtail {
        #[command(subcommand)]
        mode: swallowtail::SwallowtailMode,
    },
}

fn run(cli: &Cli) -> out::Result<()> {
    if let Ok(threads) = std::env::var("THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| usage(format!("THREADS=`{threads}` is not a thread count")))?;
        // A late global-pool build (e.g. under tests) is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }

    let file = match &cli.config {
        Some(path) => FileCfg::load(path)?,
        None => FileCfg::empty(),
    };
    let seed = match cli.seed {
        Some(s) => s,
        None => file.u64("seed")?.unwrap_or(0),
    };
    let out_dir = match &cli.out {
        Some(d) => d.clone(),
        None => file.str("out")?.map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".")),
    };

    match &cli.command {
        Command::Envelope(args) => envelope::run(args, &file, seed, &out_dir),
        Command::Front(args) => front::run(args, &file, seed, &out_dir),
        Command::Verify(args) => verify::run(args, &file, seed, &out_dir),
        Command::Classify(args) => classify::run(args, &file, seed, &out_dir),
        Command::Swallowtail { mode } => swallowtail::run(mode, &file, seed, &out_dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
