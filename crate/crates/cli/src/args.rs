use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "sperner-lab", version, about = "Multicolored Sperner colorings on partition complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build K_{n,r} and write its complex document.
    Build(Shared),
    /// Find minimal solution faces for a family of colorings.
    Solve {
        #[command(flatten)]
        shared: Shared,
        /// Enumerate every minimal solution face instead of one per facet.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Run the J/H/rho property suite and the boundary winding check.
    VerifyMaps {
        #[command(flatten)]
        shared: Shared,
        /// Write the winding trace (boundary parameter, image angle) here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Sweep a parameter grid for instances without a connected solution.
    Sweep {
        #[command(flatten)]
        shared: Shared,
        /// Numbers of colorings |I|, e.g. "1..3" or "1,2".
        #[arg(long, default_value = "1..3")]
        count: String,
        /// Coloring families: random, longest, ranked, mixed.
        #[arg(long, default_value = "random")]
        family: String,
    },
    /// Rerun the configuration recorded in an output file.
    Replay {
        /// A file written by build, solve, verify-maps or sweep.
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the recorded trace path.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Compare the new output with the input, ignoring the timestamp line.
        #[arg(long)]
        check: bool,
    },
}

/// Flags common to every run.
#[derive(Args, Debug, Clone, Default)]
pub struct Shared {
    /// Number of intervals; a list or inclusive range for sweep.
    #[arg(long = "n")]
    pub n: Option<String>,
    /// Number of objects; a list or inclusive range for sweep.
    #[arg(long = "r")]
    pub r: Option<String>,
    /// Size vector, e.g. "1,1,1".
    #[arg(long = "m")]
    pub m: Option<String>,
    /// Coloring scheme, once per coloring: longest, ranked:2,4, example3:1,
    /// example4:c1, random.
    #[arg(long = "scheme")]
    pub scheme: Vec<String>,
    /// Tiebreak permutation, e.g. "4,3,2,1"; "all" sweeps every permutation.
    #[arg(long)]
    pub tiebreak: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Property samples (verify-maps) or seeds per grid point (sweep).
    #[arg(long)]
    pub samples: Option<u64>,
}
