use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyspace::{ExponentVector, LengthVector};

#[derive(Debug, Parser)]
#[command(name = "polyspace", version, about = "Exact intersection pairings and volumes of polygon spaces")]
pub struct Cli {
    /// Worker threads (default: all hardware threads). Results never depend on it.
    #[arg(long, global = true, env = "POLYSPACE_THREADS")]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Explicit,
    Recursion,
    Kt,
    Yoshida,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One intersection pairing.
    Pairing(PairingArgs),
    /// Every pairing of total degree m - 3.
    Table(LengthsArg),
    /// The triangular subsets of {3..m}.
    Triangular(LengthsArg),
    /// Exact volume, optionally with the sine series alongside.
    Volume(VolumeArgs),
    /// Pairing on the equilateral space of odd size m.
    Equilateral(EquilateralArgs),
    /// Pairing of sigma_1^k c_m^(m-3-k) on the equilateral space of odd size m.
    Sigma1(Sigma1Args),
    /// Genericity, chamber radius and emptiness of a length vector.
    Generic(LengthsArg),
    /// Cross-check all engines and invariants on random or recorded cases.
    Verify(VerifyArgs),
    /// Re-run the command stored in a JSON record and compare.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct LengthsArg {
    /// Comma-separated rationals, e.g. 4,3,4,3,4 or 1/2,1,1.
    #[arg(long, allow_hyphen_values = true)]
    pub lengths: LengthVector,
}

#[derive(Debug, Args)]
pub struct PairingArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lengths: LengthVector,

    /// Comma-separated nonnegative integers summing to m - 3.
    #[arg(long)]
    pub exponents: ExponentVector,

    #[arg(long, value_enum, default_value_t = EngineChoice::Explicit)]
    pub engine: EngineChoice,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lengths: LengthVector,

    /// Also sum this many terms of the sine series.
    #[arg(long)]
    pub series_terms: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EquilateralArgs {
    #[arg(long)]
    pub m: usize,

    #[arg(long)]
    pub degrees: ExponentVector,
}

#[derive(Debug, Args)]
pub struct Sigma1Args {
    #[arg(long)]
    pub m: usize,

    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 8)]
    pub max_m: usize,

    #[arg(long, default_value_t = 3)]
    pub min_m: usize,

    #[arg(long, default_value_t = 100)]
    pub cases: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Replay the built-in corpus of known values instead of random cases.
    #[arg(long)]
    pub corpus: bool,

    /// Replay a corpus file in the same TSV layout as the built-in one.
    #[arg(long)]
    pub corpus_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// A JSON record written with --format json.
    #[arg(long)]
    pub record: PathBuf,
}
