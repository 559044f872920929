use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Chow parameters, PTF reconstruction and structure experiments on the Boolean cube.
#[derive(Debug, Parser)]
#[command(name = "chowd", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree-d Chow vector of a truth table, as CSV.
    Spectrum(SpectrumArgs),
    /// Rebuild a bounded hypothesis from a target Chow vector.
    Reconstruct(ReconstructArgs),
    /// Learn a PTF from restricted-focus examples.
    LearnRfa(LearnRfaArgs),
    /// Corrupt a sample, then learn with the trimmed and the plain estimator.
    LearnNasty(LearnNastyArgs),
    /// Seeded experiment over random PTFs, as CSV.
    Experiment(ExperimentArgs),
    /// Run an exhaustive verification suite; exits with 2 on failure.
    Verify(VerifyArgs),
    /// Regenerate the bundled fixture files.
    GenFixtures(GenFixturesArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    /// Truth table file (`n=<int>` header, then `+`/`-` or `0x` hex body).
    pub table: PathBuf,
    /// Largest subset size kept [default: n].
    #[arg(long)]
    pub d: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleArg {
    Exact,
    Sampled,
}

#[derive(Debug, Args, Serialize)]
pub struct ReconstructArgs {
    /// Target Chow vector CSV.
    #[arg(long)]
    pub alpha: PathBuf,
    /// Accuracy parameter; the hypothesis scale is xi/2.
    #[arg(long)]
    pub xi: f64,
    /// How each iterate's Chow vector is measured.
    #[arg(long, value_enum, default_value = "exact")]
    pub oracle: OracleArg,
    /// Failure probability per sampled-oracle call.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Boolean table to score the result against.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Iteration budget [default: ceil(64/xi^2)].
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Stopping radius on the residual [default: 4·xi].
    #[arg(long)]
    pub stop_radius: Option<f64>,
    /// Seed; required with the sampled oracle.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct LearnRfaArgs {
    /// Target: polynomial JSON (`.json`) or truth table.
    #[arg(long)]
    pub target: PathBuf,
    /// Degree of the Chow coordinates, also the focus-set size.
    #[arg(long)]
    pub d: usize,
    /// l2 accuracy of the Chow estimate.
    #[arg(long)]
    pub eps: f64,
    /// Failure probability of the estimate.
    #[arg(long)]
    pub delta: f64,
    /// Reconstruction accuracy.
    #[arg(long, default_value_t = 0.05)]
    pub xi: f64,
    #[arg(long, value_enum, default_value = "exact")]
    pub oracle: OracleArg,
    /// Use the exact Chow vector when sampling would need at least 2^n draws per subset.
    #[arg(long)]
    pub exact_when_cheaper: bool,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdversaryArg {
    /// Flip labels of the smallest-margin points.
    A,
    /// Bias one Chow coordinate.
    B,
    /// Replace with uniform random examples.
    C,
}

#[derive(Debug, Args, Serialize)]
pub struct LearnNastyArgs {
    /// Target polynomial JSON.
    #[arg(long)]
    pub target: PathBuf,
    /// Degree of the Chow coordinates [default: degree of the target].
    #[arg(long)]
    pub d: Option<usize>,
    /// Fraction of the sample the adversary replaces.
    #[arg(long)]
    pub eps_corrupt: f64,
    #[arg(long, value_enum)]
    pub adversary: AdversaryArg,
    /// Coordinate for adversary b, e.g. `1,3` [default: the strongest].
    #[arg(long, value_delimiter = ',')]
    pub coordinate: Option<Vec<usize>>,
    /// Clean sample size.
    #[arg(long)]
    pub m: usize,
    /// Reconstruction accuracy [default: eps_corrupt/2].
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long, value_enum, default_value = "exact")]
    pub oracle: OracleArg,
    /// Failure probability per sampled-oracle call.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Report the plain estimator as the selected hypothesis.
    #[arg(long)]
    pub no_trim: bool,
    /// Also write the corrupted sample CSV here (sidecar JSON next to it).
    #[arg(long, value_name = "PATH")]
    pub samples_out: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Robustness,
    Rounding,
    Tails,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    RandomFlip,
    MarginFlip,
    RoundMollified,
    Negate,
}

#[derive(Debug, Args, Serialize)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub kind: ExperimentKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    /// How g is built from f (robustness).
    #[arg(long, value_enum, default_value = "margin-flip")]
    pub strategy: StrategyArg,
    /// Flip rate, or mollifier width for round-mollified (robustness).
    #[arg(long, default_value_t = 0.05)]
    pub rate: f64,
    /// eta of the small-|p| diagnostic column (robustness).
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    /// Summary cut: minimum Chow distance over trials with dist at least this (robustness).
    #[arg(long, default_value_t = 0.1)]
    pub far: f64,
    /// Tail levels t, in units of the l2 norm (tails).
    #[arg(long, value_delimiter = ',', default_value = "1.5,2,3,4")]
    pub thresholds: Vec<f64>,
    /// Anti-concentration levels tau (tails).
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1")]
    pub taus: Vec<f64>,
    /// Rejection-sample polynomials to be this regular (tails).
    #[arg(long)]
    pub max_regularity: Option<f64>,
    /// Worker threads [default: all cores]; output does not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ChowUniqueness,
    Diophantine,
    Affine,
    SmallP,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Cube dimension [default: 4 for chow-uniqueness, 12 otherwise].
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Vector length (diophantine).
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Approximation radius (diophantine).
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
    /// Most forms per family (affine).
    #[arg(long, default_value_t = 8)]
    pub max_dim: usize,
    /// Polynomial degree (small-p).
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Fraction of smallest-margin points flipped (small-p).
    #[arg(long, default_value_t = 0.02)]
    pub flip_rate: f64,
    /// Extra delta values besides each trial's own Chow distance (small-p).
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
    pub deltas: Vec<f64>,
    /// eta values (small-p).
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.05,0.1")]
    pub etas: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct GenFixturesArgs {
    /// Destination directory.
    #[arg(long)]
    pub dir: PathBuf,
}
