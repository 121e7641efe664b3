use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "prepnmf", version, about = "Inverse-positive preprocessing for nonnegative matrix factorization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute P_eps(M), B* and the spectral radius of B*.
    Preprocess(PreprocessArgs),
    /// Run NMF, Pre-NMF and sparsity-matched sNMF and write a report.
    Factorize(FactorizeArgs),
    /// Rank-3 nested-polygon analysis: alpha-bar, f_k samples, solutions.
    Npp(NppArgs),
    /// Sparsity-based uniqueness certificates.
    Uniqueness(UniquenessArgs),
    /// List the built-in matrices, or write one to a file.
    Fixtures(FixturesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Matrixmarket,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Nmf,
    PreNmf,
    Snmf,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Matrix file (CSV, one row per line, or MatrixMarket).
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    pub input: Option<PathBuf>,
    /// Overrides the format implied by the file extension.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Use a built-in matrix instead of a file (see `prepnmf fixtures`).
    #[arg(long)]
    pub fixture: Option<String>,
}

#[derive(Args, Debug)]
pub struct PreprocessArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Relaxation levels in [0, 1); one output per value.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub epsilon: Vec<f64>,
    /// Damping of B*, a value in [0, 1] or `auto` for the rank-3 alpha-bar.
    #[arg(long, default_value = "1")]
    pub alpha: String,
    /// Preprocess even when some columns are multiples of others.
    #[arg(long)]
    pub allow_duplicates: bool,
    /// Relative threshold under which an entry counts as zero.
    #[arg(long, default_value_t = prepnmf::matcore::DEFAULT_ZERO_TOL)]
    pub zero_tol: f64,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct FactorizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Inner dimension of the factorization.
    #[arg(long)]
    pub rank: usize,
    /// Methods to run; sNMF also runs Pre-NMF as its sparsity reference.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "nmf,pre-nmf,snmf")]
    pub method: Vec<MethodArg>,
    /// Relaxation levels for Pre-NMF (and the sNMF sparsity targets).
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub epsilon: Vec<f64>,
    /// Inclusive range `a..b` or a comma list.
    #[arg(long, default_value = "0..9")]
    pub seeds: String,
    /// Outer A-HALS iterations per seed.
    #[arg(long, default_value_t = 1000)]
    pub max_outer: usize,
    /// Fixed-support iterations behind the "improved" errors.
    #[arg(long, default_value_t = 100)]
    pub improve_iters: usize,
    /// Run Pre-NMF even when some columns are multiples of others.
    #[arg(long)]
    pub allow_duplicates: bool,
    /// Relative threshold under which an entry counts as zero.
    #[arg(long, default_value_t = prepnmf::matcore::DEFAULT_ZERO_TOL)]
    pub zero_tol: f64,
    /// Also dump every column of U as a `HxW` grayscale PGM image.
    #[arg(long, value_name = "HxW")]
    pub image_shape: Option<String>,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct NppArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Damping of B*, a value in [0, 1] or `auto` for the largest feasible one.
    #[arg(long, default_value = "auto")]
    pub alpha: String,
    /// Number of tangent steps in the sampled walk; 3 gives the four-point
    /// walk whose touching of t + perimeter marks the triangles.
    #[arg(long, default_value_t = 3)]
    pub fk: usize,
    /// Samples of f_k over one period.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct UniquenessArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Factorization rank; defaults to the numerical rank.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Relative threshold under which an entry counts as zero.
    #[arg(long, default_value_t = 1e-12)]
    pub zero_tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FixturesArgs {
    /// Fixture to write; lists all names when omitted.
    pub name: Option<String>,
    /// Write the fixture to this file instead of stdout.
    #[arg(long, requires = "name")]
    pub out: Option<PathBuf>,
    /// Output format; defaults to the extension of `--out`, else CSV.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}
