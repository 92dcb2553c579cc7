use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "sphosc",
    version,
    about = "Spectra, heat traces and partition functions of the spherical harmonic oscillator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Eigenvalues, multiplicities and degeneracy groups.
    Spectrum(SpectrumArgs),
    /// Certified partition function values.
    Partition(PartitionArgs),
    /// Compare closed-form eigenvalues against the finite-difference oracle.
    Verify(VerifyArgs),
    /// Exact small-t coefficients of the Mulholland series.
    Mulholland(MulhollandArgs),
    /// Conjectural chiral-model partition product.
    Chiral(ChiralArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ModelArgs {
    /// Sphere dimension.
    #[arg(short = 'd', long = "dim", default_value_t = 2)]
    pub d: u32,
    /// Oscillator frequency.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[command(group(ArgGroup::new("extent").required(true).args(["lambda_max", "count"])))]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// List every mode with eigenvalue at most this value.
    #[arg(long)]
    pub lambda_max: Option<f64>,
    /// List this many lowest modes.
    #[arg(long)]
    pub count: Option<usize>,
    /// Absolute tolerance for grouping degenerate eigenvalues.
    #[arg(long, default_value_t = sphosc_core::spectrum::DEFAULT_GROUPING_TOL)]
    pub group_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PartitionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Inverse temperatures, comma separated.
    #[arg(short = 't', long = "t", required = true, value_delimiter = ',', num_args = 1..)]
    pub t: Vec<f64>,
    /// Absolute tolerance on each value.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Also evaluate the Poisson dual form (d = 1, omega = 0 only).
    #[arg(long)]
    pub check_poisson: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Angular degrees, comma separated.
    #[arg(short = 'n', long = "degrees", value_delimiter = ',', num_args = 1.., default_value = "0")]
    pub n: Vec<u32>,
    /// Eigenvalues per degree.
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    /// Coarse grid size; the extrapolation also uses twice this.
    #[arg(long, default_value_t = 4000)]
    pub grid: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MulhollandArgs {
    /// Highest coefficient index.
    #[arg(long, default_value_t = 3)]
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ChiralArgs {
    #[arg(short = 't', long = "t")]
    pub t: f64,
    /// Highest level included in the product.
    #[arg(long, default_value_t = 6)]
    pub k_max: u32,
    /// Absolute tolerance on each level sum.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = ExponentModeArg::Verbatim)]
    pub exponent_mode: ExponentModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentModeArg {
    /// Exponent `lambda_{k,m,n} - 2k` as written.
    Verbatim,
    /// Exponent `lambda_{k,m,n}`.
    Shifted,
}

impl From<ExponentModeArg> for sphosc_core::chiral::ExponentMode {
    fn from(m: ExponentModeArg) -> Self {
        match m {
            ExponentModeArg::Verbatim => Self::Verbatim,
            ExponentModeArg::Shifted => Self::Shifted,
        }
    }
}
