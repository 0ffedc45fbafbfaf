use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lissphere::{EulerConvention, Flavor, Variant};

/// Interpolation, quadrature and rotation estimation on spherical Lissajous nodes.
///
/// Set LISSPHERE_THREADS to cap the number of worker threads.
#[derive(Debug, Parser)]
#[command(name = "lissphere", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a Lissajous curve, optionally with self-intersection multiplicities.
    Curve(CurveArgs),
    /// List the nodes of the reduced index set I_S (or the full set I with --all).
    Nodes(NodesArgs),
    /// List the spectral index set with class tags.
    Spectrum(SpectrumArgs),
    /// Transform node values into interpolation coefficients (JSON).
    Coeffs(CoeffsArgs),
    /// Evaluate an interpolant from a coefficient file.
    Eval(EvalArgs),
    /// Integrate node values or a built-in function over the sphere.
    Quad(QuadArgs),
    /// Estimate Lebesgue constants on a grid. Grid maxima are lower bounds.
    Lebesgue(LebesgueArgs),
    /// Sup-norm interpolation errors over a grid. Grid maxima are lower bounds.
    Converge(ConvergeArgs),
    /// Estimate the rotation between reference and rotated node samples.
    Rotate(RotateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Complex,
    Real,
    Averaged,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Complex => Flavor::Complex,
            FlavorArg::Real => Flavor::Real,
            FlavorArg::Averaged => Flavor::Averaged,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    #[value(name = "excludeU")]
    ExcludeU,
    #[value(name = "excludeD")]
    ExcludeD,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::ExcludeU => Variant::ExcludeU,
            VariantArg::ExcludeD => Variant::ExcludeD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Zyz,
    Zyx,
}

impl From<ConventionArg> for EulerConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Zyz => EulerConvention::Zyz,
            ConventionArg::Zyx => EulerConvention::Zyx,
        }
    }
}

/// Built-in test functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    /// The constant 1.
    Const1,
    /// Two Gaussians centered at (0,0,1) and (1/√2,−1/√2,0).
    Gaussians,
    /// The product x·y·z.
    Xyz,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Freq {
    #[arg(long)]
    pub m1: usize,
    #[arg(long)]
    pub m2: usize,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub m: Freq,
    /// Rotation parameter α in units of π.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Number of equidistant samples on [0, 2π). Ignored with --classify.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Emit both sampling grids with the multiplicity of each time. Odd m2 is allowed.
    #[arg(long)]
    pub classify: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct NodesArgs {
    #[command(flatten)]
    pub m: Freq,
    /// List every index of I instead of I_S.
    #[arg(long)]
    pub all: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub m: Freq,
    #[arg(long, value_enum, default_value_t = VariantArg::ExcludeU)]
    pub variant: VariantArg,
    #[command(flatten)]
    pub output: Output,
}

/// Node values from a file or a built-in function.
#[derive(Debug, Args)]
pub struct Source {
    #[arg(long)]
    pub m1: Option<usize>,
    #[arg(long)]
    pub m2: Option<usize>,
    /// Node value file: CSV `i1,i2,value` or JSON (by extension).
    #[arg(long, conflicts_with = "function")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub function: Option<Function>,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value_t = FlavorArg::Complex)]
    pub flavor: FlavorArg,
    #[arg(long, value_enum, default_value_t = VariantArg::ExcludeU)]
    pub variant: VariantArg,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Coefficient file written by `coeffs`.
    #[arg(long)]
    pub coeffs: PathBuf,
    /// CSV file with columns `theta,phi` (radians).
    #[arg(long, conflicts_with_all = ["grid", "nodes"])]
    pub points: Option<PathBuf>,
    /// Uniform grid `N_THETA N_PHI` including the poles.
    #[arg(long, num_args = 2, value_names = ["N_THETA", "N_PHI"], conflicts_with = "nodes")]
    pub grid: Option<Vec<usize>>,
    /// Evaluate at every node of I.
    #[arg(long)]
    pub nodes: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    #[command(flatten)]
    pub source: Source,
    /// Emit the weight table on I_S.
    #[arg(long)]
    pub weights: bool,
    /// Report the surface integral instead of the mean (multiply by 4π).
    #[arg(long)]
    pub unnormalized: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Points in θ. Defaults to 4·max(m1, m2) + 1.
    #[arg(long)]
    pub n_theta: Option<usize>,
    /// Points in φ. Defaults to 4·max(m1, m2).
    #[arg(long)]
    pub n_phi: Option<usize>,
    /// Use θ midpoints instead of a grid through the poles.
    #[arg(long)]
    pub midpoints: bool,
}

#[derive(Debug, Args)]
pub struct LebesgueArgs {
    /// Frequency pairs `M1:M2`, comma separated.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_pair)]
    pub pairs: Vec<(usize, usize)>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = VariantArg::ExcludeU)]
    pub variant: VariantArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    /// The reference configuration: two Gaussians, 1001×2000 grid, m = (3,4)…(39,40).
    #[arg(long, conflicts_with = "pairs")]
    pub paper_table: bool,
    /// Frequency pairs `M1:M2`, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pub pairs: Vec<(usize, usize)>,
    #[arg(long, value_enum, default_value_t = Function::Gaussians)]
    pub function: Function,
    #[arg(long, default_value_t = 1001)]
    pub n_theta: usize,
    #[arg(long, default_value_t = 2000)]
    pub n_phi: usize,
    #[arg(long)]
    pub midpoints: bool,
    #[arg(long, value_enum, default_value_t = FlavorArg::Complex)]
    pub flavor: FlavorArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct RotateArgs {
    #[command(flatten)]
    pub m: Freq,
    /// Reference node values.
    #[arg(long, requires = "rotated", conflicts_with = "function")]
    pub reference: Option<PathBuf>,
    /// Rotated node values.
    #[arg(long, requires = "reference")]
    pub rotated: Option<PathBuf>,
    /// Synthesize both data sets from a built-in function and --beta-true.
    #[arg(long, value_enum, requires = "beta_true")]
    pub function: Option<Function>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub beta_true: Option<Vec<f64>>,
    /// Initial angles.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0,0,0")]
    pub beta0: Vec<f64>,
    /// Read angles in degrees.
    #[arg(long)]
    pub degrees: bool,
    /// Replace --beta0 by the best point of a lattice with this many values per angle.
    #[arg(long)]
    pub search_steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Zyz)]
    pub convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = FlavorArg::Complex)]
    pub flavor: FlavorArg,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    /// Exit with status 0 even if the solver did not converge.
    #[arg(long)]
    pub allow_nonconverged: bool,
    /// JSON: the full report; CSV: the iteration trace.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected M1:M2, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}
