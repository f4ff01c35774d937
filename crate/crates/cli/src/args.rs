use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relupoly::repr::LinearMap;
use relupoly::sampler::InputLaw;

#[derive(Parser, Debug)]
#[command(name = "relupoly", version, about = "Compile polynomials into two-layer ReLU networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a network for a polynomial and write it as JSON.
    Compile(CompileArgs),
    /// Run the verification suites and emit a JSON report.
    Verify(VerifyArgs),
    /// Print error bounds across an n grid.
    Bound(BoundArgs),
    /// Measure L2 errors of freshly sampled networks across n and seeds.
    Error(ErrorArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dist {
    Gaussian,
    Cube,
    Sphere,
    Ball,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepChoice {
    Sharpened,
    Direct,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerChoice {
    Optimal,
    Naive,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// The input distribution D.
#[derive(Args, Debug, Clone)]
pub struct LawArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub dist: Dist,
    /// Variance for gaussian, half-width for cube, radius for sphere and ball.
    #[arg(long, default_value_t = 1.0)]
    pub dist_param: f64,
}

impl LawArgs {
    pub fn law(&self, dim: usize) -> relupoly::Result<InputLaw> {
        match self.dist {
            Dist::Gaussian => InputLaw::gaussian(dim, self.dist_param),
            Dist::Cube => InputLaw::cube(dim, self.dist_param),
            Dist::Sphere => InputLaw::sphere(dim, self.dist_param),
            Dist::Ball => InputLaw::ball(dim, self.dist_param),
        }
    }
}

/// How the integral representation is built.
#[derive(Args, Debug, Clone)]
pub struct RepArgs {
    #[arg(long, value_enum, default_value = "sharpened")]
    pub rep: RepChoice,
    /// Variance of the Gaussian direction law.
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// Affine change of variables, `shift:c1,c2,...` or `diag:a1,a2,...`.
    #[arg(long)]
    pub transform: Option<String>,
}

impl RepArgs {
    pub fn map(&self, dim: usize) -> relupoly::Result<Option<LinearMap<f64>>> {
        let Some(spec) = &self.transform else { return Ok(None) };
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| usage(format!("transform {spec:?} must look like shift:... or diag:...")))?;
        let values = parse_list::<f64>(rest)?;
        if values.len() != dim {
            return Err(relupoly::Error::DimensionMismatch { expected: dim, found: values.len() });
        }
        match kind {
            "shift" => Ok(Some(LinearMap::shift(values))),
            "diag" => Ok(Some(LinearMap::diagonal(&values))),
            other => Err(usage(format!("unknown transform kind {other:?}"))),
        }
    }
}

/// Sampler selection and proposal overrides.
#[derive(Args, Debug, Clone)]
pub struct SamplerArgs {
    #[arg(long, value_enum, default_value = "optimal")]
    pub sampler: SamplerChoice,
    /// Candidates drawn per output neuron by the optimal sampler.
    #[arg(long, default_value_t = 10)]
    pub candidates: usize,
    /// Size of the input pool used for neuron norms.
    #[arg(long, default_value_t = 1000)]
    pub inner: usize,
    /// Probability of the s = 0 atom. Estimated by a pilot run when absent.
    #[arg(long)]
    pub atom_weight: Option<f64>,
    /// Multiplier on the half-normal scale of s.
    #[arg(long)]
    pub s_scale: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CompileArgs {
    #[arg(long)]
    pub poly: PathBuf,
    #[command(flatten)]
    pub law: LawArgs,
    #[command(flatten)]
    pub rep: RepArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Evaluation draws for the error estimate in the summary.
    #[arg(long, default_value_t = 4096)]
    pub eval: usize,
    /// Network JSON destination. Standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suites to run. All of them when absent.
    #[arg(long)]
    pub suite: Vec<String>,
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
    /// Multiplier on Monte Carlo sample counts.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Polynomial file. Use `--ridge` instead for the scaled ridge family.
    #[arg(long, required_unless_present = "ridge")]
    pub poly: Option<PathBuf>,
    /// Coefficients c0,c1,... of g(t) = Σ c_k t^k. Emits one row per
    /// dimension for f(x) = g(x₁/√d).
    #[arg(long, conflicts_with = "poly")]
    pub ridge: Option<String>,
    #[arg(long, default_value = "2,8,32,128")]
    pub dims: String,
    #[command(flatten)]
    pub law: LawArgs,
    #[command(flatten)]
    pub rep: RepArgs,
    #[arg(long, default_value = "64,256,1024")]
    pub n_grid: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ErrorArgs {
    #[arg(long)]
    pub poly: PathBuf,
    #[command(flatten)]
    pub law: LawArgs,
    #[command(flatten)]
    pub rep: RepArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long, default_value = "64,256,1024")]
    pub n_grid: String,
    /// Seeds per n, starting at `--seed`.
    #[arg(long, default_value_t = 10)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4096)]
    pub eval: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the per-n bound summary CSV here.
    #[arg(long)]
    pub bounds: Option<PathBuf>,
}

pub fn usage(msg: impl Into<String>) -> relupoly::Error {
    relupoly::Error::InvalidParameter(msg.into())
}

pub fn parse_list<T: std::str::FromStr>(text: &str) -> relupoly::Result<Vec<T>> {
    text.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| usage(format!("cannot parse {t:?} in list {text:?}"))))
        .collect()
}
