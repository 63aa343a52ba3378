//! `topuc`: Toeplitz inversion and Verblunsky-coefficient reports from the
//! command line. Tabular output is CSV, structured output is JSON.

mod commands;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "topuc", version, about = "Toeplitz inverses and orthogonal polynomials on the unit circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wiener-Hopf factors as coefficient JSON.
    Factorize(Common),
    /// Winding number of the symbol on the grid.
    Winding(Common),
    /// Inverse of the finite section of order `--n` as `j,k,re,im` rows.
    Invert(Common),
    /// Finite-section error against the calibrated decay bound.
    Theorem1(Common),
    /// Verblunsky coefficients by moments, the fixed-point route, or both.
    Verblunsky(Common),
    /// Weighted partial sums of `|Phi_n(0)|`.
    Baxter(Common),
    /// Difference between `Phi_n(0)` and its leading term.
    Born(Common),
    /// Square-sum bound on the Verblunsky coefficients.
    Gi(Common),
    /// Closed-form coefficients for the weight `1 - a cos(theta)`.
    Example1(Example1Args),
    /// Closed-form coefficients for `alpha_n = (-1)^n q^{(n+1)/2}`.
    Example2(Example2Args),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormalizeArg {
    /// Use the weight as given; `(log w)_0` must already vanish.
    None,
    LogMeanZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Moments,
    Bo,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON symbol specification.
    #[arg(long)]
    pub symbol: PathBuf,
    /// Half-bandwidth of computed series.
    #[arg(long, default_value_t = 256)]
    pub band: usize,
    /// Number of grid points (power of two).
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
    /// Initial truncation of the fixed-point operator.
    #[arg(long = "bo-size", default_value_t = 64)]
    pub bo_size: usize,
    #[arg(long)]
    pub nmin: Option<usize>,
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Section order for `invert`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Probe positions, e.g. `0,0;n,n;n-1,n`.
    #[arg(long)]
    pub probes: Option<String>,
    /// Beurling weight: `exp:<gamma>`, `poly:<alpha>` or `wiener`.
    #[arg(long)]
    pub weight: Option<String>,
    /// Defaults to `log-mean-zero` for coefficient reports and `none` for
    /// Toeplitz commands, which never rescale the symbol.
    #[arg(long, value_enum)]
    pub normalize: Option<NormalizeArg>,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    /// Output file; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ExampleOutput {
    #[arg(long, default_value_t = 20)]
    pub nmax: usize,
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
    #[arg(long, default_value_t = 256)]
    pub band: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Example1Args {
    #[arg(long)]
    pub a: f64,
    #[command(flatten)]
    pub output: ExampleOutput,
}

#[derive(Args, Debug, Clone)]
pub struct Example2Args {
    #[arg(long)]
    pub q: f64,
    /// Factors kept in the product for `D_i`.
    #[arg(long, default_value_t = 60)]
    pub terms: usize,
    #[command(flatten)]
    pub output: ExampleOutput,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Factorize(a) => commands::factorize(a),
        Command::Winding(a) => commands::winding(a),
        Command::Invert(a) => commands::invert(a),
        Command::Theorem1(a) => commands::theorem1(a),
        Command::Verblunsky(a) => commands::verblunsky(a),
        Command::Baxter(a) => commands::baxter(a),
        Command::Born(a) => commands::born(a),
        Command::Gi(a) => commands::gi(a),
        Command::Example1(a) => commands::example1(a),
        Command::Example2(a) => commands::example2(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use toeplitz_opuc::Error;
        match self {
            CliError::Core(Error::NonzeroWinding(_)) => 2,
            CliError::Core(Error::NearVanishingSymbol { .. }) => 3,
            CliError::Core(Error::SingularSection { .. }) => 4,
            CliError::Core(Error::NoContraction { .. }) => 6,
            _ => 1,
        }
    }
}
