mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tomoctx::scenarios::{KCBS_PHI, KCBS_THETA};
use tomoctx::GridSpec;

#[derive(Parser, Debug)]
#[command(
    name = "tomoctx",
    version,
    about = "Spin tomograms and noncontextuality inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample tomograms of a scenario or an operator file as CSV.
    Tomogram(TomogramArgs),
    /// Evaluate an inequality and print the report as JSON.
    Inequality(InequalityArgs),
    /// Tabulate an objective over a parameter grid as CSV.
    Scan(ScanArgs),
    /// Run the closed-form self-check suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GridArgs {
    /// Points in α.
    #[arg(long, default_value_t = 64)]
    pub grid_alpha: usize,
    /// Points in β.
    #[arg(long, default_value_t = 32)]
    pub grid_beta: usize,
    /// Points in γ.
    #[arg(long, default_value_t = 64)]
    pub grid_gamma: usize,
}

impl GridArgs {
    pub fn spec(&self) -> anyhow::Result<GridSpec> {
        Ok(GridSpec::new(self.grid_alpha, self.grid_beta, self.grid_gamma)?)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Kcbs,
    PeresMermin,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["scenario", "operator"]))]
pub struct TomogramArgs {
    #[arg(long, value_enum)]
    pub scenario: Option<Scenario>,
    /// JSON operator file {"dim": n, "entries": [[[re, im], ...], ...]}.
    #[arg(long)]
    pub operator: Option<PathBuf>,
    #[arg(long, default_value_t = KCBS_THETA, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = KCBS_PHI, allow_negative_numbers = true)]
    pub phi: f64,
    /// Spin of the operator file ("1", "1/2", "3/2", ...); inferred from its dimension if omitted.
    #[arg(long)]
    pub j: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Emit one (w1, w0, wm1) simplex point per rotation instead of per-m rows.
    #[arg(long)]
    pub simplex: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Kcbs,
    Pentagram,
    Ncycle,
    PeresMermin,
    Entropic,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Direct,
    Tomographic,
    Fidelity,
}

#[derive(Args, Debug)]
pub struct InequalityArgs {
    #[arg(value_enum)]
    pub family: Family,
    /// State angle (kcbs, entropic) or polar angle of the state direction (pentagram, ncycle).
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Opening angle (kcbs, entropic) or azimuth of the state direction (pentagram, ncycle).
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Cycle length for the ncycle family.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Print only the classical and quantum bounds (ncycle).
    #[arg(long)]
    pub bounds_only: bool,
    /// "random" or a JSON state/density file.
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long, env = "TOMOCTX_SEED", default_value_t = 0)]
    pub seed: u64,
    /// How Born probabilities are computed (entropic).
    #[arg(long, value_enum, default_value_t = Route::Direct)]
    pub route: Route,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanFamily {
    UnitaryTomogram,
    Entropic,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(value_enum)]
    pub family: ScanFamily,
    /// Axis as lo:hi:n, once per parameter (θ1 then θ2, or θ then φ).
    #[arg(long = "axis", allow_hyphen_values = true)]
    pub axes: Vec<String>,
    /// Points per axis when no --axis is given.
    #[arg(long, default_value_t = 100)]
    pub resolution: usize,
    /// Also refine the maximum and print it as JSON (entropic).
    #[arg(long)]
    pub maximize: bool,
    #[arg(long, env = "TOMOCTX_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Quadrature points in α, β, γ.
    #[arg(long, num_args = 3, value_names = ["A", "B", "G"])]
    pub grid: Option<Vec<usize>>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Tomogram(a) => commands::tomogram::run(&a),
        Command::Inequality(a) => commands::inequality::run(&a),
        Command::Scan(a) => commands::scan::run(&a),
        Command::Verify(a) => commands::verify::run(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
