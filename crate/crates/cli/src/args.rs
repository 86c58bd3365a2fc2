use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "wbell", version, about = "Bell tests with single-photon W-states under realistic detectors")]
pub struct Cli {
    /// Worker threads for grid scans and multi-start searches.
    #[arg(long, global = true, env = "WBELL_JOBS")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a Bell functional, optimizing any free parameters first.
    Bell(BellArgs),
    /// Critical value of one parameter by bisection.
    Threshold(ThresholdArgs),
    /// Boundary of the violation region as CSV.
    Region(RegionArgs),
    /// Nonlocal content of a scenario or of a probability table.
    Content(ContentArgs),
    /// Negativity of the scenario state across a cut.
    Negativity(NegativityArgs),
}

/// Ways to describe a scenario; later sources override earlier ones in the
/// order preset, config file, `--set`, `--n`.
#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[arg(long)]
    pub preset: Option<String>,

    /// Number of parties.
    #[arg(long)]
    pub n: Option<usize>,

    /// Flat `key = value` scenario file.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Single `key=value` override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,

    /// Print the resolved scenario in config syntax and exit.
    #[arg(long)]
    pub dump_spec: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Inequality {
    Cabello,
    Wwwzb,
    Mermin3,
    Chsh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    W,
    AtomPhoton,
}

#[derive(Debug, Args)]
pub struct BellArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    #[arg(long, value_enum)]
    pub inequality: Option<Inequality>,

    #[arg(long, value_enum)]
    pub state: Option<StateArg>,

    /// Unit efficiencies everywhere.
    #[arg(long)]
    pub ideal: bool,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    /// Parameter to bisect; defaults to the preset target, else `eta_z`.
    #[arg(long)]
    pub target: Option<String>,

    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,

    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    #[arg(long)]
    pub x: Option<String>,

    #[arg(long)]
    pub y: Option<String>,

    #[arg(long, default_value_t = 20)]
    pub grid: usize,

    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ContentArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    /// Probability table in the text format instead of a scenario.
    #[arg(long, conflicts_with_all = ["preset", "config", "set", "n"])]
    pub input: Option<PathBuf>,

    /// Content above this counts as nonlocal.
    #[arg(long, default_value_t = wbell_core::polytope::DEFAULT_LOCALITY_TOL)]
    pub locality_tol: f64,

    /// LP primal feasibility tolerance.
    #[arg(long)]
    pub feasibility_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NegativityArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    #[arg(long, value_enum)]
    pub state: Option<StateArg>,

    /// Last party on the first side of the cut `{0..=cut} | rest`.
    #[arg(long, default_value_t = 0)]
    pub cut: usize,
}
