//! `elastica`: construct elastica curves, evaluate energies, run the elastic flow,
//! and run verification suites.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical failure,
//! 3 verification failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "elastica", version, about = "Elastica zoo, adapted elastic energy and elastic flow")]
pub struct Cli {
    /// Plain-text `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Where to write the run manifest.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a curve from the zoo into CSV with a JSON sidecar.
    Construct(ConstructArgs),
    /// Print the energy report of a curve file as JSON.
    Energy(EnergyArgs),
    /// Run the elastic flow from a curve file.
    Flow(FlowArgs),
    /// Run a verification suite and print its table.
    Verify(VerifyArgs),
    /// Randomized check of the sharp lower bounds.
    Sweep(SweepArgs),
    /// Glue curves end to start with horizontal segments in between.
    CutPaste(CutPasteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Line,
    Borderline,
    BorderlineAngle,
    Serpent,
    Teardrop,
    TwoTeardrop,
    Pendant,
    FigureEight,
    Circle,
    ThreeArc,
    /// Graph of a Gaussian bump over the horizontal line.
    Bump,
    /// Serpent with a quintic graph spliced in at the inflection.
    Eta,
    /// Pendant with its contact opened by a quartic.
    PendantPerturbed,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    pub family: FamilyName,
    /// Truncation radius of tail-bearing curves.
    #[arg(long = "R")]
    pub radius: Option<f64>,
    /// Number of samples.
    #[arg(long)]
    pub n: Option<usize>,
    /// Length of a line.
    #[arg(long)]
    pub length: Option<f64>,
    /// Initial angle of a borderline-angle curve.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Circle radius.
    #[arg(long)]
    pub circle_radius: Option<f64>,
    /// Height of a bump graph.
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Width of a bump graph.
    #[arg(long)]
    pub width: Option<f64>,
    /// Perturbation window width.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Perturbation strength in [0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Grid spacing of perturbed curves.
    #[arg(long)]
    pub spacing: Option<f64>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write an SVG polyline.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    pub input: PathBuf,
    /// Also write the report to this file.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StopName {
    Graphicality,
    Embeddedness,
    Plateau,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Truncation radius when the input carries none.
    #[arg(long = "R")]
    pub radius: Option<f64>,
    /// Grid size after arclength resampling.
    #[arg(long)]
    pub n: Option<usize>,
    /// Time step; defaults to min(h^1.5, 1e-4).
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Stop criteria, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub stop: Vec<StopName>,
    #[arg(long)]
    pub plateau_tol: Option<f64>,
    #[arg(long)]
    pub plateau_window: Option<f64>,
    #[arg(long)]
    pub redistribute_every: Option<usize>,
    /// Spatial tolerance of self-intersection detection.
    #[arg(long)]
    pub event_tol: Option<f64>,
    /// Record self-intersection events without stopping.
    #[arg(long)]
    pub monitor_embeddedness: bool,
    /// Per-step log CSV.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Final curve CSV.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Constants,
    Identities,
    Bounds,
    FlowSmoke,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: SuiteName,
    /// Also write the checks as JSON.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Number of random curves.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Full per-sample report as JSON.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Figure-eight cut at its top point, between two lines.
    FigureEight,
    /// Borderline elastica followed by a circle and a line.
    BorderlineCircle,
}

#[derive(Debug, Args)]
pub struct CutPasteArgs {
    /// Curve files in gluing order.
    #[arg(long = "input")]
    pub inputs: Vec<PathBuf>,
    /// Lengths of the horizontal segments between consecutive inputs.
    #[arg(long, value_delimiter = ',')]
    pub gaps: Vec<f64>,
    /// Built-in assembly instead of input files.
    #[arg(long)]
    pub preset: Option<Preset>,
    /// Gap of the figure-eight preset.
    #[arg(long)]
    pub gap: Option<f64>,
    /// Tail length of the presets.
    #[arg(long = "R")]
    pub radius: Option<f64>,
    /// Samples per preset piece.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Numerical(_) => 2,
            Self::Verification(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
            Self::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<elastica::error::Error> for CliError {
    fn from(e: elastica::error::Error) -> Self {
        use elastica::error::Error as E;
        match e {
            E::Domain(_)
            | E::Config(_)
            | E::Parse { .. }
            | E::Io(_)
            | E::Json(_)
            | E::Window(_)
            | E::Monotonicity(_)
            | E::NotClosed { .. }
            | E::Join { .. }
            | E::Assembly(_) => Self::Usage(e.to_string()),
            _ => Self::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("elastica: {e}");
            ExitCode::from(e.code())
        }
    }
}
