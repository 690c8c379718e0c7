//! The `entwit` command line: bounds, simulation, oracle verification and
//! intactness scans, each writing JSON or CSV.

mod commands;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use entwit::partition::DEFAULT_ENUM_GATE;
use entwit::sim::{SamplerKind, DEFAULT_OUTCOME_CAP, DEFAULT_SHOTS};
use entwit::witness::{WitnessKind, DEFAULT_Z};
use entwit::{Coloring, Graph, Partition};

/// Exit code for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code when an oracle check fails.
pub const EXIT_VERIFY_FAILED: i32 = 1;
/// Exit code for invalid usage or configuration.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "entwit", version, about = "Entanglement-structure witnesses for graph states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cut-entropy bounds and witness constants for a graph and partition.
    Bounds(BoundsArgs),
    /// Simulate the local measurement settings and evaluate a witness.
    Simulate(SimulateArgs),
    /// Run the dense oracle checks on a small graph.
    Verify(VerifyArgs),
    /// Scan the m-separability witnesses for an intactness bound.
    Intactness(IntactnessArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    FullySeparable,
    Genuine,
    MSeparable,
    Gme,
}

impl From<Kind> for WitnessKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::FullySeparable => WitnessKind::FullySeparable,
            Kind::Genuine => WitnessKind::Genuine,
            Kind::MSeparable => WitnessKind::MSeparable,
            Kind::Gme => WitnessKind::Gme,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Sampler {
    Auto,
    Dense,
    Tableau,
}

impl From<Sampler> for SamplerKind {
    fn from(s: Sampler) -> Self {
        match s {
            Sampler::Auto => SamplerKind::Auto,
            Sampler::Dense => SamplerKind::Dense,
            Sampler::Tableau => SamplerKind::Tableau,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Builder string (chain:N, lattice:RxC, star:N, ghz:N, ring:N,
    /// complete:N), inline JSON, or a path to a JSON file with n and edges.
    #[arg(long)]
    pub graph: String,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Largest n for exhaustive partition search.
    #[arg(long, default_value_t = DEFAULT_ENUM_GATE)]
    pub enum_gate: usize,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated block label per qubit, inline JSON {"blocks": ..}, or
    /// a JSON file.
    #[arg(long)]
    pub partition: Option<String>,
    /// Number of parties for the m-separability constant.
    #[arg(long)]
    pub m: Option<usize>,
    /// Blocks to keep (comma separated) for a subsystem witness.
    #[arg(long)]
    pub keep: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Kind::Gme)]
    pub kind: Kind,
    #[arg(long)]
    pub partition: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub keep: Option<String>,
    /// White-noise weight p, as a decimal or fraction.
    #[arg(long, default_value = "0")]
    pub noise: String,
    /// Shots per measurement setting.
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// One-sided detection threshold z*.
    #[arg(long, default_value_t = DEFAULT_Z)]
    pub z_threshold: f64,
    /// Largest n sampled from a dense state vector.
    #[arg(long, default_value_t = entwit::oracle::DENSE_GATE)]
    pub dense_gate: usize,
    #[arg(long, value_enum, default_value_t = Sampler::Auto)]
    pub sampler: Sampler,
    /// Raw shots retained per setting.
    #[arg(long, default_value_t = DEFAULT_OUTCOME_CAP)]
    pub outcome_cap: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = entwit::oracle::DENSE_GATE)]
    pub dense_gate: usize,
    /// Seed for the cut sample on graphs too large for all cuts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, hide = true)]
    pub corrupt_constant: bool,
}

#[derive(Debug, Args)]
pub struct IntactnessArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "0")]
    pub noise: String,
    /// Sample this many shots per setting; exact expectations when absent.
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_Z)]
    pub z_threshold: f64,
    #[arg(long, default_value_t = entwit::oracle::DENSE_GATE)]
    pub dense_gate: usize,
    #[arg(long, value_enum, default_value_t = Sampler::Auto)]
    pub sampler: Sampler,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(entwit::Error),
    Io(String),
    /// Report already rendered; some check failed.
    Failed(String),
}

impl From<entwit::Error> for CliError {
    fn from(e: entwit::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Failed(_) => EXIT_VERIFY_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Failed(_) => f.write_str("verification failed"),
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                RunOutput { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                RunOutput { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> RunOutput {
    let (common, result) = match &cli.command {
        Command::Bounds(a) => (&a.common, commands::bounds(a)),
        Command::Simulate(a) => (&a.common, commands::simulate(a)),
        Command::Verify(a) => (&a.common, verify::verify(a)),
        Command::Intactness(a) => (&a.common, commands::intactness(a)),
    };
    let (text, code) = match result {
        Ok(text) => (text, EXIT_OK),
        Err(CliError::Failed(text)) => (text, EXIT_VERIFY_FAILED),
        Err(e) => return RunOutput { code: e.code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    match &common.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => RunOutput { code, stdout: String::new(), stderr: String::new() },
            Err(e) => RunOutput {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => RunOutput { code, stdout: text, stderr: String::new() },
    }
}

/// Reads a spec that may name a file.
fn spec_text(spec: &str) -> Result<String, CliError> {
    let path = std::path::Path::new(spec);
    if !spec.trim_start().starts_with('{') && path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {spec}: {e}")))
    } else {
        Ok(spec.to_string())
    }
}

pub fn load_graph(spec: &str) -> Result<Graph, CliError> {
    let text = spec_text(spec)?;
    Ok(Graph::from_spec(text.trim())?)
}

pub fn load_partition(n: usize, spec: &str) -> Result<Partition, CliError> {
    let text = spec_text(spec)?;
    Ok(Partition::from_spec(n, text.trim())?)
}

/// Two-coloring when bipartite, otherwise the exact chromatic coloring.
pub fn coloring_for(g: &Graph) -> Result<Coloring, CliError> {
    match g.two_coloring() {
        Some(c) => Ok(c),
        None => Ok(g.chromatic_coloring(g.n())?),
    }
}

fn parse_keep(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("--keep: not a block index: {t:?}"))))
        .collect()
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}
