//! The `consched` command line.
//!
//! Every command is a thin adapter over the `consched` library. [`run`] takes
//! the arguments and two writers so the whole surface can be driven in-process.

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use consched::precedence::DEFAULT_DP_LIMIT;
use consched::rules::RuleKind;
use consched::{CriterionKind, EncodingKind, PrecedenceGraph, PreferenceProfile, TimeWindows};

mod commands;
pub mod fixtures;
pub mod ratio;

pub use ratio::{run_ratio, GeneratorKind, RatioConfig, RatioReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_SIZE_LIMIT: i32 = 3;
pub const EXIT_RATIO_VIOLATED: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "consched",
    version,
    about = "Collective scheduling of unit tasks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a consensus schedule.
    Solve(SolveArgs),
    /// Cost of a given schedule.
    Eval(EvalArgs),
    /// Exhaustive optimum (n <= 10).
    Oracle(OracleArgs),
    /// Check a rule output (or a given schedule) against the three axioms.
    CheckAxioms(CheckArgs),
    /// Write a random profile.
    Gen(GenArgs),
    /// Approximation-ratio experiment for the EMD rule.
    Ratio(RatioArgs),
    /// Bundled example instances.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Distance,
    Binary,
    Emd,
}

impl From<RuleArg> for RuleKind {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Distance => RuleKind::Distance,
            RuleArg::Binary => RuleKind::Binary,
            RuleArg::Emd => RuleKind::Emd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Deviation,
    Tardiness,
    Earliness,
    Late,
    Exactpos,
}

impl From<EncodingArg> for EncodingKind {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Deviation => EncodingKind::Deviation,
            EncodingArg::Tardiness => EncodingKind::Tardiness,
            EncodingArg::Earliness => EncodingKind::Earliness,
            EncodingArg::Late => EncodingKind::LateTasks,
            EncodingArg::Exactpos => EncodingKind::ExactPosition,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Binary,
    Distance,
}

impl From<CriterionArg> for CriterionKind {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Binary => CriterionKind::Binary,
            CriterionArg::Distance => CriterionKind::Distance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PrecMode {
    Inferred,
    Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Matching,
    Dp,
    Repair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FilterArg {
    Release,
    Deadline,
    Unanimity,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Preference profile file.
    #[arg(long)]
    profile: PathBuf,
    /// Global time windows file (`task j : r d` lines).
    #[arg(long)]
    time: Option<PathBuf>,
    /// Precedence graph file (`a -> b` lines); implies `--prec-mode graph`.
    #[arg(long)]
    prec: Option<PathBuf>,
    #[arg(long, value_enum)]
    prec_mode: Option<PrecMode>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    rule: RuleArg,
    /// How order preferences become windows (order profiles only).
    #[arg(long, value_enum)]
    encoding: Option<EncodingArg>,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Largest task count accepted by the exponential DP.
    #[arg(long, default_value_t = DEFAULT_DP_LIMIT)]
    max_dp_tasks: usize,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    profile: PathBuf,
    /// Task ids in execution order, space or comma separated.
    #[arg(long)]
    schedule: String,
    /// Defaults to the encoding's natural criterion.
    #[arg(long, value_enum)]
    criterion: Option<CriterionArg>,
    /// Defaults to tardiness on order profiles.
    #[arg(long, value_enum)]
    encoding: Option<EncodingArg>,
    /// Also print the number of late choices at every slot.
    #[arg(long)]
    slots: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    rule: RuleArg,
    #[arg(long, value_enum)]
    encoding: Option<EncodingArg>,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Keep only schedules satisfying this axiom.
    #[arg(long, value_enum)]
    filter: Option<FilterArg>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    rule: Option<RuleArg>,
    #[arg(long, value_enum)]
    encoding: Option<EncodingArg>,
    #[arg(long)]
    profile: PathBuf,
    /// Check this schedule instead of a rule output.
    #[arg(long, conflicts_with = "rule")]
    schedule: Option<String>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    tasks: usize,
    #[arg(long)]
    voters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "uniform-permutations")]
    generator: GeneratorKind,
    /// Adjacent swaps per voter for the swap-noise generator.
    #[arg(long, default_value_t = 0)]
    swaps: usize,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RatioArgs {
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long)]
    tasks: usize,
    #[arg(long)]
    voters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "uniform-permutations")]
    generator: GeneratorKind,
    #[arg(long, default_value_t = 0)]
    swaps: usize,
    /// Compare against exhaustive optima (adds the Kendall-Tau ratio; n <= 10).
    #[arg(long)]
    exact: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum FixtureAction {
    /// Names and one-line descriptions.
    List,
    /// Print one fixture.
    Show { name: String },
    /// Write every fixture into a directory.
    Write { dir: PathBuf },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(PathBuf, io::Error),
    Core(consched::Error),
    RatioViolated(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => EXIT_USAGE,
            CliError::Core(consched::Error::Infeasible(_)) => EXIT_INFEASIBLE,
            CliError::Core(consched::Error::SizeLimitExceeded { .. }) => EXIT_SIZE_LIMIT,
            CliError::Core(_) => EXIT_USAGE,
            CliError::RatioViolated(_) => EXIT_RATIO_VIOLATED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::RatioViolated(k) => write!(f, "{k} trial(s) broke an approximation bound"),
        }
    }
}

impl From<consched::Error> for CliError {
    fn from(e: consched::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(PathBuf::from("<output>"), e)
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_profile(path: &Path) -> CliResult<PreferenceProfile> {
    Ok(consched::parse_profile(&read(path)?)?)
}

fn load_windows(path: Option<&Path>, n: usize) -> CliResult<Option<TimeWindows>> {
    path.map(|p| Ok(consched::parse_time_windows(&read(p)?, n)?))
        .transpose()
}

fn load_graph(path: Option<&Path>, n: usize) -> CliResult<Option<PrecedenceGraph>> {
    path.map(|p| Ok(consched::parse_precedence(&read(p)?, n)?))
        .transpose()
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => commands::solve(a, out, err),
        Command::Eval(a) => commands::eval(a, out),
        Command::Oracle(a) => commands::oracle(a, out),
        Command::CheckAxioms(a) => commands::check_axioms(a, out),
        Command::Gen(a) => commands::gen(a, out),
        Command::Ratio(a) => commands::ratio(a, out),
        Command::Fixtures { action } => commands::fixtures(action, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
