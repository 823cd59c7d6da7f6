//! Command-line front end: `power`, `sweep`, `optima`, and `dataset`
//! subcommands over the library, defaulting to the bundled IMF table.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 resource or
//! integrity error. Reports go to stdout (or `--out`); warnings and
//! errors go to stderr, so piped output stays clean.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use banzhaf::game::{threshold_from_quota, QuotaSpec, VotingBody};
use banzhaf::metrics::InequalityReport;
use banzhaf::power::{banzhaf_indices, multi_quota_profiles, PowerError};
use banzhaf::report;
use banzhaf::sweep::{find_optima, run_sweep_inputs, SweepError, SweepInputs, SweepRow};
use banzhaf::{embedded_imf_dataset, parse_weights_csv, RelativeWeightVector, TableSource, WeightTable};

#[derive(Parser)]
#[command(
    name = "banzhaf",
    version,
    about = "Exact Banzhaf voting-power analysis for weighted majority games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-player swings and Banzhaf indices at one quota
    Power(PowerCmd),
    /// Every metric for each quota in a range
    Sweep(RangeCmd),
    /// The quotas optimizing each metric over a range
    Optima(RangeCmd),
    /// The weight table in use
    Dataset(DatasetCmd),
}

#[derive(Args)]
struct CommonArgs {
    /// Weights CSV with header country,votes[,share]; default: bundled IMF table
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Digits after the decimal point (1-12); default 4 for power, 6 elsewhere
    #[arg(long)]
    decimals: Option<usize>,
    /// Worker threads for the per-player passes; 0 picks the machine default
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Integer lattice the power game runs on: the raw votes, or the
    /// table's declared shares in basis points (decisiveness and the
    /// comparison weights always come from the votes). Auto picks shares
    /// when the table declares them for every row, votes otherwise.
    #[arg(long, value_enum, default_value_t = PowerLattice::Auto)]
    power_lattice: PowerLattice,
}

#[derive(Args)]
struct PowerCmd {
    /// Decision quota as a percentage of total votes, 50-100 (e.g. 50 or 58.5)
    #[arg(long)]
    quota: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct RangeCmd {
    /// First quota of the range, percent
    #[arg(long)]
    from: u32,
    /// Last quota of the range, percent (inclusive)
    #[arg(long)]
    to: u32,
    /// Grid step in percentage points
    #[arg(long, default_value_t = 1)]
    step: u32,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct DatasetCmd {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PowerLattice {
    Auto,
    Votes,
    Shares,
}

enum CliError {
    /// Bad arguments or unreadable/invalid input data: exit 2.
    Input(String),
    /// Allocation failures, integrity violations, unwritable output: exit 3.
    Resource(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Resource(m) => m,
        }
    }
}

fn input_error(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

fn power_error(e: PowerError) -> CliError {
    match e {
        PowerError::ThresholdOutOfRange { .. } | PowerError::UnsortedThresholds => {
            CliError::Input(e.to_string())
        }
        other => CliError::Resource(other.to_string()),
    }
}

fn sweep_error(e: SweepError) -> CliError {
    match e {
        SweepError::Power(p) => power_error(p),
        SweepError::Metrics(m) => CliError::Resource(m.to_string()),
        grid => CliError::Input(grid.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Power(cmd) => run_power(cmd),
        Command::Sweep(cmd) => run_sweep_cmd(cmd, false),
        Command::Optima(cmd) => run_sweep_cmd(cmd, true),
        Command::Dataset(cmd) => run_dataset(cmd),
    }
}

fn load_table(weights: &Option<PathBuf>) -> Result<WeightTable, CliError> {
    let table = match weights {
        None => embedded_imf_dataset(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            parse_weights_csv(&text, TableSource::File(path.display().to_string()))
                .map_err(input_error)?
        }
    };
    for warning in table.warnings() {
        eprintln!("warning: {warning}");
    }
    Ok(table)
}

fn resolve_decimals(requested: Option<usize>, default: usize) -> Result<usize, CliError> {
    let decimals = requested.unwrap_or(default);
    if !(1..=12).contains(&decimals) {
        return Err(CliError::Input(format!(
            "decimals must lie in [1, 12], got {decimals}"
        )));
    }
    Ok(decimals)
}

/// Picks the sweep inputs for the chosen lattice. Auto prefers the
/// declared-share lattice when the table has one, falling back to the
/// votes with a note.
fn resolve_inputs(table: &WeightTable, lattice: PowerLattice) -> Result<SweepInputs, CliError> {
    let votes: VotingBody = table.voting_body().map_err(input_error)?;
    match lattice {
        PowerLattice::Votes => Ok(SweepInputs::single(votes)),
        PowerLattice::Shares => {
            let shares = table.declared_share_body().map_err(input_error)?;
            SweepInputs::split(shares, votes).map_err(input_error)
        }
        PowerLattice::Auto => {
            if table.has_complete_shares() {
                match table.declared_share_body() {
                    Ok(shares) => {
                        eprintln!(
                            "note: power computed on the declared-share lattice; \
                             pass --power-lattice votes for the raw-vote game"
                        );
                        return SweepInputs::split(shares, votes).map_err(input_error);
                    }
                    Err(err) => eprintln!("note: declared shares unusable ({err}); using votes"),
                }
            }
            Ok(SweepInputs::single(votes))
        }
    }
}

/// Runs `f` on a dedicated rayon pool of `jobs` threads, or the default
/// pool when `jobs` is 0. Results are bit-identical either way.
fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Resource(format!("cannot build a {jobs}-thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn emit(common: &CommonArgs, text: String) -> Result<(), CliError> {
    match &common.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Resource(format!("cannot write {}: {e}", path.display()))),
    }
}

fn run_power(cmd: PowerCmd) -> Result<(), CliError> {
    let decimals = resolve_decimals(cmd.common.decimals, 4)?;
    let quota: QuotaSpec = cmd.quota.parse().map_err(input_error)?;
    let table = load_table(&cmd.common.weights)?;
    let inputs = resolve_inputs(&table, cmd.common.power_lattice)?;
    let power_body = inputs.power_body();
    let threshold = threshold_from_quota(&quota, power_body);

    let mut profiles = with_pool(cmd.common.jobs, || {
        multi_quota_profiles(power_body, &[threshold])
    })?
    .map_err(power_error)?;
    let (swings, _decisiveness) = profiles.pop().expect("one threshold in, one profile out");
    let power = banzhaf_indices(&swings)
        .map_err(power_error)?
        .with_quota(quota);

    // names, votes, and the weight column always show the raw votes; only
    // the swing counts and indices come from the chosen power lattice
    let rows = report::power_rows(inputs.weight_body(), &swings, &power);
    let text = match cmd.common.format {
        Format::Csv => report::power_csv(&rows, decimals),
        Format::Json => report::power_json(&rows, Some(quota), decimals),
    };
    emit(&cmd.common, text)
}

fn quota_grid(cmd: &RangeCmd) -> Result<Vec<u32>, CliError> {
    if cmd.step == 0 {
        return Err(CliError::Input("step must be at least 1".into()));
    }
    if cmd.from > cmd.to {
        return Err(CliError::Input(format!(
            "empty quota range: --from {} exceeds --to {}",
            cmd.from, cmd.to
        )));
    }
    Ok((cmd.from..=cmd.to).step_by(cmd.step as usize).collect())
}

fn sweep_rows(cmd: &RangeCmd, inputs: &SweepInputs) -> Result<Vec<SweepRow>, CliError> {
    let grid = quota_grid(cmd)?;
    with_pool(cmd.common.jobs, || run_sweep_inputs(inputs, &grid, false))?.map_err(sweep_error)
}

fn run_sweep_cmd(cmd: RangeCmd, optima: bool) -> Result<(), CliError> {
    let decimals = resolve_decimals(cmd.common.decimals, 6)?;
    let table = load_table(&cmd.common.weights)?;
    let inputs = resolve_inputs(&table, cmd.common.power_lattice)?;
    let rows = sweep_rows(&cmd, &inputs)?;

    let text = if optima {
        let weights = RelativeWeightVector::from_body(inputs.weight_body());
        let baseline = InequalityReport::compute(weights.as_slice())
            .map_err(|e| CliError::Resource(e.to_string()))?;
        let best = find_optima(&rows, &baseline).map_err(sweep_error)?;
        match cmd.common.format {
            Format::Csv => report::optima_csv(&best, decimals),
            Format::Json => report::optima_json(&best, decimals),
        }
    } else {
        match cmd.common.format {
            Format::Csv => report::sweep_csv(&rows, decimals),
            Format::Json => report::sweep_json(&rows, decimals),
        }
    };
    emit(&cmd.common, text)
}

fn run_dataset(cmd: DatasetCmd) -> Result<(), CliError> {
    let table = load_table(&cmd.common.weights)?;
    let text = match cmd.common.format {
        Format::Csv => report::dataset_csv(&table),
        Format::Json => report::dataset_json(&table),
    };
    emit(&cmd.common, text)
}
