//! Command-line front end: `run`, `sweep`, `plot` and `keys`.
//!
//! `run` and `sweep` write `metrics.csv` (see [`CSV_HEADER`]) into the
//! output directory, which defaults to `$DREAM_OLSR_OUT` or `./out`.

pub mod plot;
pub mod scenario_file;
pub mod table;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::simulator::{self, trace, Scenario, DEFAULTS};
pub use plot::{render_svg, series_from_csv, PlotError, Series};
pub use scenario_file::{load_scenario, parse_scenario, ScenarioFileError};
pub use table::{render_csv, Row, CSV_HEADER};

pub const OUT_ENV: &str = "DREAM_OLSR_OUT";

#[derive(Debug, Parser)]
#[command(name = "dream-olsr", version, about = "MANET routing simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario.
    Run(RunArgs),
    /// Run a scenario over a list of values for one parameter and several seeds.
    Sweep(SweepArgs),
    /// Chart two columns of a metrics CSV as SVG.
    Plot(PlotArgs),
    /// List scenario keys and their defaults.
    Keys,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory.
    #[arg(long, env = OUT_ENV, default_value = "out")]
    pub out: PathBuf,
    /// Override a scenario key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Also write the event trace of every replication.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub scenario: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub scenario: PathBuf,
    /// Scenario key to vary.
    #[arg(long)]
    pub param: String,
    /// Comma-separated values for the parameter.
    #[arg(long)]
    pub values: String,
    /// Seeds as a comma-separated list of numbers or inclusive ranges, e.g. `1-10` or `1,4,7-9`.
    #[arg(long, default_value = "1")]
    pub seeds: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    pub csv: PathBuf,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    /// Column whose values split the rows into separate lines.
    #[arg(long)]
    pub group: Option<String>,
    /// SVG file to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioFileError),
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    std::fs::write(path, contents).map_err(io_err(path))
}

/// Parse `1,3,5-7` into `[1, 3, 5, 6, 7]`.
pub fn parse_seeds(spec: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Sweep(format!("bad seed list `{spec}`"));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(CliError::Sweep("no seeds given".into()));
    }
    Ok(out)
}

pub fn keys_table() -> String {
    let w = DEFAULTS.iter().map(|(k, _, _)| k.len()).max().unwrap_or(0);
    let d = DEFAULTS.iter().map(|(_, v, _)| v.len()).max().unwrap_or(0);
    DEFAULTS.iter().map(|(k, v, m)| format!("{k:<w$}  {v:<d$}  {m}\n")).collect()
}

fn run_one(scenario: &Scenario, parameter: &str, value: &str) -> (Row, String) {
    let out = simulator::run(scenario).expect("scenario validated before running");
    let text = trace::render(&out.trace);
    let row =
        Row { parameter: parameter.into(), value: value.into(), scenario: scenario.clone(), metrics: out.metrics };
    (row, text)
}

/// `run`: one replication. Returns a short summary for the terminal.
pub fn run_command(args: &RunArgs) -> Result<String, CliError> {
    let mut overrides = args.common.set.clone();
    if let Some(seed) = args.seed {
        overrides.push(format!("seed={seed}"));
    }
    let scenario = load_scenario(&args.scenario, &overrides)?;
    let (row, text) = run_one(&scenario, "", "");
    let csv_path = args.common.out.join("metrics.csv");
    write_file(&csv_path, &render_csv(std::slice::from_ref(&row)))?;
    if args.common.trace {
        write_file(&args.common.out.join("trace.txt"), &text)?;
    }
    let m = &row.metrics;
    Ok(format!(
        "pdr={} throughput={:.1} tc_transmissions={} mpr_count_mean={:.2}; wrote {}",
        m.pdr,
        m.avg_throughput,
        m.tc_transmissions,
        m.mpr_count_mean,
        csv_path.display()
    ))
}

/// Build the replications of a sweep, validating every cell up front.
pub fn sweep_cells(
    base: &Scenario,
    param: &str,
    values: &str,
    seeds: &[u64],
) -> Result<Vec<(String, Scenario)>, CliError> {
    if param == "seed" || base.get(param).is_none() {
        return Err(CliError::Sweep(format!("`{param}` is not a sweepable scenario key (see `dream-olsr keys`)")));
    }
    let values: Vec<&str> = values.split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
    if values.is_empty() {
        return Err(CliError::Sweep("empty values list".into()));
    }
    let mut cells = Vec::new();
    for v in values {
        let mut s = base.clone();
        s.set(param, v).map_err(ScenarioFileError::from)?;
        for &seed in seeds {
            let mut s = s.clone();
            s.seed = seed;
            s.validate().map_err(ScenarioFileError::from)?;
            cells.push((v.to_string(), s));
        }
    }
    Ok(cells)
}

/// `sweep`: replications run in parallel; rows keep the order of the
/// values list, then ascending seed.
pub fn sweep_command(args: &SweepArgs) -> Result<String, CliError> {
    let base = load_scenario(&args.scenario, &args.common.set)?;
    let mut seeds = parse_seeds(&args.seeds)?;
    seeds.sort_unstable();
    seeds.dedup();
    let cells = sweep_cells(&base, &args.param, &args.values, &seeds)?;
    let results: Vec<(Row, String)> = cells.par_iter().map(|(v, s)| run_one(s, &args.param, v)).collect();
    let rows: Vec<Row> = results.iter().map(|(r, _)| r.clone()).collect();
    let csv_path = args.common.out.join("metrics.csv");
    write_file(&csv_path, &render_csv(&rows))?;
    if args.common.trace {
        for (row, text) in &results {
            let name = format!("trace_{}_{}_seed{}.txt", row.parameter, row.value, row.scenario.seed);
            write_file(&args.common.out.join(name), text)?;
        }
    }
    Ok(format!("{} replications; wrote {}", rows.len(), csv_path.display()))
}

pub fn plot_command(args: &PlotArgs) -> Result<String, CliError> {
    let text = std::fs::read_to_string(&args.csv).map_err(io_err(&args.csv))?;
    let series = series_from_csv(&text, &args.x, &args.y, args.group.as_deref())?;
    write_file(&args.out, &render_svg(&series, &args.x, &args.y))?;
    Ok(format!("wrote {}", args.out.display()))
}

pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Run(a) => run_command(a),
        Command::Sweep(a) => sweep_command(a),
        Command::Plot(a) => plot_command(a),
        Command::Keys => Ok(keys_table().trim_end().to_string()),
    }
}
