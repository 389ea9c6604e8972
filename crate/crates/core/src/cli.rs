//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::bargaining::Concept;
use crate::config::{ConfigError, RunConfig, ZGrid, EUROZONE};
use crate::game::GridSpec;
use crate::report::{scan, scan_csv, solve, SolveError, SolveReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NONEXISTENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "coopetition", version, about = "Solve two-player coopetitive games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute payoff regions and all requested solutions, as JSON.
    Solve(SolveArgs),
    /// Sweep the eurozone model over `n`, as CSV.
    Scan(ScanArgs),
    /// Render the payoff space and the rebalancing construction as SVG.
    Plot(SolveArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// `eurozone` or the path of a TOML game definition.
    #[arg(long, default_value = EUROZONE)]
    pub model: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub n: f64,
    /// Samples per axis of each section.
    #[arg(long, default_value_t = GridSpec::DEFAULT_RESOLUTION)]
    pub grid: usize,
    /// Number of equally spaced cooperative strategies.
    #[arg(long, conflicts_with = "zvalues")]
    pub zgrid: Option<usize>,
    /// Explicit cooperative strategies, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub zvalues: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated solution concepts; all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub concepts: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub plot_out: Option<PathBuf>,
    /// Exit with status 3 when a requested solution does not exist.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Values of `n`, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "n_range")]
    pub n_values: Vec<f64>,
    /// `start:end:count`, equally spaced and inclusive.
    #[arg(long)]
    pub n_range: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Other(String),
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Config(c) => Failure::Config(c.to_string()),
            SolveError::Solver(s) => Failure::Other(s.to_string()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn config_from(model: &ModelArgs, concepts: &[String]) -> Result<RunConfig, Failure> {
    let concepts = if concepts.is_empty() {
        Concept::ALL.to_vec()
    } else {
        concepts
            .iter()
            .map(|c| {
                Concept::from_str(c.trim()).map_err(|_| {
                    Failure::Config(format!("invalid config field `concepts`: unknown concept `{c}`"))
                })
            })
            .collect::<Result<_, _>>()?
    };
    let zgrid = if model.zvalues.is_empty() {
        ZGrid::Count(model.zgrid.unwrap_or(11))
    } else {
        ZGrid::Values(model.zvalues.clone())
    };
    Ok(RunConfig {
        model: model.model.clone(),
        m: model.m,
        n: model.n,
        grid: model.grid,
        zgrid,
        concepts,
        ..RunConfig::default()
    })
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Other(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Other(format!("cannot write to stdout: {e}"))),
    }
}

fn solve_command(args: &SolveArgs) -> Result<(RunConfig, SolveReport), Failure> {
    let mut config = config_from(&args.model, &args.concepts)?;
    config.out = args.out.clone();
    config.plot_out = args.plot_out.clone();
    config.strict = args.strict;
    let report = solve(&config)?;
    Ok((config, report))
}

fn strict_status(config: &RunConfig, report: &SolveReport) -> i32 {
    let missing = report.missing();
    if config.strict && !missing.is_empty() {
        let names: Vec<_> = missing.iter().map(|c| c.name()).collect();
        eprintln!("error: no solution for: {}", names.join(", "));
        EXIT_NONEXISTENCE
    } else {
        EXIT_OK
    }
}

fn run_solve(args: &SolveArgs) -> Result<i32, Failure> {
    let (config, report) = solve_command(args)?;
    write_output(config.out.as_deref(), &report.to_json())?;
    if let Some(p) = &config.plot_out {
        write_output(Some(p), &crate::svg::render(&report))?;
    }
    Ok(strict_status(&config, &report))
}

fn run_plot(args: &SolveArgs) -> Result<i32, Failure> {
    let (config, report) = solve_command(args)?;
    let target = config.plot_out.as_deref().or(config.out.as_deref());
    write_output(target, &crate::svg::render(&report))?;
    Ok(strict_status(&config, &report))
}

pub fn parse_range(spec: &str) -> Result<Vec<f64>, ConfigError> {
    let bad = || ConfigError::Field {
        field: "n-range",
        msg: format!("expected start:end:count, got `{spec}`"),
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, end, count] = parts.as_slice() else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let end: f64 = end.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count < 2 {
        return Err(ConfigError::Field {
            field: "n-range",
            msg: "need ≥2 samples".into(),
        });
    }
    if !(start.is_finite() && end.is_finite() && start <= end) {
        return Err(bad());
    }
    Ok(crate::game::Interval { lo: start, hi: end }.sample(count))
}

fn run_scan(args: &ScanArgs) -> Result<i32, Failure> {
    let config = config_from(&args.model, &[])?;
    let ns = match &args.n_range {
        Some(spec) => parse_range(spec)?,
        None => args.n_values.clone(),
    };
    let rows = scan(&config, &ns)?;
    write_output(args.out.as_deref(), &scan_csv(&rows))?;
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Scan(a) => run_scan(a),
        Command::Plot(a) => run_plot(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAILURE
        }
    }
}
