//! `vsqueeze` command line.
//!
//! Exit codes: 0 success, 1 verification or runtime failure, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use super::config::ConfigFile;
use super::report::{render_bound_search, render_report, write_json};
use super::{write_csv, write_csv_to, write_svg_plot, Column, OutputError, PlotStyle, Series};
use crate::model::{AngleConvention, ModelError, Preset};
use crate::oracle::suite::{run_suite, SuiteOptions, BOUND_FLOOR_SLACK};
use crate::oracle::{bound_search, OracleError};
use crate::runner::{self, FigureId, InitialChoice, RunConfig, RunnerError, SweepAxis, SweepCell};
use crate::InitialAmplitudes;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Columns drawn by `--plot` when no `--columns` are given.
const PLOT_COLUMNS: [Column; 5] = [Column::ESx, Column::ESy, Column::VSx, Column::VSy, Column::SzExpect];

#[derive(Debug, Parser)]
#[command(name = "vsqueeze", version, about = "Squeezing and coherence of a V-type atom in a dissipative cavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one trajectory and write it as CSV.
    #[command(allow_negative_numbers = true)]
    Evolve {
        #[command(flatten)]
        run: RunArgs,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also draw the selected columns to this SVG file.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Evaluate the Cartesian product of parameter axes.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// `name=v1,v2,...` with name in theta, gamma0, delta, alpha, beta.
        #[arg(long = "axis")]
        axes: Vec<SweepAxis>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// File-name prefix for the per-cell CSVs.
        #[arg(long, default_value = "sweep")]
        prefix: String,
        /// Draw one SVG per plotted column across all cells.
        #[arg(long)]
        plot: bool,
    },
    /// Reproduce one figure preset (CSV per line, SVG per panel).
    Figure {
        id: FigureId,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run the oracle suite; exit 0 iff every check passes.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random states for the entropy-route comparison.
        #[arg(long, default_value_t = 1000)]
        states: usize,
        /// Samples for the entropic-bound search.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Minimize `H_x + H_y + H_z` over random pure states.
    BoundSearch {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Initial-state preset (S1 or S2).
    #[arg(long, conflicts_with_all = ["alpha", "beta", "amplitudes"])]
    preset: Option<Preset>,
    #[arg(long, requires = "beta", conflicts_with = "amplitudes")]
    alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    beta: Option<f64>,
    /// sin-beta or cos-beta.
    #[arg(long, requires = "alpha")]
    convention: Option<AngleConvention>,
    /// Six comma-separated numbers: Re/Im of dA, dB, dC.
    #[arg(long, num_args = 1, value_delimiter = ',', allow_hyphen_values = true)]
    amplitudes: Option<Vec<f64>>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Comma-separated CSV columns to emit.
    #[arg(long, value_delimiter = ',')]
    columns: Vec<Column>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

impl From<RunnerError> for CliError {
    fn from(e: RunnerError) -> Self {
        match e {
            RunnerError::AtTime { .. } => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<OutputError> for CliError {
    fn from(e: OutputError) -> Self {
        match e {
            OutputError::Config(_) | OutputError::Json { .. } | OutputError::UnknownColumn(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl RunArgs {
    fn to_config(&self) -> Result<RunConfig, CliError> {
        let mut config = RunConfig::default();
        if let Some(path) = &self.config {
            let file = ConfigFile::load(path).map_err(|e| CliError::Usage(e.to_string()))?;
            file.apply(&mut config)?;
        }
        let p = &mut config.params;
        p.kappa = self.kappa.unwrap_or(p.kappa);
        p.gamma0 = self.gamma0.unwrap_or(p.gamma0);
        p.theta = self.theta.unwrap_or(p.theta);
        p.delta = self.delta.unwrap_or(p.delta);
        config.t_max = self.tmax.unwrap_or(config.t_max);
        config.dt = self.dt.unwrap_or(config.dt);
        if let Some(preset) = self.preset {
            config.initial = InitialChoice::Preset(preset);
        }
        if let (Some(alpha), Some(beta)) = (self.alpha, self.beta) {
            let convention = self.convention.unwrap_or(AngleConvention::SinBeta);
            config.initial = InitialChoice::Angles { alpha, beta, convention };
        }
        if let Some(v) = &self.amplitudes {
            if v.len() != 6 {
                return Err(CliError::Usage(format!("--amplitudes takes 6 numbers, got {}", v.len())));
            }
            let z = |k: usize| Complex64::new(v[2 * k], v[2 * k + 1]);
            config.initial = InitialChoice::Amplitudes(InitialAmplitudes::new(z(0), z(1), z(2))?);
        }
        if !self.columns.is_empty() {
            config.outputs = self.columns.clone();
        }
        config.validate()?;
        Ok(config)
    }
}

fn plot_columns(config: &RunConfig) -> Vec<Column> {
    if config.outputs.is_empty() {
        PLOT_COLUMNS.to_vec()
    } else {
        config.outputs.iter().copied().filter(|&c| c != Column::T).collect()
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::from(OutputError::io(dir, e)))
}

fn cmd_evolve(run: &RunArgs, out: Option<&Path>, plot: Option<&Path>) -> Result<(), CliError> {
    let config = run.to_config()?;
    let points = runner::evolve(&config)?;
    let columns = config.columns();
    match out {
        Some(path) => {
            write_csv(&points, &columns, path)?;
            eprintln!("wrote {} rows to {}", points.len(), path.display());
        }
        None => write_csv_to(&points, &columns, io::stdout().lock(), Path::new("<stdout>"))?,
    }
    if let Some(path) = plot {
        let series: Vec<Series> =
            plot_columns(&config).into_iter().map(|c| Series::new(c.name(), c.series(&points))).collect();
        write_svg_plot(&series, &PlotStyle::default(), path)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_sweep(run: &RunArgs, axes: &[SweepAxis], out_dir: &Path, prefix: &str, plot: bool) -> Result<(), CliError> {
    let config = run.to_config()?;
    let cells = runner::sweep(&config, axes)?;
    create_dir(out_dir)?;
    let columns = config.columns();
    for cell in &cells {
        let path = out_dir.join(format!("{prefix}_{}.csv", cell.label()));
        write_csv(&cell.points, &columns, &path)?;
        println!("{}", path.display());
    }
    if plot {
        for column in plot_columns(&config) {
            let series = cell_series(&cells, column, 0..cells.len());
            let path = out_dir.join(format!("{prefix}_{}.svg", column.name()));
            let style =
                PlotStyle { title: column.name().into(), y_label: column.name().into(), ..PlotStyle::default() };
            write_svg_plot(&series, &style, &path)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn cell_series(cells: &[SweepCell], column: Column, lines: impl IntoIterator<Item = usize>) -> Vec<Series> {
    lines.into_iter().map(|k| Series::new(cells[k].legend(), column.series(&cells[k].points))).collect()
}

/// Writes the CSV and SVG files of one figure and returns their paths.
pub fn write_figure(id: FigureId, out_dir: &Path) -> Result<Vec<PathBuf>, crate::Error> {
    let bundle = runner::figure(id)?;
    fs::create_dir_all(out_dir).map_err(|e| OutputError::io(out_dir, e))?;
    let mut written = Vec::new();
    for cell in &bundle.cells {
        let path = out_dir.join(format!("{id}_{}.csv", cell.label()));
        write_csv(&cell.points, &cell.config.columns(), &path)?;
        written.push(path);
    }
    for panel in &bundle.panels {
        let series = cell_series(&bundle.cells, panel.column, panel.lines.iter().copied());
        let style = PlotStyle {
            title: format!("{} {}", panel.stem, panel.column.name()),
            y_label: panel.column.name().into(),
            ..PlotStyle::default()
        };
        let path = out_dir.join(format!("{}_{}.svg", panel.stem, panel.column.name()));
        write_svg_plot(&series, &style, &path)?;
        written.push(path);
    }
    Ok(written)
}

fn cmd_figure(id: FigureId, out_dir: &Path) -> Result<(), CliError> {
    let written = write_figure(id, out_dir).map_err(|e| match e {
        crate::Error::Runner(e) => CliError::from(e),
        crate::Error::Output(e) => CliError::from(e),
        other => CliError::Failure(other.to_string()),
    })?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_verify(opts: SuiteOptions, json: Option<&Path>) -> Result<bool, CliError> {
    let report = run_suite(&opts);
    print!("{}", render_report(&report));
    if let Some(path) = json {
        write_json(&report, path)?;
    }
    Ok(report.all_passed())
}

fn cmd_bound_search(samples: usize, seed: u64, json: Option<&Path>) -> Result<bool, CliError> {
    let result = bound_search(samples, seed)?;
    print!("{}", render_bound_search(&result));
    if let Some(path) = json {
        write_json(&result, path)?;
    }
    let floor = 2.0 * std::f64::consts::LN_2 - BOUND_FLOOR_SLACK;
    if result.min_sum < floor {
        eprintln!("error: entropy sum {} fell below 2 ln 2", result.min_sum);
        return Ok(false);
    }
    Ok(true)
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match &cli.command {
        Command::Evolve { run, out, plot } => cmd_evolve(run, out.as_deref(), plot.as_deref()).map(|_| true),
        Command::Sweep { run, axes, out_dir, prefix, plot } => {
            cmd_sweep(run, axes, out_dir, prefix, *plot).map(|_| true)
        }
        Command::Figure { id, out_dir } => cmd_figure(*id, out_dir).map(|_| true),
        Command::Verify { seed, states, samples, json } => {
            cmd_verify(SuiteOptions { random_states: *states, seed: *seed, bound_samples: *samples }, json.as_deref())
        }
        Command::BoundSearch { samples, seed, json } => cmd_bound_search(*samples, *seed, json.as_deref()),
    };
    let _ = io::stdout().flush();
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAILURE
        }
    }
}
