//! `ifda` command-line tool.
//!
//! Exit status: 0 on success, 2 for input errors, 3 for numerical failures.
//! `IFDA_THREADS` caps the worker threads used by `tune` and `simulate`.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "ifda", version, about = "Interval Fisher discriminant analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct SolverArgs {
    /// Range weight: a number in [0, 0.25] or a distribution name such as continuous_uniform.
    #[arg(long, default_value = "continuous_uniform")]
    pub delta: String,
    /// Orthogonality: usual or uncorrelated.
    #[arg(long, default_value = "usual")]
    pub mode: String,
    /// Ridge added to the centre-uncorrelated metric.
    #[arg(long, default_value_t = 0.0)]
    pub ridge: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random starts per discriminant vector, in addition to the all-ones start.
    #[arg(long, default_value_t = 8)]
    pub random_starts: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iterations: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit a model on a labelled interval CSV and write it as JSON.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Number of discriminant vectors.
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Grid search over (delta, s) with repeated stratified splits.
    Tune {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Comma-separated delta values; defaults to 0, 0.01, ..., 0.25.
        #[arg(long)]
        delta_grid: Option<String>,
        /// Comma-separated s values; defaults to 2, ..., min(9, p).
        #[arg(long)]
        s_grid: Option<String>,
        #[arg(long, default_value_t = 30)]
        splits: usize,
        #[arg(long, default_value_t = 0.5)]
        split_fraction: f64,
        /// Also write the table to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the model refit with the selected pair.
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Score a model on a labelled interval CSV.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Global-outlier threshold on the minimum farness.
        #[arg(long, default_value_t = 0.95)]
        tau: f64,
        /// unsquared or squared distances in lDAC.
        #[arg(long, default_value = "unsquared")]
        distance_scale: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Replicated two-class simulation against the theoretical benchmark.
    Simulate {
        #[arg(long)]
        case: String,
        #[arg(long)]
        p1: f64,
        #[arg(long, default_value_t = 100)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Render an SVG from the report written by `evaluate`.
    Plot {
        /// mosaic, farness, classmap or silhouette.
        #[arg(long)]
        kind: String,
        /// report.json produced by `evaluate`.
        #[arg(long)]
        report: PathBuf,
        /// True class for the class map.
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn configure_threads() -> Result<(), ifda::Error> {
    let Ok(raw) = std::env::var("IFDA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ifda::Error::InvalidConfig(format!("IFDA_THREADS=`{raw}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ifda::Error::InvalidConfig(e.to_string()))
}

fn run(cli: Cli) -> Result<(), ifda::Error> {
    configure_threads()?;
    match cli.command {
        Command::Fit { data, solver, s, out } => commands::fit(&data, &solver, s, &out),
        Command::Tune {
            data,
            solver,
            delta_grid,
            s_grid,
            splits,
            split_fraction,
            out,
            model_out,
        } => commands::tune(
            &data,
            &solver,
            delta_grid.as_deref(),
            s_grid.as_deref(),
            splits,
            split_fraction,
            out.as_deref(),
            model_out.as_deref(),
        ),
        Command::Evaluate {
            model,
            data,
            tau,
            distance_scale,
            out_dir,
        } => commands::evaluate(&model, &data, tau, &distance_scale, &out_dir),
        Command::Simulate {
            case,
            p1,
            m,
            seed,
            out_dir,
        } => commands::simulate(&case, p1, m, seed, &out_dir),
        Command::Plot {
            kind,
            report,
            class,
            out,
        } => commands::plot(&kind, &report, class.as_deref(), &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric() { 3 } else { 2 })
        }
    }
}
