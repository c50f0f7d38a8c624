use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyvem_core::datasets::DEFAULT_SEED;
use polyvem_core::vem::VemConfig;

use polyvem::config::{parse_datasets, parse_levels, parse_solver_config, parse_solver_kind};
use polyvem::{run, CliError, RunConfig};

/// Polygonal meshes, quality metrics and virtual element benchmarks on the
/// unit square.
#[derive(Parser)]
#[command(name = "polyvem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write `<dataset>_<level>.poly` mesh files.
    Generate(Common),
    /// Per-element and aggregated quality metrics.
    Metrics(Common),
    /// Solve the test problem and record P1..P8 and diagnostics.
    Solve(Common),
    /// Geometry-only quality indicator per mesh.
    Indicator(Common),
    /// Spearman correlation of aggregated metrics against P1..P8.
    Correlate(Common),
    /// Convergence and indicator plots plus a markdown summary.
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// Dataset ids, comma separated; `reference` and `parametric` select groups.
    #[arg(long, default_value = "reference")]
    dataset: String,
    /// Inclusive level range `A..B`, or a single level.
    #[arg(long, default_value = "0..2")]
    levels: String,
    /// Polynomial orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Stabilization: d-recipe, dofi-dofi or trace.
    #[arg(long)]
    stab: Option<String>,
    /// Linear solver: auto, direct or cg.
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    cg_tol: Option<f64>,
    /// `key = value` solver file (k, stabilization, solver, cg_tol); flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Manufactured solution: test1 or test2.
    #[arg(long, default_value = "test1")]
    test: String,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Report outputs, comma separated: csv, svg.
    #[arg(long, value_delimiter = ',', default_value = "csv,svg")]
    format: Vec<String>,
    /// Skip conditioning estimates and element diagnostics.
    #[arg(long)]
    quick: bool,
}

fn resolve(command: &str, c: Common) -> Result<RunConfig, CliError> {
    let bad = |what: &str, e: String| CliError::Validation(format!("--{what}: {e}"));
    let base = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            parse_solver_config(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?
        }
        None => VemConfig::default(),
    };
    let ks = match c.k {
        Some(ks) => ks,
        None if c.config.is_some() => vec![base.k],
        None => vec![1, 2, 3],
    };
    if let Some(k) = ks.iter().find(|k| !(1..=3).contains(*k)) {
        return Err(bad("k", format!("{k} is not in 1..=3")));
    }
    Ok(RunConfig {
        command: command.to_string(),
        datasets: parse_datasets(&c.dataset).map_err(|e| bad("dataset", e))?,
        levels: parse_levels(&c.levels).map_err(|e| bad("levels", e))?,
        ks,
        stabilization: match c.stab {
            Some(s) => s.parse().map_err(|e: polyvem_core::Error| bad("stab", e.to_string()))?,
            None => base.stabilization,
        },
        solver: match c.solver {
            Some(s) => parse_solver_kind(&s).map_err(|e| bad("solver", e))?,
            None => base.solver,
        },
        cg_tol: c.cg_tol.unwrap_or(base.cg_tol),
        test: c.test.parse().map_err(|e: polyvem_core::Error| bad("test", e.to_string()))?,
        out: c.out,
        seed: c.seed,
        formats: c.format,
        quick: c.quick,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match cli.command {
        Command::Generate(c) => ("generate", c),
        Command::Metrics(c) => ("metrics", c),
        Command::Solve(c) => ("solve", c),
        Command::Indicator(c) => ("indicator", c),
        Command::Correlate(c) => ("correlate", c),
        Command::Report(c) => ("report", c),
    };
    match resolve(name, common).and_then(|cfg| run(&cfg)) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
