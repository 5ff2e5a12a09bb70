//! `awalker`: batch front-end for the `affine-walker` geometry library.
//!
//! Jobs are TOML specifications (`[surface]`, `[tensorT]`, `[phi]`,
//! `[potential]`, `[options]`); every command renders a deterministic
//! markdown report (or JSON with `--json`) and exits with
//!
//! - `0` on success,
//! - `1` when an asserted verdict is false (or a catalog check fails),
//! - `2` on a malformed specification or command line,
//! - `3` on a numeric failure during computation.

pub mod config;
pub mod report;
pub mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{parse_job, CliError, Options};
use report::Report;

#[derive(Parser)]
#[command(
    name = "awalker",
    version,
    about = "Classify affine surfaces, build their cotangent-bundle extensions, and verify curvature conditions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Emit the report as JSON instead of markdown.
    #[arg(long, global = true)]
    json: bool,
    /// Override [options].tol from the job spec.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Override [options].grid (verification grid is grid x grid).
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Override [options].seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override [options].orientation (+1 or -1).
    #[arg(long, global = true, allow_hyphen_values = true)]
    orientation: Option<i8>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Curvature, recurrence, and the parallel trace-free tensor space of a surface.
    Classify { spec: PathBuf },
    /// Build the cotangent-bundle extension and test Bach flatness and (anti-)self-duality.
    Extend { spec: PathBuf },
    /// Test the gradient Ricci soliton condition on the extension.
    Soliton { spec: PathBuf },
    /// Test the quasi-Einstein condition on the extension.
    Qe { spec: PathBuf },
    /// Browse and regression-check the built-in surface catalog.
    Catalog {
        #[command(subcommand)]
        sub: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List every catalog entry with its parameter signature.
    List,
    /// Full classify report plus printed-expectation checks for one entry.
    Show {
        name: String,
        /// Comma-separated parameter values (defaults per entry).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<f64>,
    },
    /// Execute the master regression suite over the whole catalog.
    RunAll,
}

fn apply_overrides(opts: &mut Options, cli: &Cli) -> Result<(), CliError> {
    if let Some(t) = cli.tol {
        if !(t > 0.0) {
            return Err(CliError::Spec("--tol must be positive".into()));
        }
        opts.tol = t;
    }
    if let Some(g) = cli.grid {
        if g < 2 {
            return Err(CliError::Spec("--grid must be at least 2".into()));
        }
        opts.grid = g;
    }
    if let Some(s) = cli.seed {
        opts.seed = s;
    }
    if let Some(o) = cli.orientation {
        if o != 1 && o != -1 {
            return Err(CliError::Spec("--orientation must be 1 or -1".into()));
        }
        opts.orientation = o;
    }
    Ok(())
}

fn load_job(path: &PathBuf, cli: &Cli) -> Result<config::JobSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Spec(format!("cannot read {}: {}", path.display(), e)))?;
    let mut job = parse_job(&text)?;
    apply_overrides(&mut job.options, cli)?;
    Ok(job)
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.cmd {
        Cmd::Classify { spec } => run::classify(&load_job(spec, cli)?),
        Cmd::Extend { spec } => run::extend(&load_job(spec, cli)?),
        Cmd::Soliton { spec } => run::soliton(&load_job(spec, cli)?),
        Cmd::Qe { spec } => run::qe(&load_job(spec, cli)?),
        Cmd::Catalog { sub } => {
            let mut opts = Options::default();
            apply_overrides(&mut opts, cli)?;
            match sub {
                CatalogCmd::List => Ok(run::catalog_list(&opts)),
                CatalogCmd::Show { name, params } => run::catalog_show(&opts, name, params),
                CatalogCmd::RunAll => run::catalog_run_all(&opts),
            }
        }
    }
}

/// Run the CLI on `args` (including the program name) and return the exit
/// code together with everything that would be printed.
pub fn run_cli(args: &[String]) -> (i32, String) {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return (code, e.to_string());
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let out = if cli.json {
                report.to_json()
            } else {
                report.to_markdown()
            };
            let code = if report.assertions_passed() { 0 } else { 1 };
            (code, out)
        }
        Err(e) => (e.code(), format!("error: {}\n", e.message())),
    }
}
