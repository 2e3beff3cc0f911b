use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use optocool_cli::config::{load_config, RunConfig};
use optocool_cli::export::{with_destination, write_point, write_profile, write_sweep, Format};
use optocool_cli::run::{run_point, run_profile, run_sweep, structural_self_check};
use optocool_cli::{CliError, CliResult};

/// Sideband cooling of a vibrating cavity mirror through intracavity atomic
/// ensembles: single-point reports, cavity response profiles, and parameter
/// sweeps with CSV/JSON export.
#[derive(Parser)]
#[command(name = "optocool", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted (the config's output section is the fallback).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_parser = clap::value_parser!(String))]
    format: Option<String>,
    /// Worker threads for sweep evaluation.
    #[arg(long)]
    threads: Option<usize>,
    /// Seed of the structural random-draw self-test run before the command.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every quantity at the configured parameter point.
    Point(Common),
    /// Sample the dressed cavity response over the configured grid.
    Profile(Common),
    /// Sweep one parameter and tabulate analytic and exact results.
    Sweep(Common),
}

fn resolve_output(common: &Common, config: &RunConfig) -> CliResult<(Option<PathBuf>, Format)> {
    let path = common.out.clone().or_else(|| config.output.path.clone());
    let format = match &common.format {
        Some(text) => text.parse::<Format>().map_err(CliError::Config)?,
        None => config.output.format.unwrap_or_default(),
    };
    Ok((path, format))
}

fn load(common: &Common) -> CliResult<RunConfig> {
    match &common.config {
        Some(path) => load_config(path),
        None => Ok(RunConfig::builtin_default()),
    }
}

fn execute(command: &Command) -> CliResult<()> {
    let common = match command {
        Command::Point(c) | Command::Profile(c) | Command::Sweep(c) => c,
    };
    structural_self_check(common.seed)?;
    let config = load(common)?;
    let (path, format) = resolve_output(common, &config)?;

    match command {
        Command::Point(_) => {
            let report = run_point(&config)?;
            eprintln!(
                "point: C1 = {:.4}, C2 = {:.4}, status = {}, n_mirror = {}",
                report.c1,
                report.c2,
                report.status,
                report
                    .n_mirror_exact
                    .map_or("n/a".into(), |n| format!("{n:.6}")),
            );
            with_destination(path.as_deref(), |out| write_point(&report, format, out))
        }
        Command::Profile(_) => {
            let profile = run_profile(&config)?;
            for marker in &profile.markers {
                eprintln!(
                    "profile: {} at omega = {:.6} (magnitude {:.6e}, width {:.4})",
                    marker.kind, marker.omega, marker.magnitude, marker.width
                );
            }
            eprintln!("profile: {} samples", profile.omegas.len());
            with_destination(path.as_deref(), |out| write_profile(&profile, format, out))
        }
        Command::Sweep(_) => {
            let rows = run_sweep(&config, common.threads)?;
            let failed = rows
                .iter()
                .filter(|r| r.status.starts_with("error"))
                .count();
            let unstable = rows.iter().filter(|r| !r.stable).count();
            eprintln!(
                "sweep: {} rows over {} ({} unstable, {} failed)",
                rows.len(),
                config.sweep.field.name(),
                unstable,
                failed
            );
            with_destination(path.as_deref(), |out| write_sweep(&rows, format, out))?;
            if failed > 0 {
                return Err(CliError::Numerical(format!(
                    "{failed} sweep rows failed; per-row detail is in the output"
                )));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
