use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hdgcurve::harness::{run_adaptive, run_audit, run_convergence, run_solve, runs, RunConfig};
use hdgcurve::HdgError;

#[derive(Parser)]
#[command(name = "hdgcurve", version, about = "HDG solver for semi-linear problems on curved domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output prefix; overrides `out` in the configuration.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence study with observed orders.
    Converge(Common),
    /// Adaptive refinement driven by the estimator.
    Adapt(Common),
    /// Geometric assumption audit per mesh level.
    Audit(Common),
    /// Single solve with field export.
    Solve(Common),
}

fn run(cli: Cli) -> hdgcurve::Result<()> {
    let (common, kind) = match &cli.command {
        Command::Converge(c) => (c, 0),
        Command::Adapt(c) => (c, 1),
        Command::Audit(c) => (c, 2),
        Command::Solve(c) => (c, 3),
    };
    let mut config = RunConfig::load(&common.config)?;
    if let Some(out) = &common.out {
        config.out = Some(out.clone());
    }
    match kind {
        0 => print!("{}", run_convergence(&config)?.to_console()),
        1 => print!("{}", runs::cycle_csv(&run_adaptive(&config)?.cycles)),
        2 => print!("{}", runs::audit_csv(&run_audit(&config)?)),
        _ => {
            let (tri, sol) = run_solve(&config)?;
            println!(
                "{} elements, {} Picard iterations, eta {:.4e}",
                tri.num_elements(),
                sol.trace.iterations(),
                sol.report.eta
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                HdgError::NoConvergence { .. } => ExitCode::from(2),
                e if e.is_geometry() => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
