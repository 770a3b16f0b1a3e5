use std::path::PathBuf;
use std::process::ExitCode;

use bf_transport_fem::config::{run_convergence, run_simulate, RunConfig, Scenario};
use bf_transport_fem::Result;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(version, about = "Brinkman-Forchheimer flow with membrane transport: convergence studies and channel runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Manufactured-solution convergence study; writes convergence.csv.
    Convergence(Args),
    /// Time march with VTK output and per-step diagnostics in steps.csv.
    Simulate(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding output.dir.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Only print warnings and errors.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (scenario, args) = match cli.command {
        Command::Convergence(a) => (Scenario::Convergence, a),
        Command::Simulate(a) => (Scenario::Simulate, a),
    };
    let level = if args.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(scenario, &args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(scenario: Scenario, args: &Args) -> Result<u8> {
    let mut config = RunConfig::load(&args.config)?;
    config.expect_scenario(scenario)?;
    config.scenario = Some(scenario);
    if let Some(dir) = &args.out {
        config.output.dir = dir.clone();
    }
    match scenario {
        Scenario::Convergence => {
            let outcome = run_convergence(&config)?;
            if !args.quiet {
                print!("{}", outcome.table.to_text());
            }
            if let Some((n, msg)) = outcome.failures.first() {
                eprintln!("{} of the rows failed; first at n = {n}: {msg}", outcome.failures.len());
                return Ok(4);
            }
        }
        Scenario::Simulate => {
            let base = args.config.parent().map(PathBuf::from).unwrap_or_default();
            let outcome = run_simulate(&config, &base)?;
            if !args.quiet {
                if let Some(last) = outcome.steps.last() {
                    let p = &last.polarization;
                    println!(
                        "t = {}: wall concentration {:.4e} .. {:.4e}, interior mean {:.4e}",
                        p.t, p.wall_min, p.wall_max, p.interior_mean
                    );
                }
                for f in &outcome.files {
                    println!("wrote {}", f.display());
                }
            }
            let failed = outcome.steps.iter().filter(|s| !s.report.converged).count();
            if failed > 0 {
                eprintln!("{failed} step(s) were accepted without converging");
                return Ok(4);
            }
        }
    }
    Ok(0)
}
