//! Scenario runner for the `ptlind` library.
//!
//! Exit codes: 0 success, 1 validation failure, 2 config error, 3 domain
//! error (e.g. parameters at the symmetry-breaking boundary). Errors print
//! their machine-readable name on standard error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ptlind::scenario::validation_report;
use ptlind::{Error, FigureId, Mode, OutputFormat, Scenario};

#[derive(Parser)]
#[command(
    name = "ptlind",
    version,
    about = "Evolve two-level open systems with a balanced-gain-loss Hamiltonian and tabulate transition probabilities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate the configured system and write one probability table per basis.
    Simulate(RunArgs),
    /// Write numeric and closed-form curves side by side with their difference.
    Compare(RunArgs),
    /// Reproduce the data behind one of the built-in presets fig1..fig10.
    Figure {
        /// Preset id, e.g. fig1.
        id: String,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Run the invariant suite and print one pass/fail line per check.
    Validate,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario description file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory the tables are written into (default: from config, else ".").
    #[arg(long)]
    out: Option<PathBuf>,
    /// Table format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Number of time-grid points (≥ 2).
    #[arg(long)]
    points: Option<usize>,
}

fn scenario_for(mode: Mode, args: &RunArgs) -> ptlind::Result<Scenario> {
    let mut sc = match (&args.config, mode) {
        (Some(path), _) => Scenario::from_file(path)?.with_mode(mode)?,
        (None, Mode::Figure(_)) => Scenario::figure(match mode {
            Mode::Figure(id) => id,
            _ => unreachable!(),
        }),
        (None, _) => {
            return Err(Error::Config(
                "this command needs --config <file>".into(),
            ))
        }
    };
    if let Some(dir) = &args.out {
        sc = sc.with_out_dir(dir.clone());
    }
    if let Some(format) = &args.format {
        sc = sc.with_format(OutputFormat::parse(format)?);
    }
    if let Some(points) = args.points {
        sc = sc.with_points(points)?;
    }
    Ok(sc)
}

fn run(cli: Cli) -> ptlind::Result<u8> {
    let mode = match &cli.command {
        Command::Simulate(_) => Mode::Simulate,
        Command::Compare(_) => Mode::Compare,
        Command::Figure { id, .. } => Mode::Figure(FigureId::parse(id)?),
        Command::Validate => {
            let report = validation_report();
            print!("{}", report.render());
            return Ok(if report.all_pass() { 0 } else { 1 });
        }
    };
    let args = match &cli.command {
        Command::Simulate(args) | Command::Compare(args) => args,
        Command::Figure { args, .. } => args,
        Command::Validate => unreachable!(),
    };
    let scenario = scenario_for(mode, args)?;
    for path in scenario.run()? {
        println!("{}", path.display());
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("{}: {err}", err.name());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
