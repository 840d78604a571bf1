use std::process::ExitCode;

use clap::Parser;
use qspectrum_cli::args::{Cli, CommandArgs};
use qspectrum_cli::manifest::{CommandKind, RunManifest};
use qspectrum_cli::{execute, Failure, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (manifest, out) = match prepare(cli.command) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    match execute(&manifest, &out) {
        Ok(report) => {
            for line in &report.summary {
                println!("{line}");
            }
            for line in &report.diagnostics {
                eprintln!("not converged: {line}");
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            let kind = match e {
                Failure::Convergence(_) => "convergence failure",
                _ => "error",
            };
            eprintln!("{kind}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn prepare(command: CommandArgs) -> anyhow::Result<(RunManifest, std::path::PathBuf)> {
    let (kind, args) = match command {
        CommandArgs::Replay { manifest, out } => return Ok((RunManifest::read(&manifest)?, out)),
        CommandArgs::Spectrum(a) => (CommandKind::Spectrum, a),
        CommandArgs::Compare(a) => (CommandKind::Compare, a),
        CommandArgs::Experiment(a) => (CommandKind::Experiment, a),
        CommandArgs::Resources(a) => (CommandKind::Resources, a),
    };
    let manifest = RunManifest::from_args(kind, &args)?;
    Ok((manifest, args.out))
}
