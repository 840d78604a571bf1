//! Command-line harness: manifests, sweeps, and result files for the
//! `qspectrum` solver, its baselines and the hardware replica.
//!
//! Every run writes `manifest.json` next to its outputs and stamps each output
//! with the manifest hash; `qspectrum replay` re-runs a manifest and reproduces
//! the same bytes.

pub mod args;
pub mod commands;
pub mod input;
pub mod manifest;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use manifest::{CommandKind, RunManifest};
use qspectrum_core::Error as CoreError;

/// Exit code for a run whose levels did not all converge.
pub const EXIT_CONVERGENCE: u8 = 2;
/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0:#}")]
    Input(anyhow::Error),
    #[error("{0:#}")]
    Convergence(anyhow::Error),
    #[error("{0:#}")]
    Io(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Convergence(_) => EXIT_CONVERGENCE,
            Failure::Io(_) => 1,
        }
    }

    /// Classify a solver error: numerical breakdowns count as convergence failures.
    pub fn core(e: CoreError, context: impl std::fmt::Display) -> Self {
        let wrapped = anyhow::Error::new(e).context(context.to_string());
        match wrapped.downcast_ref::<CoreError>() {
            Some(
                CoreError::IterationLimit { .. }
                | CoreError::Kernel { .. }
                | CoreError::ShotStarvation { .. }
                | CoreError::PostselectionVanished { .. },
            ) => Failure::Convergence(wrapped),
            _ => Failure::Input(wrapped),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// Files written by a command plus any per-label convergence problems.
#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        if self.diagnostics.is_empty() {
            0
        } else {
            EXIT_CONVERGENCE
        }
    }
}

/// Run a manifest into `out`, writing the manifest first.
pub fn execute(manifest: &RunManifest, out: &Path) -> Result<Report, Failure> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display())).map_err(Failure::Io)?;
    let manifest_path = manifest.write(out).map_err(Failure::Io)?;
    let hash = manifest.hash();
    let mut report = match manifest.command {
        CommandKind::Spectrum => commands::spectrum::run(manifest, &hash, out),
        CommandKind::Compare => commands::compare::run(manifest, &hash, out),
        CommandKind::Experiment => commands::experiment::run(manifest, &hash, out),
        CommandKind::Resources => commands::resources::run(manifest, &hash, out),
    }?;
    report.files.insert(0, manifest_path);
    Ok(report)
}
