use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use qspectrum_core::lcu::ApplyPath;
use qspectrum_core::solver::{BiasChoice, IterationMode, NoiseMode, CHEMICAL_ACCURACY};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::RunArgs;
use crate::input::{collect_inputs, InputFile};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Spectrum,
    Compare,
    Experiment,
    Resources,
}

/// Resolved settings; every command reads the subset it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Options {
    pub bias: BiasChoice,
    pub iterations: IterationMode,
    pub tolerance: f64,
    pub k_max: usize,
    pub path: ApplyPath,
    pub noise: f64,
    pub noise_mode: NoiseMode,
    pub replicas: usize,
    pub shots: u64,
    pub seed: u64,
    pub chain_length: usize,
    pub dump_plan: bool,
}

/// Everything needed to reproduce a run. The output directory is not part
/// of it, so one manifest replays into any directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: CommandKind,
    pub inputs: Vec<InputFile>,
    pub options: Options,
}

#[derive(Serialize)]
struct Hashed<'a> {
    tool: &'a str,
    version: &'a str,
    command: CommandKind,
    inputs: Vec<(&'a str, &'a str)>,
    options: &'a Options,
}

#[derive(Serialize, Deserialize)]
struct Stored {
    hash: String,
    #[serde(flatten)]
    manifest: RunManifest,
}

impl RunManifest {
    pub fn from_args(command: CommandKind, args: &RunArgs) -> anyhow::Result<Self> {
        let inputs = collect_inputs(&args.hamiltonians, args.sweep.as_deref())?;
        let (replicas, shots, noise) = match command {
            CommandKind::Experiment => (3, 10_000, 0.0),
            CommandKind::Compare => (1, 0, 0.1),
            _ => (1, 0, 0.0),
        };
        let options = Options {
            bias: args.bias.0,
            iterations: args.k.0,
            tolerance: args.tol.unwrap_or(CHEMICAL_ACCURACY),
            k_max: args.k_max.unwrap_or(10_000),
            path: args.path,
            noise: args.noise.unwrap_or(noise),
            noise_mode: args.noise_mode,
            replicas: args.replicas.unwrap_or(replicas),
            shots: args.shots.unwrap_or(shots),
            seed: args.seed,
            chain_length: args.iterations.unwrap_or(10),
            dump_plan: args.dump_plan,
        };
        if !(options.tolerance > 0.0) {
            bail!("--tol must be positive");
        }
        if !(options.noise >= 0.0) {
            bail!("--noise must be non-negative");
        }
        if options.replicas == 0 || options.chain_length == 0 || options.k_max == 0 {
            bail!("--replicas, --iterations and --k-max must be at least 1");
        }
        Ok(Self { tool: "qspectrum".into(), version: env!("CARGO_PKG_VERSION").into(), command, inputs, options })
    }

    /// SHA-256 over tool, version, command, input contents and options.
    pub fn hash(&self) -> String {
        let view = Hashed {
            tool: &self.tool,
            version: &self.version,
            command: self.command,
            inputs: self.inputs.iter().map(|i| (i.label.as_str(), i.sha256.as_str())).collect(),
            options: &self.options,
        };
        let bytes = serde_json::to_vec(&view).expect("manifest serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn write(&self, dir: &Path) -> anyhow::Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let stored = Stored { hash: self.hash(), manifest: self.clone() };
        let mut text = serde_json::to_string_pretty(&stored)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    /// Load a stored manifest, checking its hash and the input files it names.
    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let stored: Stored = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if stored.manifest.hash() != stored.hash {
            bail!("{}: recorded hash does not match its contents", path.display());
        }
        for input in &stored.manifest.inputs {
            input.verify()?;
        }
        Ok(stored.manifest)
    }
}
