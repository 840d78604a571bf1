use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use qspectrum_core::lcu::ApplyPath;
use qspectrum_core::solver::{BiasChoice, IterationMode, NoiseMode};

#[derive(Debug, Parser)]
#[command(name = "qspectrum", version, about = "Full spectra of Pauli-sum Hamiltonians by LCU power iteration and deflation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Solve every level of each Hamiltonian and compare with exact diagonalization.
    Spectrum(RunArgs),
    /// Overlay convergence traces of the solver, VQD and SSVQE, noiseless and noisy.
    Compare(RunArgs),
    /// Replay the single-ancilla two-qubit hardware protocol with shot sampling.
    Experiment(RunArgs),
    /// Report qubit and gate counts of the LCU circuit.
    Resources(RunArgs),
    /// Re-run a recorded manifest into a new output directory.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Coefficient file (`<coefficient> <axis string>` per line); repeatable.
    #[arg(long = "hamiltonian", value_name = "FILE")]
    pub hamiltonians: Vec<PathBuf>,
    /// File of `<label> <path>` lines; paths are relative to the sweep file.
    #[arg(long, value_name = "FILE")]
    pub sweep: Option<PathBuf>,
    /// Bias λ0, or `auto`.
    #[arg(long, default_value = "auto")]
    pub bias: BiasArg,
    /// Applications per level, or `auto` to stop on the energy tolerance.
    #[arg(long, default_value = "auto")]
    pub k: KArg,
    /// Energy tolerance in Hartree.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Cap on applications per level in `auto` mode.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// `direct` applies U as a matrix-free sum; `lcu` runs the ancilla circuit
    #[arg(long, default_value = "direct")]
    pub path: ApplyPath,
    /// Relative intensity η of the Z-offset noise.
    #[arg(long)]
    pub noise: Option<f64>,
    /// `per-solve` or `per-iteration`.
    #[arg(long, default_value = "per-solve", value_parser = parse_noise_mode)]
    pub noise_mode: NoiseMode,
    /// Independent noisy runs, seeded from `--seed`
    #[arg(long)]
    pub replicas: Option<usize>,
    /// Shots per measurement; 0 reads exact probabilities.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Master seed; every random stream is derived from it
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Chain length of the hardware replica.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Output directory, created if missing
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the LCU plan of each biased Hamiltonian as JSON.
    #[arg(long)]
    pub dump_plan: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasArg(pub BiasChoice);

impl FromStr for BiasArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(BiasArg(BiasChoice::Auto));
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(BiasArg(BiasChoice::Fixed(v))),
            _ => Err(format!("expected a number or `auto`, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KArg(pub IterationMode);

impl FromStr for KArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(KArg(IterationMode::Tolerance));
        }
        match s.parse::<usize>() {
            Ok(k) if k > 0 => Ok(KArg(IterationMode::Fixed(k))),
            _ => Err(format!("expected a positive integer or `auto`, got {s:?}")),
        }
    }
}

fn parse_noise_mode(s: &str) -> Result<NoiseMode, String> {
    match s {
        "per-solve" => Ok(NoiseMode::PerSolve),
        "per-iteration" => Ok(NoiseMode::PerIteration),
        _ => Err(format!("expected per-solve or per-iteration, got {s:?}")),
    }
}
