pub mod compare;
pub mod experiment;
pub mod resources;
pub mod spectrum;

use anyhow::anyhow;
use qspectrum_core::solver::{InitialState, SolverConfig};
use qspectrum_core::PauliHamiltonian;

use crate::input::InputFile;
use crate::manifest::Options;
use crate::Failure;

pub(crate) fn load_all(inputs: &[InputFile]) -> Result<Vec<PauliHamiltonian>, Failure> {
    inputs.iter().map(|i| i.load().map_err(Failure::Input)).collect()
}

pub(crate) fn single_input(inputs: &[InputFile], command: &str) -> Result<(), Failure> {
    if inputs.len() != 1 {
        return Err(Failure::Input(anyhow!("{command} takes exactly one Hamiltonian, got {}", inputs.len())));
    }
    Ok(())
}

pub(crate) fn solver_config(o: &Options, seed: u64) -> SolverConfig {
    SolverConfig {
        bias: o.bias,
        iterations: o.iterations,
        k_max: o.k_max,
        energy_tolerance: o.tolerance,
        path: o.path,
        noise: o.noise,
        noise_mode: o.noise_mode,
        shots: o.shots,
        seed,
        initial_state: InitialState::Uniform,
        ..SolverConfig::default()
    }
}
