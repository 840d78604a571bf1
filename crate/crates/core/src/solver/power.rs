use serde::Serialize;

use crate::error::Result;
use crate::lcu::{ApplyOutcome, PreparedOperator};
use crate::pauli::{CompiledOperator, PauliHamiltonian};
use crate::statevector::StateVector;

use super::{IterationMode, SolverConfig};

/// Outcome of one power-iteration run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerIteration {
    #[serde(skip)]
    pub state: StateVector,
    pub k_used: usize,
    /// Last energy change was below `energy_tolerance / 10`.
    pub converged: bool,
    /// Tolerance mode ran into `k_max`.
    pub stagnated: bool,
    /// Observable energy after each application.
    pub energy_trace: Vec<f64>,
    pub success_probabilities: Vec<f64>,
}

/// Repeatedly apply `U = h_shifted` to `psi0`, renormalizing each step.
///
/// `observable` is the Hamiltonian whose energy is traced and tested for
/// convergence (normally the unshifted, undeflated input).
pub fn power_iterate(
    h_shifted: &PauliHamiltonian,
    observable: &PauliHamiltonian,
    psi0: &StateVector,
    config: &SolverConfig,
) -> Result<PowerIteration> {
    config.validate()?;
    let op = PreparedOperator::new(h_shifted, 0.0, config.path)?;
    let obs = CompiledOperator::new(observable);
    iterate(|psi| op.apply(psi), &obs, psi0, config)
}

pub(crate) fn iterate<F>(mut apply: F, observable: &CompiledOperator, psi0: &StateVector, config: &SolverConfig) -> Result<PowerIteration>
where
    F: FnMut(&StateVector) -> Result<ApplyOutcome>,
{
    let threshold = config.energy_tolerance / 10.0;
    let (steps, stop_early) = match config.iterations {
        IterationMode::Fixed(k) => (k, false),
        IterationMode::Tolerance => (config.k_max, true),
    };
    let mut psi = psi0.clone();
    let mut previous = observable.expectation(psi.amplitudes());
    let mut energy_trace = Vec::new();
    let mut success_probabilities = Vec::new();
    let mut converged = false;
    for _ in 0..steps {
        let out = apply(&psi)?;
        psi = out.state;
        let e = observable.expectation(psi.amplitudes());
        energy_trace.push(e);
        success_probabilities.push(out.success_probability);
        converged = (e - previous).abs() < threshold;
        previous = e;
        if stop_early && converged {
            break;
        }
    }
    let k_used = energy_trace.len();
    Ok(PowerIteration {
        state: psi,
        k_used,
        converged,
        stagnated: stop_early && !converged,
        energy_trace,
        success_probabilities,
    })
}
