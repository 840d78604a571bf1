use crate::error::{Error, Result};
use crate::lcu::{direct_apply, PreparedOperator};
use crate::pauli::{exact_spectrum, to_dense, CompiledOperator, ExactSpectrum, PauliHamiltonian};
use crate::statevector::StateVector;

use super::{deflate, measure_components, SolverConfig};

/// Oracle eigen-indices in the order the solver finds them for bias `bias`:
/// largest `|E − λ0|` first, ties broken by lower energy.
pub fn solve_order(spectrum: &ExactSpectrum, bias: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..spectrum.len()).collect();
    order.sort_by(|&a, &b| {
        let (ea, eb) = (spectrum.eigenvalues[a], spectrum.eigenvalues[b]);
        (eb - bias).abs().total_cmp(&(ea - bias).abs()).then(ea.total_cmp(&eb))
    });
    order
}

/// Biased operator with the first `level` oracle eigenpairs (in solve order)
/// removed by exact-component deflation, and the oracle energy it should yield next.
pub fn isolated_operator(h: &PauliHamiltonian, level: usize, config: &SolverConfig) -> Result<(PauliHamiltonian, f64)> {
    let bias = config.resolve_bias(h);
    let spectrum = exact_spectrum(&to_dense(h)?)?;
    if level >= spectrum.len() {
        return Err(Error::InvalidArgument(format!("level {level} out of range for {} levels", spectrum.len())));
    }
    let order = solve_order(&spectrum, bias);
    let mut u = h.shift(bias);
    let mut rng = crate::seeded_rng(0);
    for &k in &order[..level] {
        let comps = measure_components(&u, &spectrum.eigenstate(k), 0, &mut rng)?;
        u = deflate(&u, spectrum.eigenvalues[k] - bias, &comps, config.support_tolerance);
    }
    Ok((u, spectrum.eigenvalues[order[level]]))
}

/// Smallest number of applications after which the energy of `level`
/// (0-based, solve order) is within `config.energy_tolerance` of the oracle.
///
/// Earlier levels are removed with exact oracle eigenvectors so the count
/// reflects this level alone.
pub fn min_iterations_to_accuracy(h: &PauliHamiltonian, level: usize, config: &SolverConfig) -> Result<usize> {
    config.validate()?;
    let (u, target) = isolated_operator(h, level, config)?;
    let op = PreparedOperator::new(&u, config.resolve_bias(h), config.path)?;
    let obs = CompiledOperator::new(h);
    let mut psi = config.start_state(h.num_qubits())?;
    for k in 1..=config.k_max {
        psi = op.apply(&psi)?.state;
        if (obs.expectation(psi.amplitudes()) - target).abs() < config.energy_tolerance {
            return Ok(k);
        }
    }
    Err(Error::IterationLimit { k_max: config.k_max })
}

/// Bias equivalent to a gradient-descent learning rate: `λ0 = 1/(2γ)`.
pub fn bias_from_learning_rate(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!("learning rate must be positive, got {gamma}")));
    }
    Ok(0.5 / gamma)
}

/// One normalized gradient step on the energy, `(I − 2γH)|ψ⟩`.
pub fn gradient_step(h: &PauliHamiltonian, psi: &StateVector, gamma: f64) -> Result<StateVector> {
    let step = h.scaled(-2.0 * gamma).shift(-1.0);
    Ok(direct_apply(&step, psi)?.state)
}
