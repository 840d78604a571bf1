//! Variational excited-state baselines (VQD and SSVQE) on a hardware-efficient ansatz.

mod ansatz;
mod optimize;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{CompiledOperator, PauliHamiltonian};
use crate::statevector::StateVector;
use crate::{derive_seed, stream_rng};

pub use ansatz::{HardwareEfficientAnsatz, DEFAULT_DEPTH};
pub use optimize::{gradient, optimize, optimize_monitored, Optimized, OptimizerSettings};

const TAG_PARAMS: u64 = 11;
const TAG_NOISE: u64 = 12;

/// `⟨φ|H|φ⟩ + Σ_j β_j |⟨φ|found_j⟩|²` with `φ = A(params)|initial⟩`.
pub fn vqd_objective(
    ansatz: &HardwareEfficientAnsatz,
    params: &[f64],
    initial: &StateVector,
    h: &CompiledOperator,
    found: &[StateVector],
    betas: &[f64],
) -> Result<f64> {
    if found.len() != betas.len() {
        return Err(Error::LengthMismatch { expected: found.len(), found: betas.len() });
    }
    let phi = ansatz.prepare(params, initial)?;
    Ok(penalized_energy(&phi, h, found, betas))
}

/// VQD value of an explicit trial state.
pub fn penalized_energy(phi: &StateVector, h: &CompiledOperator, found: &[StateVector], betas: &[f64]) -> f64 {
    let penalty: f64 = found.iter().zip(betas).map(|(f, b)| b * phi.inner(f).norm_sqr()).sum();
    h.expectation(phi.amplitudes()) + penalty
}

/// `Σ_i w_i ⟨init_i| A† H A |init_i⟩` for one shared ansatz.
pub fn ssvqe_objective(
    ansatz: &HardwareEfficientAnsatz,
    params: &[f64],
    h: &CompiledOperator,
    initial_states: &[StateVector],
    weights: &[f64],
) -> Result<f64> {
    if initial_states.len() != weights.len() {
        return Err(Error::LengthMismatch { expected: initial_states.len(), found: weights.len() });
    }
    let mut total = 0.0;
    for (init, w) in initial_states.iter().zip(weights) {
        total += w * h.expectation(ansatz.prepare(params, init)?.amplitudes());
    }
    Ok(total)
}

/// Default VQD penalty: twice the non-identity coefficient sum, which exceeds
/// the spectral width.
pub fn default_penalty(h: &PauliHamiltonian) -> f64 {
    2.0 * h.nonidentity_abs_sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VqdConfig {
    pub depth: usize,
    /// Levels to find, ground first.
    pub levels: usize,
    /// Per-found-state penalties; `None` uses [`default_penalty`] for all.
    pub betas: Option<Vec<f64>>,
    pub optimizer: OptimizerSettings,
    /// Relative intensity of a static `Σ δ_i Z_i` error on the evaluated Hamiltonian.
    pub noise: f64,
    pub seed: u64,
}

impl Default for VqdConfig {
    fn default() -> Self {
        Self { depth: DEFAULT_DEPTH, levels: 2, betas: None, optimizer: OptimizerSettings::default(), noise: 0.0, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VqdLevel {
    /// Noiseless energy of the optimized state.
    pub energy: f64,
    pub run: Optimized,
    #[serde(skip)]
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VqdResult {
    pub betas: Vec<f64>,
    pub levels: Vec<VqdLevel>,
}

/// Sequential VQD: level k minimizes the energy penalized by overlaps with
/// levels `0..k`. Traces record the noiseless energy as the monitor.
pub fn run_vqd(h: &PauliHamiltonian, initial: &StateVector, config: &VqdConfig) -> Result<VqdResult> {
    let n = h.num_qubits();
    let ansatz = HardwareEfficientAnsatz::new(n, config.depth);
    let betas = match &config.betas {
        Some(b) if b.len() + 1 < config.levels => {
            return Err(Error::InvalidArgument(format!("{} penalties given for {} levels", b.len(), config.levels)))
        }
        Some(b) => b.clone(),
        None => vec![default_penalty(h); config.levels.saturating_sub(1)],
    };
    let nominal = CompiledOperator::new(h);
    let evaluated = CompiledOperator::new(&noisy(h, config.noise, config.seed)?);
    let mut found: Vec<StateVector> = Vec::new();
    let mut levels = Vec::with_capacity(config.levels);
    for level in 0..config.levels {
        let b = &betas[..level];
        let objective = |p: &[f64]| vqd_objective(&ansatz, p, initial, &evaluated, &found, b);
        let monitor = |p: &[f64]| Ok(nominal.expectation(ansatz.prepare(p, initial)?.amplitudes()));
        let start = random_params(ansatz.num_params(), config.seed, level as u64);
        let run = optimize_monitored(&objective, monitor, &start, &config.optimizer)?;
        let state = ansatz.prepare(&run.best_params, initial)?;
        let energy = nominal.expectation(state.amplitudes());
        found.push(state.clone());
        levels.push(VqdLevel { energy, run, state });
    }
    Ok(VqdResult { betas, levels })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SsvqeConfig {
    pub depth: usize,
    /// Strictly descending positive weights, one per initial state.
    pub weights: Vec<f64>,
    /// Computational-basis indices of the orthogonal initial states.
    pub initial_basis: Vec<usize>,
    pub optimizer: OptimizerSettings,
    pub noise: f64,
    pub seed: u64,
}

impl Default for SsvqeConfig {
    fn default() -> Self {
        Self {
            depth: DEFAULT_DEPTH,
            weights: vec![0.8, 0.2],
            initial_basis: vec![0, 1],
            optimizer: OptimizerSettings::default(),
            noise: 0.0,
            seed: 0,
        }
    }
}

impl SsvqeConfig {
    pub fn validate(&self, qubits: usize) -> Result<Vec<StateVector>> {
        if self.weights.is_empty() || self.weights.len() != self.initial_basis.len() {
            return Err(Error::InvalidArgument("need one weight per initial state".into()));
        }
        if self.weights.iter().any(|w| !(*w > 0.0)) || self.weights.windows(2).any(|p| p[1] >= p[0]) {
            return Err(Error::InvalidArgument("weights must be positive and strictly descending".into()));
        }
        let states: Vec<StateVector> = self
            .initial_basis
            .iter()
            .map(|&b| {
                if b >= 1 << qubits {
                    Err(Error::InvalidArgument(format!("basis index {b} out of range")))
                } else {
                    Ok(StateVector::basis(qubits, b))
                }
            })
            .collect::<Result<_>>()?;
        check_orthonormal(&states)?;
        Ok(states)
    }
}

/// Pairwise overlaps must vanish within 1e-10.
pub fn check_orthonormal(states: &[StateVector]) -> Result<()> {
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            let o = a.overlap_abs(b);
            if o > 1e-10 {
                return Err(Error::InvalidArgument(format!("initial states not orthogonal (overlap {o:e})")));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsvqeResult {
    pub weights: Vec<f64>,
    pub run: Optimized,
    /// Noiseless weighted value at the best parameters.
    pub value: f64,
    /// Noiseless energy of each mapped initial state.
    pub energies: Vec<f64>,
}

/// Single weighted minimization; the monitor is the noiseless weighted value.
pub fn run_ssvqe(h: &PauliHamiltonian, config: &SsvqeConfig) -> Result<SsvqeResult> {
    let n = h.num_qubits();
    let inits = config.validate(n)?;
    let ansatz = HardwareEfficientAnsatz::new(n, config.depth);
    let nominal = CompiledOperator::new(h);
    let evaluated = CompiledOperator::new(&noisy(h, config.noise, config.seed)?);
    let objective = |p: &[f64]| ssvqe_objective(&ansatz, p, &evaluated, &inits, &config.weights);
    let monitor = |p: &[f64]| ssvqe_objective(&ansatz, p, &nominal, &inits, &config.weights);
    let start = random_params(ansatz.num_params(), config.seed, 0);
    let run = optimize_monitored(&objective, monitor, &start, &config.optimizer)?;
    let value = monitor(&run.best_params)?;
    let energies = inits
        .iter()
        .map(|s| Ok(nominal.expectation(ansatz.prepare(&run.best_params, s)?.amplitudes())))
        .collect::<Result<_>>()?;
    Ok(SsvqeResult { weights: config.weights.clone(), run, value, energies })
}

/// `Σ_i w_i E_i` over the lowest oracle eigenvalues.
pub fn ssvqe_target(eigenvalues: &[f64], weights: &[f64]) -> f64 {
    weights.iter().zip(eigenvalues).map(|(w, e)| w * e).sum()
}

fn noisy(h: &PauliHamiltonian, eta: f64, seed: u64) -> Result<PauliHamiltonian> {
    h.add_noise(eta, &mut stream_rng(derive_seed(seed, TAG_NOISE), 0))
}

/// Uniform angles in `[−π, π)` from a per-run stream.
pub fn random_params(count: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = stream_rng(derive_seed(seed, TAG_PARAMS), stream);
    (0..count).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{exact_spectrum, to_dense};
    use approx::assert_abs_diff_eq;

    fn two_level() -> PauliHamiltonian {
        PauliHamiltonian::from_strs(&[(-1.04235, "I"), (0.1813, "X"), (-0.78865, "Z")]).unwrap()
    }

    #[test]
    fn vqd_penalty_examples() {
        let h = two_level();
        let op = CompiledOperator::new(&h);
        let spec = exact_spectrum(&to_dense(&h).unwrap()).unwrap();
        let (g, e) = (spec.eigenstate(0), spec.eigenstate(1));
        assert_abs_diff_eq!(penalized_energy(&g, &op, &[], &[]), spec.eigenvalues[0], epsilon = 1e-12);
        assert_abs_diff_eq!(penalized_energy(&g, &op, &[g.clone()], &[10.0]), spec.eigenvalues[0] + 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(penalized_energy(&e, &op, &[g], &[10.0]), spec.eigenvalues[1], epsilon = 1e-12);
    }

    #[test]
    fn ssvqe_identity_ansatz_is_weighted_diagonal() {
        let h = PauliHamiltonian::from_strs(&[(0.5, "ZI"), (-0.25, "IZ"), (0.1, "II")]).unwrap();
        let op = CompiledOperator::new(&h);
        let a = HardwareEfficientAnsatz::new(2, 1);
        let inits: Vec<_> = (0..4).map(|b| StateVector::basis(2, b)).collect();
        let w = [0.4, 0.3, 0.2, 0.1];
        let diag = [0.1 + 0.5 - 0.25, 0.1 + 0.5 + 0.25, 0.1 - 0.5 - 0.25, 0.1 - 0.5 + 0.25];
        let expect: f64 = w.iter().zip(diag).map(|(a, b)| a * b).sum();
        assert_abs_diff_eq!(ssvqe_objective(&a, &[0.0; 4], &op, &inits, &w).unwrap(), expect, epsilon = 1e-12);
        // Equal weights: order of the initial states does not matter.
        let eq = [0.25; 4];
        let params = random_params(4, 1, 0);
        let rev: Vec<_> = inits.iter().rev().cloned().collect();
        assert_abs_diff_eq!(
            ssvqe_objective(&a, &params, &op, &inits, &eq).unwrap(),
            ssvqe_objective(&a, &params, &op, &rev, &eq).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn ssvqe_config_checks() {
        assert!(SsvqeConfig { weights: vec![0.2, 0.8], ..SsvqeConfig::default() }.validate(1).is_err());
        assert!(SsvqeConfig { initial_basis: vec![0, 0], ..SsvqeConfig::default() }.validate(1).is_err());
        assert_eq!(SsvqeConfig::default().validate(1).unwrap().len(), 2);
    }

    #[test]
    fn vqd_two_level_reaches_ground() {
        let h = two_level();
        let cfg = VqdConfig { depth: 2, levels: 1, ..VqdConfig::default() };
        let r = run_vqd(&h, &StateVector::uniform(1), &cfg).unwrap();
        assert!((r.levels[0].energy + 1.85157093).abs() < 0.0016);
        assert!(r.levels[0].run.best_value <= r.levels[0].run.trace[0]);
    }

    #[test]
    fn ssvqe_target_value() {
        let spec = exact_spectrum(&to_dense(&two_level()).unwrap()).unwrap();
        assert_abs_diff_eq!(ssvqe_target(&spec.eigenvalues, &[0.8, 0.2]), -1.527882, epsilon = 1e-6);
    }
}
