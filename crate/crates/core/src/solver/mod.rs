//! Level-by-level spectrum extraction: bias, power-iterate, measure, deflate.
//!
//! Deflation happens on the biased operator `U = H − λ0·I`. A found level
//! with biased energy `E' = E − λ0` is removed through
//! `α_j(U) ← α_j(U) − E'·ε_j / 2^n`, which sends its eigenvalue in `U` to 0.
//! Every remaining eigenvalue of `U` stays negative, so the next ground level
//! is dominant, found levels never return, and the last level is exactly rank 1.

mod deflate;
mod measure;
mod power;
mod study;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lcu::{ApplyPath, PreparedOperator};
use crate::pauli::{CompiledOperator, PauliHamiltonian, DEFAULT_BIAS_MARGIN};
use crate::statevector::{ProductFactor, StateVector};
use crate::{derive_seed, stream_rng};

pub use deflate::deflate;
pub use measure::{measure_components, measurement_support, sampled_expectation, Components, FULL_SUPPORT_MAX_QUBITS};
pub use power::{power_iterate, PowerIteration};
pub use study::{bias_from_learning_rate, gradient_step, isolated_operator, min_iterations_to_accuracy, solve_order};

/// Chemical accuracy in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 0.0016;

/// A residual with every coefficient below this has no levels left to find.
pub const EXHAUSTION_THRESHOLD: f64 = 1e-10;

const TAG_INITIAL: u64 = 1;
const TAG_NOISE: u64 = 2;
const TAG_SHOTS: u64 = 3;
const TAG_RESTART: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BiasChoice {
    /// Coefficient bound plus margin; see [`PauliHamiltonian::default_bias`].
    #[default]
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IterationMode {
    /// Exactly `k` applications per level.
    Fixed(usize),
    /// Stop once one application moves the energy by less than `energy_tolerance / 10`.
    #[default]
    Tolerance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// One set of Z offsets for the whole solve.
    #[default]
    PerSolve,
    /// Fresh offsets for every application.
    PerIteration,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    /// `|+⟩^{⊗n}`.
    #[default]
    Uniform,
    /// Seeded random state.
    Random,
    /// Product state, Kronecker order.
    Product(Vec<ProductFactor>),
    /// Explicit amplitudes, normalized on use.
    Amplitudes(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub bias: BiasChoice,
    pub bias_margin: f64,
    pub iterations: IterationMode,
    pub k_max: usize,
    pub energy_tolerance: f64,
    pub path: ApplyPath,
    /// Relative intensity η of the `Σ δ_i Z_i` perturbation.
    pub noise: f64,
    pub noise_mode: NoiseMode,
    /// Shots per measured word; 0 means exact expectations.
    pub shots: u64,
    pub seed: u64,
    pub initial_state: InitialState,
    pub support_tolerance: f64,
    /// Random restarts allowed per level when the start state is annihilated.
    pub max_restarts: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            bias: BiasChoice::Auto,
            bias_margin: DEFAULT_BIAS_MARGIN,
            iterations: IterationMode::Tolerance,
            k_max: 10_000,
            energy_tolerance: CHEMICAL_ACCURACY,
            path: ApplyPath::Direct,
            noise: 0.0,
            noise_mode: NoiseMode::PerSolve,
            shots: 0,
            seed: 0,
            initial_state: InitialState::Uniform,
            support_tolerance: 1e-12,
            max_restarts: 4,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_max < 1 {
            return Err(Error::InvalidArgument("k_max must be at least 1".into()));
        }
        if !(self.energy_tolerance > 0.0) {
            return Err(Error::InvalidArgument("energy tolerance must be positive".into()));
        }
        if !(self.noise >= 0.0) {
            return Err(Error::InvalidArgument(format!("noise intensity must be non-negative, got {}", self.noise)));
        }
        if let IterationMode::Fixed(0) = self.iterations {
            return Err(Error::InvalidArgument("fixed iteration count must be at least 1".into()));
        }
        if let BiasChoice::Fixed(b) = self.bias {
            if !b.is_finite() {
                return Err(Error::InvalidArgument("bias must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn resolve_bias(&self, h: &PauliHamiltonian) -> f64 {
        match self.bias {
            BiasChoice::Auto => h.default_bias(self.bias_margin),
            BiasChoice::Fixed(b) => b,
        }
    }

    pub fn start_state(&self, qubits: usize) -> Result<StateVector> {
        match &self.initial_state {
            InitialState::Uniform => Ok(StateVector::uniform(qubits)),
            InitialState::Random => Ok(StateVector::random(qubits, &mut stream_rng(derive_seed(self.seed, TAG_INITIAL), 0))),
            InitialState::Product(f) => {
                if f.len() != qubits {
                    return Err(Error::LengthMismatch { expected: qubits, found: f.len() });
                }
                StateVector::product(f)
            }
            InitialState::Amplitudes(a) => {
                if a.len() != 1 << qubits {
                    return Err(Error::DimensionMismatch { expected: 1 << qubits, found: a.len() });
                }
                StateVector::from_amplitudes(a.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelStatus {
    Converged,
    /// Fixed-k run whose last step still moved the energy.
    Unconverged,
    /// Tolerance mode hit `k_max`.
    Stagnated,
    /// The residual vanished before this level; its eigenvalue is `λ0`.
    Exhausted,
}

/// Components measured for one level and the deflated coefficients they produced.
#[derive(Debug, Clone, PartialEq)]
pub struct DeflationStep {
    pub components: Components,
    pub coefficients_next: PauliHamiltonian,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    /// Position in solve order, from 0.
    pub index: usize,
    /// Reconstructed energy `E' + λ0`.
    pub energy: f64,
    /// `E' = Σ α_j(U_i) ε_j`, measured on the deflated biased operator.
    pub biased_energy: f64,
    pub status: LevelStatus,
    pub k_used: usize,
    pub restarts: usize,
    pub trace: Vec<f64>,
    pub success_probabilities: Vec<f64>,
    #[serde(skip)]
    pub state: Option<StateVector>,
    #[serde(skip)]
    pub step: Option<DeflationStep>,
}

impl Level {
    pub fn converged(&self) -> bool {
        matches!(self.status, LevelStatus::Converged | LevelStatus::Exhausted)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub qubits: usize,
    pub bias: f64,
    /// Levels in solve order.
    pub levels: Vec<Level>,
    /// Indices into `levels` by ascending energy.
    pub sorted_order: Vec<usize>,
    /// `max |α_j|` of the final deflated biased operator.
    pub residual_norm: f64,
    /// Per-qubit Z offsets of the once-per-solve noise draw (empty otherwise).
    pub noise_offsets: Vec<f64>,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn sorted_energies(&self) -> Vec<f64> {
        self.sorted_order.iter().map(|&i| self.levels[i].energy).collect()
    }

    pub fn all_converged(&self) -> bool {
        self.levels.iter().all(Level::converged)
    }
}

/// Extract all `2^n` levels of `h`.
pub fn solve_spectrum(h: &PauliHamiltonian, config: &SolverConfig) -> Result<SpectrumResult> {
    config.validate()?;
    if h.is_empty() {
        return Err(Error::EmptyHamiltonian);
    }
    let n = h.num_qubits();
    let bias = config.resolve_bias(h);
    let observable = CompiledOperator::new(h);
    let psi0 = config.start_state(n)?;
    let noise_scale = h.max_abs_coefficient();
    let mut noise_rng = stream_rng(derive_seed(config.seed, TAG_NOISE), 0);
    let noise_offsets = match config.noise_mode {
        NoiseMode::PerSolve if config.noise > 0.0 => h.noise_offsets(config.noise, noise_scale, &mut noise_rng)?,
        _ => Vec::new(),
    };

    let mut residual = h.shift(bias);
    let total = 1usize << n;
    let mut levels = Vec::with_capacity(total);
    for index in 0..total {
        if residual.max_abs_coefficient() < EXHAUSTION_THRESHOLD {
            levels.extend((index..total).map(|i| exhausted_level(i, bias)));
            break;
        }
        let noise = NoiseDraw { offsets: &noise_offsets, scale: noise_scale, rng: &mut noise_rng };
        let (run, restarts) = iterate_level(&residual, bias, &observable, &psi0, config, index, noise)?;
        let mut shot_rng = stream_rng(derive_seed(config.seed, TAG_SHOTS), index as u64);
        let components = measure_components(&residual, &run.state, config.shots, &mut shot_rng)?;
        let biased_energy = components.energy;
        let next = deflate(&residual, biased_energy, &components, config.support_tolerance);
        let status = if run.converged {
            LevelStatus::Converged
        } else if run.stagnated {
            LevelStatus::Stagnated
        } else {
            LevelStatus::Unconverged
        };
        levels.push(Level {
            index,
            energy: biased_energy + bias,
            biased_energy,
            status,
            k_used: run.k_used,
            restarts,
            trace: run.energy_trace,
            success_probabilities: run.success_probabilities,
            state: Some(run.state),
            step: Some(DeflationStep { components, coefficients_next: next.clone() }),
        });
        residual = next;
    }

    let mut sorted_order: Vec<usize> = (0..levels.len()).collect();
    sorted_order.sort_by(|&a, &b| levels[a].energy.total_cmp(&levels[b].energy));
    Ok(SpectrumResult {
        qubits: n,
        bias,
        levels,
        sorted_order,
        residual_norm: residual.max_abs_coefficient(),
        noise_offsets,
    })
}

fn exhausted_level(index: usize, bias: f64) -> Level {
    Level {
        index,
        energy: bias,
        biased_energy: 0.0,
        status: LevelStatus::Exhausted,
        k_used: 0,
        restarts: 0,
        trace: Vec::new(),
        success_probabilities: Vec::new(),
        state: None,
        step: None,
    }
}

struct NoiseDraw<'a> {
    offsets: &'a [f64],
    scale: f64,
    rng: &'a mut crate::SimRng,
}

/// Power-iterate one level, restarting from seeded random states when the
/// current start state is annihilated by the residual.
fn iterate_level(
    residual: &PauliHamiltonian,
    bias: f64,
    observable: &CompiledOperator,
    psi0: &StateVector,
    config: &SolverConfig,
    index: usize,
    noise: NoiseDraw<'_>,
) -> Result<(PowerIteration, usize)> {
    let n = residual.num_qubits();
    let NoiseDraw { offsets, scale, rng: noise_rng } = noise;
    let applied = residual.with_z_offsets(offsets);
    let fixed = match config.noise_mode {
        NoiseMode::PerIteration if config.noise > 0.0 => None,
        _ => Some(PreparedOperator::new(&applied, bias, config.path)?),
    };
    let mut start = psi0.clone();
    let mut restarts = 0;
    loop {
        let attempt = match &fixed {
            Some(op) => power::iterate(|psi| op.apply(psi), observable, &start, config),
            None => power::iterate(
                |psi| {
                    let offsets = residual.noise_offsets(config.noise, scale, noise_rng)?;
                    PreparedOperator::new(&residual.with_z_offsets(&offsets), bias, config.path)?.apply(psi)
                },
                observable,
                &start,
                config,
            ),
        };
        match attempt {
            Ok(run) => return Ok((run, restarts)),
            Err(Error::Kernel { .. }) if restarts < config.max_restarts => {
                restarts += 1;
                let mut rng = stream_rng(derive_seed(config.seed, TAG_RESTART), ((index as u64) << 16) | restarts as u64);
                start = StateVector::random(n, &mut rng);
            }
            Err(e) => return Err(e),
        }
    }
}
