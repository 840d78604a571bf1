//! Single-ancilla replica of the two-qubit hardware protocol.
//!
//! A two-level Hamiltonian `H = α0·I + αx·X + αz·Z` is biased and written as a
//! two-term combination `(α0 − λ0)·I + r·W` with `W = (αx·X + αz·Z)/r`, so one
//! ancilla rotated by `Ry(β)` carries the whole encoding. Each iteration
//! prepares the work qubit with `Ry(θ)`, applies the LCU step, measures the
//! work qubit in the Z and X bases, and feeds `θ = −2·asin(√p1)` forward.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::try_map_range;
use crate::pauli::PauliHamiltonian;
use crate::statevector::{hadamard_matrix, sample_shots, RegisterLayout, StateVector};
use crate::{derive_seed, stream_rng};

/// Ancilla angle that encodes the ground-state operator on hardware.
pub const HARDWARE_BETA: f64 = -2.6897;
/// Start state `|+⟩`.
pub const INITIAL_THETA: f64 = PI / 2.0;

const WORK: usize = 0;
const ANCILLA: usize = 1;
const TAG_REPLICA: u64 = 21;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelHamiltonian {
    pub alpha0: f64,
    pub alpha_x: f64,
    pub alpha_z: f64,
}

impl TwoLevelHamiltonian {
    /// Two-configuration H₂ coefficients used on hardware.
    pub const H2: TwoLevelHamiltonian = TwoLevelHamiltonian { alpha0: -1.04235, alpha_x: 0.1813, alpha_z: -0.78865 };

    pub fn new(alpha0: f64, alpha_x: f64, alpha_z: f64) -> Result<Self> {
        if ![alpha0, alpha_x, alpha_z].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("coefficients must be finite".into()));
        }
        Ok(Self { alpha0, alpha_x, alpha_z })
    }

    /// `√(αx² + αz²)`, the weight of the traceless part.
    pub fn r(&self) -> f64 {
        self.alpha_x.hypot(self.alpha_z)
    }

    /// Closed-form eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        [self.alpha0 - self.r(), self.alpha0 + self.r()]
    }

    /// `α0 + αx·εx + αz·εz`.
    pub fn energy(&self, eps_x: f64, eps_z: f64) -> f64 {
        self.alpha0 + self.alpha_x * eps_x + self.alpha_z * eps_z
    }

    pub fn to_pauli(&self) -> PauliHamiltonian {
        PauliHamiltonian::from_strs(&[(self.alpha0, "I"), (self.alpha_x, "X"), (self.alpha_z, "Z")]).expect("fixed words")
    }

    /// Dense `[[α0+αz, αx], [αx, α0−αz]]` applied to a real-or-complex amplitude pair.
    pub fn apply_shifted(&self, bias: f64, psi: &[Complex64]) -> [Complex64; 2] {
        let a = self.alpha0 - bias;
        [(a + self.alpha_z) * psi[0] + self.alpha_x * psi[1], self.alpha_x * psi[0] + (a - self.alpha_z) * psi[1]]
    }

    /// Unit `W = (αx·X + αz·Z)/r` as a gate matrix.
    fn w_gate(&self) -> [[Complex64; 2]; 2] {
        let r = self.r();
        let (x, z) = if r > 0.0 { (self.alpha_x / r, self.alpha_z / r) } else { (0.0, 1.0) };
        let c = |v: f64| Complex64::new(v, 0.0);
        [[c(z), c(x)], [c(x), c(-z)]]
    }
}

/// Ancilla angle with `Ry(β)|0⟩ ∝ ±((α0 − λ0), r)`, wrapped into (−π, π].
pub fn encode_angle(h: &TwoLevelHamiltonian, bias: f64) -> Result<f64> {
    let a = h.alpha0 - bias;
    let r = h.r();
    if a == 0.0 && r == 0.0 {
        return Err(Error::ZeroOperator);
    }
    Ok(wrap_angle(2.0 * r.atan2(a)))
}

/// Bias implied by an ancilla angle: `λ0 = α0 − r·cot(β/2)`.
pub fn recover_bias(h: &TwoLevelHamiltonian, beta: f64) -> Result<f64> {
    let t = (0.5 * beta).tan();
    if t == 0.0 || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("angle {beta} does not determine a bias")));
    }
    Ok(h.alpha0 - h.r() / t)
}

fn wrap_angle(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y <= -PI {
        y += 2.0 * PI;
    } else if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// `θ = −2·asin(√p1)`.
pub fn theta_update(p1: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::InvalidArgument(format!("probability {p1} outside [0, 1]")));
    }
    Ok(-2.0 * p1.sqrt().asin())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub theta_in: f64,
    pub p0: f64,
    pub p1: f64,
    pub p0_h: f64,
    pub p1_h: f64,
    pub eps_z: f64,
    pub eps_x: f64,
    pub energy: f64,
    pub theta_out: f64,
    /// Postselection probability of the Z-basis circuit.
    pub success_probability: f64,
}

/// Joint state right before measurement: work `Ry(θ)`, ancilla `Ry(β)`,
/// controlled `W`, ancilla Hadamard, and optionally a work Hadamard.
fn circuit(theta: f64, beta: f64, h: &TwoLevelHamiltonian, x_basis: bool) -> Result<StateVector> {
    let mut s = StateVector::zero(2);
    s.apply_ry(WORK, theta)?;
    s.apply_ry(ANCILLA, beta)?;
    s.apply_controlled_gate(ANCILLA, WORK, &h.w_gate())?;
    s.apply_hadamard(ANCILLA)?;
    if x_basis {
        s.apply_gate(WORK, &hadamard_matrix())?;
    }
    Ok(s)
}

/// Work-qubit distribution given ancilla `|0⟩`, and the postselection probability.
fn exact_readout(state: &StateVector) -> Result<([f64; 2], f64)> {
    let layout = RegisterLayout::new(1, 1);
    let (work, p) = state.postselect_branch(&layout, 0)?;
    let p1 = work.amplitude(1).norm_sqr();
    Ok(([1.0 - p1, p1], p))
}

fn sampled_readout<R: Rng + ?Sized>(state: &StateVector, shots: u64, rng: &mut R) -> Result<([f64; 2], f64)> {
    // Bitstrings read ancilla then work: "a w".
    let counts = sample_shots(state, &[WORK, ANCILLA], shots, rng)?;
    let (n0, n1) = (counts.count("00"), counts.count("01"));
    let kept = n0 + n1;
    if kept == 0 {
        return Err(Error::ShotStarvation { shots });
    }
    let p1 = n1 as f64 / kept as f64;
    Ok(([n0 as f64 / kept as f64, p1], kept as f64 / shots as f64))
}

/// One hardware iteration; `shots == 0` reads exact probabilities.
pub fn run_iteration<R: Rng + ?Sized>(
    theta: f64,
    beta: f64,
    h: &TwoLevelHamiltonian,
    shots: u64,
    rng: &mut R,
) -> Result<IterationRecord> {
    let z_state = circuit(theta, beta, h, false)?;
    let x_state = circuit(theta, beta, h, true)?;
    let ((pz, success), (px, _)) = if shots == 0 {
        (exact_readout(&z_state)?, exact_readout(&x_state)?)
    } else {
        (sampled_readout(&z_state, shots, rng)?, sampled_readout(&x_state, shots, rng)?)
    };
    let eps_z = pz[0] - pz[1];
    let eps_x = px[0] - px[1];
    Ok(IterationRecord {
        theta_in: theta,
        p0: pz[0],
        p1: pz[1],
        p0_h: px[0],
        p1_h: px[1],
        eps_z,
        eps_x,
        energy: h.energy(eps_x, eps_z),
        theta_out: theta_update(pz[1])?,
        success_probability: success,
    })
}

/// Chain `iterations` steps from `theta0`.
pub fn run_chain<R: Rng + ?Sized>(
    h: &TwoLevelHamiltonian,
    beta: f64,
    theta0: f64,
    iterations: usize,
    shots: u64,
    rng: &mut R,
) -> Result<Vec<IterationRecord>> {
    let mut theta = theta0;
    let mut out = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        let rec = run_iteration(theta, beta, h, shots, rng)?;
        theta = rec.theta_out;
        out.push(rec);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub mean: f64,
    /// Largest deviation of a replica from the mean.
    pub error_bar: f64,
    pub replicas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentTrace {
    pub beta: f64,
    pub bias: f64,
    pub shots: u64,
    pub points: Vec<TracePoint>,
    pub records: Vec<Vec<IterationRecord>>,
}

impl ExperimentTrace {
    pub fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub iterations: usize,
    pub shots: u64,
    pub replicas: usize,
    pub seed: u64,
    pub theta0: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self { iterations: 10, shots: 10_000, replicas: 3, seed: 0, theta0: INITIAL_THETA }
    }
}

/// Independent replicas of the chain, each on its own seeded stream.
pub fn run_experiment(h: &TwoLevelHamiltonian, bias: f64, config: &ExperimentConfig) -> Result<ExperimentTrace> {
    if config.iterations < 1 || config.replicas < 1 {
        return Err(Error::InvalidArgument("iterations and replicas must be at least 1".into()));
    }
    let beta = encode_angle(h, bias)?;
    let records = try_map_range(config.replicas, |r| {
        let mut rng = stream_rng(derive_seed(config.seed, TAG_REPLICA), r as u64);
        run_chain(h, beta, config.theta0, config.iterations, config.shots, &mut rng)
    })?;
    let points = (0..config.iterations)
        .map(|i| {
            let replicas: Vec<f64> = records.iter().map(|chain| chain[i].energy).collect();
            let mean = replicas.iter().sum::<f64>() / replicas.len() as f64;
            let error_bar = replicas.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
            TracePoint { iteration: i + 1, mean, error_bar, replicas }
        })
        .collect();
    Ok(ExperimentTrace { beta, bias, shots: config.shots, points, records })
}

/// Deflate a found level out of `h` in the biased frame from its measured
/// energy and components (`ε_0 = 1`; `ε_y` is not measured).
///
/// The returned Hamiltonian keeps the same bias convention, so encoding it
/// with the same `λ0` targets the next level.
pub fn deflate_two_level(h: &TwoLevelHamiltonian, bias: f64, energy: f64, eps_x: f64, eps_z: f64) -> TwoLevelHamiltonian {
    let biased = energy - bias;
    TwoLevelHamiltonian {
        alpha0: h.alpha0 - biased / 2.0,
        alpha_x: h.alpha_x - biased * eps_x / 2.0,
        alpha_z: h.alpha_z - biased * eps_z / 2.0,
    }
}
