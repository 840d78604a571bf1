//! Deflation and convergence invariants, each checked on one seeded instance.
//!
//! Shared by the integration tests and the acceptance harness.

use qspectrum_core::pauli::{exact_spectrum_of, CompiledOperator};
use qspectrum_core::solver::{deflate, measure_components, solve_order, InitialState, IterationMode};
use qspectrum_core::{
    build_plan, direct_apply, exact_spectrum, lcu_apply, seeded_rng, solve_spectrum, to_dense, ApplyPath, Error, PauliHamiltonian,
    PreparedOperator, SolverConfig, StateVector,
};
use rand::Rng;

use super::{phase_aligned_distance, random_hamiltonian};

pub type Check = Result<(), String>;

pub fn instance(seed: u64, max_qubits: usize) -> PauliHamiltonian {
    let mut rng = seeded_rng(seed);
    let n = rng.random_range(1..=max_qubits);
    let terms = rng.random_range(1..=12);
    random_hamiltonian(n, terms, &mut rng)
}

fn eigenvalues(h: &PauliHamiltonian) -> Vec<f64> {
    exact_spectrum(&to_dense(h).unwrap()).unwrap().eigenvalues
}

/// Deflating an exact eigenpair annihilates the eigenvector and sends only
/// its eigenvalue to zero.
pub fn annihilation_and_preservation(seed: u64) -> Check {
    let h = instance(seed, 3);
    let spec = exact_spectrum(&to_dense(&h).unwrap()).unwrap();
    let k = seeded_rng(seed ^ 0x5a).random_range(0..spec.len());
    let v = spec.eigenstate(k);
    let e = spec.eigenvalues[k];
    let comps = measure_components(&h, &v, 0, &mut seeded_rng(0)).unwrap();
    let d = deflate(&h, e, &comps, 1e-12);
    let dense = to_dense(&d).unwrap();

    let image = dense.apply(&v).unwrap();
    let norm = image.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm >= 1e-9 {
        return Err(format!("seed {seed}: ‖D v‖ = {norm:e}"));
    }
    let mut expected: Vec<f64> = spec.eigenvalues.clone();
    expected[k] = 0.0;
    expected.sort_by(f64::total_cmp);
    let got = exact_spectrum_of(dense.matrix().clone()).unwrap().eigenvalues;
    for (a, b) in got.iter().zip(&expected) {
        if (a - b).abs() >= 1e-9 {
            return Err(format!("seed {seed}: deflated spectrum {got:?} vs {expected:?}"));
        }
    }
    Ok(())
}

/// After `i` exact deflations under the common bias, the dominant eigenvalue of
/// the residual is the `(i+1)`-th smallest original eigenvalue minus `λ0`.
pub fn dominance_transfer(seed: u64) -> Check {
    let h = instance(seed, 3);
    let bias = h.default_bias(0.1);
    let spec = exact_spectrum(&to_dense(&h).unwrap()).unwrap();
    let mut u = h.shift(bias);
    for i in 0..spec.len() {
        let residual = eigenvalues(&u);
        let dominant = residual.iter().copied().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap();
        let want = spec.eigenvalues[i] - bias;
        if (dominant - want).abs() >= 1e-9 {
            return Err(format!("seed {seed}, step {i}: dominant {dominant} vs {want}"));
        }
        let comps = measure_components(&u, &spec.eigenstate(i), 0, &mut seeded_rng(0)).unwrap();
        u = deflate(&u, want, &comps, 1e-12);
    }
    if solve_order(&spec, bias) != (0..spec.len()).collect::<Vec<_>>() {
        return Err(format!("seed {seed}: auto bias does not give ascending solve order"));
    }
    Ok(())
}

/// After `2^n − 1` converged solver levels the residual has rank one.
pub fn rank_one_terminal(seed: u64) -> Check {
    let h = instance(seed, 3);
    let cfg = SolverConfig {
        energy_tolerance: 1e-12,
        k_max: 1_000_000,
        initial_state: InitialState::Random,
        seed,
        ..SolverConfig::default()
    };
    let r = solve_spectrum(&h, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
    let total = r.levels.len();
    if r.levels[..total - 1].iter().any(|l| !l.converged()) {
        return Err(format!("seed {seed}: an early level did not converge"));
    }
    let residual = match &r.levels[total - 2.min(total)].step {
        Some(step) if total >= 2 => step.coefficients_next.clone(),
        _ => h.shift(r.bias),
    };
    if residual.max_abs_coefficient() < 1e-10 {
        return Ok(());
    }
    let ev = eigenvalues(&residual);
    let big = ev.iter().filter(|e| e.abs() >= 1e-6).count();
    if big > 1 {
        return Err(format!("seed {seed}: residual eigenvalues {ev:?}"));
    }
    Ok(())
}

/// `|⟨ψ_k|v_dom⟩|` never decreases along the iteration.
pub fn monotone_overlap(seed: u64) -> Check {
    let h = instance(seed, 3);
    let bias = h.default_bias(0.1);
    let u = h.shift(bias);
    let spec = exact_spectrum(&to_dense(&u).unwrap()).unwrap();
    let mags: Vec<f64> = spec.eigenvalues.iter().map(|e| e.abs()).collect();
    let top = (0..mags.len()).max_by(|&a, &b| mags[a].total_cmp(&mags[b])).unwrap();
    if mags.iter().enumerate().any(|(i, m)| i != top && mags[top] - m < 1e-6) {
        return Ok(());
    }
    let v = spec.eigenstate(top);
    let op = PreparedOperator::new(&u, bias, ApplyPath::Direct).unwrap();
    let mut psi = StateVector::random(h.num_qubits(), &mut seeded_rng(seed ^ 7));
    let mut prev = psi.overlap_abs(&v);
    for k in 0..200 {
        psi = op.apply(&psi).map_err(|e| format!("seed {seed}: {e}"))?.state;
        let now = psi.overlap_abs(&v);
        if now < prev - 1e-12 {
            return Err(format!("seed {seed}, step {k}: overlap fell {prev} → {now}"));
        }
        prev = now;
    }
    Ok(())
}

/// Smallest gap between consecutive oracle eigenvalues.
pub fn min_gap(h: &PauliHamiltonian) -> f64 {
    eigenvalues(h).windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// LCU and direct paths give the same energy traces at zero shots.
///
/// Only nondegenerate spectra: inside a degenerate eigenspace the later
/// partners grow out of rounding error, which differs between the paths.
pub fn path_independence(seed: u64) -> Check {
    let h = instance(seed, 3);
    if min_gap(&h) <= 1e-6 {
        return Ok(());
    }
    let base = SolverConfig { iterations: IterationMode::Fixed(40), initial_state: InitialState::Random, seed, ..SolverConfig::default() };
    let a = solve_spectrum(&h, &SolverConfig { path: ApplyPath::Direct, ..base.clone() }).map_err(|e| e.to_string())?;
    let b = solve_spectrum(&h, &SolverConfig { path: ApplyPath::Lcu, ..base }).map_err(|e| e.to_string())?;
    for (la, lb) in a.levels.iter().zip(&b.levels) {
        if la.trace.len() != lb.trace.len() {
            return Err(format!("seed {seed}: trace lengths differ"));
        }
        if let Some((x, y)) = la.trace.iter().zip(&lb.trace).find(|(x, y)| (*x - *y).abs() >= 1e-9) {
            return Err(format!("seed {seed}, level {}: {x} vs {y}", la.index));
        }
    }
    Ok(())
}

/// Energy readout through the compiled observable agrees with the dense oracle.
pub fn observable_consistency(seed: u64) -> Check {
    let h = instance(seed, 3);
    let psi = StateVector::random(h.num_qubits(), &mut seeded_rng(seed));
    let a = CompiledOperator::new(&h).expectation(psi.amplitudes());
    let b = to_dense(&h).unwrap().expectation(&psi).unwrap();
    if (a - b).abs() >= 1e-10 {
        return Err(format!("seed {seed}: {a} vs {b}"));
    }
    Ok(())
}

/// Full spectrum from the solver against the oracle: every eigenvalue within
/// 1e-4, and eigenvectors with `|overlap| > 0.999` wherever the gap exceeds 1e-6.
pub fn oracle_spectrum_equivalence(seed: u64) -> Check {
    let h = instance(seed, 3);
    let cfg = SolverConfig {
        energy_tolerance: 1e-9,
        k_max: 1_000_000,
        initial_state: InitialState::Random,
        seed,
        ..SolverConfig::default()
    };
    let r = solve_spectrum(&h, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
    let spec = exact_spectrum(&to_dense(&h).unwrap()).unwrap();
    let got = r.sorted_energies();
    if got.len() != spec.len() {
        return Err(format!("seed {seed}: {} levels for {} eigenvalues", got.len(), spec.len()));
    }
    for (a, b) in got.iter().zip(&spec.eigenvalues) {
        if (a - b).abs() >= 1e-4 {
            return Err(format!("seed {seed}: energies {got:?} vs oracle {:?}", spec.eigenvalues));
        }
    }
    let ev = &spec.eigenvalues;
    for level in &r.levels {
        let Some(state) = &level.state else { continue };
        let k = (0..ev.len()).min_by(|&a, &b| (ev[a] - level.energy).abs().total_cmp(&(ev[b] - level.energy).abs())).unwrap();
        let isolated = (k == 0 || ev[k] - ev[k - 1] > 1e-6) && (k + 1 == ev.len() || ev[k + 1] - ev[k] > 1e-6);
        if isolated && state.overlap_abs(&spec.eigenstate(k)) <= 0.999 {
            return Err(format!("seed {seed}, level {}: overlap {}", level.index, state.overlap_abs(&spec.eigenstate(k))));
        }
    }
    Ok(())
}

/// One random `(H, ψ)` application through the ancilla circuit, the direct
/// Pauli sum and the dense matrix. `Ok(false)` when ψ lies in the kernel.
pub fn lcu_direct_equivalence(seed: u64) -> Result<bool, String> {
    let mut rng = seeded_rng(seed);
    let n = rng.random_range(1..=4);
    let h = random_hamiltonian(n, rng.random_range(1..=12), &mut rng);
    let bias = h.default_bias(0.1);
    let u = h.shift(bias);
    let psi = StateVector::random(n, &mut rng);
    let plan = build_plan(&u, bias).unwrap();
    let lcu = match lcu_apply(&plan, &psi) {
        Err(Error::Kernel { .. }) => return Ok(false),
        r => r.map_err(|e| format!("seed {seed}: {e}"))?,
    };
    let direct = direct_apply(&u, &psi).map_err(|e| format!("seed {seed}: {e}"))?;
    let d = phase_aligned_distance(lcu.state.amplitudes(), direct.state.amplitudes());
    if d >= 1e-10 {
        return Err(format!("seed {seed}: states differ by {d:e}"));
    }
    let expected_p = lcu.raw_norm.powi(2) / plan.probability_scale();
    if (lcu.success_probability - expected_p).abs() >= 1e-10 || (lcu.success_probability - direct.success_probability).abs() >= 1e-10 {
        return Err(format!("seed {seed}: success probability {} vs {expected_p}", lcu.success_probability));
    }
    // Independent route: dense (H − λ0)ψ.
    let raw = to_dense(&u).unwrap().apply(&psi).unwrap();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let dense: Vec<_> = raw.iter().map(|a| a / norm).collect();
    if (norm - lcu.raw_norm).abs() >= 1e-10 || phase_aligned_distance(lcu.state.amplitudes(), &dense) >= 1e-10 {
        return Err(format!("seed {seed}: disagrees with the dense product"));
    }
    Ok(true)
}
