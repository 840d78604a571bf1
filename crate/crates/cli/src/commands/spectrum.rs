use std::path::Path;

use qspectrum_core::lcu::LcuPlan;
use qspectrum_core::parallel::try_map_range;
use qspectrum_core::pauli::DENSE_QUBIT_LIMIT;
use qspectrum_core::{build_plan, derive_seed, exact_spectrum, solve_spectrum, to_dense, PauliHamiltonian, SpectrumResult};
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::output::{mean_and_spread, num, opt, write_csv, write_json};
use crate::{Failure, Report};

#[derive(Serialize)]
struct LabelResult {
    label: String,
    qubits: usize,
    /// Exact eigenvalues, ascending; absent above the dense limit.
    oracle: Option<Vec<f64>>,
    /// Noiseless, shot-free reference run; present when replicas differ from it.
    nominal: Option<SpectrumResult>,
    replicas: Vec<SpectrumResult>,
}

/// Seed of replica `r`; a single replica uses the run seed itself.
pub fn replica_seed(seed: u64, replicas: usize, r: usize) -> u64 {
    if replicas == 1 {
        seed
    } else {
        derive_seed(seed, 0x100 + r as u64)
    }
}

fn solve_label(m: &RunManifest, label: &str, h: &PauliHamiltonian) -> Result<(LabelResult, LcuPlan), Failure> {
    let o = &m.options;
    let oracle = if h.num_qubits() <= DENSE_QUBIT_LIMIT {
        let dense = to_dense(h).map_err(|e| Failure::core(e, label))?;
        Some(exact_spectrum(&dense).map_err(|e| Failure::core(e, label))?.eigenvalues)
    } else {
        None
    };
    let replicas = try_map_range(o.replicas, |r| {
        solve_spectrum(h, &super::solver_config(o, replica_seed(o.seed, o.replicas, r))).map_err(|e| Failure::core(e, format!("{label}, replica {}", r + 1)))
    })?;
    let nominal = if o.replicas > 1 || o.noise > 0.0 || o.shots > 0 {
        let cfg = qspectrum_core::SolverConfig { noise: 0.0, shots: 0, ..super::solver_config(o, o.seed) };
        Some(solve_spectrum(h, &cfg).map_err(|e| Failure::core(e, format!("{label}, noiseless reference")))?)
    } else {
        None
    };
    let bias = replicas[0].bias;
    let plan = build_plan(&h.shift(bias), bias).map_err(|e| Failure::core(e, label))?;
    Ok((LabelResult { label: label.to_string(), qubits: h.num_qubits(), oracle, nominal, replicas }, plan))
}

/// Per-iteration trace of solve-order level `level`, padded with its final value.
fn padded_trace(result: &SpectrumResult, level: usize, len: usize) -> Vec<Option<f64>> {
    let t = &result.levels[level].trace;
    (0..len).map(|i| t.get(i).or(t.last()).copied()).collect()
}

fn trace_rows(res: &LabelResult) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    let levels = res.replicas[0].levels.len();
    for level in 0..levels {
        let mut runs: Vec<&SpectrumResult> = res.replicas.iter().collect();
        runs.extend(res.nominal.iter());
        let len = runs.iter().map(|r| r.levels[level].trace.len()).max().unwrap_or(0);
        let nominal = res.nominal.as_ref().map(|n| padded_trace(n, level, len));
        let reps: Vec<Vec<Option<f64>>> = res.replicas.iter().map(|r| padded_trace(r, level, len)).collect();
        for i in 0..len {
            let values: Vec<f64> = reps.iter().filter_map(|r| r[i]).collect();
            let (mean, spread) = mean_and_spread(&values);
            let mut row = vec![level.to_string(), (i + 1).to_string(), opt(nominal.as_ref().and_then(|n| n[i])), num(mean), num(spread)];
            row.extend(reps.iter().map(|r| opt(r[i])));
            rows.push(row);
        }
    }
    rows
}

pub fn run(m: &RunManifest, hash: &str, out: &Path) -> Result<Report, Failure> {
    let hs = super::load_all(&m.inputs)?;
    if hs.is_empty() {
        return Err(Failure::Input(anyhow::anyhow!("no Hamiltonian given (use --hamiltonian or --sweep)")));
    }
    let solved = try_map_range(hs.len(), |i| solve_label(m, &m.inputs[i].label, &hs[i]))?;

    let o = &m.options;
    let mut report = Report::default();
    let mut rows = Vec::new();
    for (res, plan) in &solved {
        let label = &res.label;
        report.files.push(write_json(&out.join(format!("{label}.json")), hash, res).map_err(Failure::Io)?);
        if o.dump_plan {
            report.files.push(write_json(&out.join(format!("{label}_plan.json")), hash, plan).map_err(Failure::Io)?);
        }
        if res.nominal.is_some() {
            let mut header: Vec<String> = ["level", "iteration", "noiseless", "mean", "max_deviation"].map(String::from).to_vec();
            header.extend((1..=o.replicas).map(|r| format!("replica_{r}")));
            let path = out.join(format!("{label}_trace.csv"));
            report.files.push(write_csv(&path, hash, &header, &trace_rows(res)).map_err(Failure::Io)?);
        }

        let sorted: Vec<Vec<f64>> = res.replicas.iter().map(|r| r.sorted_energies()).collect();
        let mut worst: Option<f64> = None;
        for level in 0..sorted[0].len() {
            let values: Vec<f64> = sorted.iter().map(|s| s[level]).collect();
            let (mean, spread) = mean_and_spread(&values);
            let oracle = res.oracle.as_ref().map(|o| o[level]);
            let err = oracle.map(|e| (mean - e).abs());
            if let Some(e) = err {
                worst = Some(worst.map_or(e, |w: f64| w.max(e)));
            }
            rows.push(vec![label.clone(), level.to_string(), num(mean), num(spread), opt(oracle), opt(err)]);
        }
        for (r, result) in res.replicas.iter().enumerate() {
            for l in result.levels.iter().filter(|l| !l.converged()) {
                report.diagnostics.push(format!(
                    "{label}: replica {} level {} {:?} after {} applications",
                    r + 1,
                    l.index,
                    l.status,
                    l.k_used
                ));
            }
        }
        report.summary.push(match worst {
            Some(w) => format!("{label}: {} levels, max |error| vs exact = {w:e} Hartree", sorted[0].len()),
            None => format!("{label}: {} levels (no exact reference above {DENSE_QUBIT_LIMIT} qubits)", sorted[0].len()),
        });
    }
    let header: Vec<String> = ["label", "level", "energy", "max_deviation", "oracle", "abs_error"].map(String::from).to_vec();
    report.files.push(write_csv(&out.join("spectrum.csv"), hash, &header, &rows).map_err(Failure::Io)?);
    Ok(report)
}
