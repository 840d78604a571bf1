use std::path::Path;

use anyhow::anyhow;
use qspectrum_core::baselines::{run_ssvqe, run_vqd, ssvqe_target, SsvqeConfig, SsvqeResult, VqdConfig, VqdResult};
use qspectrum_core::pauli::DENSE_QUBIT_LIMIT;
use qspectrum_core::solver::{solve_order, CHEMICAL_ACCURACY};
use qspectrum_core::{exact_spectrum, solve_spectrum, to_dense, SpectrumResult, StateVector};
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::output::{num, opt, write_csv, write_json};
use crate::{Failure, Report};

/// SSVQE weights: two levels for one qubit, four otherwise.
pub fn ssvqe_weights(qubits: usize) -> Vec<f64> {
    if qubits == 1 {
        vec![0.8, 0.2]
    } else {
        vec![0.4, 0.3, 0.2, 0.1]
    }
}

#[derive(Serialize)]
struct Pair<T> {
    noiseless: T,
    noisy: T,
}

#[derive(Serialize)]
struct Comparison {
    oracle: Vec<f64>,
    noise: f64,
    targets: Vec<(String, f64)>,
    fqess: Pair<SpectrumResult>,
    vqd: Pair<VqdResult>,
    ssvqe: Pair<SsvqeResult>,
}

/// One column of the overlay: name, offset of its first value, values, target.
struct Series {
    name: String,
    start: usize,
    values: Vec<f64>,
    target: f64,
}

/// First iteration from which the series stays within chemical accuracy.
pub fn iterations_to_accuracy(values: &[f64], target: f64, start: usize) -> Option<usize> {
    let mut first = None;
    for (i, v) in values.iter().enumerate() {
        if (v - target).abs() < CHEMICAL_ACCURACY {
            first.get_or_insert(i + start);
        } else {
            first = None;
        }
    }
    first
}

pub fn run(m: &RunManifest, hash: &str, out: &Path) -> Result<Report, Failure> {
    super::single_input(&m.inputs, "compare")?;
    let h = super::load_all(&m.inputs)?.remove(0);
    let n = h.num_qubits();
    if n > DENSE_QUBIT_LIMIT {
        return Err(Failure::Input(anyhow!("compare needs an exact reference; {n} qubits exceeds {DENSE_QUBIT_LIMIT}")));
    }
    let o = &m.options;
    let spec = exact_spectrum(&to_dense(&h).map_err(|e| Failure::core(e, "oracle"))?).map_err(|e| Failure::core(e, "oracle"))?;

    let fqess_cfg = super::solver_config(o, o.seed);
    let fqess = Pair {
        noiseless: solve_spectrum(&h, &qspectrum_core::SolverConfig { noise: 0.0, ..fqess_cfg.clone() }).map_err(|e| Failure::core(e, "solver, noiseless"))?,
        noisy: solve_spectrum(&h, &fqess_cfg).map_err(|e| Failure::core(e, "solver, noisy"))?,
    };
    let start = StateVector::uniform(n);
    let vqd_cfg = VqdConfig { levels: spec.len().min(4), noise: o.noise, seed: o.seed, ..VqdConfig::default() };
    let vqd = Pair {
        noiseless: run_vqd(&h, &start, &VqdConfig { noise: 0.0, ..vqd_cfg.clone() }).map_err(|e| Failure::core(e, "VQD, noiseless"))?,
        noisy: run_vqd(&h, &start, &vqd_cfg).map_err(|e| Failure::core(e, "VQD, noisy"))?,
    };
    let weights = ssvqe_weights(n);
    let ssvqe_cfg = SsvqeConfig { initial_basis: (0..weights.len()).collect(), weights, noise: o.noise, seed: o.seed, ..SsvqeConfig::default() };
    let ssvqe = Pair {
        noiseless: run_ssvqe(&h, &SsvqeConfig { noise: 0.0, ..ssvqe_cfg.clone() }).map_err(|e| Failure::core(e, "SSVQE, noiseless"))?,
        noisy: run_ssvqe(&h, &ssvqe_cfg).map_err(|e| Failure::core(e, "SSVQE, noisy"))?,
    };

    let order = solve_order(&spec, fqess.noiseless.bias);
    let ssvqe_goal = ssvqe_target(&spec.eigenvalues, &ssvqe_cfg.weights);
    let mut series = Vec::new();
    for (cond, f, v, s) in [
        ("noiseless", &fqess.noiseless, &vqd.noiseless, &ssvqe.noiseless),
        ("noisy", &fqess.noisy, &vqd.noisy, &ssvqe.noisy),
    ] {
        for (i, level) in f.levels.iter().enumerate() {
            let target = spec.eigenvalues[order[i]];
            series.push(Series { name: format!("fqess_level{i}_{cond}"), start: 1, values: level.trace.clone(), target });
        }
        for (i, level) in v.levels.iter().enumerate() {
            let target = spec.eigenvalues[i];
            series.push(Series { name: format!("vqd_level{i}_{cond}"), start: 0, values: level.run.monitor_trace.clone(), target });
        }
        series.push(Series { name: format!("ssvqe_{cond}"), start: 0, values: s.run.monitor_trace.clone(), target: ssvqe_goal });
    }
    series.sort_by_key(|s| s.name.starts_with("ssvqe") as u8 * 2 + s.name.starts_with("vqd") as u8);

    let rows_len = series.iter().map(|s| s.values.len() + s.start).max().unwrap_or(0);
    let mut header = vec!["iteration".to_string()];
    header.extend(series.iter().map(|s| s.name.clone()));
    let rows: Vec<Vec<String>> = (0..rows_len)
        .map(|t| {
            let mut row = vec![t.to_string()];
            row.extend(series.iter().map(|s| opt(t.checked_sub(s.start).and_then(|i| s.values.get(i)).copied())));
            row
        })
        .collect();

    let summary_header: Vec<String> = ["series", "final", "target", "abs_error", "iterations_to_accuracy"].map(String::from).to_vec();
    let summary_rows: Vec<Vec<String>> = series
        .iter()
        .map(|s| {
            let last = s.values.last().copied();
            vec![
                s.name.clone(),
                opt(last),
                num(s.target),
                opt(last.map(|v| (v - s.target).abs())),
                iterations_to_accuracy(&s.values, s.target, s.start).map(|k| k.to_string()).unwrap_or_default(),
            ]
        })
        .collect();

    let mut report = Report::default();
    report.files.push(write_csv(&out.join("compare.csv"), hash, &header, &rows).map_err(Failure::Io)?);
    report.files.push(write_csv(&out.join("compare_summary.csv"), hash, &summary_header, &summary_rows).map_err(Failure::Io)?);
    for row in &summary_rows {
        report.summary.push(format!("{:<28} final {:<22} target {:<22} reached at {}", row[0], row[1], row[2], if row[4].is_empty() { "-" } else { &row[4] }));
    }
    let targets = series.iter().filter(|s| s.name.ends_with("_noiseless")).map(|s| (s.name.trim_end_matches("_noiseless").to_string(), s.target)).collect();
    let body = Comparison { oracle: spec.eigenvalues.clone(), noise: o.noise, targets, fqess, vqd, ssvqe };
    report.files.push(write_json(&out.join("compare.json"), hash, &body).map_err(Failure::Io)?);
    Ok(report)
}
