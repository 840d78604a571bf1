use std::path::Path;

use anyhow::anyhow;
use qspectrum_core::experiment::{
    deflate_two_level, recover_bias, run_experiment, ExperimentConfig, ExperimentTrace, TwoLevelHamiltonian, HARDWARE_BETA,
};
use qspectrum_core::solver::BiasChoice;
use qspectrum_core::{derive_seed, PauliAxis, PauliHamiltonian};
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::output::{mean_and_spread, num, write_columns, write_csv, write_json};
use crate::{Failure, Report};

/// Read `α0·I + αx·X + αz·Z` from a one-qubit Hamiltonian.
pub fn two_level_from(h: &PauliHamiltonian) -> anyhow::Result<TwoLevelHamiltonian> {
    if h.num_qubits() != 1 {
        return Err(anyhow!("the hardware replica needs a one-qubit Hamiltonian, got {} qubits", h.num_qubits()));
    }
    let (mut a0, mut ax, mut az) = (0.0, 0.0, 0.0);
    for t in h.terms() {
        match t.word.axis(0) {
            PauliAxis::I => a0 += t.coefficient,
            PauliAxis::X => ax += t.coefficient,
            PauliAxis::Z => az += t.coefficient,
            PauliAxis::Y if t.coefficient == 0.0 => {}
            PauliAxis::Y => return Err(anyhow!("the hardware replica has no Y term (coefficient {})", t.coefficient)),
        }
    }
    Ok(TwoLevelHamiltonian::new(a0, ax, az)?)
}

#[derive(Serialize)]
struct ExperimentReport {
    label: String,
    hamiltonian: TwoLevelHamiltonian,
    bias: f64,
    beta_ground: f64,
    beta_excited: f64,
    deflated: TwoLevelHamiltonian,
    oracle: [f64; 2],
    ground: ExperimentTrace,
    ground_exact: ExperimentTrace,
    excited: ExperimentTrace,
    excited_exact: ExperimentTrace,
}

/// Deflate with the replica-mean energy and components of the last iteration.
fn deflate_from(h: &TwoLevelHamiltonian, bias: f64, trace: &ExperimentTrace) -> TwoLevelHamiltonian {
    let last: Vec<_> = trace.records.iter().filter_map(|r| r.last()).collect();
    let mean = |f: fn(&qspectrum_core::experiment::IterationRecord) -> f64| mean_and_spread(&last.iter().map(|r| f(r)).collect::<Vec<_>>()).0;
    deflate_two_level(h, bias, mean(|r| r.energy), mean(|r| r.eps_x), mean(|r| r.eps_z))
}

pub fn run(m: &RunManifest, hash: &str, out: &Path) -> Result<Report, Failure> {
    let (label, h) = match m.inputs.len() {
        0 => ("h2_two_level".to_string(), TwoLevelHamiltonian::H2),
        1 => {
            let ph = super::load_all(&m.inputs)?.remove(0);
            (m.inputs[0].label.clone(), two_level_from(&ph).map_err(Failure::Input)?)
        }
        k => return Err(Failure::Input(anyhow!("experiment takes at most one Hamiltonian, got {k}"))),
    };
    let o = &m.options;
    let bias = match o.bias {
        BiasChoice::Auto => recover_bias(&h, HARDWARE_BETA).map_err(|e| Failure::core(e, "bias"))?,
        BiasChoice::Fixed(b) => b,
    };
    let cfg = ExperimentConfig { iterations: o.chain_length, shots: o.shots, replicas: o.replicas, seed: o.seed, ..ExperimentConfig::default() };
    let exact_cfg = ExperimentConfig { shots: 0, replicas: 1, ..cfg };
    let ground = run_experiment(&h, bias, &cfg).map_err(|e| Failure::core(e, "ground run"))?;
    let ground_exact = run_experiment(&h, bias, &exact_cfg).map_err(|e| Failure::core(e, "ground run, exact"))?;
    let deflated = deflate_from(&h, bias, &ground);
    let excited = run_experiment(&deflated, bias, &ExperimentConfig { seed: derive_seed(o.seed, 1), ..cfg }).map_err(|e| Failure::core(e, "excited run"))?;
    let deflated_exact = deflate_from(&h, bias, &ground_exact);
    let excited_exact = run_experiment(&deflated_exact, bias, &exact_cfg).map_err(|e| Failure::core(e, "excited run, exact"))?;
    let oracle = h.eigenvalues();

    let mut header: Vec<String> = ["stage", "iteration", "mean", "error_bar", "exact", "oracle"].map(String::from).to_vec();
    header.extend((1..=o.replicas).map(|r| format!("replica_{r}")));
    let mut rows = Vec::new();
    for (stage, trace, exact, target) in [("ground", &ground, &ground_exact, oracle[0]), ("excited", &excited, &excited_exact, oracle[1])] {
        for (p, e) in trace.points.iter().zip(&exact.points) {
            let mut row = vec![stage.to_string(), p.iteration.to_string(), num(p.mean), num(p.error_bar), num(e.mean), num(target)];
            row.extend(p.replicas.iter().map(|v| num(*v)));
            rows.push(row);
        }
    }
    let plot_rows: Vec<Vec<String>> = (0..o.chain_length)
        .map(|i| {
            let (g, ge, x, xe) = (&ground.points[i], &ground_exact.points[i], &excited.points[i], &excited_exact.points[i]);
            vec![
                g.iteration.to_string(),
                num(g.mean),
                num(g.error_bar),
                num(ge.mean),
                num(x.mean),
                num(x.error_bar),
                num(xe.mean),
                num(oracle[0]),
                num(oracle[1]),
            ]
        })
        .collect();

    let mut report = Report::default();
    report.files.push(write_csv(&out.join("experiment.csv"), hash, &header, &rows).map_err(Failure::Io)?);
    report.files.push(
        write_columns(
            &out.join("experiment_plot.dat"),
            hash,
            &["iteration", "ground_mean", "ground_error", "ground_exact", "excited_mean", "excited_error", "excited_exact", "oracle_ground", "oracle_excited"],
            &plot_rows,
        )
        .map_err(Failure::Io)?,
    );
    let last_g = ground.points.last().expect("at least one iteration");
    let last_x = excited.points.last().expect("at least one iteration");
    report.summary.push(format!("{label}: λ0 = {bias}, β(ground) = {}, β(excited) = {}", ground.beta, excited.beta));
    report.summary.push(format!("ground:  {} ± {} (exact {})", last_g.mean, last_g.error_bar, oracle[0]));
    report.summary.push(format!("excited: {} ± {} (exact {})", last_x.mean, last_x.error_bar, oracle[1]));
    let body = ExperimentReport {
        label,
        hamiltonian: h,
        bias,
        beta_ground: ground.beta,
        beta_excited: excited.beta,
        deflated,
        oracle,
        ground,
        ground_exact,
        excited,
        excited_exact,
    };
    report.files.push(write_json(&out.join("experiment.json"), hash, &body).map_err(Failure::Io)?);
    Ok(report)
}
