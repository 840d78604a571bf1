use std::path::Path;

use qspectrum_core::estimate_resources;

use crate::manifest::RunManifest;
use crate::output::write_csv;
use crate::{Failure, Report};

pub fn run(m: &RunManifest, hash: &str, out: &Path) -> Result<Report, Failure> {
    let hs = super::load_all(&m.inputs)?;
    let header: Vec<String> =
        ["label", "work_qubits", "terms", "padded_terms", "ancilla_qubits", "total_qubits", "gate_estimate"].map(String::from).to_vec();
    let mut report = Report::default();
    let mut rows = Vec::new();
    report.summary.push(format!("{:<20} {:>6} {:>6} {:>6} {:>8} {:>7} {:>8}", "label", "work", "terms", "L_pad", "ancilla", "total", "gates"));
    for (input, h) in m.inputs.iter().zip(&hs) {
        let r = estimate_resources(h);
        report.summary.push(format!(
            "{:<20} {:>6} {:>6} {:>6} {:>8} {:>7} {:>8}",
            input.label, r.work_qubits, r.terms, r.padded_terms, r.ancilla_qubits, r.total_qubits, r.gate_estimate
        ));
        rows.push(vec![
            input.label.clone(),
            r.work_qubits.to_string(),
            r.terms.to_string(),
            r.padded_terms.to_string(),
            r.ancilla_qubits.to_string(),
            r.total_qubits.to_string(),
            r.gate_estimate.to_string(),
        ]);
    }
    report.files.push(write_csv(&out.join("resources.csv"), hash, &header, &rows).map_err(Failure::Io)?);
    Ok(report)
}
