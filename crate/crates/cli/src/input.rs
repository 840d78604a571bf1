use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use qspectrum_core::PauliHamiltonian;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputFile {
    pub label: String,
    pub path: PathBuf,
    pub sha256: String,
}

impl InputFile {
    pub fn open(label: String, path: PathBuf) -> anyhow::Result<Self> {
        let bytes = fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Self { label, path, sha256: hex::encode(Sha256::digest(&bytes)) })
    }

    pub fn verify(&self) -> anyhow::Result<()> {
        let now = Self::open(self.label.clone(), self.path.clone())?;
        if now.sha256 != self.sha256 {
            bail!("{} changed since the manifest was written", self.path.display());
        }
        Ok(())
    }

    pub fn load(&self) -> anyhow::Result<PauliHamiltonian> {
        let text = fs::read_to_string(&self.path).with_context(|| format!("reading {}", self.path.display()))?;
        PauliHamiltonian::parse(&text).with_context(|| format!("{}", self.path.display()))
    }
}

/// `--hamiltonian` files (labelled by file stem) followed by sweep entries.
pub fn collect_inputs(files: &[PathBuf], sweep: Option<&Path>) -> anyhow::Result<Vec<InputFile>> {
    let mut inputs = Vec::new();
    for f in files {
        let label = f.file_stem().and_then(|s| s.to_str()).with_context(|| format!("no usable file name in {}", f.display()))?;
        inputs.push(InputFile::open(label.to_string(), f.clone())?);
    }
    if let Some(s) = sweep {
        for (label, path) in parse_sweep(s)? {
            inputs.push(InputFile::open(label, path)?);
        }
    }
    let mut seen = BTreeSet::new();
    for i in &inputs {
        if !seen.insert(i.label.as_str()) {
            bail!("duplicate label {:?}", i.label);
        }
        if i.label.contains([',', '/', '\\']) || i.label.starts_with('.') {
            bail!("label {:?} cannot be used as a file name", i.label);
        }
    }
    Ok(inputs)
}

/// `<label> <path>` lines with `#` comments.
pub fn parse_sweep(path: &Path) -> anyhow::Result<Vec<(String, PathBuf)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(label), Some(file), None) => out.push((label.to_string(), base.join(file))),
            _ => bail!("{}:{}: expected `<label> <path>`", path.display(), n + 1),
        }
    }
    if out.is_empty() {
        bail!("{}: sweep lists no files", path.display());
    }
    Ok(out)
}
