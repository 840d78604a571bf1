use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

/// Shortest round-trip form (exponent for very small or large values), so
/// replays produce identical bytes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// CSV with a leading `# manifest <hash>` comment line.
pub fn write_csv(path: &Path, hash: &str, header: &[String], rows: &[Vec<String>]) -> anyhow::Result<PathBuf> {
    let mut text = format!("# manifest {hash}\n{}\n", header.join(","));
    for row in rows {
        let _ = writeln!(text, "{}", row.join(","));
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path.to_path_buf())
}

/// Whitespace-separated columns for gnuplot, `#` comments on top.
pub fn write_columns(path: &Path, hash: &str, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<PathBuf> {
    let mut text = format!("# manifest {hash}\n# {}\n", header.join(" "));
    for row in rows {
        let _ = writeln!(text, "{}", row.iter().map(|c| if c.is_empty() { "NaN" } else { c }).collect::<Vec<_>>().join(" "));
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path.to_path_buf())
}

#[derive(Serialize)]
struct Tagged<'a, T: Serialize> {
    manifest: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

pub fn write_json<T: Serialize>(path: &Path, hash: &str, body: &T) -> anyhow::Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(&Tagged { manifest: hash, body })?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path.to_path_buf())
}

/// Mean and largest deviation from it.
pub fn mean_and_spread(values: &[f64]) -> (f64, f64) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (mean, values.iter().fold(0.0f64, |m, v| m.max((v - mean).abs())))
}
