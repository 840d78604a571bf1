use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::try_map_range;

/// Fixed-step gradient descent with central finite differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerSettings {
    pub step_size: f64,
    pub max_iterations: usize,
    pub fd_step: f64,
    /// Stop once one step changes the value by less than this.
    pub tolerance: f64,
    /// Consecutive increases that count as divergence.
    pub divergence_window: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self { step_size: 0.1, max_iterations: 2000, fd_step: 1e-4, tolerance: 1e-9, divergence_window: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimized {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    /// Objective value before the first step, then after each step.
    pub trace: Vec<f64>,
    /// `monitor(params)` at the same points as `trace`.
    pub monitor_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub diverged: bool,
}

/// Central-difference gradient; each coordinate is evaluated independently.
pub fn gradient<F>(objective: &F, params: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    try_map_range(params.len(), |i| {
        let mut p = params.to_vec();
        p[i] = params[i] + h;
        let up = objective(&p)?;
        p[i] = params[i] - h;
        let down = objective(&p)?;
        Ok((up - down) / (2.0 * h))
    })
}

pub fn optimize<F>(objective: F, params0: &[f64], settings: &OptimizerSettings) -> Result<Optimized>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    optimize_monitored(&objective, |_| Ok(f64::NAN), params0, settings)
}

/// [`optimize`], additionally recording `monitor` (e.g. the noiseless energy)
/// alongside every objective value.
pub fn optimize_monitored<F, M>(objective: &F, monitor: M, params0: &[f64], settings: &OptimizerSettings) -> Result<Optimized>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
    M: Fn(&[f64]) -> Result<f64>,
{
    if !(settings.step_size > 0.0) || !(settings.fd_step > 0.0) {
        return Err(Error::InvalidArgument("step sizes must be positive".into()));
    }
    let mut params = params0.to_vec();
    let mut value = objective(&params)?;
    if !value.is_finite() {
        return Err(Error::InvalidArgument(format!("initial objective is not finite ({value})")));
    }
    let mut out = Optimized {
        best_params: params.clone(),
        best_value: value,
        trace: vec![value],
        monitor_trace: vec![monitor(&params)?],
        iterations: 0,
        converged: false,
        diverged: false,
    };
    let mut increases = 0;
    for _ in 0..settings.max_iterations {
        let g = gradient(objective, &params, settings.fd_step)?;
        for (p, gi) in params.iter_mut().zip(&g) {
            *p -= settings.step_size * gi;
        }
        let next = objective(&params)?;
        out.iterations += 1;
        out.trace.push(next);
        out.monitor_trace.push(monitor(&params)?);
        if next < out.best_value {
            out.best_value = next;
            out.best_params.clone_from(&params);
        }
        increases = if next > value { increases + 1 } else { 0 };
        let delta = (next - value).abs();
        value = next;
        if increases >= settings.divergence_window {
            out.diverged = true;
            break;
        }
        if delta < settings.tolerance {
            out.converged = true;
            break;
        }
    }
    Ok(out)
}
