//! Aggregate metrics over whole excitation periods and baseline-relative
//! reporting.
//!
//! All statistics are computed on the output-step samples of the post-warmup
//! window, truncated to a whole number of excitation periods so that periodic
//! signals contribute unbiased means and variances. The pitch-rate statistic
//! is reported two ways (mean absolute rate and RMS rate) because either
//! definition is defensible for a duty-cycle figure.

use crate::error::{Result, SimError};
use crate::farm::CaseResult;

/// Per-turbine aggregates over the analysis window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurbineAggregates {
    pub mean_power_w: f64,
    pub power_variance_w2: f64,
    pub mean_thrust_n: f64,
    pub thrust_variance_n2: f64,
    pub pitch_rate_mean_abs_deg_per_min: f64,
    pub pitch_rate_rms_deg_per_min: f64,
}

/// Per-plane aggregates over the analysis window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneAggregates {
    pub plane_d: f64,
    pub plane_x_m: f64,
    pub mean_disk_velocity_ms: f64,
    pub mean_ke_flux_w: f64,
}

/// Aggregates of one case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseAggregates {
    pub window_start_s: f64,
    pub window_end_s: f64,
    pub whole_periods: usize,
    pub turbines: Vec<TurbineAggregates>,
    pub planes: Vec<PlaneAggregates>,
    pub total_mean_power_w: f64,
}

impl CaseAggregates {
    pub(crate) fn empty() -> Self {
        Self {
            window_start_s: 0.0,
            window_end_s: 0.0,
            whole_periods: 0,
            turbines: Vec::new(),
            planes: Vec::new(),
            total_mean_power_w: 0.0,
        }
    }

    /// Flatten to ordered `(key, value)` pairs; keys are stable and shared by
    /// the key-value output format and relative reports.
    pub fn flatten(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        for (i, t) in self.turbines.iter().enumerate() {
            let n = i + 1;
            out.push((format!("t{n}.mean_power_w"), t.mean_power_w));
            out.push((format!("t{n}.power_variance_w2"), t.power_variance_w2));
            out.push((format!("t{n}.mean_thrust_n"), t.mean_thrust_n));
            out.push((format!("t{n}.thrust_variance_n2"), t.thrust_variance_n2));
            out.push((
                format!("t{n}.pitch_rate_mean_abs_deg_per_min"),
                t.pitch_rate_mean_abs_deg_per_min,
            ));
            out.push((
                format!("t{n}.pitch_rate_rms_deg_per_min"),
                t.pitch_rate_rms_deg_per_min,
            ));
        }
        out.push(("farm.total_mean_power_w".into(), self.total_mean_power_w));
        for p in &self.planes {
            let tag = plane_tag(p.plane_d);
            out.push((
                format!("{tag}.mean_disk_velocity_ms"),
                p.mean_disk_velocity_ms,
            ));
            out.push((format!("{tag}.mean_ke_flux_w"), p.mean_ke_flux_w));
        }
        out
    }
}

/// Stable key fragment for a plane, e.g. `plane5d` for 5 diameters.
pub fn plane_tag(plane_d: f64) -> String {
    if (plane_d - plane_d.round()).abs() < 1e-9 {
        format!("plane{}d", plane_d.round() as i64)
    } else {
        format!("plane{plane_d}d")
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample variance.
fn variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

/// Aggregates over the largest whole number of excitation periods that fits
/// after warmup. Errors when fewer than five fit.
pub fn compute_metrics(result: &CaseResult) -> Result<CaseAggregates> {
    let available = result.config.sim.duration - result.config.sim.warmup;
    let max_periods = (available / result.excitation_period_s + 1e-9).floor() as usize;
    compute_metrics_windowed(result, max_periods)
}

/// Aggregates over exactly `n_periods` whole excitation periods after warmup.
pub fn compute_metrics_windowed(result: &CaseResult, n_periods: usize) -> Result<CaseAggregates> {
    if n_periods < 5 {
        return Err(SimError::InsufficientSpan(format!(
            "need at least 5 whole excitation periods after warmup, got {n_periods} (period {:.2} s, span {:.1} s)",
            result.excitation_period_s,
            result.config.sim.duration - result.config.sim.warmup
        )));
    }
    let start = result.config.sim.warmup;
    let end = start + n_periods as f64 * result.excitation_period_s;
    if end > result.config.sim.duration + 1e-9 {
        return Err(SimError::InsufficientSpan(format!(
            "{n_periods} periods of {:.2} s exceed the post-warmup span",
            result.excitation_period_s
        )));
    }
    let idx: Vec<usize> = result
        .time_s
        .iter()
        .enumerate()
        .filter(|(_, t)| **t >= start - 1e-9 && **t < end - 1e-9)
        .map(|(i, _)| i)
        .collect();
    if idx.len() < 8 {
        return Err(SimError::InsufficientSpan(format!(
            "only {} output samples in the window",
            idx.len()
        )));
    }

    let dt_out = result.output_step_s;
    let mut turbines = Vec::with_capacity(result.turbines.len());
    for series in &result.turbines {
        let power: Vec<f64> = idx.iter().map(|&i| series.power_w[i]).collect();
        let thrust: Vec<f64> = idx.iter().map(|&i| series.thrust_n[i]).collect();
        let pitch1: Vec<f64> = idx.iter().map(|&i| series.pitch_deg[i][0]).collect();
        let rates: Vec<f64> = pitch1.windows(2).map(|w| (w[1] - w[0]) / dt_out).collect();
        let mean_abs = rates.iter().map(|r| r.abs()).sum::<f64>() / rates.len() as f64;
        let rms = (rates.iter().map(|r| r * r).sum::<f64>() / rates.len() as f64).sqrt();
        turbines.push(TurbineAggregates {
            mean_power_w: mean(&power),
            power_variance_w2: variance(&power),
            mean_thrust_n: mean(&thrust),
            thrust_variance_n2: variance(&thrust),
            pitch_rate_mean_abs_deg_per_min: mean_abs * 60.0,
            pitch_rate_rms_deg_per_min: rms * 60.0,
        });
    }

    let planes = result
        .planes
        .iter()
        .map(|p| {
            let u: Vec<f64> = idx.iter().map(|&i| p.disk_avg_u_ms[i]).collect();
            let ke: Vec<f64> = idx.iter().map(|&i| p.ke_flux_w[i]).collect();
            PlaneAggregates {
                plane_d: p.plane_d,
                plane_x_m: p.plane_x_m,
                mean_disk_velocity_ms: mean(&u),
                mean_ke_flux_w: mean(&ke),
            }
        })
        .collect();

    let total = turbines
        .iter()
        .map(|t: &TurbineAggregates| t.mean_power_w)
        .sum();
    Ok(CaseAggregates {
        window_start_s: start,
        window_end_s: end,
        whole_periods: n_periods,
        turbines,
        planes,
        total_mean_power_w: total,
    })
}

/// A percentage change against a baseline value, or a flag that the baseline
/// value is zero and the ratio undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Delta {
    Pct(f64),
    UndefinedBaseline,
}

impl Delta {
    pub fn pct(&self) -> Option<f64> {
        match self {
            Delta::Pct(v) => Some(*v),
            Delta::UndefinedBaseline => None,
        }
    }
}

impl std::fmt::Display for Delta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Delta::Pct(v) => write!(f, "{v:+.1}%"),
            Delta::UndefinedBaseline => write!(f, "undef"),
        }
    }
}

/// Baseline-relative percentage deltas for every aggregate of every case.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeReport {
    pub baseline_label: String,
    pub metric_keys: Vec<String>,
    /// One row per case, in input order; deltas parallel `metric_keys`.
    pub rows: Vec<(String, Vec<Delta>)>,
}

impl RelativeReport {
    pub fn delta(&self, case_label: &str, metric_key: &str) -> Option<Delta> {
        let col = self.metric_keys.iter().position(|k| k == metric_key)?;
        let row = self.rows.iter().find(|(label, _)| label == case_label)?;
        row.1.get(col).copied()
    }
}

/// Percentage deltas `(x - base) / base * 100` for every aggregate, against
/// the named baseline case. The baseline row is identically zero.
pub fn relative_report(
    cases: &[(String, CaseAggregates)],
    baseline_label: &str,
) -> Result<RelativeReport> {
    let (_, baseline) = cases
        .iter()
        .find(|(label, _)| label == baseline_label)
        .ok_or_else(|| {
            SimError::InvalidConfig(format!("baseline case '{baseline_label}' not in results"))
        })?;
    let base_flat = baseline.flatten();
    let metric_keys: Vec<String> = base_flat.iter().map(|(k, _)| k.clone()).collect();

    let mut rows = Vec::with_capacity(cases.len());
    for (label, agg) in cases {
        let flat = agg.flatten();
        if flat.len() != base_flat.len() {
            return Err(SimError::InvalidConfig(format!(
                "case '{label}' has {} metrics, baseline has {}",
                flat.len(),
                base_flat.len()
            )));
        }
        let deltas = flat
            .iter()
            .zip(&base_flat)
            .map(|((_, x), (_, b))| {
                if *b == 0.0 {
                    Delta::UndefinedBaseline
                } else {
                    Delta::Pct((x - b) / b * 100.0)
                }
            })
            .collect();
        rows.push((label.clone(), deltas));
    }
    Ok(RelativeReport {
        baseline_label: baseline_label.to_string(),
        metric_keys,
        rows,
    })
}
