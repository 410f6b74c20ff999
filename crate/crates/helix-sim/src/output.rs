//! Deterministic text output: CSV time series, CSV wake planes, key-value
//! aggregate records. Files are written to a temporary sibling and renamed
//! into place so failed runs never leave truncated data behind.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::farm::CaseResult;
use crate::metrics::CaseAggregates;

/// Write `contents` to `path` atomically (write temp sibling, then rename).
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp_path = std::path::PathBuf::from(tmp);
    fs::write(&tmp_path, contents)?;
    fs::rename(&tmp_path, path)
}

/// Per-step turbine series: one row per turbine per output step.
/// Columns: `t, turbine, power_w, thrust_n, thrust_tilt_rad, thrust_yaw_rad,
/// theta1_deg, theta2_deg, theta3_deg, u_eff_ms`.
pub fn timeseries_csv(result: &CaseResult) -> String {
    let mut out = String::new();
    out.push_str("t,turbine,power_w,thrust_n,thrust_tilt_rad,thrust_yaw_rad,theta1_deg,theta2_deg,theta3_deg,u_eff_ms\n");
    for (i, t) in result.time_s.iter().enumerate() {
        for (j, series) in result.turbines.iter().enumerate() {
            let pitch = series.pitch_deg[i];
            let _ = writeln!(
                out,
                "{t},{},{},{},{},{},{},{},{},{}",
                j + 1,
                series.power_w[i],
                series.thrust_n[i],
                series.thrust_tilt_rad[i],
                series.thrust_yaw_rad[i],
                pitch[0],
                pitch[1],
                pitch[2],
                series.u_eff_ms[i],
            );
        }
    }
    out
}

/// Wake-plane series. Columns: `time, plane_x, y_center, z_center,
/// disk_avg_u, ke_flux`.
pub fn wake_planes_csv(result: &CaseResult) -> String {
    let mut out = String::new();
    out.push_str("time,plane_x,y_center,z_center,disk_avg_u,ke_flux\n");
    for (i, t) in result.time_s.iter().enumerate() {
        for plane in &result.planes {
            let _ = writeln!(
                out,
                "{t},{},{},{},{},{}",
                plane.plane_x_m,
                plane.y_center_m[i],
                plane.z_center_m[i],
                plane.disk_avg_u_ms[i],
                plane.ke_flux_w[i],
            );
        }
    }
    out
}

/// Machine-readable aggregate records, `key=value` per line.
pub fn aggregates_kv(label: &str, aggregates: &CaseAggregates) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "case={label}");
    let _ = writeln!(out, "window_start_s={}", aggregates.window_start_s);
    let _ = writeln!(out, "window_end_s={}", aggregates.window_end_s);
    let _ = writeln!(out, "whole_periods={}", aggregates.whole_periods);
    for (key, value) in aggregates.flatten() {
        let _ = writeln!(out, "{key}={value}");
    }
    out
}

/// Parse a key-value record produced by [`aggregates_kv`] into (case label,
/// numeric entries in file order).
pub fn parse_kv(text: &str) -> (Option<String>, Vec<(String, f64)>) {
    let mut label = None;
    let mut entries = Vec::new();
    for line in text.lines() {
        let Some((key, value)) = line.split_once('=') else {
            continue;
        };
        if key == "case" {
            label = Some(value.to_string());
        } else if let Ok(number) = value.parse::<f64>() {
            entries.push((key.to_string(), number));
        }
    }
    (label, entries)
}
