//! Subcommand implementations: run, suite, sweep, compare.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use helix_sim::excitation::StrategyKind;
use helix_sim::farm::{
    case_display_label, run_case, run_protocol_suite, sweep_strouhal, CaseResult, SuiteConfig,
};
use helix_sim::metrics::{relative_report, Delta, RelativeReport};
use helix_sim::output::{aggregates_kv, parse_kv, timeseries_csv, wake_planes_csv, write_atomic};
use helix_sim::rotor::TurbineParameters;
use helix_sim::wake::{InflowModel, MixingParams};
use helix_sim::SimError;

use crate::config::{parse_config, serialize_config, ConfigError};
use crate::{EXIT_CONFIG, EXIT_RUNTIME};

/// CLI failure carrying its exit code: configuration problems map to 2,
/// runtime problems to 3.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> Self {
        CliError::Config(err.to_string())
    }
}

fn sim_error(err: SimError) -> CliError {
    match err {
        SimError::InvalidConfig(_) | SimError::InvalidInput(_) => CliError::Config(err.to_string()),
        _ => CliError::Runtime(err.to_string()),
    }
}

fn io_error(what: &str, path: &Path, err: std::io::Error) -> CliError {
    CliError::Runtime(format!("{what} {}: {err}", path.display()))
}

fn write_case_files(out_dir: &Path, prefix: &str, result: &CaseResult) -> Result<(), CliError> {
    let files = [
        (format!("{prefix}timeseries.csv"), timeseries_csv(result)),
        (format!("{prefix}wake_planes.csv"), wake_planes_csv(result)),
        (
            format!("{prefix}aggregates.kv"),
            aggregates_kv(&result.label, &result.aggregates),
        ),
    ];
    for (name, contents) in files {
        let path = out_dir.join(name);
        write_atomic(&path, &contents).map_err(|e| io_error("cannot write", &path, e))?;
    }
    Ok(())
}

pub fn cmd_run(
    config_path: &Path,
    seed: Option<u64>,
    out_dir: Option<&Path>,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config_path).map_err(|e| {
        CliError::Config(format!("cannot read config {}: {e}", config_path.display()))
    })?;
    let mut run = parse_config(&text)?;
    if let Some(seed) = seed {
        run.case.sim.seed = seed;
        run.case.inflow.seed = seed;
    }
    run.case.label = config_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".to_string());

    let out_dir: PathBuf = out_dir
        .map(Path::to_path_buf)
        .or(run.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));

    let result = run_case(&run.case).map_err(sim_error)?;
    write_case_files(&out_dir, "", &result)?;
    // Echo the fully resolved configuration (defaults included) next to the
    // data so a run can be reproduced from its outputs alone.
    let echo_path = out_dir.join("resolved_config.cfg");
    write_atomic(&echo_path, &serialize_config(&run))
        .map_err(|e| io_error("cannot write", &echo_path, e))?;

    println!(
        "case '{}' complete ({} output samples)",
        result.label,
        result.time_s.len()
    );
    for (i, t) in result.aggregates.turbines.iter().enumerate() {
        println!(
            "  turbine {}: mean power {:.3} MW",
            i + 1,
            t.mean_power_w / 1e6
        );
    }
    println!("outputs in {}", out_dir.display());
    Ok(())
}

/// Rows of the single-turbine summary: label, metric key, relative?.
const TABLE1_ROWS: &[(&str, &str, bool)] = &[
    ("Power", "t1.mean_power_w", true),
    ("Variation of power", "t1.power_variance_w2", true),
    ("Variation of thrust", "t1.thrust_variance_n2", true),
    ("Energy at 3D", "plane3d.mean_ke_flux_w", true),
    ("Energy at 5D", "plane5d.mean_ke_flux_w", true),
    ("Energy at 7D", "plane7d.mean_ke_flux_w", true),
    (
        "Pitch rate mean [deg/min]",
        "t1.pitch_rate_mean_abs_deg_per_min",
        false,
    ),
    (
        "Pitch rate RMS [deg/min]",
        "t1.pitch_rate_rms_deg_per_min",
        false,
    ),
];

const TABLE2_ROWS: &[(&str, &str, bool)] = &[
    ("Power T1", "t1.mean_power_w", true),
    ("Power T2", "t2.mean_power_w", true),
    ("Total power production", "farm.total_mean_power_w", true),
    ("Variance of power T1", "t1.power_variance_w2", true),
    ("Variance of power T2", "t2.power_variance_w2", true),
    ("Variance of thrust T1", "t1.thrust_variance_n2", true),
    ("Variance of thrust T2", "t2.thrust_variance_n2", true),
];

fn absolute_value(results: &[CaseResult], case_id: &str, key: &str) -> Option<f64> {
    let result = results.iter().find(|r| r.label == case_id)?;
    result
        .aggregates
        .flatten()
        .into_iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v)
}

fn render_summary_table(
    title: &str,
    rows: &[(&str, &str, bool)],
    results: &[CaseResult],
    report: &RelativeReport,
) -> String {
    let ids: Vec<&str> = results.iter().map(|r| r.label.as_str()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let _ = writeln!(
        out,
        "(percentages relative to the baseline case; pitch rates absolute)"
    );
    let label_w = 28;
    let col_w = 20;
    let mut header = format!("{:label_w$}", "");
    for id in &ids {
        let label = case_display_label(id).unwrap_or(id);
        header.push_str(&format!("{label:>col_w$}"));
    }
    let _ = writeln!(out, "{header}");
    let _ = writeln!(out, "{}", "-".repeat(label_w + col_w * ids.len()));
    for (row_label, key, relative) in rows {
        let mut line = format!("{row_label:label_w$}");
        for id in &ids {
            let cell = if *relative {
                match report.delta(id, key) {
                    Some(Delta::Pct(v)) => format!("{v:+.1}%"),
                    Some(Delta::UndefinedBaseline) => "undef".to_string(),
                    None => "n/a".to_string(),
                }
            } else {
                match absolute_value(results, id, key) {
                    Some(v) => format!("{v:.2}"),
                    None => "n/a".to_string(),
                }
            };
            line.push_str(&format!("{cell:>col_w$}"));
        }
        let _ = writeln!(out, "{line}");
    }
    out
}

fn suite_report(results: &[CaseResult]) -> Result<RelativeReport, CliError> {
    let cases: Vec<(String, helix_sim::metrics::CaseAggregates)> = results
        .iter()
        .map(|r| (r.label.clone(), r.aggregates.clone()))
        .collect();
    relative_report(&cases, "baseline").map_err(sim_error)
}

pub fn cmd_suite(
    seed: Option<u64>,
    out_dir: Option<&Path>,
    single_turbine: bool,
) -> Result<(), CliError> {
    let out_dir = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("out"));
    let mut summary_kv = String::new();

    let scopes: Vec<(&str, bool)> = if single_turbine {
        vec![("single", false)]
    } else {
        vec![("single", false), ("twin", true)]
    };

    for (scope, two_turbine) in scopes {
        let mut cfg = SuiteConfig::new(two_turbine);
        if let Some(seed) = seed {
            cfg.sim.seed = seed;
            cfg.inflow.seed = seed;
        }
        let results = run_protocol_suite(&cfg).map_err(sim_error)?;
        for result in &results {
            write_case_files(&out_dir, &format!("{scope}_{}_", result.label), result)?;
            for (key, value) in result.aggregates.flatten() {
                let _ = writeln!(summary_kv, "{scope}.{}.{key}={value}", result.label);
            }
        }
        let report = suite_report(&results)?;
        let (title, rows, file) = if two_turbine {
            ("Two-turbine farm, 5D spacing", TABLE2_ROWS, "table2.txt")
        } else {
            ("Single excited turbine", TABLE1_ROWS, "table1.txt")
        };
        let table = render_summary_table(title, rows, &results, &report);
        let path = out_dir.join(file);
        write_atomic(&path, &table).map_err(|e| io_error("cannot write", &path, e))?;
        println!("{table}");
    }

    let path = out_dir.join("suite_summary.kv");
    write_atomic(&path, &summary_kv).map_err(|e| io_error("cannot write", &path, e))?;
    println!("suite outputs in {}", out_dir.display());
    Ok(())
}

pub fn cmd_sweep(
    st_min: f64,
    st_max: f64,
    st_steps: usize,
    amplitude: f64,
    kind: &str,
    seed: Option<u64>,
    out_dir: Option<&Path>,
) -> Result<(), CliError> {
    let out_dir = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("out"));
    let kind = StrategyKind::parse(kind)
        .ok_or_else(|| CliError::Config(format!("unknown strategy kind '{kind}'")))?;

    let st_values: Vec<f64> = if st_steps <= 1 || (st_max - st_min).abs() < 1e-12 {
        vec![st_min]
    } else {
        (0..st_steps)
            .map(|i| st_min + (st_max - st_min) * i as f64 / (st_steps - 1) as f64)
            .collect()
    };

    // Figure-style sweeps run in laminar inflow so the optimum is not masked
    // by turbulence noise.
    let mut inflow = InflowModel::uniform();
    if let Some(seed) = seed {
        inflow.seed = seed;
    }
    let turbine = TurbineParameters::dtu_10mw();
    let mixing = MixingParams::default();
    let planes = [3.0, 5.0, 7.0];
    let rows = sweep_strouhal(
        &st_values, kind, amplitude, &planes, &turbine, &inflow, &mixing,
    )
    .map_err(sim_error)?;

    let mut csv = String::from("st,plane_d,normalized_velocity\n");
    for row in &rows {
        let _ = writeln!(
            csv,
            "{},{},{}",
            row.strouhal, row.plane_d, row.normalized_velocity
        );
    }
    let path = out_dir.join("sweep.csv");
    write_atomic(&path, &csv).map_err(|e| io_error("cannot write", &path, e))?;

    println!(
        "Normalized wake velocity vs baseline ({} at {amplitude} deg)",
        kind.name()
    );
    print!("{:>8}", "St");
    for p in planes {
        print!("{:>10}", format!("{p}D"));
    }
    println!();
    for st in &st_values {
        print!("{st:>8.3}");
        for p in planes {
            let v = rows
                .iter()
                .find(|r| r.strouhal == *st && r.plane_d == p)
                .map(|r| r.normalized_velocity)
                .unwrap_or(f64::NAN);
            print!("{v:>10.4}");
        }
        println!();
    }
    println!("sweep table in {}", path.display());
    Ok(())
}

pub fn cmd_compare(baseline: &Path, cases: &[PathBuf]) -> Result<(), CliError> {
    let read = |path: &Path| -> Result<(String, Vec<(String, f64)>), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let (label, entries) = parse_kv(&text);
        let label = label.unwrap_or_else(|| {
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "case".into())
        });
        if entries.is_empty() {
            return Err(CliError::Config(format!(
                "{} contains no numeric records",
                path.display()
            )));
        }
        Ok((label, entries))
    };

    let (base_label, base_entries) = read(baseline)?;
    let mut case_data = Vec::new();
    for path in cases {
        case_data.push(read(path)?);
    }

    let label_w = 40;
    let col_w = 16;
    let mut header = format!("{:label_w$}{:>col_w$}", "metric", base_label);
    for (label, _) in &case_data {
        header.push_str(&format!("{label:>col_w$}"));
    }
    println!("{header}");
    println!("{}", "-".repeat(label_w + col_w * (1 + case_data.len())));
    for (key, base_value) in &base_entries {
        let mut line = format!("{key:label_w$}{base_value:>col_w$.4e}");
        for (_, entries) in &case_data {
            let cell = match entries.iter().find(|(k, _)| k == key) {
                Some((_, v)) if *base_value != 0.0 => {
                    format!("{:+.1}%", (v - base_value) / base_value * 100.0)
                }
                Some(_) => "undef".to_string(),
                None => "n/a".to_string(),
            };
            line.push_str(&format!("{cell:>col_w$}"));
        }
        println!("{line}");
    }
    Ok(())
}
