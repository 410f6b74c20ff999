//! Sectioned key=value run configuration.
//!
//! Sections: `[turbine]`, `[farm]`, `[inflow]`, `[mixing]`, `[strategy.N]`
//! (N = 1-based turbine index) and `[sim]`. Keys outside the documented set
//! are rejected rather than silently ignored; syntax errors carry the line
//! number and semantic errors name the offending `[section].key`.

use std::path::PathBuf;

use helix_sim::excitation::{StrategyKind, StrategySpec, MAX_AMPLITUDE_DEG};
use helix_sim::farm::{CaseConfig, FarmLayout, SimulationConfig, DEFAULT_STROUHAL};
use helix_sim::rotor::TurbineParameters;
use helix_sim::wake::{InflowModel, MixingParams};

/// Enumerates every config key with units; shown in `--help`.
pub const CONFIG_KEY_REFERENCE: &str = "CONFIG FILE KEYS (sectioned key = value; '#' comments):
  [turbine]
    preset              built-in turbine preset name (DTU10MW)
    rotor_diameter      m
    hub_height          m
    rated_power         W
    rotor_speed         rad/s (fixed below-rated speed)
    rotor_direction     ccw | cw, rotation sense seen from upstream
    air_density         kg/m^3
    cp_ref              - (power coefficient at zero derate, <= 16/27)
    ct_ref              - (thrust coefficient at zero derate, < 1)
    cp_lin              1/deg   power loss, linear term
    cp_quad             1/deg^2 power loss, quadratic term
    ct_lin              1/deg   thrust loss, linear term
    ct_quad             1/deg^2 thrust loss, quadratic term
    deflection_gain     rad/deg thrust-vector tilt per degree of cyclic pitch
    moment_ref          N*m     root moment at the reference inflow
    moment_pitch_gain   1/deg   relative moment change per degree of pitch
    moment_u_ref        m/s     reference inflow of the moment surrogate
  [farm]
    positions           m; semicolon-separated x,y pairs: '0,0; 891.5,0'
    planes_d            - ; comma-separated diagnostic planes in rotor
                        diameters downstream of the first turbine: '3, 5, 7'
  [inflow]
    u_inf               m/s mean longitudinal velocity
    turbulence_intensity - (std over u_inf, 0 to 0.3)
    integral_time       s   turbulence autocorrelation time
    seed                 -  turbulence stream seed (defaults to [sim] seed)
  [mixing]
    k_base              1/D  base deficit decay per diameter traveled
    c_meander           -    meandering enhancement gain
    c_ti                -    ambient-turbulence enhancement gain
    width_growth        m/m  Gaussian width growth per meter traveled
  [strategy.N]          one section per turbine, N = 1-based index
    kind                Baseline | StaticInduction | DynamicInduction |
                        HelixCCW | HelixCW
    amplitude_deg       deg derate (StaticInduction) or sinusoid amplitude
    strouhal            -   excitation Strouhal number f_e*D/U
    phase_offset_deg    deg tilt-to-yaw offset; 90 for HelixCCW, 270 for
                        HelixCW (set automatically when omitted)
  [sim]
    dt                  s   step size, (0, 2]
    duration            s   total simulated time
    warmup              s   span discarded from aggregates
    output_step         s   output sampling interval (>= dt)
    seed                -   case seed
    out_dir             -   output directory (overridden by --out-dir)

ENVIRONMENT:
  HELIX_SIM_THREADS     cap on parallel case execution in suite/sweep runs
";

/// Configuration error with optional line/key context. Maps to exit code 2.
#[derive(Debug, Clone)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub context: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at_line(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            context: None,
            message: message.into(),
        }
    }

    fn for_key(section: &str, key: &str, message: impl Into<String>) -> Self {
        Self {
            line: None,
            context: Some(format!("[{section}].{key}")),
            message: message.into(),
        }
    }

    fn at_entry(entry: &Entry, message: impl Into<String>) -> Self {
        Self {
            line: Some(entry.line),
            context: Some(format!("[{}].{}", entry.section, entry.key)),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            line: None,
            context: None,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.line, &self.context) {
            (Some(line), Some(ctx)) => write!(f, "config line {line}, {ctx}: {}", self.message),
            (Some(line), None) => write!(f, "config line {line}: {}", self.message),
            (None, Some(ctx)) => write!(f, "config {ctx}: {}", self.message),
            (None, None) => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Fully parsed and validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: CaseConfig,
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug)]
struct Entry {
    section: String,
    key: String,
    value: String,
    line: usize,
}

fn lex(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut entries = Vec::new();
    let mut section: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(ConfigError::at_line(
                    line_no,
                    format!("unterminated section header '{line}'"),
                ));
            };
            let name = name.trim();
            let valid = matches!(name, "turbine" | "farm" | "inflow" | "mixing" | "sim")
                || parse_strategy_section(name).is_some();
            if !valid {
                return Err(ConfigError::at_line(
                    line_no,
                    format!("unknown section '[{name}]'"),
                ));
            }
            section = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::at_line(
                line_no,
                format!("expected 'key = value', got '{line}'"),
            ));
        };
        let Some(section) = section.clone() else {
            return Err(ConfigError::at_line(
                line_no,
                "key outside any [section]".to_string(),
            ));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if entries
            .iter()
            .any(|e: &Entry| e.section == section && e.key == key)
        {
            return Err(ConfigError::at_line(
                line_no,
                format!("duplicate key '{key}' in [{section}]"),
            ));
        }
        entries.push(Entry {
            section,
            key,
            value,
            line: line_no,
        });
    }
    Ok(entries)
}

fn parse_strategy_section(name: &str) -> Option<usize> {
    let idx = name.strip_prefix("strategy.")?;
    idx.parse::<usize>().ok().filter(|n| *n >= 1)
}

fn parse_f64(entry: &Entry) -> Result<f64, ConfigError> {
    entry
        .value
        .parse::<f64>()
        .map_err(|_| ConfigError::at_entry(entry, format!("'{}' is not a number", entry.value)))
}

fn parse_u64(entry: &Entry) -> Result<u64, ConfigError> {
    entry.value.parse::<u64>().map_err(|_| {
        ConfigError::at_entry(
            entry,
            format!("'{}' is not an unsigned integer", entry.value),
        )
    })
}

fn parse_positions(entry: &Entry) -> Result<Vec<(f64, f64)>, ConfigError> {
    let mut positions = Vec::new();
    for pair in entry.value.split(';') {
        let pair = pair.trim();
        if pair.is_empty() {
            continue;
        }
        let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(ConfigError::at_entry(
                entry,
                format!("'{pair}' is not an 'x,y' pair"),
            ));
        }
        let x = parts[0].parse::<f64>();
        let y = parts[1].parse::<f64>();
        match (x, y) {
            (Ok(x), Ok(y)) => positions.push((x, y)),
            _ => {
                return Err(ConfigError::at_entry(
                    entry,
                    format!("'{pair}' has a non-numeric coordinate"),
                ))
            }
        }
    }
    if positions.is_empty() {
        return Err(ConfigError::at_entry(entry, "needs at least one x,y pair"));
    }
    Ok(positions)
}

fn parse_float_list(entry: &Entry) -> Result<Vec<f64>, ConfigError> {
    let mut values = Vec::new();
    for item in entry.value.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        values.push(
            item.parse::<f64>()
                .map_err(|_| ConfigError::at_entry(entry, format!("'{item}' is not a number")))?,
        );
    }
    if values.is_empty() {
        return Err(ConfigError::at_entry(entry, "needs at least one number"));
    }
    Ok(values)
}

#[derive(Default, Clone)]
struct StrategyDraft {
    kind: Option<StrategyKind>,
    amplitude_deg: Option<f64>,
    strouhal: Option<f64>,
    phase_offset_deg: Option<f64>,
}

/// Parse and validate a config document into a [`RunConfig`].
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let entries = lex(text)?;

    let mut turbine = TurbineParameters::dtu_10mw();
    // The preset key replaces the whole parameter set, so apply it before any
    // inline turbine overrides regardless of file order.
    for entry in entries
        .iter()
        .filter(|e| e.section == "turbine" && e.key == "preset")
    {
        turbine = TurbineParameters::preset(&entry.value)
            .map_err(|e| ConfigError::for_key("turbine", "preset", e.to_string()))?;
    }

    let mut inflow = InflowModel::default_turbulent();
    let mut inflow_seed_explicit = false;
    let mut mixing = MixingParams::default();
    let mut sim = SimulationConfig::default();
    let mut positions: Option<Vec<(f64, f64)>> = None;
    let mut planes_d = vec![3.0, 5.0, 7.0];
    let mut out_dir: Option<PathBuf> = None;
    let mut strategy_drafts: Vec<(usize, StrategyDraft)> = Vec::new();

    for entry in &entries {
        match entry.section.as_str() {
            "turbine" => match entry.key.as_str() {
                "preset" => {}
                key => {
                    turbine
                        .apply_key(key, &entry.value)
                        .map_err(|e| ConfigError::at_entry(entry, e.to_string()))?;
                }
            },
            "farm" => match entry.key.as_str() {
                "positions" => positions = Some(parse_positions(entry)?),
                "planes_d" => planes_d = parse_float_list(entry)?,
                _ => return Err(ConfigError::at_entry(entry, "unknown key")),
            },
            "inflow" => match entry.key.as_str() {
                "u_inf" => inflow.u_inf = parse_f64(entry)?,
                "turbulence_intensity" => inflow.turbulence_intensity = parse_f64(entry)?,
                "integral_time" => inflow.integral_time = parse_f64(entry)?,
                "seed" => {
                    inflow.seed = parse_u64(entry)?;
                    inflow_seed_explicit = true;
                }
                _ => return Err(ConfigError::at_entry(entry, "unknown key")),
            },
            "mixing" => match entry.key.as_str() {
                "k_base" => mixing.k_base = parse_f64(entry)?,
                "c_meander" => mixing.c_meander = parse_f64(entry)?,
                "c_ti" => mixing.c_ti = parse_f64(entry)?,
                "width_growth" => mixing.width_growth = parse_f64(entry)?,
                _ => return Err(ConfigError::at_entry(entry, "unknown key")),
            },
            "sim" => match entry.key.as_str() {
                "dt" => sim.dt = parse_f64(entry)?,
                "duration" => sim.duration = parse_f64(entry)?,
                "warmup" => sim.warmup = parse_f64(entry)?,
                "output_step" => sim.output_step = parse_f64(entry)?,
                "seed" => sim.seed = parse_u64(entry)?,
                "out_dir" => out_dir = Some(PathBuf::from(&entry.value)),
                _ => return Err(ConfigError::at_entry(entry, "unknown key")),
            },
            section => {
                let index = parse_strategy_section(section).ok_or_else(|| {
                    ConfigError::general(format!("unknown section '[{section}]'"))
                })?;
                let draft = match strategy_drafts.iter_mut().find(|(i, _)| *i == index) {
                    Some((_, draft)) => draft,
                    None => {
                        strategy_drafts.push((index, StrategyDraft::default()));
                        &mut strategy_drafts.last_mut().unwrap().1
                    }
                };
                match entry.key.as_str() {
                    "kind" => {
                        draft.kind = Some(StrategyKind::parse(&entry.value).ok_or_else(|| {
                            ConfigError::at_entry(
                                entry,
                                format!(
                                    "unknown strategy '{}'; expected one of {}",
                                    entry.value,
                                    StrategyKind::ALL.map(|k| k.name()).join(", ")
                                ),
                            )
                        })?)
                    }
                    "amplitude_deg" => draft.amplitude_deg = Some(parse_f64(entry)?),
                    "strouhal" => draft.strouhal = Some(parse_f64(entry)?),
                    "phase_offset_deg" => draft.phase_offset_deg = Some(parse_f64(entry)?),
                    _ => return Err(ConfigError::at_entry(entry, "unknown key")),
                }
            }
        }
    }

    if !inflow_seed_explicit {
        inflow.seed = sim.seed;
    }
    let layout = FarmLayout {
        positions: positions.unwrap_or_else(|| vec![(0.0, 0.0)]),
    };
    let n_turbines = layout.positions.len();

    let mut strategies = vec![StrategySpec::baseline(); n_turbines];
    for (index, draft) in &strategy_drafts {
        let section = format!("strategy.{index}");
        if *index > n_turbines {
            return Err(ConfigError::general(format!(
                "[{section}] refers to turbine {index} but the farm has {n_turbines}"
            )));
        }
        let kind = draft.kind.ok_or_else(|| {
            ConfigError::for_key(&section, "kind", "required in a strategy section")
        })?;
        let amplitude = draft.amplitude_deg.unwrap_or(0.0);
        if !(0.0..=MAX_AMPLITUDE_DEG).contains(&amplitude) {
            return Err(ConfigError::for_key(
                &section,
                "amplitude_deg",
                format!("must be in [0, {MAX_AMPLITUDE_DEG}], got {amplitude}"),
            ));
        }
        let strouhal = draft.strouhal.unwrap_or(DEFAULT_STROUHAL);
        let mut spec = StrategySpec::new(kind, amplitude, strouhal)
            .map_err(|e| ConfigError::for_key(&section, "kind", e.to_string()))?;
        if let Some(phase) = draft.phase_offset_deg {
            spec.phase_offset_deg = phase;
            if let Some(required) = kind.required_phase_offset_deg() {
                if (phase - required).abs() > 1e-9 {
                    return Err(ConfigError::for_key(
                        &section,
                        "phase_offset_deg",
                        format!("must be {required} for {}", kind.name()),
                    ));
                }
            } else if phase != 0.0 {
                return Err(ConfigError::for_key(
                    &section,
                    "phase_offset_deg",
                    format!("not applicable to {}", kind.name()),
                ));
            }
        }
        strategies[index - 1] = spec;
    }

    let case = CaseConfig {
        label: "run".to_string(),
        layout,
        strategies,
        turbine,
        inflow,
        mixing,
        sim,
        planes_d,
    };
    case.validate()
        .map_err(|e| ConfigError::general(e.to_string()))?;
    Ok(RunConfig { case, out_dir })
}

/// Canonical serialization; `parse_config` of the output reproduces the same
/// [`RunConfig`].
pub fn serialize_config(config: &RunConfig) -> String {
    let case = &config.case;
    let mut out = String::new();
    out.push_str("[turbine]\n");
    for line in case.turbine.to_records().lines() {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("\n[farm]\npositions = ");
    let positions: Vec<String> = case
        .layout
        .positions
        .iter()
        .map(|(x, y)| format!("{x},{y}"))
        .collect();
    out.push_str(&positions.join("; "));
    out.push_str("\nplanes_d = ");
    let planes: Vec<String> = case.planes_d.iter().map(|p| p.to_string()).collect();
    out.push_str(&planes.join(", "));
    out.push_str(&format!(
        "\n\n[inflow]\nu_inf = {}\nturbulence_intensity = {}\nintegral_time = {}\nseed = {}\n",
        case.inflow.u_inf,
        case.inflow.turbulence_intensity,
        case.inflow.integral_time,
        case.inflow.seed
    ));
    out.push_str(&format!(
        "\n[mixing]\nk_base = {}\nc_meander = {}\nc_ti = {}\nwidth_growth = {}\n",
        case.mixing.k_base, case.mixing.c_meander, case.mixing.c_ti, case.mixing.width_growth
    ));
    for (i, s) in case.strategies.iter().enumerate() {
        out.push_str(&format!(
            "\n[strategy.{}]\nkind = {}\namplitude_deg = {}\nstrouhal = {}\nphase_offset_deg = {}\n",
            i + 1,
            s.kind.name(),
            s.amplitude_deg,
            s.strouhal,
            s.phase_offset_deg
        ));
    }
    out.push_str(&format!(
        "\n[sim]\ndt = {}\nduration = {}\nwarmup = {}\noutput_step = {}\nseed = {}\n",
        case.sim.dt, case.sim.duration, case.sim.warmup, case.sim.output_step, case.sim.seed
    ));
    if let Some(dir) = &config.out_dir {
        out.push_str(&format!("out_dir = {}\n", dir.display()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[turbine]\npreset = DTU10MW\n";

    #[test]
    fn minimal_config_gets_documented_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.case.inflow.u_inf, 9.0);
        assert_eq!(cfg.case.inflow.turbulence_intensity, 0.05);
        assert_eq!(cfg.case.layout.positions.len(), 1);
        assert_eq!(cfg.case.strategies[0].kind, StrategyKind::Baseline);
        assert_eq!(cfg.case.planes_d, vec![3.0, 5.0, 7.0]);
    }

    #[test]
    fn negative_amplitude_names_the_key() {
        let text = "[strategy.1]\nkind = HelixCCW\namplitude_deg = -1\n";
        let err = parse_config(text).unwrap_err();
        assert!(
            err.to_string().contains("[strategy.1].amplitude_deg"),
            "{err}"
        );
    }

    #[test]
    fn helix_cw_rejects_wrong_phase() {
        let text = "[strategy.1]\nkind = HelixCW\namplitude_deg = 4\nphase_offset_deg = 90\n";
        let err = parse_config(text).unwrap_err();
        assert!(
            err.to_string().contains("[strategy.1].phase_offset_deg"),
            "{err}"
        );
        assert!(err.to_string().contains("270"), "{err}");
    }

    #[test]
    fn unknown_keys_and_sections_are_errors() {
        let err = parse_config("[inflow]\nfoo = 1\n").unwrap_err();
        assert!(err.to_string().contains("[inflow].foo"), "{err}");
        let err = parse_config("[nonsense]\na = 1\n").unwrap_err();
        assert!(err.to_string().contains("unknown section"), "{err}");
        let err = parse_config("stray = 1\n").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn duplicate_key_is_an_error() {
        let err = parse_config("[inflow]\nu_inf = 9\nu_inf = 10\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn strategy_index_must_match_farm() {
        let text = "[strategy.2]\nkind = Baseline\n";
        let err = parse_config(text).unwrap_err();
        assert!(err.to_string().contains("turbine 2"), "{err}");
    }

    #[test]
    fn round_trip_is_stable() {
        let text = "\
[turbine]
preset = DTU10MW
cp_ref = 0.45

[farm]
positions = 0,0; 891.5,0
planes_d = 3, 5, 7

[inflow]
u_inf = 9.0
turbulence_intensity = 0.05

[strategy.1]
kind = HelixCCW
amplitude_deg = 4.0
strouhal = 0.25

[sim]
dt = 0.25
duration = 1400
warmup = 600
seed = 11
";
        let parsed = parse_config(text).unwrap();
        let serialized = serialize_config(&parsed);
        let reparsed = parse_config(&serialized).unwrap();
        assert_eq!(parsed, reparsed);
        // Inflow seed defaulted from [sim].
        assert_eq!(parsed.case.inflow.seed, 11);
    }

    #[test]
    fn help_reference_covers_every_key() {
        for key in [
            "preset",
            "rotor_diameter",
            "hub_height",
            "rated_power",
            "rotor_speed",
            "rotor_direction",
            "air_density",
            "cp_ref",
            "ct_ref",
            "cp_lin",
            "cp_quad",
            "ct_lin",
            "ct_quad",
            "deflection_gain",
            "moment_ref",
            "moment_pitch_gain",
            "moment_u_ref",
            "positions",
            "planes_d",
            "u_inf",
            "turbulence_intensity",
            "integral_time",
            "seed",
            "k_base",
            "c_meander",
            "c_ti",
            "width_growth",
            "kind",
            "amplitude_deg",
            "strouhal",
            "phase_offset_deg",
            "dt",
            "duration",
            "warmup",
            "output_step",
            "out_dir",
        ] {
            assert!(
                CONFIG_KEY_REFERENCE.contains(key),
                "missing key '{key}' in reference"
            );
        }
    }
}
