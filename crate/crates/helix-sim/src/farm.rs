//! Time-marching farm simulation, the nine-case study protocol, and the
//! Strouhal sweep harness.
//!
//! A case advances one or two turbines on a shared inflow: sample the ambient
//! velocity, evaluate each rotor against the combined upstream wakes, apply
//! its strategy's pitch commands, and let each rotor's wake state absorb the
//! resulting thrust. Downstream turbines always run greedy baseline control.

use rayon::prelude::*;

use crate::error::{Result, SimError};
use crate::excitation::{
    blade_pitch_commands, fixed_frame_setpoints, ExcitationTiming, StrategyKind, StrategySpec,
};
use crate::metrics::{compute_metrics, CaseAggregates};
use crate::rotor::{aero_response, RotorState, TurbineParameters};
use crate::wake::{
    DiskQuadrature, InflowModel, MixingParams, PlaneGaussian, TurbulenceProcess, WakeState,
    EXTENT_DIAMETERS,
};

/// Strouhal number used when a case has no dynamic strategy (window alignment
/// still needs a period) and by the study protocol.
pub const DEFAULT_STROUHAL: f64 = 0.25;

/// Turbine positions (x, y) in meters on a common hub-height axis.
#[derive(Debug, Clone, PartialEq)]
pub struct FarmLayout {
    pub positions: Vec<(f64, f64)>,
}

impl FarmLayout {
    pub fn single() -> Self {
        Self {
            positions: vec![(0.0, 0.0)],
        }
    }

    /// Two turbines on the axis, `spacing_diameters` rotor diameters apart.
    pub fn two_turbine(spacing_diameters: f64, rotor_diameter: f64) -> Self {
        Self {
            positions: vec![(0.0, 0.0), (spacing_diameters * rotor_diameter, 0.0)],
        }
    }

    pub fn validate(&self, rotor_diameter: f64) -> Result<()> {
        if self.positions.is_empty() {
            return Err(SimError::InvalidConfig(
                "farm.positions must list at least one turbine".into(),
            ));
        }
        for pair in self.positions.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(SimError::InvalidConfig(format!(
                    "farm.positions x must be strictly increasing, got {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        for (i, (x, y)) in self.positions.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(SimError::InvalidConfig(format!(
                    "farm.positions entry {} is not finite",
                    i + 1
                )));
            }
            if y.abs() > 2.0 * rotor_diameter {
                return Err(SimError::InvalidConfig(format!(
                    "farm.positions entry {}: |y| = {} m exceeds 2 D",
                    i + 1,
                    y.abs()
                )));
            }
        }
        Ok(())
    }
}

/// Time discretization and bookkeeping for one case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    /// Step size, s.
    pub dt: f64,
    /// Total simulated time, s.
    pub duration: f64,
    /// Leading span discarded from all aggregates, s.
    pub warmup: f64,
    /// Case seed; configs default the inflow turbulence seed to this value.
    pub seed: u64,
    /// Requested output sampling interval, s (rounded to a multiple of dt).
    pub output_step: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            dt: 0.25,
            duration: 1400.0,
            warmup: 600.0,
            seed: 42,
            output_step: 0.5,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= 2.0) {
            return Err(SimError::InvalidConfig(format!(
                "sim.dt must lie in (0, 2] s, got {}",
                self.dt
            )));
        }
        if !(self.warmup >= 0.0 && self.warmup.is_finite()) {
            return Err(SimError::InvalidConfig(format!(
                "sim.warmup must be non-negative, got {}",
                self.warmup
            )));
        }
        if !(self.duration.is_finite() && self.duration > self.warmup) {
            return Err(SimError::InvalidConfig(format!(
                "sim.duration must exceed sim.warmup, got duration {} warmup {}",
                self.duration, self.warmup
            )));
        }
        if !(self.output_step >= self.dt) {
            return Err(SimError::InvalidConfig(format!(
                "sim.output_step must be >= sim.dt, got {} < {}",
                self.output_step, self.dt
            )));
        }
        Ok(())
    }

    /// Output interval actually used: the nearest whole multiple of dt.
    pub fn effective_output_step(&self) -> f64 {
        let every = (self.output_step / self.dt).round().max(1.0);
        every * self.dt
    }
}

/// Everything needed to run one case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub label: String,
    pub layout: FarmLayout,
    /// One strategy per turbine; turbines after the first must be Baseline.
    pub strategies: Vec<StrategySpec>,
    pub turbine: TurbineParameters,
    pub inflow: InflowModel,
    pub mixing: MixingParams,
    pub sim: SimulationConfig,
    /// Diagnostic planes, rotor diameters downstream of the first turbine.
    pub planes_d: Vec<f64>,
}

impl CaseConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        let mut push = |r: Result<()>| {
            if let Err(e) = r {
                problems.push(e.to_string());
            }
        };
        push(self.turbine.validate());
        push(self.inflow.validate());
        push(self.mixing.validate());
        push(self.sim.validate());
        push(self.layout.validate(self.turbine.rotor_diameter));
        if self.strategies.len() != self.layout.positions.len() {
            problems.push(format!(
                "strategy count {} does not match turbine count {}",
                self.strategies.len(),
                self.layout.positions.len()
            ));
        }
        for (i, s) in self.strategies.iter().enumerate() {
            if let Err(e) = s.validate() {
                problems.push(format!("strategy.{}: {e}", i + 1));
            }
            if i > 0 && s.kind != StrategyKind::Baseline {
                problems.push(format!(
                    "strategy.{}: downstream turbines run Baseline, got {}",
                    i + 1,
                    s.kind.name()
                ));
            }
        }
        for d in &self.planes_d {
            if !(*d > 0.0 && *d <= EXTENT_DIAMETERS) {
                problems.push(format!(
                    "planes_d entry {d} outside (0, {EXTENT_DIAMETERS}] diameters"
                ));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(SimError::InvalidConfig(problems.join("; ")))
        }
    }

    /// Excitation timing governing the case (first turbine's strategy, or the
    /// protocol default of St = 0.25 for static strategies).
    pub fn timing(&self) -> Result<ExcitationTiming> {
        let st = self
            .strategies
            .first()
            .filter(|s| s.kind.is_dynamic())
            .map(|s| s.strouhal)
            .unwrap_or(DEFAULT_STROUHAL);
        ExcitationTiming::from_strouhal(st, self.turbine.rotor_diameter, self.inflow.u_inf)
    }
}

/// Per-turbine output series.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TurbineSeries {
    pub power_w: Vec<f64>,
    pub thrust_n: Vec<f64>,
    pub thrust_tilt_rad: Vec<f64>,
    pub thrust_yaw_rad: Vec<f64>,
    pub pitch_deg: Vec<[f64; 3]>,
    pub u_eff_ms: Vec<f64>,
}

/// Wake diagnostics at one downstream plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneSeries {
    pub plane_d: f64,
    pub plane_x_m: f64,
    pub y_center_m: Vec<f64>,
    pub z_center_m: Vec<f64>,
    pub disk_avg_u_ms: Vec<f64>,
    pub ke_flux_w: Vec<f64>,
}

/// Full output of one case run.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub label: String,
    pub config: CaseConfig,
    pub excitation_period_s: f64,
    pub output_step_s: f64,
    pub time_s: Vec<f64>,
    pub turbines: Vec<TurbineSeries>,
    pub planes: Vec<PlaneSeries>,
    pub aggregates: CaseAggregates,
}

/// Run one case to completion. Deterministic for a fixed config and seed.
pub fn run_case(cfg: &CaseConfig) -> Result<CaseResult> {
    cfg.validate()?;
    let timing = cfg.timing()?;
    let params = &cfg.turbine;
    let d = params.rotor_diameter;
    let n_turbines = cfg.layout.positions.len();

    let mut turbulence = TurbulenceProcess::new(&cfg.inflow);
    let mut wakes: Vec<WakeState> = (0..n_turbines).map(|_| WakeState::new(d)).collect();

    let turbine_quads: Vec<DiskQuadrature> = cfg
        .layout
        .positions
        .iter()
        .map(|(_, y)| DiskQuadrature::new(*y, 0.0, d))
        .collect();
    let plane_quad = DiskQuadrature::new(0.0, 0.0, d);
    let plane_xs: Vec<f64> = cfg
        .planes_d
        .iter()
        .map(|pd| cfg.layout.positions[0].0 + pd * d)
        .collect();

    let dt = cfg.sim.dt;
    let n_steps = (cfg.sim.duration / dt).round() as usize;
    let record_every = (cfg.sim.output_step / dt).round().max(1.0) as usize;
    let n_outputs = n_steps.div_ceil(record_every);

    let mut time_s = Vec::with_capacity(n_outputs);
    let mut turbines = vec![TurbineSeries::default(); n_turbines];
    let mut planes: Vec<PlaneSeries> = cfg
        .planes_d
        .iter()
        .zip(&plane_xs)
        .map(|(pd, px)| PlaneSeries {
            plane_d: *pd,
            plane_x_m: *px,
            y_center_m: Vec::with_capacity(n_outputs),
            z_center_m: Vec::with_capacity(n_outputs),
            disk_avg_u_ms: Vec::with_capacity(n_outputs),
            ke_flux_w: Vec::with_capacity(n_outputs),
        })
        .collect();

    let mut step_aero = Vec::with_capacity(n_turbines);
    for n in 0..n_steps {
        let t = n as f64 * dt;
        let ambient = (cfg.inflow.u_inf + turbulence.step(dt)).max(0.0);
        let record = n % record_every == 0;

        step_aero.clear();
        for i in 0..n_turbines {
            let (x_i, _) = cfg.layout.positions[i];
            // Combined deficit of every upstream wake at this rotor's plane.
            let mut gaussians: Vec<PlaneGaussian> = Vec::new();
            for j in 0..i {
                let local = x_i - cfg.layout.positions[j].0;
                if local > 0.0 && local <= wakes[j].extent() {
                    if let Some(g) = wakes[j].gaussian_at(local)? {
                        gaussians.push(g);
                    }
                }
            }
            let u_eff = turbine_quads[i].average_velocity(&gaussians, ambient);

            let rotor = RotorState::at_time(params, t);
            let spec = &cfg.strategies[i];
            let fixed = fixed_frame_setpoints(t, spec, &timing)?;
            let pitch = blade_pitch_commands(t, &rotor, spec, &timing)?;
            let aero = aero_response(u_eff, &fixed, params)?;

            if record {
                let series = &mut turbines[i];
                series.power_w.push(aero.power);
                series.thrust_n.push(aero.thrust_magnitude);
                series.thrust_tilt_rad.push(aero.thrust_tilt);
                series.thrust_yaw_rad.push(aero.thrust_yaw);
                series.pitch_deg.push(pitch.0);
                series.u_eff_ms.push(u_eff);
            }
            step_aero.push(aero);
        }

        if record {
            time_s.push(t);
            for (plane, px) in planes.iter_mut().zip(&plane_xs) {
                let mut gaussians: Vec<PlaneGaussian> = Vec::new();
                for (j, wake) in wakes.iter().enumerate() {
                    let local = *px - cfg.layout.positions[j].0;
                    if local > 0.0 && local <= wake.extent() {
                        if let Some(g) = wake.gaussian_at(local)? {
                            gaussians.push(g);
                        }
                    }
                }
                let (yc, zc) = wakes[0].center_at(*px - cfg.layout.positions[0].0)?;
                plane.y_center_m.push(yc);
                plane.z_center_m.push(zc);
                plane
                    .disk_avg_u_ms
                    .push(plane_quad.average_velocity(&gaussians, ambient));
                plane.ke_flux_w.push(plane_quad.energy_flux(
                    &gaussians,
                    ambient,
                    params.air_density,
                ));
            }
        }

        for (wake, aero) in wakes.iter_mut().zip(&step_aero) {
            wake.step(aero, &cfg.inflow, &cfg.mixing, dt)?;
        }
    }

    let mut result = CaseResult {
        label: cfg.label.clone(),
        config: cfg.clone(),
        excitation_period_s: timing.period_s,
        output_step_s: cfg.sim.effective_output_step(),
        time_s,
        turbines,
        planes,
        aggregates: CaseAggregates::empty(),
    };
    result.aggregates = compute_metrics(&result)?;
    Ok(result)
}

/// The nine cases of the study protocol: greedy baseline, two static derates,
/// and dynamic induction / CCW helix / CW helix at 2.5 and 4 degrees, all at
/// St = 0.25.
pub fn protocol_cases() -> Vec<(&'static str, &'static str, StrategyKind, f64)> {
    vec![
        ("baseline", "Baseline", StrategyKind::Baseline, 0.0),
        (
            "sic_1deg",
            "Static 1 deg",
            StrategyKind::StaticInduction,
            1.0,
        ),
        (
            "sic_2deg",
            "Static 2 deg",
            StrategyKind::StaticInduction,
            2.0,
        ),
        (
            "dic_2.5deg",
            "DIC 2.5 deg",
            StrategyKind::DynamicInduction,
            2.5,
        ),
        (
            "helix_ccw_2.5deg",
            "CCW Helix 2.5 deg",
            StrategyKind::HelixCcw,
            2.5,
        ),
        (
            "helix_cw_2.5deg",
            "CW Helix 2.5 deg",
            StrategyKind::HelixCw,
            2.5,
        ),
        ("dic_4deg", "DIC 4 deg", StrategyKind::DynamicInduction, 4.0),
        (
            "helix_ccw_4deg",
            "CCW Helix 4 deg",
            StrategyKind::HelixCcw,
            4.0,
        ),
        (
            "helix_cw_4deg",
            "CW Helix 4 deg",
            StrategyKind::HelixCw,
            4.0,
        ),
    ]
}

/// Display label for a case id from [`protocol_cases`].
pub fn case_display_label(id: &str) -> Option<&'static str> {
    protocol_cases()
        .into_iter()
        .find(|(case_id, ..)| *case_id == id)
        .map(|(_, label, ..)| label)
}

/// Shared setup for a protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub two_turbine: bool,
    pub spacing_diameters: f64,
    pub turbine: TurbineParameters,
    pub inflow: InflowModel,
    pub mixing: MixingParams,
    pub sim: SimulationConfig,
    pub planes_d: Vec<f64>,
}

impl SuiteConfig {
    pub fn new(two_turbine: bool) -> Self {
        Self {
            two_turbine,
            spacing_diameters: 5.0,
            turbine: TurbineParameters::dtu_10mw(),
            inflow: InflowModel::default_turbulent(),
            mixing: MixingParams::default(),
            sim: SimulationConfig::default(),
            planes_d: vec![3.0, 5.0, 7.0],
        }
    }

    fn case_config(&self, id: &str, kind: StrategyKind, amplitude: f64) -> Result<CaseConfig> {
        let strategy = if kind == StrategyKind::Baseline {
            StrategySpec::baseline()
        } else {
            StrategySpec::new(kind, amplitude, DEFAULT_STROUHAL)?
        };
        let (layout, strategies) = if self.two_turbine {
            (
                FarmLayout::two_turbine(self.spacing_diameters, self.turbine.rotor_diameter),
                vec![strategy, StrategySpec::baseline()],
            )
        } else {
            (FarmLayout::single(), vec![strategy])
        };
        Ok(CaseConfig {
            label: id.to_string(),
            layout,
            strategies,
            turbine: self.turbine,
            inflow: self.inflow,
            mixing: self.mixing,
            sim: self.sim,
            planes_d: self.planes_d.clone(),
        })
    }

    pub fn case_configs(&self) -> Result<Vec<CaseConfig>> {
        protocol_cases()
            .into_iter()
            .map(|(id, _, kind, amp)| self.case_config(id, kind, amp))
            .collect()
    }
}

/// Run the nine-case protocol; cases execute in parallel, results keep the
/// protocol order.
pub fn run_protocol_suite(cfg: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let configs = cfg.case_configs()?;
    configs.par_iter().map(run_case).collect()
}

/// One row of a Strouhal sweep table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub strouhal: f64,
    pub plane_d: f64,
    /// Mean disk-averaged wake velocity over the baseline case's value.
    pub normalized_velocity: f64,
}

/// Sweep the excitation Strouhal number for a single excited turbine and
/// report wake velocities at the given planes, normalized by an unexcited
/// baseline run. Each case's duration adapts to cover six excitation periods.
pub fn sweep_strouhal(
    st_values: &[f64],
    kind: StrategyKind,
    amplitude_deg: f64,
    planes_d: &[f64],
    turbine: &TurbineParameters,
    inflow: &InflowModel,
    mixing: &MixingParams,
) -> Result<Vec<SweepRow>> {
    if !kind.is_dynamic() {
        return Err(SimError::InvalidConfig(format!(
            "sweep needs a dynamic strategy kind, got {}",
            kind.name()
        )));
    }
    if st_values.is_empty() {
        return Err(SimError::InvalidConfig(
            "sweep needs at least one Strouhal value".into(),
        ));
    }
    for st in st_values {
        if !(*st > 0.05 && *st <= 1.0) {
            return Err(SimError::InvalidConfig(format!(
                "strouhal {st} outside (0.05, 1.0]"
            )));
        }
    }

    let warmup = 2.0 * EXTENT_DIAMETERS * turbine.rotor_diameter / inflow.u_inf;
    let sim_for = |period: f64| SimulationConfig {
        dt: 0.25,
        duration: warmup + 6.5 * period,
        warmup,
        seed: inflow.seed,
        output_step: 0.5,
    };
    let base_case = CaseConfig {
        label: "sweep_baseline".into(),
        layout: FarmLayout::single(),
        strategies: vec![StrategySpec::baseline()],
        turbine: *turbine,
        inflow: *inflow,
        mixing: *mixing,
        sim: sim_for(crate::excitation::excitation_period(
            DEFAULT_STROUHAL,
            turbine.rotor_diameter,
            inflow.u_inf,
        )?),
        planes_d: planes_d.to_vec(),
    };
    let baseline = run_case(&base_case)?;

    let cases: Vec<CaseConfig> = st_values
        .iter()
        .map(|st| {
            let period =
                crate::excitation::excitation_period(*st, turbine.rotor_diameter, inflow.u_inf)?;
            Ok(CaseConfig {
                label: format!("sweep_st_{st}"),
                layout: FarmLayout::single(),
                strategies: vec![StrategySpec::new(kind, amplitude_deg, *st)?],
                turbine: *turbine,
                inflow: *inflow,
                mixing: *mixing,
                sim: sim_for(period),
                planes_d: planes_d.to_vec(),
            })
        })
        .collect::<Result<_>>()?;
    let results: Vec<CaseResult> = cases.par_iter().map(run_case).collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(st_values.len() * planes_d.len());
    for (st, result) in st_values.iter().zip(&results) {
        for (p, base_p) in result
            .aggregates
            .planes
            .iter()
            .zip(&baseline.aggregates.planes)
        {
            rows.push(SweepRow {
                strouhal: *st,
                plane_d: p.plane_d,
                normalized_velocity: p.mean_disk_velocity_ms / base_p.mean_disk_velocity_ms,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_case(
        label: &str,
        kind: StrategyKind,
        amplitude: f64,
        two_turbine: bool,
        ti: f64,
    ) -> CaseConfig {
        let turbine = TurbineParameters::dtu_10mw();
        let strategy = if kind == StrategyKind::Baseline {
            StrategySpec::baseline()
        } else {
            StrategySpec::new(kind, amplitude, DEFAULT_STROUHAL).unwrap()
        };
        let (layout, strategies) = if two_turbine {
            (
                FarmLayout::two_turbine(5.0, turbine.rotor_diameter),
                vec![strategy, StrategySpec::baseline()],
            )
        } else {
            (FarmLayout::single(), vec![strategy])
        };
        CaseConfig {
            label: label.into(),
            layout,
            strategies,
            turbine,
            inflow: InflowModel {
                turbulence_intensity: ti,
                ..InflowModel::uniform()
            },
            mixing: MixingParams::default(),
            sim: SimulationConfig {
                dt: 0.25,
                duration: 900.0,
                warmup: 450.0,
                seed: 7,
                output_step: 0.5,
            },
            planes_d: vec![3.0, 5.0, 7.0],
        }
    }

    #[test]
    fn baseline_uniform_power_is_constant_after_warmup() {
        let result = run_case(&quick_case("b", StrategyKind::Baseline, 0.0, false, 0.0)).unwrap();
        let window: Vec<f64> = result
            .time_s
            .iter()
            .zip(&result.turbines[0].power_w)
            .filter(|(t, _)| **t >= 450.0)
            .map(|(_, p)| *p)
            .collect();
        let lo = window.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(hi - lo < 1e-9 * hi);
    }

    #[test]
    fn waked_turbine_produces_less_power() {
        let result = run_case(&quick_case("2t", StrategyKind::Baseline, 0.0, true, 0.0)).unwrap();
        let a = &result.aggregates;
        assert!(a.turbines[1].mean_power_w < 0.8 * a.turbines[0].mean_power_w);
    }

    #[test]
    fn helix_raises_downstream_power_over_baseline() {
        let base = run_case(&quick_case("b", StrategyKind::Baseline, 0.0, true, 0.0)).unwrap();
        let helix = run_case(&quick_case("h", StrategyKind::HelixCcw, 4.0, true, 0.0)).unwrap();
        assert!(
            helix.aggregates.turbines[1].mean_power_w > base.aggregates.turbines[1].mean_power_w,
            "helix {} vs baseline {}",
            helix.aggregates.turbines[1].mean_power_w,
            base.aggregates.turbines[1].mean_power_w
        );
    }

    #[test]
    fn identical_configs_reproduce_bit_identical_results() {
        let cfg = quick_case("r", StrategyKind::HelixCcw, 2.5, true, 0.05);
        let a = run_case(&cfg).unwrap();
        let b = run_case(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wake_reaches_downstream_turbine_no_sooner_than_transport_allows() {
        // From a cold start the first marker needs at least spacing / u_inf
        // seconds to reach the second rotor.
        let mut cfg = quick_case("delay", StrategyKind::Baseline, 0.0, true, 0.0);
        cfg.sim = SimulationConfig {
            dt: 0.25,
            duration: 500.0,
            warmup: 0.0,
            seed: 7,
            output_step: 0.25,
        };
        let result = run_case(&cfg).unwrap();
        let spacing = 5.0 * cfg.turbine.rotor_diameter;
        let min_delay = spacing / cfg.inflow.u_inf;
        let first_waked = result
            .time_s
            .iter()
            .zip(&result.turbines[1].u_eff_ms)
            .find(|(_, u)| **u < 9.0 - 1e-9)
            .map(|(t, _)| *t)
            .expect("wake never arrived");
        assert!(
            first_waked >= min_delay,
            "wake arrived at {first_waked} s, transport bound {min_delay} s"
        );
    }

    #[test]
    fn downstream_strategy_must_be_baseline() {
        let turbine = TurbineParameters::dtu_10mw();
        let cfg = CaseConfig {
            label: "bad".into(),
            layout: FarmLayout::two_turbine(5.0, turbine.rotor_diameter),
            strategies: vec![
                StrategySpec::baseline(),
                StrategySpec::new(StrategyKind::HelixCcw, 4.0, 0.25).unwrap(),
            ],
            turbine,
            inflow: InflowModel::uniform(),
            mixing: MixingParams::default(),
            sim: SimulationConfig::default(),
            planes_d: vec![3.0],
        };
        let err = run_case(&cfg).unwrap_err();
        assert!(err.to_string().contains("strategy.2"));
    }

    #[test]
    fn suite_has_nine_cases_in_protocol_order() {
        let cases = protocol_cases();
        assert_eq!(cases.len(), 9);
        assert_eq!(cases[0].0, "baseline");
        // Cases 5 and 6 differ only in the tilt/yaw phase offset.
        let cfg = SuiteConfig::new(false);
        let configs = cfg.case_configs().unwrap();
        let ccw = &configs[4].strategies[0];
        let cw = &configs[5].strategies[0];
        assert_eq!(ccw.amplitude_deg, cw.amplitude_deg);
        assert_eq!(ccw.strouhal, cw.strouhal);
        assert_eq!(ccw.phase_offset_deg, 90.0);
        assert_eq!(cw.phase_offset_deg, 270.0);
    }

    #[test]
    fn sweep_excitation_never_hurts_recovery() {
        // With the default mixing law any dynamic excitation adds a recovery
        // term, so normalized wake velocities stay at or above one.
        let turbine = TurbineParameters::dtu_10mw();
        let inflow = InflowModel::uniform();
        let mixing = MixingParams::default();
        let st_values = [0.15, 0.25, 0.5];
        let rows = sweep_strouhal(
            &st_values,
            StrategyKind::DynamicInduction,
            4.0,
            &[3.0, 5.0, 7.0],
            &turbine,
            &inflow,
            &mixing,
        )
        .unwrap();
        assert_eq!(rows.len(), st_values.len() * 3);
        assert!(rows.iter().any(|r| r.strouhal == 0.25));
        for row in &rows {
            assert!(
                row.normalized_velocity >= 1.0 - 1e-9,
                "St {} plane {}: {}",
                row.strouhal,
                row.plane_d,
                row.normalized_velocity
            );
        }
    }

    #[test]
    fn sweep_rejects_bad_inputs() {
        let turbine = TurbineParameters::dtu_10mw();
        let inflow = InflowModel::uniform();
        let mixing = MixingParams::default();
        assert!(sweep_strouhal(
            &[0.25],
            StrategyKind::Baseline,
            4.0,
            &[3.0],
            &turbine,
            &inflow,
            &mixing
        )
        .is_err());
        assert!(sweep_strouhal(
            &[1.5],
            StrategyKind::DynamicInduction,
            4.0,
            &[3.0],
            &turbine,
            &inflow,
            &mixing
        )
        .is_err());
        assert!(sweep_strouhal(
            &[],
            StrategyKind::DynamicInduction,
            4.0,
            &[3.0],
            &turbine,
            &inflow,
            &mixing
        )
        .is_err());
    }
}
