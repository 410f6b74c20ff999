//! Pitch setpoint generation for the five control strategies.
//!
//! Every strategy is expressed first in the fixed (non-rotating) frame as
//! collective/tilt/yaw pitch setpoints, then mapped to per-blade commands with
//! the inverse multi-blade coordinate transform. The dynamic strategies are
//! timed by a Strouhal number: `f_e = St * U_inf / D`.
//!
//! Helix variants drive tilt and yaw in quadrature. With the yaw signal
//! leading the tilt signal by 90 degrees the blade pitch sinusoid lands at
//! `f_r + f_e` and the wake circles counterclockwise; with a 270 degree offset
//! it lands at `f_r - f_e` and the wake circles clockwise.

use crate::error::{ensure_finite, Result, SimError};
use crate::mbc::{inverse_mbc, BladeVector};
use crate::rotor::RotorState;

/// Largest collective derate / sinusoid amplitude the model accepts, degrees.
pub const MAX_AMPLITUDE_DEG: f64 = 15.0;

/// Strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    /// Static greedy control; zero pitch offsets.
    Baseline,
    /// Constant collective derate (positive pitch toward feather).
    StaticInduction,
    /// Collective pitch sinusoid at the excitation frequency.
    DynamicInduction,
    /// Quadrature tilt/yaw pitch, yaw leading tilt by 90 degrees.
    HelixCcw,
    /// Quadrature tilt/yaw pitch with a 270 degree offset.
    HelixCw,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::Baseline,
        StrategyKind::StaticInduction,
        StrategyKind::DynamicInduction,
        StrategyKind::HelixCcw,
        StrategyKind::HelixCw,
    ];

    /// Canonical name used in configs and reports.
    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::Baseline => "Baseline",
            StrategyKind::StaticInduction => "StaticInduction",
            StrategyKind::DynamicInduction => "DynamicInduction",
            StrategyKind::HelixCcw => "HelixCCW",
            StrategyKind::HelixCw => "HelixCW",
        }
    }

    pub fn parse(text: &str) -> Option<StrategyKind> {
        StrategyKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(text.trim()))
    }

    /// Tilt/yaw phase offset the kind mandates, if any.
    pub fn required_phase_offset_deg(&self) -> Option<f64> {
        match self {
            StrategyKind::HelixCcw => Some(90.0),
            StrategyKind::HelixCw => Some(270.0),
            _ => None,
        }
    }

    /// True for strategies with a time-varying setpoint.
    pub fn is_dynamic(&self) -> bool {
        matches!(
            self,
            StrategyKind::DynamicInduction | StrategyKind::HelixCcw | StrategyKind::HelixCw
        )
    }
}

/// A fully specified control strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategySpec {
    pub kind: StrategyKind,
    /// Derate magnitude for static induction, sinusoid amplitude otherwise. Degrees.
    pub amplitude_deg: f64,
    /// Dimensionless excitation frequency; unused by Baseline/StaticInduction.
    pub strouhal: f64,
    /// Tilt-to-yaw phase offset, degrees. 90 for the CCW helix, 270 for CW.
    pub phase_offset_deg: f64,
}

impl StrategySpec {
    pub fn baseline() -> Self {
        Self {
            kind: StrategyKind::Baseline,
            amplitude_deg: 0.0,
            strouhal: 0.25,
            phase_offset_deg: 0.0,
        }
    }

    /// Build a spec with the phase offset mandated by `kind`.
    pub fn new(kind: StrategyKind, amplitude_deg: f64, strouhal: f64) -> Result<Self> {
        let spec = Self {
            kind,
            amplitude_deg,
            strouhal,
            phase_offset_deg: kind.required_phase_offset_deg().unwrap_or(0.0),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite(self.amplitude_deg, "amplitude_deg")?;
        if !(0.0..=MAX_AMPLITUDE_DEG).contains(&self.amplitude_deg) {
            return Err(SimError::InvalidConfig(format!(
                "amplitude_deg must be in [0, {MAX_AMPLITUDE_DEG}], got {}",
                self.amplitude_deg
            )));
        }
        if self.kind.is_dynamic() && !(self.strouhal > 0.0 && self.strouhal.is_finite()) {
            return Err(SimError::InvalidConfig(format!(
                "strouhal must be positive for {}, got {}",
                self.kind.name(),
                self.strouhal
            )));
        }
        if let Some(required) = self.kind.required_phase_offset_deg() {
            if (self.phase_offset_deg - required).abs() > 1e-9 {
                return Err(SimError::InvalidConfig(format!(
                    "phase_offset_deg must be {required} for {}, got {}",
                    self.kind.name(),
                    self.phase_offset_deg
                )));
            }
        }
        Ok(())
    }
}

/// Excitation timing derived from a Strouhal number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitationTiming {
    pub f_e_hz: f64,
    pub omega_e: f64,
    pub period_s: f64,
}

impl ExcitationTiming {
    pub fn from_strouhal(strouhal: f64, rotor_diameter: f64, u_inf: f64) -> Result<Self> {
        let f_e_hz = strouhal_frequency(strouhal, rotor_diameter, u_inf)?;
        Ok(Self {
            f_e_hz,
            omega_e: std::f64::consts::TAU * f_e_hz,
            period_s: 1.0 / f_e_hz,
        })
    }
}

/// Collective/tilt/yaw pitch setpoints, degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedFramePitch {
    pub theta_0: f64,
    pub theta_tilt: f64,
    pub theta_yaw: f64,
}

impl FixedFramePitch {
    pub const ZERO: FixedFramePitch = FixedFramePitch {
        theta_0: 0.0,
        theta_tilt: 0.0,
        theta_yaw: 0.0,
    };
}

fn check_positive(value: f64, what: &str) -> Result<f64> {
    ensure_finite(value, what)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(SimError::InvalidInput(format!(
            "{what} must be positive, got {value}"
        )))
    }
}

/// Excitation frequency in Hz: `f_e = St * U_inf / D`.
pub fn strouhal_frequency(strouhal: f64, rotor_diameter: f64, u_inf: f64) -> Result<f64> {
    check_positive(strouhal, "strouhal")?;
    check_positive(rotor_diameter, "rotor_diameter")?;
    check_positive(u_inf, "u_inf")?;
    Ok(strouhal * u_inf / rotor_diameter)
}

/// Excitation period in seconds: `T_e = D / (St * U_inf) = 1 / f_e`.
pub fn excitation_period(strouhal: f64, rotor_diameter: f64, u_inf: f64) -> Result<f64> {
    Ok(1.0 / strouhal_frequency(strouhal, rotor_diameter, u_inf)?)
}

/// Fixed-frame pitch setpoints at time `t`.
///
/// * Baseline: zero.
/// * StaticInduction: constant `(+A, 0, 0)`; positive pitch feathers the rotor.
/// * DynamicInduction: `(A sin(w_e t), 0, 0)`.
/// * HelixCcw: `(0, A sin(w_e t), A cos(w_e t))` -- yaw leads tilt by 90 deg.
/// * HelixCw: `(0, A sin(w_e t), -A cos(w_e t))` -- 270 deg offset.
pub fn fixed_frame_setpoints(
    t: f64,
    spec: &StrategySpec,
    timing: &ExcitationTiming,
) -> Result<FixedFramePitch> {
    ensure_finite(t, "time")?;
    if t < 0.0 {
        return Err(SimError::InvalidInput(format!(
            "time must be non-negative, got {t}"
        )));
    }
    let a = spec.amplitude_deg;
    let phase = timing.omega_e * t;
    Ok(match spec.kind {
        StrategyKind::Baseline => FixedFramePitch::ZERO,
        StrategyKind::StaticInduction => FixedFramePitch {
            theta_0: a,
            theta_tilt: 0.0,
            theta_yaw: 0.0,
        },
        StrategyKind::DynamicInduction => FixedFramePitch {
            theta_0: a * phase.sin(),
            theta_tilt: 0.0,
            theta_yaw: 0.0,
        },
        StrategyKind::HelixCcw => FixedFramePitch {
            theta_0: 0.0,
            theta_tilt: a * phase.sin(),
            theta_yaw: a * phase.cos(),
        },
        StrategyKind::HelixCw => FixedFramePitch {
            theta_0: 0.0,
            theta_tilt: a * phase.sin(),
            theta_yaw: -a * phase.cos(),
        },
    })
}

/// Per-blade pitch commands in degrees: the inverse MBC image of
/// [`fixed_frame_setpoints`] at the rotor's current blade azimuths.
///
/// For a helix at constant rotor speed this collapses to a single sinusoid
/// per blade, `A sin((w_r + w_e) t + psi_0b)` for CCW and
/// `-A sin((w_r - w_e) t + psi_0b)` for CW.
pub fn blade_pitch_commands(
    t: f64,
    rotor: &RotorState,
    spec: &StrategySpec,
    timing: &ExcitationTiming,
) -> Result<BladeVector> {
    let fixed = fixed_frame_setpoints(t, spec, timing)?;
    let fixed_vec = crate::mbc::FixedFrameVector {
        collective: fixed.theta_0,
        tilt: fixed.theta_tilt,
        yaw: fixed.theta_yaw,
    };
    inverse_mbc(&rotor.blade_azimuths(), &fixed_vec)
}

/// Frequency of the dominant component of the blade pitch signal.
///
/// Zero for the static strategies, `f_e` for dynamic induction, `f_r + f_e`
/// for the CCW helix and `f_r - f_e` for CW. Helix variants require
/// `f_r > f_e` (the model assumes a slow excitation).
pub fn dominant_pitch_frequency(
    spec: &StrategySpec,
    f_r_hz: f64,
    timing: &ExcitationTiming,
) -> Result<f64> {
    check_positive(f_r_hz, "rotor frequency")?;
    match spec.kind {
        StrategyKind::Baseline | StrategyKind::StaticInduction => Ok(0.0),
        StrategyKind::DynamicInduction => Ok(timing.f_e_hz),
        StrategyKind::HelixCcw | StrategyKind::HelixCw => {
            if f_r_hz <= timing.f_e_hz {
                return Err(SimError::InvalidConfig(format!(
                    "helix strategies need f_r > f_e, got f_r = {f_r_hz} Hz, f_e = {} Hz",
                    timing.f_e_hz
                )));
            }
            if spec.kind == StrategyKind::HelixCcw {
                Ok(f_r_hz + timing.f_e_hz)
            } else {
                Ok(f_r_hz - timing.f_e_hz)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotor::TurbineParameters;
    use approx::assert_abs_diff_eq;

    const D: f64 = 178.3;
    const U: f64 = 9.0;

    fn timing() -> ExcitationTiming {
        ExcitationTiming::from_strouhal(0.25, D, U).unwrap()
    }

    #[test]
    fn strouhal_frequency_values() {
        // St = 0.25 on the 178.3 m rotor at 9 m/s gives the 0.0126 Hz timing.
        assert_abs_diff_eq!(
            strouhal_frequency(0.25, D, U).unwrap(),
            0.012_619_181_155_356_141,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            strouhal_frequency(0.5, D, U).unwrap(),
            0.025_238_362_310_712_283,
            epsilon = 1e-15
        );
        assert!(strouhal_frequency(0.0, D, U).is_err());
        assert!(strouhal_frequency(0.25, -1.0, U).is_err());
    }

    #[test]
    fn excitation_period_values() {
        assert_abs_diff_eq!(
            excitation_period(0.25, D, U).unwrap(),
            79.244_444_444_444_45,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            excitation_period(1.0, 1.0, 1.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            excitation_period(0.25, D, 4.5).unwrap(),
            158.488_888_888_888_9,
            epsilon = 1e-12
        );
    }

    #[test]
    fn fixed_frame_setpoints_per_strategy() {
        let t = timing();
        let ccw = StrategySpec::new(StrategyKind::HelixCcw, 4.0, 0.25).unwrap();
        let p = fixed_frame_setpoints(0.0, &ccw, &t).unwrap();
        assert_abs_diff_eq!(p.theta_tilt, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.theta_yaw, 4.0, epsilon = 1e-12);

        let quarter = t.period_s / 4.0;
        let p = fixed_frame_setpoints(quarter, &ccw, &t).unwrap();
        assert_abs_diff_eq!(p.theta_tilt, 4.0, epsilon = 1e-9);
        assert_abs_diff_eq!(p.theta_yaw, 0.0, epsilon = 1e-9);

        let sic = StrategySpec::new(StrategyKind::StaticInduction, 2.0, 0.25).unwrap();
        for &time in &[0.0, 17.3, 500.0] {
            let p = fixed_frame_setpoints(time, &sic, &t).unwrap();
            assert_eq!((p.theta_0, p.theta_tilt, p.theta_yaw), (2.0, 0.0, 0.0));
        }

        assert!(fixed_frame_setpoints(-0.1, &ccw, &t).is_err());
    }

    #[test]
    fn blade_commands_at_time_zero() {
        let params = TurbineParameters::dtu_10mw();
        let rotor = RotorState::at_time(&params, 0.0);
        let ccw = StrategySpec::new(StrategyKind::HelixCcw, 2.5, 0.25).unwrap();
        let v = blade_pitch_commands(0.0, &rotor, &ccw, &timing()).unwrap();
        // theta_b = A sin(psi_0b) at t = 0.
        assert_abs_diff_eq!(v.0[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.0[1], 2.5 * (120f64.to_radians()).sin(), epsilon = 1e-12);
        assert_abs_diff_eq!(v.0[2], 2.5 * (240f64.to_radians()).sin(), epsilon = 1e-12);

        let baseline = StrategySpec::baseline();
        for &t in &[0.0, 3.7, 80.0] {
            let rotor = RotorState::at_time(&params, t);
            let v = blade_pitch_commands(t, &rotor, &baseline, &timing()).unwrap();
            assert_eq!(v.0, [0.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn helix_commands_match_closed_form() {
        // Composition through the inverse MBC against the frequency-shifted
        // sinusoid derived by expanding the transform by hand.
        let params = TurbineParameters::dtu_10mw();
        let t = timing();
        let omega_r = params.rotor_speed;
        let ccw = StrategySpec::new(StrategyKind::HelixCcw, 2.5, 0.25).unwrap();
        let cw = StrategySpec::new(StrategyKind::HelixCw, 2.5, 0.25).unwrap();
        for step in 0..400 {
            let time = step as f64 * 1.37;
            let rotor = RotorState::at_time(&params, time);
            let v_ccw = blade_pitch_commands(time, &rotor, &ccw, &t).unwrap();
            let v_cw = blade_pitch_commands(time, &rotor, &cw, &t).unwrap();
            for b in 0..3 {
                let psi0 = b as f64 * 120f64.to_radians();
                let expect_ccw = 2.5 * ((omega_r + t.omega_e) * time + psi0).sin();
                let expect_cw = -2.5 * ((omega_r - t.omega_e) * time + psi0).sin();
                assert_abs_diff_eq!(v_ccw.0[b], expect_ccw, epsilon = 1e-9);
                assert_abs_diff_eq!(v_cw.0[b], expect_cw, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn quadrature_magnitude_is_constant() {
        let t = timing();
        for kind in [StrategyKind::HelixCcw, StrategyKind::HelixCw] {
            let spec = StrategySpec::new(kind, 4.0, 0.25).unwrap();
            for step in 0..200 {
                let time = step as f64 * 0.77;
                let p = fixed_frame_setpoints(time, &spec, &t).unwrap();
                assert_abs_diff_eq!(
                    p.theta_tilt.powi(2) + p.theta_yaw.powi(2),
                    16.0,
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn dominant_frequency_per_strategy() {
        let t = timing();
        let f_r = 0.12;
        let ccw = StrategySpec::new(StrategyKind::HelixCcw, 4.0, 0.25).unwrap();
        let cw = StrategySpec::new(StrategyKind::HelixCw, 4.0, 0.25).unwrap();
        let dic = StrategySpec::new(StrategyKind::DynamicInduction, 4.0, 0.25).unwrap();
        assert_abs_diff_eq!(
            dominant_pitch_frequency(&ccw, f_r, &t).unwrap(),
            0.132_619_181_155_356_15,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            dominant_pitch_frequency(&cw, f_r, &t).unwrap(),
            0.107_380_818_844_643_86,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            dominant_pitch_frequency(&dic, f_r, &t).unwrap(),
            0.012_619_181_155_356_141,
            epsilon = 1e-15
        );
        assert_eq!(
            dominant_pitch_frequency(&StrategySpec::baseline(), f_r, &t).unwrap(),
            0.0
        );
        // Excitation faster than rotation is outside the model.
        assert!(dominant_pitch_frequency(&ccw, 0.01, &t).is_err());
    }

    #[test]
    fn helix_blade_amplitude_is_preserved() {
        // The per-blade signal is A sin((w_r +/- w_e) t + psi0); check the
        // value at the analytic peak instant and that a grid never exceeds it.
        let params = TurbineParameters::dtu_10mw();
        let t = timing();
        let a = 2.5;
        let spec = StrategySpec::new(StrategyKind::HelixCcw, a, 0.25).unwrap();
        let omega_theta = params.rotor_speed + t.omega_e;
        let t_peak = (std::f64::consts::FRAC_PI_2) / omega_theta;
        let rotor = RotorState::at_time(&params, t_peak);
        let v = blade_pitch_commands(t_peak, &rotor, &spec, &t).unwrap();
        assert_abs_diff_eq!(v.0[0], a, epsilon = 1e-9);

        let mut max_seen = 0.0f64;
        for step in 0..20_000 {
            let time = step as f64 * 0.05;
            let rotor = RotorState::at_time(&params, time);
            let v = blade_pitch_commands(time, &rotor, &spec, &t).unwrap();
            for b in 0..3 {
                max_seen = max_seen.max(v.0[b].abs());
            }
        }
        assert!(max_seen <= a + 1e-12);
        assert!(max_seen > a - 1e-3);
    }

    #[test]
    fn strategy_spec_validation() {
        assert!(StrategySpec::new(StrategyKind::HelixCcw, -1.0, 0.25).is_err());
        assert!(StrategySpec::new(StrategyKind::HelixCcw, 16.0, 0.25).is_err());
        assert!(StrategySpec::new(StrategyKind::DynamicInduction, 4.0, 0.0).is_err());
        let mut bad = StrategySpec::new(StrategyKind::HelixCw, 4.0, 0.25).unwrap();
        bad.phase_offset_deg = 90.0;
        assert!(bad.validate().is_err());
    }
}
