//! Lagrangian wake surrogate.
//!
//! Each rotor sheds one Gaussian deficit marker per simulation step. Markers
//! carry the wake-center offset frozen at emission, advect downstream at the
//! deficit-reduced convection speed, spread linearly, and recover at a mixing
//! rate that grows with forced wake meandering, emitted-deficit pulsing and
//! ambient turbulence intensity:
//!
//! ```text
//! k_eff = k_base * (1 + c_meander * (sigma_m / D + 0.5 * sigma_pulse) + c_ti * TI)
//! ```
//!
//! `sigma_m` is the RMS radial offset of the near-wake deflection state and
//! `sigma_pulse` the standard deviation of the emitted centerline deficit,
//! both tracked with exponential moving averages. Inflow turbulence is a
//! mean-reverting (Ornstein-Uhlenbeck) longitudinal perturbation, fully
//! determined by its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SimError};
use crate::rotor::AeroOutput;

/// Markers are dropped once they pass this many diameters downstream.
pub const EXTENT_DIAMETERS: f64 = 10.0;
/// Initial Gaussian deficit width (std) as a fraction of the rotor diameter.
pub const INITIAL_WIDTH_FRACTION: f64 = 0.25;
/// Lever arm converting thrust-direction angle to near-wake center offset,
/// in rotor diameters.
pub const DEFLECTION_LEVER_DIAMETERS: f64 = 3.0;
/// Averaging time for the meandering/pulse statistics, in units of the
/// deflection time constant `D / U_inf`.
const STAT_TIME_FACTOR: f64 = 8.0;
/// Weight of the emitted-deficit pulsing term relative to the meandering term.
const PULSE_WEIGHT: f64 = 0.5;
/// Minimum downstream gap kept between markers when a fast marker would
/// overtake a slow one (pulsed emission steepening).
const MIN_MARKER_GAP: f64 = 1e-3;

/// Ambient inflow description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InflowModel {
    /// Mean longitudinal velocity, m/s.
    pub u_inf: f64,
    /// Turbulence intensity (std of the perturbation over `u_inf`).
    pub turbulence_intensity: f64,
    /// Autocorrelation time of the perturbation, s.
    pub integral_time: f64,
    /// Seed of the synthetic turbulence stream.
    pub seed: u64,
}

impl InflowModel {
    /// 9 m/s at 5% turbulence intensity.
    pub fn default_turbulent() -> Self {
        Self {
            u_inf: 9.0,
            turbulence_intensity: 0.05,
            integral_time: 25.0,
            seed: 42,
        }
    }

    /// 9 m/s laminar inflow.
    pub fn uniform() -> Self {
        Self {
            u_inf: 9.0,
            turbulence_intensity: 0.0,
            integral_time: 25.0,
            seed: 42,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u_inf.is_finite() && self.u_inf > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "u_inf must be positive, got {}",
                self.u_inf
            )));
        }
        if !(0.0..=0.3).contains(&self.turbulence_intensity) {
            return Err(SimError::InvalidConfig(format!(
                "turbulence_intensity must lie in [0, 0.3], got {}",
                self.turbulence_intensity
            )));
        }
        if !(self.integral_time.is_finite() && self.integral_time > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "integral_time must be positive, got {}",
                self.integral_time
            )));
        }
        Ok(())
    }
}

/// Wake recovery calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingParams {
    /// Base deficit decay rate per diameter traveled.
    pub k_base: f64,
    /// Meandering enhancement gain.
    pub c_meander: f64,
    /// Ambient-turbulence enhancement gain.
    pub c_ti: f64,
    /// Gaussian width growth per meter traveled.
    pub width_growth: f64,
}

impl Default for MixingParams {
    fn default() -> Self {
        Self {
            k_base: 0.08,
            c_meander: 2.0,
            c_ti: 4.0,
            width_growth: 0.02,
        }
    }
}

impl MixingParams {
    pub fn validate(&self) -> Result<()> {
        for (value, name) in [
            (self.k_base, "k_base"),
            (self.c_meander, "c_meander"),
            (self.c_ti, "c_ti"),
            (self.width_growth, "width_growth"),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(SimError::InvalidConfig(format!(
                    "{name} must be non-negative, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// Mean-reverting longitudinal velocity perturbation.
///
/// Uses the exact discretization of the Ornstein-Uhlenbeck recursion, so the
/// stationary standard deviation equals `TI * u_inf` for any step size. A
/// zero turbulence intensity yields an identically zero perturbation without
/// consuming random numbers.
#[derive(Debug, Clone)]
pub struct TurbulenceProcess {
    value: f64,
    sigma: f64,
    tau: f64,
    rng: ChaCha8Rng,
}

impl TurbulenceProcess {
    pub fn new(inflow: &InflowModel) -> Self {
        Self {
            value: 0.0,
            sigma: inflow.turbulence_intensity * inflow.u_inf,
            tau: inflow.integral_time,
            rng: ChaCha8Rng::seed_from_u64(inflow.seed),
        }
    }

    /// Advance by `dt` seconds and return the new perturbation in m/s.
    pub fn step(&mut self, dt: f64) -> f64 {
        assert!(dt > 0.0, "turbulence step requires dt > 0");
        if self.sigma == 0.0 {
            return 0.0;
        }
        let a = (-dt / self.tau).exp();
        let z = self.standard_normal();
        self.value = a * self.value + self.sigma * (1.0 - a * a).sqrt() * z;
        self.value
    }

    pub fn current(&self) -> f64 {
        self.value
    }

    fn standard_normal(&mut self) -> f64 {
        // Box-Muller; 1 - u keeps the log argument in (0, 1].
        let u1: f64 = self.rng.gen();
        let u2: f64 = self.rng.gen();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// One Lagrangian wake cross-section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WakeMarker {
    /// Downstream distance from the emitting rotor, m.
    pub x: f64,
    /// Horizontal / vertical wake-center offset, m.
    pub y_off: f64,
    pub z_off: f64,
    /// Centerline velocity deficit fraction in [0, 1].
    pub deficit: f64,
    /// Gaussian radial standard deviation, m.
    pub width: f64,
    /// Emission time, s.
    pub t_emit: f64,
}

/// Interpolated Gaussian deficit at a sampling plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneGaussian {
    pub y_center: f64,
    pub z_center: f64,
    pub deficit: f64,
    pub width: f64,
}

/// Wake of a single rotor: marker train plus near-wake deflection state.
#[derive(Debug, Clone, PartialEq)]
pub struct WakeState {
    rotor_diameter: f64,
    x_max: f64,
    /// Oldest marker first (largest x), strictly decreasing x.
    markers: Vec<WakeMarker>,
    pub deflection_y: f64,
    pub deflection_z: f64,
    time: f64,
    stats_primed: bool,
    defl_mean_y: f64,
    defl_mean_z: f64,
    defl_sq_y: f64,
    defl_sq_z: f64,
    deficit_mean: f64,
    deficit_sq: f64,
}

impl WakeState {
    pub fn new(rotor_diameter: f64) -> Self {
        Self {
            rotor_diameter,
            x_max: EXTENT_DIAMETERS * rotor_diameter,
            markers: Vec::new(),
            deflection_y: 0.0,
            deflection_z: 0.0,
            time: 0.0,
            stats_primed: false,
            defl_mean_y: 0.0,
            defl_mean_z: 0.0,
            defl_sq_y: 0.0,
            defl_sq_z: 0.0,
            deficit_mean: 0.0,
            deficit_sq: 0.0,
        }
    }

    pub fn extent(&self) -> f64 {
        self.x_max
    }

    pub fn markers(&self) -> &[WakeMarker] {
        &self.markers
    }

    /// RMS radial offset of the near-wake deflection (meandering amplitude).
    pub fn meandering_sigma(&self) -> f64 {
        let var_y = (self.defl_sq_y - self.defl_mean_y * self.defl_mean_y).max(0.0);
        let var_z = (self.defl_sq_z - self.defl_mean_z * self.defl_mean_z).max(0.0);
        (var_y + var_z).sqrt()
    }

    /// Standard deviation of the emitted centerline deficit.
    pub fn pulse_sigma(&self) -> f64 {
        (self.deficit_sq - self.deficit_mean * self.deficit_mean)
            .max(0.0)
            .sqrt()
    }

    /// Effective deficit decay rate per diameter for the current state.
    pub fn effective_recovery_rate(&self, inflow: &InflowModel, mixing: &MixingParams) -> f64 {
        mixing.k_base
            * (1.0
                + mixing.c_meander
                    * (self.meandering_sigma() / self.rotor_diameter
                        + PULSE_WEIGHT * self.pulse_sigma())
                + mixing.c_ti * inflow.turbulence_intensity)
    }

    /// Advance the wake by one step: relax the near-wake deflection toward the
    /// thrust-direction target, emit a marker at the rotor plane, advect and
    /// recover every marker, drop those beyond the extent.
    pub fn step(
        &mut self,
        aero: &AeroOutput,
        inflow: &InflowModel,
        mixing: &MixingParams,
        dt: f64,
    ) -> Result<()> {
        if !(dt > 0.0 && dt <= 2.0) {
            return Err(SimError::InvalidInput(format!(
                "wake step needs dt in (0, 2] s, got {dt}"
            )));
        }
        let d = self.rotor_diameter;

        // Near-wake deflection: first-order relaxation toward the offset
        // commanded by the thrust-vector direction.
        let tau_w = d / inflow.u_inf;
        let lever = DEFLECTION_LEVER_DIAMETERS * d;
        let target_y = lever * aero.thrust_yaw;
        let target_z = lever * aero.thrust_tilt;
        let alpha_w = 1.0 - (-dt / tau_w).exp();
        self.deflection_y += (target_y - self.deflection_y) * alpha_w;
        self.deflection_z += (target_z - self.deflection_z) * alpha_w;

        // Emitted deficit from 1D momentum theory.
        let ct = aero.effective_ct.clamp(0.0, 1.0);
        let deficit0 = (1.0 - (1.0 - ct).sqrt()).clamp(0.0, 1.0);

        // Meandering / pulsing statistics (EMA primed on the first sample so
        // constant signals carry zero variance from the start).
        let alpha_s = 1.0 - (-dt / (STAT_TIME_FACTOR * tau_w)).exp();
        if !self.stats_primed {
            self.defl_mean_y = self.deflection_y;
            self.defl_mean_z = self.deflection_z;
            self.defl_sq_y = self.deflection_y * self.deflection_y;
            self.defl_sq_z = self.deflection_z * self.deflection_z;
            self.deficit_mean = deficit0;
            self.deficit_sq = deficit0 * deficit0;
            self.stats_primed = true;
        } else {
            self.defl_mean_y += (self.deflection_y - self.defl_mean_y) * alpha_s;
            self.defl_mean_z += (self.deflection_z - self.defl_mean_z) * alpha_s;
            self.defl_sq_y += (self.deflection_y * self.deflection_y - self.defl_sq_y) * alpha_s;
            self.defl_sq_z += (self.deflection_z * self.deflection_z - self.defl_sq_z) * alpha_s;
            self.deficit_mean += (deficit0 - self.deficit_mean) * alpha_s;
            self.deficit_sq += (deficit0 * deficit0 - self.deficit_sq) * alpha_s;
        }

        let k_eff = self.effective_recovery_rate(inflow, mixing);

        // Advect oldest to youngest; a trailing marker may never overtake the
        // one ahead of it.
        let mut prev_x = f64::INFINITY;
        for marker in self.markers.iter_mut() {
            let u_c = inflow.u_inf * (1.0 - 0.5 * marker.deficit);
            let proposed = marker.x + u_c * dt;
            let new_x = proposed.min(prev_x - MIN_MARKER_GAP).max(marker.x);
            let moved = new_x - marker.x;
            marker.x = new_x;
            marker.deficit *= (-k_eff * moved / d).exp();
            marker.width += mixing.width_growth * moved;
            prev_x = new_x;
        }

        self.time += dt;
        self.markers.push(WakeMarker {
            x: 0.0,
            y_off: self.deflection_y,
            z_off: self.deflection_z,
            deficit: deficit0,
            width: INITIAL_WIDTH_FRACTION * d,
            t_emit: self.time,
        });

        let expired = self.markers.iter().take_while(|m| m.x > self.x_max).count();
        if expired > 0 {
            self.markers.drain(..expired);
        }
        Ok(())
    }

    fn check_plane(&self, plane_x: f64) -> Result<()> {
        if !(plane_x > 0.0 && plane_x <= self.x_max) {
            return Err(SimError::PlaneOutOfExtent {
                plane_x,
                x_max: self.x_max,
            });
        }
        Ok(())
    }

    /// Interpolated Gaussian wake cross-section at a downstream plane.
    /// `None` while the wake has not yet reached the plane.
    pub fn gaussian_at(&self, plane_x: f64) -> Result<Option<PlaneGaussian>> {
        self.check_plane(plane_x)?;
        if self.markers.is_empty() || self.markers[0].x < plane_x {
            return Ok(None);
        }
        // Markers are sorted by decreasing x.
        let idx = self.markers.partition_point(|m| m.x >= plane_x);
        let (young, old) = if idx >= self.markers.len() {
            let last = self.markers.len() - 1;
            (&self.markers[last], &self.markers[last])
        } else {
            (&self.markers[idx], &self.markers[idx - 1])
        };
        let span = old.x - young.x;
        let frac = if span > 0.0 {
            (plane_x - young.x) / span
        } else {
            0.0
        };
        let lerp = |a: f64, b: f64| a + (b - a) * frac;
        Ok(Some(PlaneGaussian {
            y_center: lerp(young.y_off, old.y_off),
            z_center: lerp(young.z_off, old.z_off),
            deficit: lerp(young.deficit, old.deficit),
            width: lerp(young.width, old.width),
        }))
    }

    /// Wake-center offset (y, z) at a plane; `(0, 0)` before first arrival.
    pub fn center_at(&self, plane_x: f64) -> Result<(f64, f64)> {
        Ok(match self.gaussian_at(plane_x)? {
            Some(g) => (g.y_center, g.z_center),
            None => (0.0, 0.0),
        })
    }
}

/// Combined deficit fraction of several overlapping wakes at a point.
/// Wakes compose multiplicatively on the remaining velocity.
pub fn point_deficit(gaussians: &[PlaneGaussian], y: f64, z: f64) -> f64 {
    let mut remaining = 1.0;
    for g in gaussians {
        let dy = y - g.y_center;
        let dz = z - g.z_center;
        let r2 = dy * dy + dz * dz;
        let local = g.deficit * (-r2 / (2.0 * g.width * g.width)).exp();
        remaining *= 1.0 - local.clamp(0.0, 1.0);
    }
    (1.0 - remaining).clamp(0.0, 1.0)
}

// 6-point Gauss-Legendre rule on [0, 1], used for the radial direction in the
// equal-area variable s = (r/R)^2.
const GL_NODES: [f64; 6] = [
    0.033_765_242_898_423_98,
    0.169_395_306_766_867_76,
    0.380_690_406_958_401_55,
    0.619_309_593_041_598_45,
    0.830_604_693_233_132_2,
    0.966_234_757_101_576,
];
const GL_WEIGHTS: [f64; 6] = [
    0.085_662_246_189_585_17,
    0.180_380_786_524_069_3,
    0.233_956_967_286_345_52,
    0.233_956_967_286_345_52,
    0.180_380_786_524_069_3,
    0.085_662_246_189_585_17,
];
/// Azimuthal node count of the fixed disk rule.
pub const DISK_AZIMUTH_NODES: usize = 24;
/// Radial node count of the fixed disk rule.
pub const DISK_RADIAL_NODES: usize = 6;

/// Fixed 24 x 6 polar quadrature over a disk; weights sum to the disk area.
#[derive(Debug, Clone)]
pub struct DiskQuadrature {
    nodes: Vec<(f64, f64, f64)>,
    area: f64,
}

impl DiskQuadrature {
    pub fn new(center_y: f64, center_z: f64, diameter: f64) -> Self {
        let radius = 0.5 * diameter;
        let area = std::f64::consts::PI * radius * radius;
        let mut nodes = Vec::with_capacity(DISK_AZIMUTH_NODES * DISK_RADIAL_NODES);
        for (s, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
            let r = radius * s.sqrt();
            let w_node = area * w / DISK_AZIMUTH_NODES as f64;
            for j in 0..DISK_AZIMUTH_NODES {
                let theta = (j as f64 + 0.5) * std::f64::consts::TAU / DISK_AZIMUTH_NODES as f64;
                nodes.push((
                    center_y + r * theta.cos(),
                    center_z + r * theta.sin(),
                    w_node,
                ));
            }
        }
        Self { nodes, area }
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// Disk-averaged velocity under the given wakes.
    pub fn average_velocity(&self, gaussians: &[PlaneGaussian], ambient_u: f64) -> f64 {
        if gaussians.is_empty() {
            return ambient_u;
        }
        let mut acc = 0.0;
        for &(y, z, w) in &self.nodes {
            acc += w * (1.0 - point_deficit(gaussians, y, z));
        }
        ambient_u * acc / self.area
    }

    /// Kinetic energy flux `0.5 * rho * integral(u^3 dA)` through the disk.
    pub fn energy_flux(
        &self,
        gaussians: &[PlaneGaussian],
        ambient_u: f64,
        air_density: f64,
    ) -> f64 {
        let mut acc = 0.0;
        for &(y, z, w) in &self.nodes {
            let u = ambient_u * (1.0 - point_deficit(gaussians, y, z));
            acc += w * u * u * u;
        }
        0.5 * air_density * acc
    }
}

/// Disk-averaged velocity seen by a rotor of `diameter` centered at
/// `(center_y, center_z)` on the plane `plane_x` m downstream of the wake's
/// emitter. Returns the ambient velocity when the wake has not arrived.
pub fn sample_rotor_velocity(
    state: &WakeState,
    ambient_u: f64,
    center: (f64, f64),
    plane_x: f64,
    diameter: f64,
) -> Result<f64> {
    let quad = DiskQuadrature::new(center.0, center.1, diameter);
    Ok(match state.gaussian_at(plane_x)? {
        Some(g) => quad.average_velocity(&[g], ambient_u),
        None => ambient_u,
    })
}

/// Kinetic energy flux through a disk of `diameter` centered on the farm axis
/// at the plane `plane_x` m downstream of the wake's emitter.
pub fn kinetic_energy_flux(
    state: &WakeState,
    ambient_u: f64,
    plane_x: f64,
    diameter: f64,
    air_density: f64,
) -> Result<f64> {
    let quad = DiskQuadrature::new(0.0, 0.0, diameter);
    Ok(match state.gaussian_at(plane_x)? {
        Some(g) => quad.energy_flux(&[g], ambient_u, air_density),
        None => quad.energy_flux(&[], ambient_u, air_density),
    })
}
