//! Desk-scale wind farm wake-mixing simulator.
//!
//! The library models an upstream turbine that stirs its own wake with one of
//! five control strategies -- greedy baseline, static induction (collective
//! derate), periodic dynamic induction (collective pitch sinusoid), and the
//! counterclockwise / clockwise helix variants (quadrature tilt/yaw pitch
//! signals through the multi-blade coordinate transform) -- and a downstream
//! turbine that harvests the partially recovered wake.
//!
//! The flow model is a deliberately small Lagrangian surrogate: the rotor is a
//! quasi-steady actuator disk, the wake a train of Gaussian deficit markers
//! advected downstream, and recovery a calibrated mixing rate that grows with
//! forced wake meandering and ambient turbulence. It reproduces orderings and
//! signal structure (thrust-direction circling, frequency-shifted blade pitch,
//! smooth thrust under helix forcing), not large-eddy magnitudes.
//!
//! Modules:
//! * [`mbc`] -- forward/inverse multi-blade coordinate (Coleman) transform.
//! * [`excitation`] -- strategy setpoint signals and Strouhal timing.
//! * [`rotor`] -- actuator-disk power/thrust response and blade-load surrogate.
//! * [`wake`] -- marker transport, synthetic turbulence, disk sampling.
//! * [`farm`] -- time-marching case runner, nine-case study protocol, sweeps.
//! * [`metrics`] -- aggregates and baseline-relative reporting.
//! * [`spectral`] -- single-tone spectral measurements used by diagnostics.
//! * [`output`] -- CSV / key-value writers with atomic file replacement.

pub mod error;
pub mod excitation;
pub mod farm;
pub mod mbc;
pub mod metrics;
pub mod output;
pub mod rotor;
pub mod spectral;
pub mod wake;

pub use error::{Result, SimError};
