//! Single-tone spectral measurements.
//!
//! The diagnostics here answer one narrow question: where does a periodic
//! signal concentrate its power? A plain periodogram of an arbitrary record
//! length smears an off-bin tone across neighbouring bins, so the dominant
//! frequency is first refined by maximising the continuous periodogram, then
//! the record is truncated to a whole number of cycles before the final FFT.
//! For a clean sinusoid essentially all power lands in one bin; broadband or
//! multi-tone signals do not pass a high single-bin fraction.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Result of a dominant-tone measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneMeasurement {
    /// Center frequency of the dominant bin, Hz.
    pub frequency_hz: f64,
    /// Fraction of total (mean-removed) signal power in that bin.
    pub power_fraction: f64,
    /// Width of one analysis bin, Hz.
    pub bin_hz: f64,
}

impl ToneMeasurement {
    /// True when `f` lies inside the dominant bin (centered convention).
    pub fn bin_contains(&self, f: f64) -> bool {
        (f - self.frequency_hz).abs() <= 0.5 * self.bin_hz
    }
}

fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}

fn power_spectrum(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let m = mean(samples);
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x - m, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    // One-sided power, DC excluded.
    (1..=n / 2).map(|k| buf[k].norm_sqr()).collect()
}

/// Continuous periodogram magnitude at frequency `f`.
fn periodogram_power(samples: &[f64], dt: f64, f: f64) -> f64 {
    let m = mean(samples);
    let omega = std::f64::consts::TAU * f * dt;
    let mut acc = Complex::new(0.0, 0.0);
    let rot = Complex::from_polar(1.0, -omega);
    let mut phase = Complex::new(1.0, 0.0);
    for &x in samples {
        acc += phase * (x - m);
        phase *= rot;
    }
    acc.norm_sqr()
}

/// Locate the dominant tone of `samples` and measure how much of the signal
/// power sits in its bin. Returns `None` for records that are too short or
/// have no spectral content.
pub fn dominant_tone(samples: &[f64], dt: f64) -> Option<ToneMeasurement> {
    let n = samples.len();
    if n < 32 || !(dt > 0.0) {
        return None;
    }
    let spectrum = power_spectrum(samples);
    let total: f64 = spectrum.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let k0 = spectrum
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i + 1)?;
    let duration = n as f64 * dt;

    // Refine the peak frequency on the continuous periodogram (golden-section
    // over one bin each side; unimodal in that neighbourhood for a tone).
    let mut lo = (k0 as f64 - 1.0) / duration;
    let mut hi = (k0 as f64 + 1.0) / duration;
    for _ in 0..60 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if periodogram_power(samples, dt, a) < periodogram_power(samples, dt, b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    let f_hat = 0.5 * (lo + hi);

    // Truncate to a whole number of cycles so the tone is bin-centered.
    let cycles = (f_hat * duration).floor();
    if cycles < 2.0 {
        return None;
    }
    let n_keep = ((cycles / f_hat) / dt).round() as usize;
    let n_keep = n_keep.min(n).max(32);
    let trimmed = &samples[..n_keep];
    let spectrum = power_spectrum(trimmed);
    let total: f64 = spectrum.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let (k_best, p_best) = spectrum
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, p)| (i + 1, *p))?;
    let span = n_keep as f64 * dt;
    Some(ToneMeasurement {
        frequency_hz: k_best as f64 / span,
        power_fraction: p_best / total,
        bin_hz: 1.0 / span,
    })
}

/// Amplitude and phase of the component of `samples` at `f_hz`, measured over
/// a whole number of cycles. Phase follows the `A*cos(w t + phi)` convention
/// with t = 0 at the first sample. Returns `None` when fewer than two whole
/// cycles fit in the record.
pub fn amplitude_phase_at(samples: &[f64], dt: f64, f_hz: f64) -> Option<(f64, f64)> {
    let n = samples.len();
    if n < 8 || !(dt > 0.0) || !(f_hz > 0.0) {
        return None;
    }
    let duration = n as f64 * dt;
    let cycles = (f_hz * duration).floor();
    if cycles < 2.0 {
        return None;
    }
    let n_keep = (((cycles / f_hz) / dt).round() as usize).min(n);
    let omega = std::f64::consts::TAU * f_hz;
    let mut acc = Complex::new(0.0, 0.0);
    for (i, &x) in samples[..n_keep].iter().enumerate() {
        let t = i as f64 * dt;
        acc += Complex::from_polar(1.0, -omega * t) * x;
    }
    acc *= 2.0 / n_keep as f64;
    Some((acc.norm(), acc.arg()))
}

/// Wrap an angle difference into (-pi, pi].
pub fn wrap_phase(delta: f64) -> f64 {
    let mut d = delta % std::f64::consts::TAU;
    if d > std::f64::consts::PI {
        d -= std::f64::consts::TAU;
    } else if d <= -std::f64::consts::PI {
        d += std::f64::consts::TAU;
    }
    d
}
