//! Multi-blade coordinate (Coleman) transform for a three-bladed rotor.
//!
//! The forward transform projects per-blade quantities (pitch angles, root
//! bending moments) onto the non-rotating collective/tilt/yaw frame; the
//! inverse maps fixed-frame commands back to implementable per-blade values.
//! Both are defined pointwise for arbitrary azimuths; the pair is an exact
//! inverse only when the blades are 2*pi/3 apart.

use std::f64::consts::TAU;

use crate::error::{ensure_finite, Result};

/// Nominal angular spacing between blades of a three-bladed rotor.
pub const BLADE_SPACING: f64 = TAU / 3.0;

/// Azimuth angles of the three blades, radians, zero at vertical upright,
/// positive in the rotation direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BladeAzimuths {
    pub psi: [f64; 3],
}

impl BladeAzimuths {
    pub fn new(psi_1: f64, psi_2: f64, psi_3: f64) -> Result<Self> {
        for (i, p) in [psi_1, psi_2, psi_3].iter().enumerate() {
            ensure_finite(*p, &format!("blade {} azimuth", i + 1))?;
        }
        Ok(Self {
            psi: [psi_1, psi_2, psi_3],
        })
    }

    /// Azimuths of a standard rotor with blade 1 at `psi_1`.
    pub fn equally_spaced(psi_1: f64) -> Self {
        Self {
            psi: [psi_1, psi_1 + BLADE_SPACING, psi_1 + 2.0 * BLADE_SPACING],
        }
    }

    /// Each azimuth wrapped into [0, 2*pi).
    pub fn normalized(&self) -> Self {
        Self {
            psi: self.psi.map(wrap_angle),
        }
    }

    /// True when consecutive blade azimuths are 2*pi/3 apart within `tol`
    /// (compared modulo 2*pi). `tol` must be non-negative.
    pub fn is_equally_spaced(&self, tol: f64) -> bool {
        debug_assert!(tol >= 0.0, "tolerance must be non-negative");
        let d12 = wrap_angle(self.psi[1] - self.psi[0]);
        let d23 = wrap_angle(self.psi[2] - self.psi[1]);
        (d12 - BLADE_SPACING).abs() <= tol && (d23 - BLADE_SPACING).abs() <= tol
    }
}

/// Per-blade quantity (pitch in degrees, moment in N*m; unit-agnostic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BladeVector(pub [f64; 3]);

/// Collective/tilt/yaw components in the non-rotating frame, same unit as the
/// blade vector they transform to or from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedFrameVector {
    pub collective: f64,
    pub tilt: f64,
    pub yaw: f64,
}

/// Project per-blade values onto the fixed frame:
///
/// ```text
/// [c, tilt, yaw] = (2/3) * [ 0.5      0.5      0.5
///                            cos(p1)  cos(p2)  cos(p3)
///                            sin(p1)  sin(p2)  sin(p3) ] * v
/// ```
pub fn forward_mbc(azimuths: &BladeAzimuths, blades: &BladeVector) -> Result<FixedFrameVector> {
    for (i, v) in blades.0.iter().enumerate() {
        ensure_finite(*v, &format!("blade {} value", i + 1))?;
    }
    for (i, p) in azimuths.psi.iter().enumerate() {
        ensure_finite(*p, &format!("blade {} azimuth", i + 1))?;
    }
    let mut collective = 0.0;
    let mut tilt = 0.0;
    let mut yaw = 0.0;
    for b in 0..3 {
        collective += 0.5 * blades.0[b];
        tilt += blades.0[b] * azimuths.psi[b].cos();
        yaw += blades.0[b] * azimuths.psi[b].sin();
    }
    let scale = 2.0 / 3.0;
    Ok(FixedFrameVector {
        collective: scale * collective,
        tilt: scale * tilt,
        yaw: scale * yaw,
    })
}

/// Map fixed-frame values to per-blade values:
/// `v_b = collective + tilt*cos(psi_b) + yaw*sin(psi_b)`.
pub fn inverse_mbc(azimuths: &BladeAzimuths, fixed: &FixedFrameVector) -> Result<BladeVector> {
    ensure_finite(fixed.collective, "collective component")?;
    ensure_finite(fixed.tilt, "tilt component")?;
    ensure_finite(fixed.yaw, "yaw component")?;
    for (i, p) in azimuths.psi.iter().enumerate() {
        ensure_finite(*p, &format!("blade {} azimuth", i + 1))?;
    }
    let mut v = [0.0; 3];
    for b in 0..3 {
        v[b] = fixed.collective
            + fixed.tilt * azimuths.psi[b].cos()
            + fixed.yaw * azimuths.psi[b].sin();
    }
    Ok(BladeVector(v))
}

/// Wrap an angle into [0, 2*pi).
pub fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle % TAU;
    if a < 0.0 {
        a += TAU;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn standard() -> BladeAzimuths {
        BladeAzimuths::equally_spaced(0.0)
    }

    #[test]
    fn symmetric_loads_have_no_tilt_yaw_content() {
        let f = forward_mbc(&standard(), &BladeVector([1.0, 1.0, 1.0])).unwrap();
        assert_abs_diff_eq!(f.collective, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.tilt, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.yaw, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn forward_matches_direct_matrix_evaluation() {
        // Frozen from evaluating the transform matrix at psi = (0, 120, 240) deg.
        let f = forward_mbc(&standard(), &BladeVector([2.0, 1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(f.collective, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.tilt, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.yaw, 0.577_350_269_189_625_8, epsilon = 1e-12);

        let f = forward_mbc(&standard(), &BladeVector([1.0, 0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(f.collective, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.tilt, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.yaw, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn inverse_collective_only_is_uniform() {
        let az = BladeAzimuths::new(0.3, 2.0, 4.1).unwrap();
        let v = inverse_mbc(
            &az,
            &FixedFrameVector {
                collective: 1.7,
                tilt: 0.0,
                yaw: 0.0,
            },
        )
        .unwrap();
        assert_eq!(v.0, [1.7, 1.7, 1.7]);
    }

    #[test]
    fn inverse_matches_direct_matrix_evaluation() {
        let v = inverse_mbc(
            &standard(),
            &FixedFrameVector {
                collective: 0.0,
                tilt: 1.0,
                yaw: 0.0,
            },
        )
        .unwrap();
        assert_abs_diff_eq!(v.0[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.0[1], -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(v.0[2], -0.5, epsilon = 1e-12);

        let v = inverse_mbc(
            &standard(),
            &FixedFrameVector {
                collective: 0.0,
                tilt: 0.0,
                yaw: 1.0,
            },
        )
        .unwrap();
        assert_abs_diff_eq!(v.0[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.0[1], 0.866_025_403_784_438_6, epsilon = 1e-12);
        assert_abs_diff_eq!(v.0[2], -0.866_025_403_784_438_6, epsilon = 1e-12);
    }

    #[test]
    fn equal_spacing_predicate() {
        assert!(standard().is_equally_spaced(1e-9));
        let skewed = BladeAzimuths::new(0.0, 119f64.to_radians(), 240f64.to_radians()).unwrap();
        assert!(!skewed.is_equally_spaced(1e-9));
        let shifted = BladeAzimuths::equally_spaced(10f64.to_radians());
        assert!(shifted.is_equally_spaced(1e-9));
    }

    #[test]
    fn non_finite_input_is_rejected() {
        assert!(BladeAzimuths::new(f64::NAN, 0.0, 0.0).is_err());
        let bad = BladeVector([f64::INFINITY, 0.0, 0.0]);
        assert!(forward_mbc(&standard(), &bad).is_err());
        let bad_fixed = FixedFrameVector {
            collective: f64::NAN,
            tilt: 0.0,
            yaw: 0.0,
        };
        assert!(inverse_mbc(&standard(), &bad_fixed).is_err());
    }

    #[test]
    fn wrap_angle_range() {
        assert_abs_diff_eq!(wrap_angle(-0.1), TAU - 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_angle(TAU + 0.25), 0.25, epsilon = 1e-12);
        assert_eq!(wrap_angle(0.0), 0.0);
    }
}
