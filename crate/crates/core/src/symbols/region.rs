use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Target regions of the symbols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// `{Re w > theta}`.
    HalfPlane { theta: f64 },
    /// `{Re w > re_min, |Im w| < im_bound}`.
    HalfStrip { re_min: f64, im_bound: f64 },
    /// `{Re w > ln N, |Im w| < π ln N}`, the range of `f ln N`.
    ScaledHalfStrip { n: u64 },
    /// `{|arg w| < beta} ∩ {Re w > re_min}`.
    SectorCap { beta: f64, re_min: f64 },
}

impl Region {
    pub fn half_plane(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "half-plane abscissa {theta}"
            )));
        }
        Ok(Region::HalfPlane { theta })
    }

    pub fn half_strip(re_min: f64, im_bound: f64) -> Result<Self> {
        if !(im_bound > 0.0) || !re_min.is_finite() || !im_bound.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "half-strip bounds ({re_min}, {im_bound})"
            )));
        }
        Ok(Region::HalfStrip { re_min, im_bound })
    }

    pub fn scaled_half_strip(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "scaled half-strip needs N ≥ 2, got {n}"
            )));
        }
        Ok(Region::ScaledHalfStrip { n })
    }

    pub fn sector_cap(beta: f64, re_min: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < FRAC_PI_2) || !re_min.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sector half-opening {beta} must lie in (0, π/2)"
            )));
        }
        Ok(Region::SectorCap { beta, re_min })
    }

    pub fn contains(&self, w: Complex64) -> bool {
        match *self {
            Region::HalfPlane { theta } => w.re > theta,
            Region::HalfStrip { re_min, im_bound } => w.re > re_min && w.im.abs() < im_bound,
            Region::ScaledHalfStrip { n } => {
                let l = (n as f64).ln();
                w.re > l && w.im.abs() < std::f64::consts::PI * l
            }
            Region::SectorCap { beta, re_min } => w.re > re_min && w.arg().abs() < beta,
        }
    }
}

/// Free-function form of [`Region::contains`].
pub fn region_contains(reg: &Region, w: Complex64) -> bool {
    reg.contains(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn half_strip_membership() {
        let r = Region::half_strip(1.0, PI).unwrap();
        assert!(r.contains(Complex64::new(2.0, 0.0)));
        assert!(!r.contains(Complex64::new(2.0, 4.0)));
        assert!(!r.contains(Complex64::new(0.5, 0.0)));
    }

    #[test]
    fn scaled_half_strip_uses_natural_log() {
        let r = Region::scaled_half_strip(2).unwrap();
        assert!(r.contains(Complex64::new(1.0, 0.0)));
        assert!(!r.contains(Complex64::new(0.69, 0.0)));
        assert!(r.contains(Complex64::new(0.7, 2.17)));
        assert!(!r.contains(Complex64::new(0.7, 2.18)));
    }

    #[test]
    fn sector_cap_membership() {
        let r = Region::sector_cap(PI / 4.0, 1.0).unwrap();
        assert!(r.contains(Complex64::new(2.0, 1.9)));
        assert!(!r.contains(Complex64::new(2.0, 2.1)));
        assert!(!r.contains(Complex64::new(0.9, 0.0)));
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(Region::half_strip(1.0, 0.0).is_err());
        assert!(Region::sector_cap(FRAC_PI_2, 1.0).is_err());
        assert!(Region::sector_cap(0.0, 1.0).is_err());
        assert!(Region::scaled_half_strip(1).is_err());
    }
}
