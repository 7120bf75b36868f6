//! Points of the closed unit disk carried together with an accurate offset
//! from the nearest quarter-turn boundary point.
//!
//! Every symbol in this crate has its boundary singularities (corners,
//! logarithmic blow-up, vertex at infinity) at one of `1, i, -1, -i`. Near
//! those points plain subtraction `z - q` loses all relative precision once
//! `|z - q|` approaches machine epsilon, which would cap quadrature grading
//! and probe paths at distance ~1e-16. A [`DiskPoint`] stores the offset
//! separately so evaluators can see distances down to ~1e-300.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// One of the four quarter-turn points of the unit circle.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum Quarter {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Quarter {
    pub const ALL: [Quarter; 4] = [Quarter::One, Quarter::I, Quarter::MinusOne, Quarter::MinusI];

    pub fn value(self) -> Complex64 {
        match self {
            Quarter::One => Complex64::new(1.0, 0.0),
            Quarter::I => Complex64::new(0.0, 1.0),
            Quarter::MinusOne => Complex64::new(-1.0, 0.0),
            Quarter::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    /// Boundary parameter `t` with `e^{it}` equal to this point, in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        self.index() as f64 * FRAC_PI_2
    }

    pub fn index(self) -> usize {
        match self {
            Quarter::One => 0,
            Quarter::I => 1,
            Quarter::MinusOne => 2,
            Quarter::MinusI => 3,
        }
    }

    pub fn from_index(k: usize) -> Quarter {
        Quarter::ALL[k % 4]
    }

    pub fn conj(self) -> Quarter {
        match self {
            Quarter::I => Quarter::MinusI,
            Quarter::MinusI => Quarter::I,
            q => q,
        }
    }

    pub fn nearest(z: Complex64) -> Quarter {
        Quarter::ALL
            .into_iter()
            .min_by(|a, b| {
                (z - a.value())
                    .norm()
                    .partial_cmp(&(z - b.value()).norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(Quarter::One)
    }
}

/// `e^w - 1` without cancellation for small `|w|`.
pub fn cexpm1(w: Complex64) -> Complex64 {
    let (x, y) = (w.re, w.im);
    let em1 = x.exp_m1();
    let half = (0.5 * y).sin();
    let cosm1 = -2.0 * half * half;
    // e^x cos y - 1 = (e^x - 1) cos y + (cos y - 1)
    Complex64::new(em1 * y.cos() + cosm1, x.exp() * y.sin())
}

/// A point of the closed disk with an exact-as-possible offset from an anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    z: Complex64,
    anchor: Quarter,
    offset: Complex64,
}

impl DiskPoint {
    /// Plain point; the offset to the nearest quarter point is obtained by
    /// subtraction.
    pub fn new(z: Complex64) -> Self {
        let anchor = Quarter::nearest(z);
        DiskPoint {
            z,
            anchor,
            offset: z - anchor.value(),
        }
    }

    /// `z = q (1 + e)`, with the offset `q e` kept exactly.
    pub fn from_anchor(anchor: Quarter, e: Complex64) -> Self {
        let q = anchor.value();
        let offset = q * e;
        DiskPoint {
            z: q + offset,
            anchor,
            offset,
        }
    }

    /// Boundary point `q e^{iδ}`.
    pub fn boundary(anchor: Quarter, delta: f64) -> Self {
        Self::from_anchor(anchor, cexpm1(Complex64::new(0.0, delta)))
    }

    /// Boundary point `e^{it}`, anchored at the nearest quarter point.
    pub fn on_circle(t: f64) -> Self {
        let k = (t / FRAC_PI_2).round();
        let anchor = Quarter::from_index(k.rem_euclid(4.0) as usize);
        Self::boundary(anchor, t - k * FRAC_PI_2)
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn anchor(&self) -> Quarter {
        self.anchor
    }

    /// `z - q`, exact to relative precision when `q` is the anchor.
    pub fn minus(&self, q: Quarter) -> Complex64 {
        if q == self.anchor {
            self.offset
        } else {
            self.z - q.value()
        }
    }

    pub fn conj(&self) -> Self {
        DiskPoint {
            z: self.z.conj(),
            anchor: self.anchor.conj(),
            offset: self.offset.conj(),
        }
    }

    /// `|z - q|`, the distance to a quarter point.
    pub fn dist(&self, q: Quarter) -> f64 {
        self.minus(q).norm()
    }

    /// Point on the segment towards the origin: `z - u z`, keeping offsets.
    pub fn shrink(&self, u: f64) -> Self {
        let dz = self.z * u;
        DiskPoint {
            z: self.z - dz,
            anchor: self.anchor,
            offset: self.offset - dz,
        }
    }

    /// Point `z - u (z - base)` on the segment from `self` back to `base`.
    pub fn towards(&self, base: Complex64, u: f64) -> Self {
        let dz = (self.z - base) * u;
        DiskPoint {
            z: self.z - dz,
            anchor: self.anchor,
            offset: self.offset - dz,
        }
    }
}

impl From<Complex64> for DiskPoint {
    fn from(z: Complex64) -> Self {
        DiskPoint::new(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm1_matches_direct_for_moderate_arguments() {
        for &w in &[
            Complex64::new(0.3, -1.2),
            Complex64::new(-2.0, 3.0),
            Complex64::new(1e-3, 2e-3),
        ] {
            let d = (w.exp() - 1.0 - cexpm1(w)).norm();
            assert!(d < 1e-15, "{w}: {d}");
        }
    }

    #[test]
    fn expm1_keeps_tiny_arguments() {
        let w = Complex64::new(1e-200, -3e-250);
        let e = cexpm1(w);
        assert_eq!(e.re, 1e-200);
        assert!((e.im + 3e-250).abs() < 1e-265);
    }

    #[test]
    fn boundary_offsets_are_relative_accurate() {
        let p = DiskPoint::boundary(Quarter::I, 1e-30);
        let d = p.minus(Quarter::I);
        // i (e^{iδ} - 1) ≈ i · iδ = -δ
        assert!((d.re + 1e-30).abs() < 1e-45);
        assert!(p.dist(Quarter::I) > 0.0);
        assert!((p.z() - Complex64::i()).norm() < 1e-15);
    }

    #[test]
    fn on_circle_picks_anchor() {
        let p = DiskPoint::on_circle(std::f64::consts::PI + 0.1);
        assert_eq!(p.anchor(), Quarter::MinusOne);
        let p = DiskPoint::on_circle(2.0 * std::f64::consts::PI - 0.1);
        assert_eq!(p.anchor(), Quarter::One);
        assert!((p.z() - Complex64::from_polar(1.0, -0.1)).norm() < 1e-15);
    }

    #[test]
    fn conj_swaps_i_anchor() {
        let p = DiskPoint::from_anchor(Quarter::I, Complex64::new(-1e-20, -1e-20));
        let c = p.conj();
        assert_eq!(c.anchor(), Quarter::MinusI);
        assert_eq!(c.minus(Quarter::MinusI), p.minus(Quarter::I).conj());
    }
}
