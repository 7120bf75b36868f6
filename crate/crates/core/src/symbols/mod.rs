//! Symbol families `φ(s) = f(p^{-s})` as evaluatable maps on the disk.

pub mod half_strip;
mod region;
pub mod sector;

pub use region::{region_contains, Region};
pub use sector::SectorCapMap;

use crate::disk::{cexpm1, DiskPoint, Quarter};
use crate::error::{Error, Result};
use crate::series::{SeriesConfig, TruncatedSeries};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SymbolSpec {
    Thm1,
    /// Sector cap with half-opening `beta = π/(2p)`.
    Thm2 {
        p: f64,
        beta: f64,
    },
    Counterexample {
        a: f64,
    },
    BflqPoly {
        c1: C,
        cr: f64,
        cr2: f64,
        r: u64,
    },
    /// Constant symbol `φ ≡ c`.
    Constant {
        c: C,
    },
}

impl SymbolSpec {
    pub fn thm2(p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sector parameter p = {p} must exceed 1"
            )));
        }
        Ok(SymbolSpec::Thm2 {
            p,
            beta: PI / (2.0 * p),
        })
    }

    pub fn counterexample(a: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "counterexample shift A = {a} must be ≥ 0"
            )));
        }
        Ok(SymbolSpec::Counterexample { a })
    }

    pub fn bflq(c1: C, cr: f64, cr2: f64, r: u64) -> Result<Self> {
        if !(cr > 0.0 && cr2 > 0.0)
            || r < 2
            || !c1.is_finite()
            || !cr.is_finite()
            || !cr2.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "polynomial symbol needs c_r, c_r² > 0 and r ≥ 2, got ({c1}, {cr}, {cr2}, {r})"
            )));
        }
        Ok(SymbolSpec::BflqPoly { c1, cr, cr2, r })
    }

    pub fn constant(c: C) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!("constant symbol {c}")));
        }
        Ok(SymbolSpec::Constant { c })
    }

    pub fn name(&self) -> &'static str {
        match self {
            SymbolSpec::Thm1 => "thm1",
            SymbolSpec::Thm2 { .. } => "thm2",
            SymbolSpec::Counterexample { .. } => "counterexample",
            SymbolSpec::BflqPoly { .. } => "bflq",
            SymbolSpec::Constant { .. } => "constant",
        }
    }
}

#[derive(Debug, Clone)]
enum Map {
    HalfStrip,
    Sector(Arc<SectorCapMap>),
    Counterexample { a: f64 },
    Poly([C; 3]),
    Constant(C),
}

/// A realised symbol. Cheap to clone and safe to share across threads.
#[derive(Debug, Clone)]
pub struct SymbolHandle {
    spec: SymbolSpec,
    target: Region,
    target_asserted: bool,
    prime_base: u64,
    map: Map,
    series_cfg: SeriesConfig,
}

pub fn build_thm1_symbol() -> Result<SymbolHandle> {
    SymbolHandle::build(&SymbolSpec::Thm1)
}

pub fn build_thm2_symbol(p: f64) -> Result<SymbolHandle> {
    SymbolHandle::build(&SymbolSpec::thm2(p)?)
}

pub fn build_counterexample_symbol(a: f64) -> Result<SymbolHandle> {
    SymbolHandle::build(&SymbolSpec::counterexample(a)?)
}

pub fn build_bflq_symbol(c1: C, cr: f64, cr2: f64, r: u64) -> Result<SymbolHandle> {
    SymbolHandle::build(&SymbolSpec::bflq(c1, cr, cr2, r)?)
}

pub fn build_constant_symbol(c: C) -> Result<SymbolHandle> {
    SymbolHandle::build(&SymbolSpec::constant(c)?)
}

pub fn symbol_eval_dirichlet(h: &SymbolHandle, s: C) -> Result<C> {
    h.eval_dirichlet(s)
}

impl SymbolHandle {
    pub fn build(spec: &SymbolSpec) -> Result<Self> {
        let (target, target_asserted, prime_base, map) = match *spec {
            SymbolSpec::Thm1 => (Region::half_strip(1.0, PI)?, true, 2, Map::HalfStrip),
            SymbolSpec::Thm2 { p, beta } => {
                let canonical = SymbolSpec::thm2(p)?;
                if canonical != *spec {
                    return Err(Error::InvalidParameter(format!(
                        "β = {beta} does not equal π/(2p) for p = {p}"
                    )));
                }
                (
                    Region::sector_cap(beta, 1.0)?,
                    true,
                    2,
                    Map::Sector(Arc::new(SectorCapMap::new(beta)?)),
                )
            }
            SymbolSpec::Counterexample { a } => {
                SymbolSpec::counterexample(a)?;
                (Region::half_plane(a)?, true, 2, Map::Counterexample { a })
            }
            SymbolSpec::BflqPoly { c1, cr, cr2, r } => {
                SymbolSpec::bflq(c1, cr, cr2, r)?;
                (
                    Region::half_plane(0.0)?,
                    false,
                    r,
                    Map::Poly([c1, C::new(cr, 0.0), C::new(cr2, 0.0)]),
                )
            }
            SymbolSpec::Constant { c } => {
                SymbolSpec::constant(c)?;
                (Region::half_plane(c.re - 1.0)?, true, 2, Map::Constant(c))
            }
        };
        Ok(SymbolHandle {
            spec: *spec,
            target,
            target_asserted,
            prime_base,
            map,
            series_cfg: SeriesConfig::default(),
        })
    }

    pub fn with_series_config(mut self, cfg: SeriesConfig) -> Self {
        self.series_cfg = cfg;
        self
    }

    pub fn spec(&self) -> &SymbolSpec {
        &self.spec
    }

    pub fn target(&self) -> Region {
        self.target
    }

    /// Whether sampled values are required to lie in [`Self::target`].
    pub fn target_asserted(&self) -> bool {
        self.target_asserted
    }

    pub fn prime_base(&self) -> u64 {
        self.prime_base
    }

    pub fn series_config(&self) -> &SeriesConfig {
        &self.series_cfg
    }

    /// Whether every `N^{-φ}` extends continuously to the closed disk.
    pub fn boundary_continuous(&self) -> bool {
        !matches!(self.map, Map::Counterexample { .. })
    }

    /// Boundary points where the map or its derivative is singular.
    pub fn singular_anchors(&self) -> Vec<Quarter> {
        match self.map {
            Map::HalfStrip => vec![Quarter::One, Quarter::I, Quarter::MinusOne],
            Map::Sector(_) => vec![Quarter::One, Quarter::I, Quarter::MinusI],
            Map::Counterexample { .. } => vec![Quarter::One],
            Map::Poly(_) | Map::Constant(_) => Vec::new(),
        }
    }

    pub fn sector_map(&self) -> Option<&SectorCapMap> {
        match &self.map {
            Map::Sector(m) => Some(m),
            _ => None,
        }
    }

    pub fn eval(&self, p: &DiskPoint) -> C {
        match &self.map {
            Map::HalfStrip => half_strip::eval(p),
            Map::Sector(m) => m.eval(p),
            Map::Counterexample { a } => {
                let den = -p.minus(Quarter::One);
                if den == C::new(0.0, 0.0) {
                    return C::new(f64::NAN, f64::NAN);
                }
                let t = p.minus(Quarter::MinusOne) / den;
                (-t).exp() + (a + 1.0)
            }
            Map::Poly(c) => c[0] + p.z() * (c[1] + p.z() * c[2]),
            Map::Constant(c) => *c,
        }
    }

    pub fn eval_z(&self, z: C) -> C {
        self.eval(&DiskPoint::new(z))
    }

    /// `f'(z)`.
    pub fn derivative(&self, p: &DiskPoint) -> C {
        match &self.map {
            Map::HalfStrip => half_strip::derivative(p),
            Map::Sector(m) => m.derivative(p),
            Map::Counterexample { .. } => {
                let den = -p.minus(Quarter::One);
                let t = p.minus(Quarter::MinusOne) / den;
                -(-t).exp() * 2.0 / (den * den)
            }
            Map::Poly(c) => c[1] + p.z() * (c[2] * 2.0),
            Map::Constant(_) => C::new(0.0, 0.0),
        }
    }

    /// `N^{-f(z)}`; zero where `Re f = +∞`.
    pub fn basis_eval(&self, n: u64, p: &DiskPoint) -> C {
        let f = self.eval(p);
        if f.re == f64::INFINITY {
            return C::new(0.0, 0.0);
        }
        (f * -(n as f64).ln()).exp()
    }

    /// `d/dz N^{-f(z)} = -ln N f'(z) N^{-f(z)}`.
    pub fn basis_derivative(&self, n: u64, p: &DiskPoint) -> C {
        let v = self.basis_eval(n, p);
        if v == C::new(0.0, 0.0) {
            return v;
        }
        v * self.derivative(p) * -(n as f64).ln()
    }

    /// Taylor series of `f` at the origin.
    pub fn series(&self, order: usize) -> Result<TruncatedSeries> {
        let cfg = &self.series_cfg;
        match &self.map {
            Map::HalfStrip => half_strip::series(cfg, order),
            Map::Sector(m) => m.series(cfg, order),
            Map::Counterexample { a } => {
                let one = C::new(1.0, 0.0);
                let t = cfg.div(
                    &TruncatedSeries::polynomial(&[one, one], order)?,
                    &TruncatedSeries::polynomial(&[one, -one], order)?,
                )?;
                Ok(cfg.exp(&t.scale(-one))?.add_constant(C::new(a + 1.0, 0.0)))
            }
            Map::Poly(c) => TruncatedSeries::polynomial(c, order),
            Map::Constant(c) => Ok(TruncatedSeries::constant(*c, order)),
        }
    }

    /// `p^{-s}` as a disk point, with `s = ia + ds`.
    ///
    /// The phase `-a ln p` is split into a quarter turn plus a residual, and
    /// the residual is dropped when it is below 1e-12, so paths aimed at a
    /// quarter point approach it exactly. The offset from that point is
    /// formed with `expm1`, keeping full relative precision for tiny `ds`.
    pub fn dirichlet_point_at(&self, a: f64, ds: C) -> Result<DiskPoint> {
        if !(ds.re >= 0.0) || !ds.is_finite() || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Dirichlet argument i{a} + {ds} needs Re s ≥ 0"
            )));
        }
        let lp = (self.prime_base as f64).ln();
        let theta = -a * lp;
        let k = (theta / FRAC_PI_2).round();
        let mut r = theta - k * FRAC_PI_2;
        if r.abs() <= 1e-12 {
            r = 0.0;
        }
        let q = Quarter::from_index(k.rem_euclid(4.0) as usize);
        Ok(DiskPoint::from_anchor(q, cexpm1(C::new(0.0, r) - ds * lp)))
    }

    pub fn dirichlet_point(&self, s: C) -> Result<DiskPoint> {
        self.dirichlet_point_at(s.im, C::new(s.re, 0.0))
    }

    /// `φ(s) = f(p^{-s})`.
    pub fn eval_dirichlet(&self, s: C) -> Result<C> {
        Ok(self.eval(&self.dirichlet_point(s)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub samples: usize,
    pub outside: usize,
    pub first_outside: Option<(f64, f64)>,
}

/// Seeded uniform samples of the open disk.
pub fn disk_samples(n: usize, seed: u64) -> Vec<C> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r = rng.gen::<f64>().sqrt();
            let t = rng.gen::<f64>() * TAU;
            C::from_polar(r, t)
        })
        .collect()
}

/// Counts sampled images `f(z)` that fall outside the target region.
pub fn sample_containment(h: &SymbolHandle, n: usize, seed: u64) -> ContainmentReport {
    let target = h.target();
    let mut outside = 0;
    let mut first_outside = None;
    for z in disk_samples(n, seed) {
        if !target.contains(h.eval_z(z)) {
            outside += 1;
            first_outside.get_or_insert((z.re, z.im));
        }
    }
    ContainmentReport {
        samples: n,
        outside,
        first_outside,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn thm1_value_at_origin_and_containment() {
        let h = build_thm1_symbol().unwrap();
        let f0 = h.eval_z(C::new(0.0, 0.0));
        assert!((f0 - C::new(1.0 + 2.0 * (1.0 + SQRT_2).ln(), 0.0)).norm() < 1e-14);
        assert!((f0.re - 2.76275).abs() < 1e-5);
        assert_eq!(sample_containment(&h, 100_000, 7).outside, 0);
        assert_eq!(h.prime_base(), 2);
    }

    #[test]
    fn thm1_stage_ranges() {
        for z in disk_samples(100_000, 11) {
            let [t, c, hh, l, f] = half_strip::chain_stages(z);
            assert!(t.re > 0.0);
            assert!(c.re > 0.0 && c.im > 0.0);
            assert!(hh.norm() < 1.0 && hh.re > 0.0);
            assert!(l.re > 0.0 && l.im.abs() < PI);
            assert!(f.re > 1.0 && f.im.abs() < PI);
        }
    }

    #[test]
    fn thm1_dirichlet_limit() {
        let h = build_thm1_symbol().unwrap();
        let v = h.eval_dirichlet(C::new(80.0, 0.0)).unwrap();
        assert!((v.re - 2.762747174039086).abs() < 1e-12);
    }

    #[test]
    fn thm2_containment_and_real_centre() {
        let h = build_thm2_symbol(2.0).unwrap();
        assert_eq!(sample_containment(&h, 100_000, 3).outside, 0);
        let f0 = h.eval_z(C::new(0.0, 0.0));
        assert!(f0.im == 0.0 && f0.re > 1.0);
        let z = C::new(0.3, 0.5);
        assert!((h.eval_z(z.conj()) - h.eval_z(z).conj()).norm() < 1e-12);
    }

    #[test]
    fn thm2_rejects_small_p() {
        assert!(build_thm2_symbol(1.0).is_err());
        let bad = SymbolSpec::Thm2 { p: 2.0, beta: 0.3 };
        assert!(SymbolHandle::build(&bad).is_err());
    }

    #[test]
    fn counterexample_values() {
        let h = build_counterexample_symbol(0.0).unwrap();
        let v = h.eval_dirichlet(C::new(1.0, 0.0)).unwrap();
        assert!((v.re - (1.0 + (-3.0f64).exp())).abs() < 1e-15 && v.im == 0.0);
        assert!((v.re - 1.049787).abs() < 1e-6);
        let a = 0.7;
        let h = build_counterexample_symbol(a).unwrap();
        assert!((h.eval_z(C::new(0.0, 0.0)).re - (a + 1.0 + (-1.0f64).exp())).abs() < 1e-15);
        for z in disk_samples(100_000, 5) {
            let w = h.eval_z(z);
            assert!(w.re > a && w.re <= a + 2.0);
        }
        let near = h.eval_z(C::new(1.0 - 1e-9, 0.0));
        assert!((near - C::new(a + 1.0, 0.0)).norm() < 1e-12);
        assert!(!h.boundary_continuous());
    }

    #[test]
    fn counterexample_series_matches_pointwise() {
        let h = build_counterexample_symbol(0.0).unwrap();
        let s = h.series(256).unwrap();
        let z = C::new(0.2, -0.3);
        assert!((s.eval(z) - h.eval_z(z)).norm() < 1e-12);
    }

    #[test]
    fn bflq_series_is_exact() {
        let h = build_bflq_symbol(C::new(2.5, 0.0), 4.0, 1.0, 2).unwrap();
        let s = h.series(8).unwrap();
        assert_eq!(
            &s.coeffs()[..3],
            &[C::new(2.5, 0.0), C::new(4.0, 0.0), C::new(1.0, 0.0)]
        );
        assert_eq!(s.coeffs()[3..].iter().map(|c| c.norm()).sum::<f64>(), 0.0);
        assert!(!h.target_asserted());
        let v = h.eval_dirichlet(C::new(60.0, 0.0)).unwrap();
        assert!((v - C::new(2.5, 0.0)).norm() < 1e-15);
        assert!(build_bflq_symbol(C::new(0.0, 0.0), 4.0, 1.0, 1).is_err());
    }

    #[test]
    fn dirichlet_point_snaps_to_quarters() {
        let h = build_thm1_symbol().unwrap();
        let t = PI / (2.0 * 2f64.ln());
        let p = h.dirichlet_point(C::new(1e-14, t)).unwrap();
        assert_eq!(p.anchor(), Quarter::MinusI);
        let off = p.minus(Quarter::MinusI);
        assert!((off.norm() - 1e-14 * 2f64.ln()).abs() < 1e-28);
        let direct = h.eval_z(C::from_polar((-1e-3 * 2f64.ln()).exp(), 0.7));
        let via = h.eval_dirichlet(C::new(1e-3, -0.7 / 2f64.ln())).unwrap();
        assert!((direct - via).norm() < 1e-12);
    }

    #[test]
    fn basis_vanishes_at_log_singularity() {
        let h = build_thm1_symbol().unwrap();
        assert_eq!(h.basis_eval(2, &DiskPoint::new(C::i())), C::new(0.0, 0.0));
    }
}
