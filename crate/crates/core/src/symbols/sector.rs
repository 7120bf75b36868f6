//! Schwarz–Christoffel map of the disk onto the truncated sector
//! `{|arg w| < β} ∩ {Re w > 1}`.
//!
//! With `γ = β/π`, the map is `f = A + C Φ` where
//!
//! ```text
//! Φ'(z) = (1 + z²)^{γ - 1/2} (1 - z)^{-1 - 2γ},   Φ(0) = 0,
//! ```
//!
//! normalised so that `f(-1) = 1` and `f(±i) = 1 ± i tan β`. The prevertex
//! `z = 1` goes to the vertex at infinity.
//!
//! `Φ` is evaluated piecewise: a Taylor series at the origin for `|z| ≤ 0.9`,
//! singular local expansions within distance 0.5 of `1` and `i` (`-i` by
//! conjugate symmetry), and a short Gauss–Legendre segment elsewhere. The
//! integration constants of the local expansions are matched to the Taylor
//! series at interior points, and the assembled map is checked on the
//! boundary before it is handed out.

use crate::disk::{DiskPoint, Quarter};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::series::{series_integral, SeriesConfig, TruncatedSeries};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

type C = Complex64;

const TAYLOR_ORDER: usize = 640;
const LOCAL_ORDER: usize = 64;
const TAYLOR_RADIUS: f64 = 0.9;
const LOCAL_RADIUS: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct SectorCapMap {
    beta: f64,
    gamma: f64,
    scale: f64,
    shift: f64,
    taylor: Vec<C>,
    /// `g_k / (k - 2γ)` with `g` the expansion of `(1 + z²)^{γ-1/2}` in `z - 1`.
    at_one: Vec<C>,
    k_one: C,
    /// `G_k / (k + γ + 1/2)` for the expansion at `z = i`.
    at_i: Vec<C>,
    kappa: C,
    phi_i: C,
    gl: (Vec<f64>, Vec<f64>),
}

fn poly(c: &[C], order: usize) -> Result<TruncatedSeries> {
    TruncatedSeries::polynomial(c, order)
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

fn horner(c: &[C], x: C) -> C {
    c.iter().rev().fold(C::new(0.0, 0.0), |acc, &a| acc * x + a)
}

fn taylor_of_phi(cfg: &SeriesConfig, gamma: f64, order: usize) -> Result<TruncatedSeries> {
    let g = cfg.powc(&poly(&[re(1.0), re(0.0), re(1.0)], order)?, re(gamma - 0.5))?;
    let h = cfg.powc(&poly(&[re(1.0), re(-1.0)], order)?, re(-1.0 - 2.0 * gamma))?;
    Ok(series_integral(&cfg.mul(&g, &h), C::new(0.0, 0.0)).truncate(order))
}

impl SectorCapMap {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!(
                "sector half-opening {beta} must lie in (0, π/2)"
            )));
        }
        let cfg = SeriesConfig::default();
        let gamma = beta / PI;
        let taylor = taylor_of_phi(&cfg, gamma, TAYLOR_ORDER)?.into_coeffs();

        let g1 = cfg.powc(
            &poly(&[re(2.0), re(2.0), re(1.0)], LOCAL_ORDER)?,
            re(gamma - 0.5),
        )?;
        let at_one: Vec<C> = g1
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, &g)| g / (k as f64 - 2.0 * gamma))
            .collect();

        let gi = cfg.mul(
            &cfg.powc(
                &poly(&[C::new(0.0, 2.0), re(1.0)], LOCAL_ORDER)?,
                re(gamma - 0.5),
            )?,
            &cfg.powc(
                &poly(&[C::new(1.0, -1.0), re(-1.0)], LOCAL_ORDER)?,
                re(-1.0 - 2.0 * gamma),
            )?,
        );
        let at_i: Vec<C> = gi
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, &g)| g / (k as f64 + gamma + 0.5))
            .collect();

        let kappa_at = |eps: C| {
            let two_i = C::new(0.0, 2.0);
            (eps * (two_i + eps)).powf(gamma - 0.5)
                / (eps.powf(gamma - 0.5) * (two_i + eps).powf(gamma - 0.5))
        };
        let eps_ref = C::new(0.0, -0.4);
        let kappa = kappa_at(eps_ref);
        let eps_alt = C::from_polar(0.3, -0.9 * PI);
        if (kappa_at(eps_alt) - kappa).norm() > 1e-12 {
            return Err(Error::MapConstructionFailure(
                "branch factor at i is not constant".into(),
            ));
        }

        let mut map = SectorCapMap {
            beta,
            gamma,
            scale: 1.0,
            shift: 0.0,
            taylor,
            at_one,
            k_one: C::new(0.0, 0.0),
            at_i,
            kappa,
            phi_i: C::new(0.0, 0.0),
            gl: gauss_legendre(16),
        };

        let z1 = re(0.6);
        map.k_one = horner(&map.taylor, z1) + map.one_tail(re(1.0) - z1);
        map.phi_i = horner(&map.taylor, C::new(0.0, 0.6)) - map.i_tail(eps_ref);

        let phi_m1 = map.radial(&DiskPoint::new(re(-1.0)));
        let c = C::new(0.0, beta.tan()) / (map.phi_i - phi_m1);
        if c.re <= 0.0 || c.im.abs() > 1e-10 * c.re {
            return Err(Error::MapConstructionFailure(format!(
                "scale constant {c} is not positive real"
            )));
        }
        let a = re(1.0) - c * phi_m1;
        if a.im.abs() > 1e-10 * a.re.abs().max(1.0) {
            return Err(Error::MapConstructionFailure(format!(
                "shift constant {a} is not real"
            )));
        }
        map.scale = c.re;
        map.shift = a.re;
        map.validate()?;
        Ok(map)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Multiplicative constant `C`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Additive constant `A = f(0)`.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// `w^{-2γ} Σ g_k/(k-2γ) (-w)^k`, with `w = 1 - z`.
    fn one_tail(&self, w: C) -> C {
        w.powf(-2.0 * self.gamma) * horner(&self.at_one, -w)
    }

    /// `κ ε^{γ+1/2} Σ G_k/(k+γ+1/2) ε^k`, with `ε = z - i`.
    fn i_tail(&self, eps: C) -> C {
        self.kappa * eps.powf(self.gamma + 0.5) * horner(&self.at_i, eps)
    }

    fn phi_prime(&self, p: &DiskPoint) -> C {
        let q = p.minus(Quarter::I) * p.minus(Quarter::MinusI);
        let w = -p.minus(Quarter::One);
        q.powf(self.gamma - 0.5) * w.powf(-1.0 - 2.0 * self.gamma)
    }

    fn radial(&self, p: &DiskPoint) -> C {
        let z = p.z();
        let z0 = z * (TAYLOR_RADIUS / z.norm());
        let d = z - z0;
        let (x, w) = &self.gl;
        let integral: C = x
            .iter()
            .zip(w)
            .map(|(&x, &w)| self.phi_prime(&DiskPoint::new(z0 + d * (0.5 * (1.0 + x)))) * (0.5 * w))
            .sum();
        horner(&self.taylor, z0) + d * integral
    }

    fn local_i(&self, p: &DiskPoint) -> C {
        let eps = p.minus(Quarter::I);
        if eps == C::new(0.0, 0.0) {
            return self.phi_i;
        }
        self.phi_i + self.i_tail(eps)
    }

    /// Unnormalised primitive `Φ`.
    fn phi(&self, p: &DiskPoint) -> C {
        if p.dist(Quarter::One) <= LOCAL_RADIUS {
            let w = -p.minus(Quarter::One);
            if w == C::new(0.0, 0.0) {
                return C::new(f64::INFINITY, 0.0);
            }
            self.k_one - self.one_tail(w)
        } else if p.dist(Quarter::I) <= LOCAL_RADIUS {
            self.local_i(p)
        } else if p.dist(Quarter::MinusI) <= LOCAL_RADIUS {
            self.local_i(&p.conj()).conj()
        } else if p.z().norm() <= TAYLOR_RADIUS {
            horner(&self.taylor, p.z())
        } else {
            self.radial(p)
        }
    }

    pub fn eval(&self, p: &DiskPoint) -> C {
        let phi = self.phi(p);
        if phi.re.is_infinite() {
            return phi;
        }
        self.shift + self.scale * phi
    }

    pub fn derivative(&self, p: &DiskPoint) -> C {
        self.scale * self.phi_prime(p)
    }

    /// Taylor series of `f` at the origin.
    pub fn series(&self, cfg: &SeriesConfig, order: usize) -> Result<TruncatedSeries> {
        Ok(taylor_of_phi(cfg, self.gamma, order)?
            .scale(re(self.scale))
            .add_constant(re(self.shift)))
    }

    fn validate(&self) -> Result<()> {
        let fail = |what: String| Err(Error::MapConstructionFailure(what));
        // the piecewise pieces must agree where their zones overlap
        let pairs = [
            (
                C::new(0.65, 0.1),
                self.k_one - self.one_tail(C::new(0.35, -0.1)),
            ),
            (
                C::new(0.2, 0.7),
                self.local_i(&DiskPoint::new(C::new(0.2, 0.7))),
            ),
            (
                C::new(-0.88, 0.05),
                self.radial(&DiskPoint::new(C::new(-0.88, 0.05))),
            ),
        ];
        for (z, other) in pairs {
            let t = horner(&self.taylor, z);
            if (t - other).norm() > 1e-10 * t.norm().max(1.0) {
                return fail(format!("zone mismatch at {z}: {t} vs {other}"));
            }
        }
        let tan = self.beta.tan();
        for (q, target) in [
            (Quarter::MinusOne, re(1.0)),
            (Quarter::I, C::new(1.0, tan)),
            (Quarter::MinusI, C::new(1.0, -tan)),
        ] {
            let v = self.eval(&DiskPoint::from_anchor(q, C::new(0.0, 0.0)));
            if (v - target).norm() > 1e-9 {
                return fail(format!("f({}) = {v}, expected {target}", q.value()));
            }
        }
        for j in 1..64 {
            let t = FRAC_PI_2 * j as f64 / 64.0;
            let upper = self.eval(&DiskPoint::on_circle(t));
            if (upper.arg() - self.beta).abs() > 1e-8 {
                return fail(format!("f(e^{{i{t}}}) = {upper} leaves the upper edge"));
            }
            let lower = self.eval(&DiskPoint::on_circle(-t));
            if (lower.arg() + self.beta).abs() > 1e-8 {
                return fail(format!("f(e^{{-i{t}}}) = {lower} leaves the lower edge"));
            }
            let left = self.eval(&DiskPoint::on_circle(FRAC_PI_2 + 2.0 * t));
            if (left.re - 1.0).abs() > 1e-8 {
                return fail(format!(
                    "f(e^{{i{}}}) = {left} leaves the cap",
                    FRAC_PI_2 + 2.0 * t
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalisation_for_right_angle_sector() {
        let m = SectorCapMap::new(PI / 4.0).unwrap();
        assert!((m.scale() - 1.403669).abs() < 1e-6, "{}", m.scale());
        assert!((m.shift() - 1.782454).abs() < 1e-6, "{}", m.shift());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let m = SectorCapMap::new(PI / 3.0).unwrap();
        for &z in &[
            C::new(0.2, 0.3),
            C::new(0.8, 0.2),
            C::new(-0.3, 0.9),
            C::new(-0.95, 0.0),
        ] {
            let h = 1e-6;
            let fd = (m.eval(&DiskPoint::new(z + h)) - m.eval(&DiskPoint::new(z - h))) / (2.0 * h);
            let d = m.derivative(&DiskPoint::new(z));
            assert!((fd - d).norm() < 1e-6 * d.norm(), "{z}: {fd} vs {d}");
        }
    }

    #[test]
    fn near_vertex_behaviour() {
        let m = SectorCapMap::new(PI / 4.0).unwrap();
        let near = m.eval(&DiskPoint::from_anchor(Quarter::One, C::new(-1e-8, 0.0)));
        assert!(near.re > 1e3 && near.im.abs() < 1e-6 * near.re);
        let edge = m.eval(&DiskPoint::boundary(Quarter::I, -1e-12));
        assert!((edge.arg() - PI / 4.0).abs() < 1e-10);
    }

    #[test]
    fn series_matches_pointwise() {
        let m = SectorCapMap::new(PI / 4.0).unwrap();
        let s = m.series(&SeriesConfig::default(), 300).unwrap();
        let z = C::new(0.3, -0.4);
        assert!((s.eval(z) - m.eval(&DiskPoint::new(z))).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_opening() {
        assert!(SectorCapMap::new(FRAC_PI_2).is_err());
        assert!(SectorCapMap::new(-0.1).is_err());
    }
}
