//! Conformal map of the disk onto `{Re w > 1, |Im w| < π}` as the chain
//! `τ₁ ∘ L ∘ h ∘ c ∘ T`.
//!
//! The stage functions are exposed for range checks. Pointwise evaluation
//! uses the equivalent fused form
//!
//! ```text
//! h(c(T(z))) = i(1+i)(z - i) / (√(1+z) + e^{iπ/4} √(1-z))²
//! ```
//!
//! which keeps full relative precision in `z - i` and `1 - z`, so the
//! logarithmic singularity at `z = i` and the corner prevertices `z = ±1`
//! can be approached to distances far below machine epsilon.

use crate::disk::{DiskPoint, Quarter};
use crate::error::Result;
use crate::series::{SeriesConfig, TruncatedSeries};
use num_complex::Complex64;

type C = Complex64;

fn omega() -> C {
    C::from_polar(1.0, std::f64::consts::FRAC_PI_4)
}

pub fn stage_t(z: C) -> C {
    (1.0 + z) / (1.0 - z)
}

pub fn stage_c(w: C) -> C {
    omega() * w.sqrt()
}

pub fn stage_h(w: C) -> C {
    (C::i() * w + 1.0) / (w + C::i())
}

pub fn stage_l(w: C) -> C {
    -2.0 * w.ln()
}

pub fn stage_tau(w: C) -> C {
    w + 1.0
}

/// Intermediate values `[T, c∘T, h∘c∘T, L∘h∘c∘T, f]` computed stage by stage.
pub fn chain_stages(z: C) -> [C; 5] {
    let t = stage_t(z);
    let c = stage_c(t);
    let h = stage_h(c);
    let l = stage_l(h);
    [t, c, h, l, stage_tau(l)]
}

fn fused_parts(p: &DiskPoint) -> (C, C, C) {
    let a = p.minus(Quarter::MinusOne).sqrt();
    let b = (-p.minus(Quarter::One)).sqrt();
    (a, b, a + omega() * b)
}

pub(crate) fn eval(p: &DiskPoint) -> C {
    let zmi = p.minus(Quarter::I);
    if zmi == C::new(0.0, 0.0) {
        return C::new(f64::INFINITY, 0.0);
    }
    let (_, _, s) = fused_parts(p);
    let h = C::new(-1.0, 1.0) * zmi / (s * s);
    C::new(1.0 - 2.0 * h.norm().ln(), -2.0 * h.arg())
}

pub(crate) fn derivative(p: &DiskPoint) -> C {
    let (a, b, s) = fused_parts(p);
    let dlog_h = 1.0 / p.minus(Quarter::I) - (1.0 / a - omega() / b) / s;
    -2.0 * dlog_h
}

/// Taylor series of the chain at 0, built stage by stage with series algebra.
pub(crate) fn series(cfg: &SeriesConfig, order: usize) -> Result<TruncatedSeries> {
    let one = C::new(1.0, 0.0);
    let t = cfg.div(
        &TruncatedSeries::polynomial(&[one, one], order)?,
        &TruncatedSeries::polynomial(&[one, -one], order)?,
    )?;
    let c = cfg.sqrt(&t)?.scale(omega());
    let h = cfg.div(&c.scale(C::i()).add_constant(one), &c.add_constant(C::i()))?;
    let l = cfg.log(&h)?.scale(C::new(-2.0, 0.0));
    Ok(l.add_constant(one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

    #[test]
    fn stage_values_at_origin() {
        let [t, c, h, l, f] = chain_stages(C::new(0.0, 0.0));
        assert_eq!(t, C::new(1.0, 0.0));
        assert!((c - C::from_polar(1.0, FRAC_PI_4)).norm() < 1e-15);
        assert!((h - C::new(SQRT_2 - 1.0, 0.0)).norm() < 1e-15);
        let expected = 2.0 * (1.0 + SQRT_2).ln();
        assert!((l - expected).norm() < 1e-14);
        assert!((f - (1.0 + expected)).norm() < 1e-14);
    }

    #[test]
    fn fused_form_matches_stages() {
        for &(r, t) in &[
            (0.3, 0.1),
            (0.9, 2.0),
            (0.99, -1.0),
            (0.5, 1.5),
            (0.999, 3.0),
            (0.7, -2.5),
        ] {
            let z = C::from_polar(r, t);
            let staged = chain_stages(z)[4];
            let fused = eval(&DiskPoint::new(z));
            assert!(
                (staged - fused).norm() < 1e-12 * staged.norm().max(1.0),
                "{z}: {staged} vs {fused}"
            );
        }
    }

    #[test]
    fn corner_values() {
        let f1 = eval(&DiskPoint::new(C::new(1.0, 0.0)));
        assert!((f1 - C::new(1.0, -PI)).norm() < 1e-14);
        let fm1 = eval(&DiskPoint::new(C::new(-1.0, 0.0)));
        assert!((fm1 - C::new(1.0, PI)).norm() < 1e-14);
        assert!(eval(&DiskPoint::new(C::i())).re.is_infinite());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &z in &[C::new(0.2, 0.3), C::new(-0.6, 0.1), C::new(0.1, -0.8)] {
            let h = 1e-6;
            let fd = (eval(&DiskPoint::new(z + h)) - eval(&DiskPoint::new(z - h))) / (2.0 * h);
            let d = derivative(&DiskPoint::new(z));
            assert!((fd - d).norm() < 1e-7 * d.norm(), "{z}: {fd} vs {d}");
        }
    }

    #[test]
    fn series_agrees_with_pointwise_inside() {
        let s = series(&SeriesConfig::default(), 400).unwrap();
        for &z in &[C::new(0.3, 0.2), C::new(-0.5, 0.0), C::new(0.0, 0.6)] {
            let d = (s.eval(z) - eval(&DiskPoint::new(z))).norm();
            assert!(d < 1e-12, "{z}: {d}");
        }
    }
}
