//! The composition operator on the Dirichlet basis: basis images with two
//! independent coefficient routes, boundedness and compactness evidence, the
//! `ℓ₂` sum of basis-image norms, and the single-prime Bohr lift.

use crate::error::{Error, Result};
use crate::norms::{
    aplus_norm, basis_series_boundary, norm_table, AplusNormResult, NormConfig, NormTable,
};
use crate::series::{coeffs_from_boundary, BoundarySampling, TruncatedSeries};
use crate::symbols::SymbolHandle;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientRoute {
    /// FFT of boundary samples at `ρ = 1`.
    Boundary,
    /// `exp(-ln N · f)` computed on the Taylor series of `f`.
    Formal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessConfig {
    /// Minimum number of boundary samples for the `ρ = 1` route.
    pub min_samples: usize,
    /// Number of leading coefficients compared between the routes.
    pub compare_len: usize,
    pub route_tol: f64,
    /// Radius of the sampling cross-check for symbols without a continuous
    /// boundary extension.
    pub interior_radius: f64,
    pub interior_compare_len: usize,
    pub interior_samples: usize,
    /// Growth multiple of truncated norms read as unboundedness evidence.
    pub growth_multiple: f64,
    pub decay_threshold: f64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            min_samples: 1 << 20,
            compare_len: 1024,
            route_tol: 1e-8,
            interior_radius: 0.999,
            interior_compare_len: 2048,
            interior_samples: 1 << 16,
            growth_multiple: 10.0,
            decay_threshold: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisImage {
    pub n: u64,
    pub series: TruncatedSeries,
    pub aplus: AplusNormResult,
    pub route: CoefficientRoute,
    /// Whether both routes ran at `ρ = 1` and agreed.
    pub certified: bool,
    /// Largest coefficient difference between the two routes.
    pub route_diff: f64,
    pub compared: usize,
}

/// Powers of two from `2^10` up to `order`, ending at `order`.
pub fn dyadic_schedule(order: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (10..usize::BITS)
        .map(|k| 1usize << k)
        .take_while(|&m| m < order)
        .collect();
    s.push(order);
    s
}

fn max_diff(a: &[C], b: &[C], len: usize) -> (f64, usize) {
    a.iter()
        .zip(b)
        .take(len)
        .enumerate()
        .fold((0.0, 0), |(d, i), (k, (x, y))| {
            let e = (x - y).norm();
            if e > d || e.is_nan() {
                (e, k)
            } else {
                (d, i)
            }
        })
}

/// Formal route: `exp(-ln N · f)` on the Taylor series of `f`.
pub fn basis_series_formal(h: &SymbolHandle, n: u64, order: usize) -> Result<TruncatedSeries> {
    let f = h.series(order)?;
    h.series_config()
        .exp(&f.scale(C::new(-(n as f64).ln(), 0.0)))
}

/// Coefficients of `F_N = N^{-f}` up to order `m`.
pub fn basis_image(h: &SymbolHandle, n: u64, m: usize, cfg: &HarnessConfig) -> Result<BasisImage> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter(format!(
            "basis image needs N ≥ 1 and M ≥ 1, got ({n}, {m})"
        )));
    }
    if n == 1 {
        let series = TruncatedSeries::constant(C::new(1.0, 0.0), m);
        let aplus = aplus_norm(&series, &dyadic_schedule(m));
        return Ok(BasisImage {
            n,
            series,
            aplus,
            route: CoefficientRoute::Boundary,
            certified: true,
            route_diff: 0.0,
            compared: m + 1,
        });
    }
    let (series, route, certified, route_diff, compared) = if h.boundary_continuous() {
        let samples = cfg.min_samples.max((4 * (m + 1)).next_power_of_two());
        let boundary = basis_series_boundary(h, n, m, samples)?;
        let len = cfg.compare_len.min(m + 1);
        let formal = basis_series_formal(h, n, len - 1)?;
        let (d, idx) = max_diff(boundary.coeffs(), formal.coeffs(), len);
        if !(d <= cfg.route_tol) {
            return Err(Error::RouteDisagreement {
                max_diff: d,
                index: idx,
                tol: cfg.route_tol,
            });
        }
        (boundary, CoefficientRoute::Boundary, true, d, len)
    } else {
        let formal = basis_series_formal(h, n, m)?;
        let len = cfg.interior_compare_len.min(m + 1);
        let sampling =
            BoundarySampling::new(len - 1, cfg.interior_radius).with_samples(cfg.interior_samples);
        let interior = coeffs_from_boundary(|p| h.basis_eval(n, p), &sampling)?;
        let (d, idx) = max_diff(interior.coeffs(), formal.coeffs(), len);
        if !(d <= cfg.route_tol) {
            return Err(Error::RouteDisagreement {
                max_diff: d,
                index: idx,
                tol: cfg.route_tol,
            });
        }
        (formal, CoefficientRoute::Formal, false, d, len)
    };
    let aplus = aplus_norm(&series, &dyadic_schedule(m));
    Ok(BasisImage {
        n,
        series,
        aplus,
        route,
        certified,
        route_diff,
        compared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    BoundedEvidence,
    UnboundedEvidence,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub verdict: Evidence,
    pub table: NormTable,
    /// Last truncated norm over the first one.
    pub growth: f64,
    pub sup_certified: f64,
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn non_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

/// Classifies an existing norm table.
pub fn boundedness_from_table(table: NormTable, growth_multiple: f64) -> BoundednessReport {
    let trunc = table.truncated();
    let cert = table.certified();
    let growth = match (trunc.first(), trunc.last()) {
        (Some(&a), Some(&b)) if a > 0.0 => b / a,
        _ => f64::NAN,
    };
    let sup_certified = cert.iter().copied().fold(0.0, f64::max);
    let tail = &cert[cert.len() / 2..];
    let verdict = if trunc.len() >= 2 && strictly_increasing(&trunc) && growth >= growth_multiple {
        Evidence::UnboundedEvidence
    } else if !cert.is_empty() && cert.iter().all(|c| c.is_finite()) && non_increasing(tail) {
        Evidence::BoundedEvidence
    } else {
        Evidence::Inconclusive
    };
    BoundednessReport {
        verdict,
        table,
        growth,
        sup_certified,
    }
}

/// Norm table over `N = 2..=n_max` read as boundedness evidence.
pub fn boundedness_check(
    h: &SymbolHandle,
    n_max: u64,
    norms: &NormConfig,
    cfg: &HarnessConfig,
) -> Result<BoundednessReport> {
    if n_max < 4 {
        return Err(Error::InvalidParameter(format!(
            "boundedness check needs N_max ≥ 4, got {n_max}"
        )));
    }
    let ns: Vec<u64> = (2..=n_max).collect();
    Ok(boundedness_from_table(
        norm_table(h, &ns, norms)?,
        cfg.growth_multiple,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactnessReport {
    pub table: NormTable,
    /// `sup_N certified(N) · N / ln N`.
    pub c_fit: f64,
    pub final_certified: f64,
    pub threshold: f64,
    pub below_threshold: bool,
    /// Certified values non-increasing over the second half of the range.
    pub eventually_decreasing: bool,
}

pub fn compactness_from_table(table: NormTable, threshold: f64) -> CompactnessReport {
    let cert = table.certified();
    let final_certified = cert.last().copied().unwrap_or(f64::NAN);
    CompactnessReport {
        c_fit: table.c_fit(),
        final_certified,
        threshold,
        below_threshold: final_certified < threshold,
        eventually_decreasing: non_increasing(&cert[cert.len() / 2..]),
        table,
    }
}

pub fn compactness_check(
    h: &SymbolHandle,
    n_range: &[u64],
    norms: &NormConfig,
    cfg: &HarnessConfig,
) -> Result<CompactnessReport> {
    Ok(compactness_from_table(
        norm_table(h, n_range, norms)?,
        cfg.decay_threshold,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L2Report {
    pub n_max: u64,
    /// `Σ_{N=2}^{N_max} certified(N)²`.
    pub partial_sum: f64,
    /// `c_fit² (ln² N + 2 ln N + 2) / N` at `N = N_max`.
    pub tail_bound: f64,
    pub total: f64,
    pub c_fit: f64,
    pub tail_fraction: f64,
}

/// `∫_N^∞ (ln x)² / x² dx`.
pub fn log_square_tail(n: u64) -> f64 {
    let l = (n as f64).ln();
    (l * l + 2.0 * l + 2.0) / n as f64
}

pub fn l2_from_table(table: &NormTable) -> Result<L2Report> {
    let mut rows: Vec<_> = table.rows.iter().collect();
    rows.sort_by_key(|r| r.n);
    let n_max = rows
        .last()
        .map(|r| r.n)
        .ok_or_else(|| Error::InvalidParameter("empty norm table".into()))?;
    if n_max < 8 {
        return Err(Error::InvalidParameter(format!(
            "ℓ₂ summability needs N_max ≥ 8, got {n_max}"
        )));
    }
    let partial_sum: f64 = rows
        .iter()
        .map(|r| r.aplus_certified * r.aplus_certified)
        .sum();
    let c_fit = table.c_fit();
    let tail_bound = c_fit * c_fit * log_square_tail(n_max);
    let total = partial_sum + tail_bound;
    Ok(L2Report {
        n_max,
        partial_sum,
        tail_bound,
        total,
        c_fit,
        tail_fraction: tail_bound / partial_sum,
    })
}

pub fn l2_summability(h: &SymbolHandle, n_max: u64, norms: &NormConfig) -> Result<L2Report> {
    if n_max < 8 {
        return Err(Error::InvalidParameter(format!(
            "ℓ₂ summability needs N_max ≥ 8, got {n_max}"
        )));
    }
    let ns: Vec<u64> = (2..=n_max).collect();
    l2_from_table(&norm_table(h, &ns, norms)?)
}

/// Dirichlet coefficients `{base^k: a_k}` of a power series in `z = base^{-s}`.
pub fn bohr_lift_single_prime(series: &TruncatedSeries, base: u64) -> Result<BTreeMap<u64, C>> {
    if base < 2 {
        return Err(Error::InvalidParameter(format!(
            "Bohr lift base {base} must be ≥ 2"
        )));
    }
    let mut out = BTreeMap::new();
    for (k, &a) in series.coeffs().iter().enumerate() {
        let idx = u32::try_from(k)
            .ok()
            .and_then(|k| base.checked_pow(k))
            .ok_or(Error::IndexOverflow { cutoff: k })?;
        out.insert(idx, a);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{
        build_bflq_symbol, build_constant_symbol, build_counterexample_symbol, build_thm1_symbol,
    };

    #[test]
    fn trivial_basis_image() {
        let h = build_thm1_symbol().unwrap();
        let b = basis_image(&h, 1, 8, &HarnessConfig::default()).unwrap();
        assert_eq!(b.series.coeffs()[0], C::new(1.0, 0.0));
        assert!(b.series.coeffs()[1..].iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn half_strip_basis_image_routes_agree() {
        let h = build_thm1_symbol().unwrap();
        let b = basis_image(&h, 2, 4096, &HarnessConfig::default()).unwrap();
        assert!(b.certified && b.route == CoefficientRoute::Boundary);
        assert!(b.route_diff < 1e-8, "{}", b.route_diff);
        let f0 = 1.0 + 2.0 * (1.0 + 2f64.sqrt()).ln();
        assert!((b.series.coeffs()[0].re - 2f64.powf(-f0)).abs() < 1e-8);
        assert!((b.series.coeffs()[0].re - 0.1473).abs() < 1e-4);
    }

    #[test]
    fn counterexample_uses_formal_route() {
        let h = build_counterexample_symbol(0.0).unwrap();
        let b = basis_image(&h, 2, 4096, &HarnessConfig::default()).unwrap();
        assert!(!b.certified && b.route == CoefficientRoute::Formal);
        assert!(b.route_diff < 1e-8);
    }

    #[test]
    fn bohr_lift_is_isometric_with_overflow_cutoff() {
        let s = TruncatedSeries::from_real(&[1.0, -2.0, 0.5]).unwrap();
        let d = bohr_lift_single_prime(&s, 2).unwrap();
        assert_eq!(d.keys().copied().collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(d.values().map(|c| c.norm()).sum::<f64>(), s.l1_norm());
        let ok = TruncatedSeries::zero(40);
        assert!(bohr_lift_single_prime(&ok, 2).is_ok());
        let big = TruncatedSeries::zero(64);
        assert_eq!(
            bohr_lift_single_prime(&big, 2),
            Err(Error::IndexOverflow { cutoff: 64 })
        );
    }

    #[test]
    fn l2_of_constant_symbol() {
        let h = build_constant_symbol(C::new(2.0, 0.0)).unwrap();
        let r = l2_summability(&h, 256, &NormConfig::with_order(16)).unwrap();
        let zeta4_minus_1 = std::f64::consts::PI.powi(4) / 90.0 - 1.0;
        assert!((r.partial_sum - zeta4_minus_1).abs() < 1e-6);
        assert!(l2_summability(&h, 7, &NormConfig::with_order(16)).is_err());
    }

    #[test]
    fn polynomial_symbol_unbounded_evidence() {
        let h = build_bflq_symbol(C::new(0.0, 0.0), 4.0, 1.0, 2).unwrap();
        let r = boundedness_check(
            &h,
            16,
            &NormConfig::with_order(256),
            &HarnessConfig::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Evidence::UnboundedEvidence);
    }

    #[test]
    fn log_square_tail_matches_integral() {
        let n = 50u64;
        let (a, b) = (n as f64, 1e7f64);
        let steps = 2_000_000;
        let h = (b.ln() - a.ln()) / steps as f64;
        let mut s = 0.0;
        for i in 0..steps {
            let x = (a.ln() + (i as f64 + 0.5) * h).exp();
            s += x.ln().powi(2) / x * h;
        }
        let far = {
            let l = b.ln();
            (l * l + 2.0 * l + 2.0) / b
        };
        assert!((s + far - log_square_tail(n)).abs() < 1e-8);
    }
}
