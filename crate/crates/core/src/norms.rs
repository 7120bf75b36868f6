//! `A⁺` norms, Hardy-inequality certificates, boundary arclengths and `Hᵖ`
//! norms of symbols and their basis images `F_N = N^{-f}`.

use crate::disk::{DiskPoint, Quarter};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_circle, QuadConfig};
use crate::series::{coeffs_from_boundary, BoundarySampling, TruncatedSeries};
use crate::symbols::{SymbolHandle, SymbolSpec};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{Read, Write};

type C = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AplusNormResult {
    /// `Σ_{n ≤ M} |a_n|` at the largest scheduled order.
    pub truncated_norm: f64,
    pub order: usize,
    /// `(M, Σ_{n ≤ M} |a_n|)` for each scheduled order.
    pub partial_sums: Vec<(usize, f64)>,
    pub certified_upper: Option<f64>,
    /// Relative change across the last two scheduled orders.
    pub stabilization: Option<f64>,
}

impl AplusNormResult {
    pub fn with_certificate(mut self, upper: f64) -> Self {
        self.certified_upper = Some(upper);
        self
    }

    /// Converged when the last relative change is below `tol`.
    pub fn converged(&self, tol: f64) -> bool {
        self.stabilization.is_some_and(|s| s < tol)
    }
}

/// Partial sums of `|a_n|` at each order of `schedule` (orders beyond the
/// series are clamped to its order). An empty schedule means the full series.
pub fn aplus_norm(series: &TruncatedSeries, schedule: &[usize]) -> AplusNormResult {
    let sums = series.abs_partial_sums();
    let mut orders: Vec<usize> = schedule.iter().map(|&m| m.min(series.order())).collect();
    if orders.is_empty() {
        orders.push(series.order());
    }
    orders.sort_unstable();
    orders.dedup();
    let partial_sums: Vec<(usize, f64)> = orders.iter().map(|&m| (m, sums[m])).collect();
    let (order, truncated_norm) = *partial_sums.last().expect("at least one order");
    let stabilization = (partial_sums.len() >= 2).then(|| {
        let prev = partial_sums[partial_sums.len() - 2].1;
        (truncated_norm - prev).abs() / truncated_norm.max(f64::MIN_POSITIVE)
    });
    AplusNormResult {
        truncated_norm,
        order,
        partial_sums,
        certified_upper: None,
        stabilization,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyBound {
    /// `|F(0)| + arclength / 2`.
    pub value: f64,
    pub constant_term: f64,
    pub arclength: f64,
    pub quad_error: f64,
}

/// `|F(0)| + ½ ∫ |F'(e^{it})| dt`, an upper bound for `‖F‖_{A⁺}`.
pub fn hardy_upper_bound_from<D>(
    f0: C,
    derivative: D,
    singular: &[Quarter],
    quad: &QuadConfig,
) -> Result<HardyBound>
where
    D: Fn(&DiskPoint) -> C,
{
    let r = integrate_circle(|p| derivative(p).norm(), singular, quad)?;
    Ok(HardyBound {
        value: f0.norm() + 0.5 * r.value,
        constant_term: f0.norm(),
        arclength: r.value,
        quad_error: r.error_estimate,
    })
}

/// Hardy certificate for `F_N = N^{-f}`.
pub fn hardy_upper_bound(h: &SymbolHandle, n: u64, quad: &QuadConfig) -> Result<HardyBound> {
    let f0 = h.basis_eval(n, &DiskPoint::new(C::new(0.0, 0.0)));
    if n == 1 {
        return Ok(HardyBound {
            value: f0.norm(),
            constant_term: f0.norm(),
            arclength: 0.0,
            quad_error: 0.0,
        });
    }
    hardy_upper_bound_from(
        f0,
        |p| h.basis_derivative(n, p),
        &h.singular_anchors(),
        quad,
    )
}

/// Length of the boundary image `F_N(∂D)`, i.e. `∫ |F_N'(e^{it})| dt`.
pub fn image_arclength(h: &SymbolHandle, n: u64, quad: &QuadConfig) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be ≥ 1".into()));
    }
    if n == 1 {
        return Ok(0.0);
    }
    Ok(integrate_circle(
        |p| h.basis_derivative(n, p).norm(),
        &h.singular_anchors(),
        quad,
    )?
    .value)
}

/// `2/N + 2π ln N / N`.
pub fn half_strip_arclength(n: u64) -> f64 {
    let nf = n as f64;
    2.0 / nf + 2.0 * PI * nf.ln() / nf
}

/// The sector-cap arclength as published: `(2/cos β)(1/N) + (tan β/π)(ln N/N)`.
pub fn sector_arclength_stated(beta: f64, n: u64) -> f64 {
    let nf = n as f64;
    2.0 / (beta.cos() * nf) + beta.tan() / PI * nf.ln() / nf
}

/// Length of the image of the sector-cap boundary under `w ↦ N^{-w}`:
/// `2/(N cos β)` from the two rays plus `2 tan β ln N / N` from the cap.
pub fn sector_arclength_geometric(beta: f64, n: u64) -> f64 {
    let nf = n as f64;
    2.0 / (beta.cos() * nf) + 2.0 * beta.tan() * nf.ln() / nf
}

/// Closed-form arclength where one is known.
pub fn predicted_arclength(h: &SymbolHandle, n: u64) -> Option<f64> {
    if n == 1 {
        return Some(0.0);
    }
    match *h.spec() {
        SymbolSpec::Thm1 => Some(half_strip_arclength(n)),
        SymbolSpec::Thm2 { beta, .. } => Some(sector_arclength_geometric(beta, n)),
        SymbolSpec::Constant { .. } => Some(0.0),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HpNorm {
    pub p: f64,
    pub value: f64,
    /// Quadrature error estimate for `∫|f|^p`, before the `1/p` root.
    pub error_estimate: f64,
    pub levels: usize,
}

/// `((1/2π) ∫ |f(e^{it})|^p dt)^{1/p}`.
pub fn hp_norm<F>(eval: F, p: f64, singular: &[Quarter], quad: &QuadConfig) -> Result<HpNorm>
where
    F: Fn(&DiskPoint) -> C,
{
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Hardy exponent {p} must be ≥ 1"
        )));
    }
    let r = integrate_circle(|pt| eval(pt).norm().powf(p), singular, quad)?;
    Ok(HpNorm {
        p,
        value: (r.value / (2.0 * PI)).powf(1.0 / p),
        error_estimate: r.error_estimate,
        levels: r.levels,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

/// Least-squares line through `(x, y)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidParameter(
            "linear fit needs at least two paired points".into(),
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "linear fit over a single abscissa".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = x
        .iter()
        .zip(y)
        .map(|(a, b)| b - (slope * a + intercept))
        .collect();
    Ok(LinearFit {
        slope,
        intercept,
        residuals,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HpGrowth {
    pub norms: Vec<HpNorm>,
    /// Least-squares line `‖f‖_p ≈ a p + b`.
    pub fit: LinearFit,
    /// `‖f‖_p / p` at the two largest exponents.
    pub top_ratios: (f64, f64),
    pub superlinear: bool,
}

/// `‖f‖_p` over `ps` (at least three increasing exponents) with a linear fit.
/// Growth counts as super-linear when `‖f‖_p / p` rises by more than 5%
/// between the two largest exponents.
pub fn hp_growth<F>(
    eval: F,
    ps: &[f64],
    singular: &[Quarter],
    quad: &QuadConfig,
) -> Result<HpGrowth>
where
    F: Fn(&DiskPoint) -> C + Sync,
{
    if ps.len() < 3 || ps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "Hᵖ growth needs at least three increasing exponents".into(),
        ));
    }
    let norms = ps
        .par_iter()
        .map(|&p| hp_norm(&eval, p, singular, quad))
        .collect::<Result<Vec<_>>>()?;
    let y: Vec<f64> = norms.iter().map(|n| n.value).collect();
    let fit = linear_fit(ps, &y)?;
    let k = ps.len();
    let top_ratios = (y[k - 2] / ps[k - 2], y[k - 1] / ps[k - 1]);
    Ok(HpGrowth {
        superlinear: top_ratios.1 > 1.05 * top_ratios.0,
        norms,
        fit,
        top_ratios,
    })
}

/// Settings shared by the per-`N` computations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormConfig {
    /// Truncation order `M` of the basis images.
    pub order: usize,
    /// Boundary samples per retained coefficient (rounded up to a power of two).
    pub oversample: usize,
    /// Orders at which partial sums are reported.
    pub schedule: Vec<usize>,
    pub quad: QuadConfig,
}

impl Default for NormConfig {
    fn default() -> Self {
        NormConfig {
            order: 1 << 16,
            oversample: 4,
            schedule: vec![1 << 14, 1 << 15, 1 << 16],
            quad: QuadConfig::default(),
        }
    }
}

impl NormConfig {
    pub fn with_order(order: usize) -> Self {
        let mut schedule: Vec<usize> = [order / 4, order / 2, order]
            .into_iter()
            .filter(|&m| m >= 1)
            .collect();
        schedule.dedup();
        NormConfig {
            order,
            schedule,
            ..Default::default()
        }
    }

    pub fn samples(&self) -> usize {
        (self.oversample.max(2) * (self.order + 1)).next_power_of_two()
    }
}

/// Taylor coefficients of `F_N` from boundary samples at `ρ = 1`.
pub fn basis_series_boundary(
    h: &SymbolHandle,
    n: u64,
    order: usize,
    samples: usize,
) -> Result<TruncatedSeries> {
    let cfg = BoundarySampling::new(order, 1.0).with_samples(samples);
    coeffs_from_boundary(|p| h.basis_eval(n, p), &cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub aplus_truncated: f64,
    pub aplus_certified: f64,
    pub arclength_measured: f64,
    pub arclength_predicted: Option<f64>,
    pub rel_err: Option<f64>,
}

impl NormRow {
    /// `certified · N / ln N`.
    pub fn c_fit(&self) -> f64 {
        let nf = self.n as f64;
        self.aplus_certified * nf / nf.ln()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct NormTable {
    pub rows: Vec<NormRow>,
}

impl NormTable {
    /// Supremum of [`NormRow::c_fit`] over the rows.
    pub fn c_fit(&self) -> f64 {
        self.rows.iter().map(NormRow::c_fit).fold(0.0, f64::max)
    }

    pub fn certified(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.aplus_certified).collect()
    }

    pub fn truncated(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.aplus_truncated).collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.rows {
            wr.serialize(r)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let rows = rd
            .deserialize()
            .collect::<std::result::Result<Vec<NormRow>, _>>()?;
        Ok(NormTable { rows })
    }
}

fn norm_row(h: &SymbolHandle, n: u64, cfg: &NormConfig) -> Result<NormRow> {
    let series = basis_series_boundary(h, n, cfg.order, cfg.samples())?;
    let aplus = aplus_norm(&series, &cfg.schedule);
    let hardy = hardy_upper_bound(h, n, &cfg.quad)?;
    let predicted = predicted_arclength(h, n);
    let rel_err = predicted
        .filter(|&p| p > 0.0)
        .map(|p| (hardy.arclength - p).abs() / p);
    Ok(NormRow {
        n,
        aplus_truncated: aplus.truncated_norm,
        aplus_certified: hardy.value,
        arclength_measured: hardy.arclength,
        arclength_predicted: predicted,
        rel_err,
    })
}

/// One row per `N`, computed in parallel and returned in ascending `N`.
pub fn norm_table(h: &SymbolHandle, n_list: &[u64], cfg: &NormConfig) -> Result<NormTable> {
    if let Some(&bad) = n_list.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidParameter(format!(
            "norm table needs N ≥ 2, got {bad}"
        )));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let rows = ns
        .par_iter()
        .map(|&n| norm_row(h, n, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{build_constant_symbol, build_thm1_symbol, build_thm2_symbol};

    #[test]
    fn aplus_of_constant_and_polynomial() {
        let one = TruncatedSeries::constant(C::new(1.0, 0.0), 64);
        let r = aplus_norm(&one, &[16, 32, 64]);
        assert_eq!(r.truncated_norm, 1.0);
        assert_eq!(r.stabilization, Some(0.0));
        let p = TruncatedSeries::from_real(&[2.5, 4.0, 1.0]).unwrap();
        assert_eq!(aplus_norm(&p, &[]).truncated_norm, 7.5);
    }

    #[test]
    fn constant_symbol_certificate() {
        let h = build_constant_symbol(C::new(1.0, 0.0)).unwrap();
        let b = hardy_upper_bound(&h, 3, &QuadConfig::default()).unwrap();
        assert!((b.value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(image_arclength(&h, 1, &QuadConfig::default()).unwrap(), 0.0);
    }

    #[test]
    fn half_strip_arclength_at_two() {
        let h = build_thm1_symbol().unwrap();
        let a = image_arclength(&h, 2, &QuadConfig::default()).unwrap();
        assert!((a - (1.0 + PI * 2f64.ln())).abs() < 1e-6, "{a}");
        assert!((half_strip_arclength(2) - 3.17755).abs() < 1e-4);
    }

    #[test]
    fn sector_formulas_at_right_angle() {
        let beta = PI / 4.0;
        assert!((sector_arclength_stated(beta, 2) - 1.52455).abs() < 1e-4);
        assert!((sector_arclength_geometric(beta, 2) - (2f64.sqrt() + 2f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn sector_arclength_matches_geometry() {
        let h = build_thm2_symbol(2.0).unwrap();
        let a = image_arclength(&h, 2, &QuadConfig::default()).unwrap();
        let g = sector_arclength_geometric(PI / 4.0, 2);
        assert!((a - g).abs() / g < 1e-4, "{a} vs {g}");
    }

    #[test]
    fn hp_norm_of_constant() {
        let r = hp_norm(|_| C::new(1.0, 0.0), 3.0, &[], &QuadConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
        assert!(hp_norm(|_| C::new(1.0, 0.0), 0.5, &[], &QuadConfig::default()).is_err());
    }

    #[test]
    fn hp_threshold_of_sector_map() {
        let h = build_thm2_symbol(2.0).unwrap();
        let anchors = h.singular_anchors();
        let quad = QuadConfig::default();
        assert!(hp_norm(|p| h.eval(p), 1.9, &anchors, &quad).is_ok());
        let above = hp_norm(|p| h.eval(p), 2.1, &anchors, &quad);
        assert!(
            matches!(above, Err(Error::QuadratureDivergence(_))),
            "{above:?}"
        );
    }

    #[test]
    fn linear_fit_recovers_line() {
        let x = [1.0, 2.0, 4.0];
        let y = [3.0, 5.0, 9.0];
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
    }

    #[test]
    fn small_table_roundtrips_through_csv() {
        let h = build_thm1_symbol().unwrap();
        let t = norm_table(&h, &[3, 2, 5], &NormConfig::with_order(256)).unwrap();
        assert_eq!(
            t.rows.iter().map(|r| r.n).collect::<Vec<_>>(),
            vec![2, 3, 5]
        );
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let header = String::from_utf8(buf.clone()).unwrap();
        assert!(header.starts_with(
            "N,aplus_truncated,aplus_certified,arclength_measured,arclength_predicted,rel_err"
        ));
        assert_eq!(NormTable::read_csv(buf.as_slice()).unwrap(), t);
        assert!(norm_table(&h, &[1], &NormConfig::with_order(16)).is_err());
    }
}
