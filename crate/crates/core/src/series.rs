//! Truncated complex power series on the unit disk.
//!
//! A [`TruncatedSeries`] holds `a_0..=a_M`. The same type represents Taylor
//! series in `z` and, through `z = p^{-s}`, single-prime Dirichlet series.
//!
//! Division, `exp`, `log` and `sqrt` are solved from their derivative
//! identities (`q b = a`, `b' = a' b`, `s l' = s'`, `2 s r' = s' r`). Each
//! identity is an online convolution of a fully known series against the
//! unknowns; it is evaluated with a divide-and-conquer scheme whose blocks
//! switch to FFT products above the configured crossover, so the cost is
//! `O(M log² M)` instead of `O(M²)` for large orders.

use crate::disk::DiskPoint;
use crate::error::{Error, Result};
use crate::fft;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    coeffs: Vec<C>,
    /// Certified bound on the modulus of the discarded tail on the closed
    /// disk, when one is known.
    trunc_bound: Option<f64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSeries(
                "a series needs at least one coefficient".into(),
            ));
        }
        if let Some(k) = coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidSeries(format!(
                "coefficient {k} is not finite"
            )));
        }
        Ok(TruncatedSeries {
            coeffs,
            trunc_bound: None,
        })
    }

    pub fn with_trunc_bound(mut self, bound: f64) -> Result<Self> {
        if !(bound >= 0.0) {
            return Err(Error::InvalidSeries(format!(
                "truncation bound {bound} must be non-negative"
            )));
        }
        self.trunc_bound = Some(bound);
        Ok(self)
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| C::new(x, 0.0)).collect())
    }

    /// Polynomial `coeffs` padded with zeros up to `order`; the tail is exact.
    pub fn polynomial(coeffs: &[C], order: usize) -> Result<Self> {
        let mut v = vec![ZERO; order + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            if k <= order {
                v[k] = c;
            }
        }
        let tail: f64 = coeffs.iter().skip(order + 1).map(|c| c.norm()).sum();
        Self::new(v)?.with_trunc_bound(tail)
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::polynomial(&[c], order).expect("finite constant")
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(ZERO, order)
    }

    /// The identity map `z`.
    pub fn variable(order: usize) -> Self {
        Self::polynomial(&[ZERO, ONE], order).expect("finite")
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn trunc_bound(&self) -> Option<f64> {
        self.trunc_bound
    }

    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order() {
            return self.clone();
        }
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
            trunc_bound: None,
        }
    }

    /// Horner evaluation of the retained polynomial.
    pub fn eval(&self, z: C) -> C {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Partial sums `Σ_{n≤k} |a_n|` for every `k`.
    pub fn abs_partial_sums(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.coeffs
            .iter()
            .map(|c| {
                acc += c.norm();
                acc
            })
            .collect()
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, k: C) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
            trunc_bound: self.trunc_bound.map(|b| b * k.norm()),
        }
    }

    pub fn add_constant(&self, k: C) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=m).map(|n| self.coeffs[n] + other.coeffs[n]).collect(),
            trunc_bound: match (self.trunc_bound, other.trunc_bound) {
                (Some(a), Some(b)) if self.order() == other.order() => Some(a + b),
                _ => None,
            },
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Thresholds and crossover used by the series operations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    /// Orders above this use transform-based products.
    pub crossover: usize,
    /// A constant term is "non-zero" when it exceeds this fraction of the
    /// largest coefficient magnitude.
    pub zero_threshold: f64,
    /// Principal-branch margin for `log`/`sqrt` constant terms.
    pub branch_margin: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            crossover: 512,
            zero_threshold: 1e-12,
            branch_margin: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnalyticKind {
    Exp,
    Log,
    Sqrt,
}

impl SeriesConfig {
    fn check_invertible(&self, s: &TruncatedSeries) -> Result<C> {
        let c0 = s.coeffs[0];
        let threshold = self.zero_threshold * s.max_abs();
        if !(c0.norm() > threshold) {
            return Err(Error::NearZeroConstantTerm {
                magnitude: c0.norm(),
                threshold,
            });
        }
        Ok(c0)
    }

    fn check_branch(&self, c0: C) -> Result<()> {
        let arg = c0.arg();
        if arg.abs() > PI - self.branch_margin {
            return Err(Error::BranchCutProximity {
                arg,
                margin: self.branch_margin,
            });
        }
        Ok(())
    }

    pub fn mul(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        let m = a.order().min(b.order());
        let len = m + 1;
        let (ac, bc) = (&a.coeffs[..len], &b.coeffs[..len]);
        let bound = match (a.trunc_bound, b.trunc_bound) {
            (Some(ta), Some(tb)) if a.order() == b.order() => {
                // |ab - (a_M b_M truncated)| ≤ ‖a_M‖ tb + ‖b_M‖ ta + ta tb + dropped product tail.
                let full = self.product(ac, bc, 2 * len - 1);
                let dropped: f64 = full[len..].iter().map(|c| c.norm()).sum();
                Some(a.l1_norm() * tb + b.l1_norm() * ta + ta * tb + dropped)
            }
            _ => None,
        };
        TruncatedSeries {
            coeffs: self.product(ac, bc, len),
            trunc_bound: bound,
        }
    }

    fn product(&self, a: &[C], b: &[C], out_len: usize) -> Vec<C> {
        if a.len().min(b.len()) <= self.crossover {
            fft::convolve_direct(a, b, out_len)
        } else {
            fft::convolve(a, b, out_len)
        }
    }

    pub fn div(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
        let b0 = self.check_invertible(b)?;
        let m = a.order().min(b.order());
        let ac = &a.coeffs;
        let q = relaxed_solve(&[&b.coeffs[..=m]], m + 1, self.crossover, |n, conv| {
            (ac[n] - conv[0]) / b0
        });
        TruncatedSeries::new(q)
    }

    pub fn analytic(&self, kind: AnalyticKind, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        match kind {
            AnalyticKind::Exp => self.exp(s),
            AnalyticKind::Log => self.log(s),
            AnalyticKind::Sqrt => self.sqrt(s),
        }
    }

    pub fn exp(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        let len = s.coeffs.len();
        let weighted: Vec<C> = s
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * k as f64)
            .collect();
        let e0 = s.coeffs[0].exp();
        let b = relaxed_solve(&[&weighted], len, self.crossover, |n, conv| {
            if n == 0 {
                e0
            } else {
                conv[0] / n as f64
            }
        });
        TruncatedSeries::new(b)
    }

    pub fn log(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        let s0 = self.check_invertible(s)?;
        self.check_branch(s0)?;
        let sc = &s.coeffs;
        // y_n = n l_n solves Σ_k s_k y_{n-k} = n s_n.
        let y = relaxed_solve(&[sc], sc.len(), self.crossover, |n, conv| {
            if n == 0 {
                ZERO
            } else {
                (sc[n] * n as f64 - conv[0]) / s0
            }
        });
        let mut l: Vec<C> = y
            .iter()
            .enumerate()
            .map(|(n, &v)| if n == 0 { ZERO } else { v / n as f64 })
            .collect();
        l[0] = s0.ln();
        TruncatedSeries::new(l)
    }

    pub fn sqrt(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        let s0 = self.check_invertible(s)?;
        self.check_branch(s0)?;
        let r0 = s0.sqrt();
        let sc = &s.coeffs;
        let weighted: Vec<C> = sc.iter().enumerate().map(|(k, &c)| c * k as f64).collect();
        // From 2 s r' = s' r: 2 n s_0 r_n = Σ_{k≥1} (3k - 2n) s_k r_{n-k}.
        let r = relaxed_solve(&[&weighted, sc], sc.len(), self.crossover, |n, conv| {
            if n == 0 {
                r0
            } else {
                let nf = n as f64;
                (conv[0] * 3.0 - conv[1] * (2.0 * nf)) / (s0 * (2.0 * nf))
            }
        });
        TruncatedSeries::new(r)
    }

    /// `s^p = exp(p log s)` on the principal branch.
    pub fn powc(&self, s: &TruncatedSeries, p: C) -> Result<TruncatedSeries> {
        let l = self.log(s)?;
        self.exp(&l.scale(p))
    }
}

/// Solves `y_n = step(n, [Σ_{k=1..n} K_j[k] y_{n-k}]_j)` for `n < len`, where
/// the `K_j` are fully known. Contributions of `y[l..m)` to `[m..r)` are
/// added block-wise, so each block product can use a transform.
fn relaxed_solve<F>(knowns: &[&[C]], len: usize, crossover: usize, step: F) -> Vec<C>
where
    F: FnMut(usize, &[C]) -> C,
{
    struct State<'a, F> {
        knowns: &'a [&'a [C]],
        conv: Vec<Vec<C>>,
        y: Vec<C>,
        scratch: Vec<C>,
        crossover: usize,
        step: F,
    }

    const LEAF: usize = 32;

    fn rec<F: FnMut(usize, &[C]) -> C>(st: &mut State<'_, F>, l: usize, r: usize) {
        if r - l <= LEAF {
            for n in l..r {
                for (j, known) in st.knowns.iter().enumerate() {
                    let mut acc = st.conv[j][n];
                    for i in l..n {
                        if let Some(&kv) = known.get(n - i) {
                            acc += kv * st.y[i];
                        }
                    }
                    st.conv[j][n] = acc;
                    st.scratch[j] = acc;
                }
                let v = (st.step)(n, &st.scratch);
                st.y[n] = v;
            }
            return;
        }
        let m = (l + r) / 2;
        rec(st, l, m);
        for (j, known) in st.knowns.iter().enumerate() {
            let kk = &known[..known.len().min(r - l)];
            let ys = &st.y[l..m];
            let part = if ys.len().min(kk.len()) <= st.crossover / 8 {
                fft::convolve_direct(ys, kk, r - l)
            } else {
                fft::convolve(ys, kk, r - l)
            };
            for n in m..r {
                st.conv[j][n] += part[n - l];
            }
        }
        rec(st, m, r);
    }

    let mut st = State {
        knowns,
        conv: vec![vec![ZERO; len]; knowns.len()],
        y: vec![ZERO; len],
        scratch: vec![ZERO; knowns.len()],
        crossover: crossover.max(8),
        step,
    };
    if len > 0 {
        rec(&mut st, 0, len);
    }
    st.y
}

pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    SeriesConfig::default().mul(a, b)
}

pub fn series_div(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    SeriesConfig::default().div(a, b)
}

pub fn series_analytic(kind: AnalyticKind, s: &TruncatedSeries) -> Result<TruncatedSeries> {
    SeriesConfig::default().analytic(kind, s)
}

/// Term-wise derivative; the order drops by one (a constant stays order 0).
pub fn series_derivative(s: &TruncatedSeries) -> TruncatedSeries {
    let c = &s.coeffs;
    if c.len() == 1 {
        return TruncatedSeries {
            coeffs: vec![ZERO],
            trunc_bound: None,
        };
    }
    TruncatedSeries {
        coeffs: (1..c.len()).map(|n| c[n] * n as f64).collect(),
        trunc_bound: None,
    }
}

/// Antiderivative with constant term `c0`, truncated to the same order.
pub fn series_integral(s: &TruncatedSeries, c0: C) -> TruncatedSeries {
    let c = &s.coeffs;
    let mut out = Vec::with_capacity(c.len());
    out.push(c0);
    for n in 1..c.len() {
        out.push(c[n - 1] / n as f64);
    }
    TruncatedSeries {
        coeffs: out,
        trunc_bound: None,
    }
}

/// How a boundary evaluator is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySampling {
    pub order: usize,
    pub radius: f64,
    /// Sample count; a power of two ≥ 2(order+1). Defaults to the smallest.
    pub samples: Option<usize>,
    /// Sample at `2π(j + ½)/K` instead of `2πj/K`, which avoids the
    /// quarter-turn points where the symbols in scope are singular.
    pub half_shift: bool,
}

impl BoundarySampling {
    pub fn new(order: usize, radius: f64) -> Self {
        BoundarySampling {
            order,
            radius,
            samples: None,
            half_shift: false,
        }
    }

    pub fn with_samples(mut self, k: usize) -> Self {
        self.samples = Some(k);
        self
    }

    pub fn shifted(mut self) -> Self {
        self.half_shift = true;
        self
    }

    pub fn sample_count(&self) -> Result<usize> {
        let min = (2 * (self.order + 1)).next_power_of_two();
        match self.samples {
            None => Ok(min),
            Some(k) if k.is_power_of_two() && k >= min => Ok(k),
            Some(k) => Err(Error::InvalidParameter(format!(
                "sample count {k} must be a power of two at least {min}"
            ))),
        }
    }
}

/// Taylor coefficients `a_0..=a_M` from equispaced samples on the circle of
/// radius `ρ`: the discrete Fourier coefficients divided by `ρ^n`.
pub fn coeffs_from_boundary<F>(eval: F, cfg: &BoundarySampling) -> Result<TruncatedSeries>
where
    F: Fn(&DiskPoint) -> C + Sync,
{
    let rho = cfg.radius;
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "sampling radius {rho} must lie in (0, 1]"
        )));
    }
    let k = cfg.sample_count()?;
    let shift = if cfg.half_shift { 0.5 } else { 0.0 };
    let quarter = k / 4;
    let point = |j: usize| -> (f64, DiskPoint) {
        let pos = j as f64 + shift;
        let t = 2.0 * PI * pos / k as f64;
        if rho == 1.0 && quarter > 0 {
            let q = ((pos / quarter as f64).round() as usize) % 4;
            let rel = pos - (q * quarter) as f64;
            let rel = if rel > (2 * quarter) as f64 {
                rel - k as f64
            } else {
                rel
            };
            let delta = 2.0 * PI * rel / k as f64;
            (
                t,
                DiskPoint::boundary(crate::disk::Quarter::from_index(q), delta),
            )
        } else {
            (t, DiskPoint::new(C::from_polar(rho, t)))
        }
    };
    let mut samples: Vec<C> = (0..k)
        .into_par_iter()
        .map(|j| {
            let (_, p) = point(j);
            eval(&p)
        })
        .collect();
    if let Some(j) = samples
        .iter()
        .position(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(Error::SampleSingularity {
            angle: point(j).0,
            radius: rho,
        });
    }
    fft::forward(&mut samples);
    let scale = 1.0 / k as f64;
    let mut coeffs = Vec::with_capacity(cfg.order + 1);
    let mut rho_n = 1.0;
    for (n, &v) in samples.iter().enumerate().take(cfg.order + 1) {
        let mut c = v * scale / rho_n;
        if cfg.half_shift {
            c *= C::from_polar(1.0, -PI * n as f64 / k as f64);
        }
        coeffs.push(c);
        rho_n *= rho;
    }
    TruncatedSeries::new(coeffs)
}
