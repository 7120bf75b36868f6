//! Boundary diagnostics: limits of `φ(s)` along paths to `ia`, the
//! logarithmic boundary singularity of `f`, and partial-sum growth of
//! coefficient sequences.

use crate::disk::{DiskPoint, Quarter};
use crate::error::{Error, Result};
use crate::norms::{linear_fit, LinearFit};
use crate::series::TruncatedSeries;
use crate::symbols::SymbolHandle;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

type C = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum PathShape {
    /// `s = t + ia`.
    Radial,
    /// `s = c t² + i(a + t)`.
    Parabolic { c: f64 },
    /// Explicit offsets `s - ia`.
    Custom { offsets: Vec<C> },
}

/// A path `s(t) → ia` with `t` running geometrically from `t_max` to `t_min`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub a: f64,
    pub shape: PathShape,
    pub t_max: f64,
    pub t_min: f64,
}

impl PathSpec {
    pub fn radial(a: f64) -> Self {
        PathSpec {
            a,
            shape: PathShape::Radial,
            t_max: 1e-1,
            t_min: 1e-24,
        }
    }

    pub fn parabolic(a: f64, c: f64) -> Self {
        PathSpec {
            a,
            shape: PathShape::Parabolic { c },
            t_max: 1e-1,
            t_min: 1e-6,
        }
    }

    pub fn custom(a: f64, offsets: Vec<C>) -> Self {
        PathSpec {
            a,
            shape: PathShape::Custom { offsets },
            t_max: f64::NAN,
            t_min: f64::NAN,
        }
    }

    /// Offsets `s - ia` along the path, ordered towards `ia`.
    pub fn offsets(&self, k: usize) -> Result<Vec<C>> {
        let geometric = || -> Result<Vec<f64>> {
            if !(self.t_max > self.t_min && self.t_min > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "path range [{}, {}]",
                    self.t_min, self.t_max
                )));
            }
            let ratio = (self.t_min / self.t_max).ln();
            Ok((0..k)
                .map(|j| self.t_max * (ratio * j as f64 / (k - 1) as f64).exp())
                .collect())
        };
        let out: Vec<C> = match &self.shape {
            PathShape::Radial => geometric()?.into_iter().map(|t| C::new(t, 0.0)).collect(),
            PathShape::Parabolic { c } => {
                if !(*c > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "parabolic coefficient {c} must be positive"
                    )));
                }
                geometric()?
                    .into_iter()
                    .map(|t| C::new(c * t * t, t))
                    .collect()
            }
            PathShape::Custom { offsets } => offsets.clone(),
        };
        if let Some(bad) = out.iter().find(|d| !(d.re > 0.0) || !d.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "path sample offset {bad} needs Re > 0"
            )));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProbeKind {
    Limit { re: f64, im: f64 },
    ReDivergence,
    Oscillation,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeVerdict {
    pub kind: ProbeKind,
    pub tail_diameter: f64,
    /// Total variation of the argument about the fitted centre.
    pub tail_arg_range: f64,
    /// Fitted centre and mean distance from it over the tail.
    pub center: Option<(f64, f64)>,
    pub tail_modulus: Option<f64>,
    /// `(max - min) / mean` of the distance from the centre.
    pub modulus_variation: Option<f64>,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub limit_tol: f64,
    /// Minimum rise of `Re φ` over the tail read as divergence.
    pub re_rise: f64,
    pub max_modulus_variation: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            limit_tol: 1e-6,
            re_rise: 1.0,
            max_modulus_variation: 0.1,
        }
    }
}

/// Algebraic least-squares circle through the points; `None` when degenerate.
fn kasa_fit(pts: &[C]) -> Option<(C, f64)> {
    let n = pts.len() as f64;
    let mean = pts.iter().sum::<C>() / n;
    let mut m = [[0.0f64; 4]; 3];
    for p in pts {
        let (x, y) = ((p - mean).re, (p - mean).im);
        let row = [x, y, 1.0];
        let rhs = -(x * x + y * y);
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            m[i][3] += row[i] * rhs;
        }
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        m.swap(col, piv);
        if m[col][col].abs() < 1e-300 {
            return None;
        }
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                let pivot = m[col];
                for (x, p) in m[r][col..].iter_mut().zip(&pivot[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    let (d, e, f) = (m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]);
    let r2 = 0.25 * (d * d + e * e) - f;
    (r2 > 0.0 && r2.is_finite()).then(|| (mean + C::new(-0.5 * d, -0.5 * e), r2.sqrt()))
}

fn wrap(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

/// Classifies the last quarter of a value sequence.
pub fn classify_tail(values: &[C], cfg: &ProbeConfig) -> ProbeVerdict {
    let tail = &values[values.len() - values.len() / 4..];
    let mut diameter = 0.0f64;
    for (i, a) in tail.iter().enumerate() {
        for b in &tail[i + 1..] {
            diameter = diameter.max((a - b).norm());
        }
    }
    let mut v = ProbeVerdict {
        kind: ProbeKind::Inconclusive,
        tail_diameter: diameter,
        tail_arg_range: 0.0,
        center: None,
        tail_modulus: None,
        modulus_variation: None,
        samples: values.len(),
    };
    if !tail.iter().all(|z| z.is_finite()) {
        if tail.iter().all(|z| z.re == f64::INFINITY) {
            v.kind = ProbeKind::ReDivergence;
        }
        return v;
    }
    if diameter < cfg.limit_tol {
        let last = tail[tail.len() - 1];
        v.kind = ProbeKind::Limit {
            re: last.re,
            im: last.im,
        };
        return v;
    }
    let rising = tail.windows(2).all(|w| w[1].re > w[0].re);
    if rising && tail[tail.len() - 1].re - tail[0].re >= cfg.re_rise {
        v.kind = ProbeKind::ReDivergence;
        return v;
    }
    if let Some((c, _)) = kasa_fit(tail) {
        let d: Vec<f64> = tail.iter().map(|z| (z - c).norm()).collect();
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        let (lo, hi) = d
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
        let args: Vec<f64> = tail.iter().map(|z| (z - c).arg()).collect();
        let total: f64 = args.windows(2).map(|w| wrap(w[1] - w[0]).abs()).sum();
        v.center = Some((c.re, c.im));
        v.tail_modulus = Some(mean);
        v.modulus_variation = Some((hi - lo) / mean);
        v.tail_arg_range = total;
        if (hi - lo) / mean < cfg.max_modulus_variation && total > TAU {
            v.kind = ProbeKind::Oscillation;
        }
    }
    v
}

/// Values `φ(s)` along the path.
pub fn probe_values(h: &SymbolHandle, path: &PathSpec, k: usize) -> Result<Vec<C>> {
    path.offsets(k)?
        .into_iter()
        .map(|d| Ok(h.eval(&h.dirichlet_point_at(path.a, d)?)))
        .collect()
}

pub fn limit_probe(
    h: &SymbolHandle,
    path: &PathSpec,
    k: usize,
    cfg: &ProbeConfig,
) -> Result<ProbeVerdict> {
    let len = match &path.shape {
        PathShape::Custom { offsets } => offsets.len(),
        _ => k,
    };
    if len < 32 {
        return Err(Error::InvalidParameter(format!(
            "limit probe needs at least 32 samples, got {len}"
        )));
    }
    Ok(classify_tail(&probe_values(h, path, k)?, cfg))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogSingularityFit {
    /// Slope from the innermost window.
    pub alpha: f64,
    /// `sup |Re f - α log|e^{it} - q||` over all windows.
    pub g_sup: f64,
    /// `(k, slope, sup |residual + intercept|)` per window `10^{-k}`.
    pub windows: Vec<(u32, f64, f64)>,
}

/// Fits `Re f(e^{it}) = α log|q - e^{it}| + g(t)` on nested windows of
/// half-width `10^{-k}` around the quarter point `q`.
pub fn log_singularity_fit(
    h: &SymbolHandle,
    q: Quarter,
    ks: std::ops::RangeInclusive<u32>,
    per_side: usize,
) -> Result<LogSingularityFit> {
    if *ks.end() > 8 || ks.is_empty() || per_side < 2 {
        return Err(Error::InvalidParameter(
            "windows must satisfy 1 ≤ k ≤ 8 with at least two samples per side".into(),
        ));
    }
    let mut windows = Vec::new();
    for k in ks {
        let w = 10f64.powi(-(k as i32));
        let mut x = Vec::with_capacity(2 * per_side);
        let mut y = Vec::with_capacity(2 * per_side);
        for j in 0..per_side {
            // three decades inside the window, never closer than 1e-3 w
            let d = w * 10f64.powf(-3.0 * j as f64 / (per_side - 1) as f64);
            for sign in [1.0, -1.0] {
                let p = DiskPoint::boundary(q, sign * d);
                x.push(p.dist(q).ln());
                y.push(h.eval(&p).re);
            }
        }
        let LinearFit {
            slope,
            intercept,
            residuals,
        } = linear_fit(&x, &y)?;
        let g = residuals
            .iter()
            .map(|r| (r + intercept).abs())
            .fold(0.0, f64::max);
        windows.push((k, slope, g));
    }
    let slopes: Vec<f64> = windows.iter().map(|w| w.1).collect();
    let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
    let (lo, hi) = slopes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &s| {
            (l.min(s), h.max(s))
        });
    if (hi - lo) > 0.05 * mean.abs().max(1e-12) {
        return Err(Error::FitUnstable { slopes });
    }
    let alpha = *slopes.last().expect("non-empty windows");
    let g_sup = windows.iter().map(|w| w.2).fold(0.0, f64::max);
    Ok(LogSingularityFit {
        alpha,
        g_sup,
        windows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub partial_sums: Vec<(usize, f64)>,
    /// Increase of the partial sum between consecutive scheduled orders.
    pub increments: Vec<f64>,
    /// Partial sums against `ln M`.
    pub log_fit: LinearFit,
    pub delta: f64,
    /// Every increment exceeds `delta`.
    pub no_convergence: bool,
}

pub fn aplus_divergence_probe(
    series: &TruncatedSeries,
    schedule: &[usize],
    delta: f64,
) -> Result<DivergenceReport> {
    if schedule.len() < 3 || schedule.windows(2).any(|w| w[1] <= w[0]) || schedule[0] == 0 {
        return Err(Error::InvalidParameter(
            "divergence schedule needs ≥ 3 strictly increasing positive orders".into(),
        ));
    }
    if *schedule.last().expect("non-empty") > series.order() {
        return Err(Error::InvalidParameter(format!(
            "schedule exceeds series order {}",
            series.order()
        )));
    }
    let sums = series.abs_partial_sums();
    let partial_sums: Vec<(usize, f64)> = schedule.iter().map(|&m| (m, sums[m])).collect();
    let increments: Vec<f64> = partial_sums.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let lx: Vec<f64> = schedule.iter().map(|&m| (m as f64).ln()).collect();
    let ly: Vec<f64> = partial_sums.iter().map(|p| p.1).collect();
    let log_fit = linear_fit(&lx, &ly)?;
    let no_convergence = increments.iter().all(|&d| d > delta);
    Ok(DivergenceReport {
        partial_sums,
        increments,
        log_fit,
        delta,
        no_convergence,
    })
}
