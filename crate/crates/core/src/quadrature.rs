//! Boundary quadrature on the unit circle with grading toward declared
//! singular quarter-turn points.
//!
//! The circle is cut into eight half-arcs of length π/4, each attached to
//! the quarter point at one of its ends. Half-arcs attached to a declared
//! singular point are covered by dyadic panels `[L 2^{-k-1}, L 2^{-k}]`,
//! `k < depth`; the others by uniform panels. Every panel uses Gauss–Legendre
//! nodes. Refinement doubles the grading depth (40 → 1000 panels, i.e. down
//! to distances ~1e-301) and adds sub-panels, until two successive levels
//! agree.

use crate::disk::{DiskPoint, Quarter};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = x;
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub gl_points: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub base_depth: usize,
    pub max_depth: usize,
    pub max_levels: usize,
    /// Uniform panels per regular half-arc at level 0.
    pub base_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            gl_points: 16,
            rel_tol: 1e-3,
            abs_tol: 1e-9,
            base_depth: 40,
            max_depth: 1000,
            max_levels: 6,
            base_panels: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub error_estimate: f64,
    pub levels: usize,
    pub history: Vec<f64>,
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    /// `∫_a^b g(x) dx` for one panel.
    fn panel<G: Fn(f64) -> f64>(&self, a: f64, b: f64, g: &G) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn half_arc<F: Fn(&DiskPoint) -> f64>(
    rule: &Rule,
    g: &F,
    anchor: Quarter,
    sign: f64,
    graded: bool,
    depth: usize,
    sub: usize,
    panels: usize,
) -> f64 {
    let len = FRAC_PI_4;
    let h = |d: f64| g(&DiskPoint::boundary(anchor, sign * d));
    let mut total = 0.0;
    if graded {
        let mut hi = len;
        for _ in 0..depth {
            let lo = 0.5 * hi;
            let w = (hi - lo) / sub as f64;
            for j in 0..sub {
                total += rule.panel(lo + j as f64 * w, lo + (j + 1) as f64 * w, &h);
            }
            hi = lo;
        }
    } else {
        let w = len / panels as f64;
        for j in 0..panels {
            total += rule.panel(j as f64 * w, (j + 1) as f64 * w, &h);
        }
    }
    total
}

fn circle_level<F: Fn(&DiskPoint) -> f64>(
    rule: &Rule,
    g: &F,
    singular: &[Quarter],
    depth: usize,
    sub: usize,
    panels: usize,
) -> f64 {
    let mut total = 0.0;
    for q in Quarter::ALL {
        let graded = singular.contains(&q);
        total += half_arc(rule, g, q, 1.0, graded, depth, sub, panels);
        total += half_arc(rule, g, q, -1.0, graded, depth, sub, panels);
    }
    total
}

/// `∫_0^{2π} g(e^{it}) dt` with grading toward the points in `singular`.
pub fn integrate_circle<F>(g: F, singular: &[Quarter], cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(&DiskPoint) -> f64,
{
    let (nodes, weights) = gauss_legendre(cfg.gl_points);
    let rule = Rule { nodes, weights };
    let mut history = Vec::with_capacity(cfg.max_levels);
    for level in 0..cfg.max_levels {
        let depth = (cfg.base_depth << level).min(cfg.max_depth);
        let sub = 1 + level;
        let panels = cfg.base_panels << level;
        let value = circle_level(&rule, &g, singular, depth, sub, panels);
        history.push(value);
        if level == 0 || !value.is_finite() {
            continue;
        }
        let prev = history[level - 1];
        if !prev.is_finite() {
            continue;
        }
        let diff = (value - prev).abs();
        if diff <= cfg.rel_tol * value.abs() || diff <= cfg.abs_tol {
            return Ok(QuadResult {
                value,
                error_estimate: diff,
                levels: level + 1,
                history,
            });
        }
    }
    Err(Error::QuadratureDivergence(format!(
        "refinement history {history:?}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((m - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_periodic_integral() {
        // ∫ |1 + z/2|² dt = 2π (1 + 1/4)
        let r = integrate_circle(
            |p| (p.z() * 0.5 + 1.0).norm_sqr(),
            &[],
            &QuadConfig::default(),
        )
        .unwrap();
        assert!((r.value - 2.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        // ∫_0^{2π} (2 sin(t/2))^{-1/2} dt = √2 B(1/4, 1/2)
        let exact = 2f64.sqrt() * 5.244115108584239;
        let r = integrate_circle(
            |p| p.dist(Quarter::One).powf(-0.5),
            &[Quarter::One],
            &QuadConfig::default(),
        )
        .unwrap();
        assert!(
            (r.value - exact).abs() / exact < 1e-6,
            "{} vs {}",
            r.value,
            exact
        );
    }

    #[test]
    fn non_integrable_singularity_is_reported() {
        let r = integrate_circle(
            |p| p.dist(Quarter::I).powf(-1.05),
            &[Quarter::I],
            &QuadConfig::default(),
        );
        assert!(matches!(r, Err(Error::QuadratureDivergence(_))));
    }
}
