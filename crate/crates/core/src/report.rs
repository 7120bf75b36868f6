//! Verification suites and their JSON/CSV reports.

use crate::disk::Quarter;
use crate::error::{Error, Result};
use crate::harness::{
    basis_image, boundedness_from_table, compactness_from_table, dyadic_schedule, l2_from_table,
    Evidence, HarnessConfig,
};
use crate::norms::{
    aplus_norm, half_strip_arclength, hardy_upper_bound, hp_growth, hp_norm, image_arclength,
    norm_table, sector_arclength_geometric, sector_arclength_stated, NormConfig, NormTable,
};
use crate::probes::{
    aplus_divergence_probe, limit_probe, log_singularity_fit, PathSpec, ProbeConfig, ProbeKind,
};
use crate::quadrature::QuadConfig;
use crate::symbols::{sample_containment, SymbolHandle, SymbolSpec};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

type C = Complex64;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Thm1,
    Thm2,
    Counterexample,
    Bflq,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm1" => Ok(Suite::Thm1),
            "thm2" => Ok(Suite::Thm2),
            "counterexample" => Ok(Suite::Counterexample),
            "bflq" => Ok(Suite::Bflq),
            "all" => Ok(Suite::All),
            other => Err(Error::Config(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub p: f64,
    pub a: f64,
    pub c1: C,
    pub cr: f64,
    pub cr2: f64,
    pub r: u64,
    pub n_max: u64,
    pub order: usize,
    /// Relative tolerance for closed-form comparisons.
    pub tol: f64,
    pub workers: Option<usize>,
    pub seed: u64,
    pub containment_samples: usize,
    pub out: Option<PathBuf>,
    pub csv_dir: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::All,
            p: 2.0,
            a: 0.0,
            c1: C::new(0.0, 0.0),
            cr: 4.0,
            cr2: 1.0,
            r: 2,
            n_max: 64,
            order: 1 << 16,
            tol: 0.01,
            workers: None,
            seed: 0,
            containment_samples: 100_000,
            out: None,
            csv_dir: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.p > 1.0) || !self.p.is_finite() {
            return bad(format!("--p must exceed 1, got {}", self.p));
        }
        if !(self.a >= 0.0) || !self.a.is_finite() {
            return bad(format!("--A must be ≥ 0, got {}", self.a));
        }
        if !(self.cr > 0.0 && self.cr2 > 0.0) || self.r < 2 || !self.c1.is_finite() {
            return bad("polynomial symbol needs --cr > 0, --cr2 > 0, --r ≥ 2".into());
        }
        if self.n_max < 2 {
            return bad(format!("--nmax must be ≥ 2, got {}", self.n_max));
        }
        if self.order < 1 || self.order > 1 << 22 {
            return bad(format!("--order must lie in [1, 2^22], got {}", self.order));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("--tol must lie in (0, 1), got {}", self.tol));
        }
        if self.workers == Some(0) {
            return bad("--workers must be ≥ 1".into());
        }
        if self.containment_samples == 0 {
            return bad("containment sample count must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Evidence,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The claim under test, or `"plumbing"`.
    pub anchor: String,
    pub inputs: BTreeMap<String, Value>,
    pub measured: Value,
    pub predicted: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub evidence: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub precision: String,
    pub logarithm: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: Suite,
    pub environment: Environment,
    pub records: Vec<CheckRecord>,
    pub totals: Totals,
    #[serde(skip)]
    pub tables: Vec<(String, NormTable)>,
}

impl VerificationReport {
    /// 1 if any record fails, else 2 if any is inconclusive, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.totals.fail > 0 {
            1
        } else if self.totals.inconclusive > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    /// One `<name>.csv` per norm table.
    pub fn write_csv(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (name, table) in &self.tables {
            let path = dir.join(format!("{name}.csv"));
            table.write_csv(std::fs::File::create(&path)?)?;
            written.push(path);
        }
        Ok(written)
    }
}

struct Builder {
    records: Vec<CheckRecord>,
    tables: Vec<(String, NormTable)>,
}

struct Rec {
    id: String,
    anchor: &'static str,
    inputs: BTreeMap<String, Value>,
    predicted: Option<f64>,
    tolerance: Option<f64>,
}

fn rec(id: impl Into<String>, anchor: &'static str) -> Rec {
    Rec {
        id: id.into(),
        anchor,
        inputs: BTreeMap::new(),
        predicted: None,
        tolerance: None,
    }
}

impl Rec {
    fn input(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.inputs.insert(k.into(), v.into());
        self
    }

    fn predicted(mut self, v: f64) -> Self {
        self.predicted = Some(v);
        self
    }

    fn tolerance(mut self, v: f64) -> Self {
        self.tolerance = Some(v);
        self
    }
}

/// Numerical errors turn into failed records; unmet preconditions into
/// inconclusive ones.
fn error_verdict(e: &Error) -> Verdict {
    match e {
        Error::InvalidParameter(_) | Error::Config(_) => Verdict::Inconclusive,
        _ => Verdict::Fail,
    }
}

impl Builder {
    fn push(&mut self, r: Rec, outcome: Result<(Value, Verdict, Option<String>)>) {
        let (measured, verdict, detail) = match outcome {
            Ok(v) => v,
            Err(e) => (Value::Null, error_verdict(&e), Some(e.to_string())),
        };
        self.records.push(CheckRecord {
            id: r.id,
            anchor: r.anchor.into(),
            inputs: r.inputs,
            measured,
            predicted: r.predicted,
            tolerance: r.tolerance,
            verdict,
            detail,
        });
    }
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn evidence_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Evidence
    } else {
        Verdict::Inconclusive
    }
}

fn rel_err(measured: f64, predicted: f64) -> f64 {
    (measured - predicted).abs() / predicted.abs()
}

fn table_checks(
    b: &mut Builder,
    prefix: &str,
    h: &SymbolHandle,
    table: &Result<NormTable>,
    cfg: &SuiteConfig,
    harness: &HarnessConfig,
) {
    let table = match table {
        Ok(t) => t,
        Err(e) => {
            b.push(
                rec(format!("{prefix}.norm_table"), "plumbing").input("n_max", cfg.n_max),
                Err(e.clone()),
            );
            return;
        }
    };
    let worst = table
        .rows
        .iter()
        .map(|r| r.aplus_truncated - r.aplus_certified)
        .fold(f64::NEG_INFINITY, f64::max);
    b.push(
        rec(
            format!("{prefix}.hardy_dominance"),
            "Σ|a_n| ≤ |F_N(0)| + π‖F_N'‖_{H¹}",
        )
        .input("n_max", cfg.n_max)
        .input("order", cfg.order)
        .tolerance(1e-6),
        Ok((
            json!({ "max_truncated_minus_certified": worst }),
            pass_if(worst <= 1e-6),
            None,
        )),
    );
    let const_ok = table.rows.iter().all(|r| {
        let f0 = h
            .basis_eval(r.n, &crate::disk::DiskPoint::new(C::new(0.0, 0.0)))
            .norm();
        f0 < 1.0 / r.n as f64
    });
    b.push(
        rec(format!("{prefix}.constant_term"), "|F_N(0)| < 1/N").input("n_max", cfg.n_max),
        Ok((json!(const_ok), pass_if(const_ok), None)),
    );
    let comp = compactness_from_table(table.clone(), harness.decay_threshold);
    b.push(
        rec(format!("{prefix}.decay"), "‖N^{-φ}‖ ≤ C ln N / N").input("n_max", cfg.n_max),
        Ok((
            json!({ "c_fit": comp.c_fit, "final_certified": comp.final_certified, "eventually_decreasing": comp.eventually_decreasing }),
            evidence_if(comp.c_fit.is_finite() && comp.eventually_decreasing && table.rows.len() >= 4),
            None,
        )),
    );
    b.push(
        rec(format!("{prefix}.decay_threshold"), "‖N^{-φ}‖ → 0")
            .input("n_max", cfg.n_max)
            .predicted(harness.decay_threshold),
        Ok((
            json!(comp.final_certified),
            evidence_if(comp.below_threshold),
            None,
        )),
    );
    let bd = boundedness_from_table(table.clone(), harness.growth_multiple);
    b.push(
        rec(format!("{prefix}.boundedness"), "sup_N ‖N^{-φ}‖ < ∞").input("n_max", cfg.n_max),
        if cfg.n_max < 4 {
            Err(Error::InvalidParameter(
                "boundedness needs N_max ≥ 4".into(),
            ))
        } else {
            Ok((
                json!({ "verdict": bd.verdict, "sup_certified": bd.sup_certified }),
                evidence_if(bd.verdict == Evidence::BoundedEvidence),
                None,
            ))
        },
    );
    let l2 = l2_from_table(table);
    b.push(
        rec(format!("{prefix}.l2_total"), "Σ_N ‖N^{-φ}‖² < ∞").input("n_max", cfg.n_max),
        l2.as_ref().map(|r| (json!({ "partial_sum": r.partial_sum, "tail_bound": r.tail_bound, "total": r.total }), pass_if(r.total.is_finite()), None)).map_err(Clone::clone),
    );
    b.push(
        rec(format!("{prefix}.l2_tail"), "Σ_N ‖N^{-φ}‖² < ∞")
            .input("n_max", cfg.n_max)
            .predicted(0.01),
        l2.map(|r| {
            (
                json!(r.tail_fraction),
                pass_if(r.tail_fraction < 0.01),
                None,
            )
        }),
    );
    b.tables.push((format!("{prefix}_norms"), table.clone()));
}

fn thm1_suite(
    b: &mut Builder,
    cfg: &SuiteConfig,
    norms: &NormConfig,
    harness: &HarnessConfig,
) -> Result<()> {
    let h = crate::symbols::build_thm1_symbol()?;
    let quad = QuadConfig::default();
    let c = sample_containment(&h, cfg.containment_samples, cfg.seed);
    b.push(
        rec("thm1.containment", "f(D) ⊆ {Re w > 1, |Im w| < π}")
            .input("samples", c.samples)
            .input("seed", cfg.seed),
        Ok((
            json!({ "outside": c.outside }),
            pass_if(c.outside == 0),
            None,
        )),
    );
    for n in [2u64, 3, 5, 10, 100] {
        let predicted = half_strip_arclength(n);
        b.push(
            rec(format!("thm1.arclength.{n}"), "∫|F_N'| = 2/N + 2π ln N / N")
                .input("N", n)
                .predicted(predicted)
                .tolerance(cfg.tol),
            image_arclength(&h, n, &quad)
                .map(|m| (json!(m), pass_if(rel_err(m, predicted) <= cfg.tol), None)),
        );
    }
    let ns: Vec<u64> = (2..=cfg.n_max).collect();
    let table = norm_table(&h, &ns, norms);
    table_checks(b, "thm1", &h, &table, cfg, harness);

    let f2 = basis_image(&h, 2, cfg.order, harness);
    b.push(
        rec("thm1.dual_route", "N^{-f} = exp(-f ln N)")
            .input("N", json!([2, 3, 5]))
            .input("compared", harness.compare_len.min(cfg.order + 1))
            .tolerance(harness.route_tol),
        (|| {
            let mut worst = f2.as_ref().map_err(Clone::clone)?.route_diff;
            for n in [3u64, 5] {
                worst = worst.max(
                    basis_image(&h, n, cfg.order.min(harness.compare_len), harness)?.route_diff,
                );
            }
            Ok((json!(worst), pass_if(worst <= harness.route_tol), None))
        })(),
    );
    let conv_tol = 1e-4;
    b.push(
        rec("thm1.aplus_stabilization", "N^{-f} ∈ A⁺")
            .input("N", 2)
            .input("order", cfg.order)
            .tolerance(conv_tol),
        f2.as_ref().map_err(Clone::clone).map(|bi| {
            let s = bi.aplus.stabilization;
            (
                json!({ "truncated": bi.aplus.truncated_norm, "stabilization": s }),
                if bi.aplus.converged(conv_tol) {
                    Verdict::Pass
                } else {
                    Verdict::Inconclusive
                },
                None,
            )
        }),
    );

    let schedule = dyadic_schedule(cfg.order);
    b.push(
        rec("thm1.f_divergence", "f ∉ H^∞ ⊇ A⁺")
            .input("order", cfg.order)
            .input("schedule", json!(schedule)),
        (|| {
            let f = h.series(cfg.order)?;
            let r = aplus_divergence_probe(&f, &schedule, 1e-3)?;
            Ok((
                json!({ "partial_sums": r.partial_sums, "log_slope": r.log_fit.slope }),
                evidence_if(r.no_convergence && r.log_fit.slope > 0.0),
                None,
            ))
        })(),
    );
    b.push(
        rec(
            "thm1.f2_below_certificate",
            "Σ|a_n| ≤ |F_N(0)| + π‖F_N'‖_{H¹}",
        )
        .input("N", 2)
        .input("order", cfg.order),
        (|| {
            let bi = f2.as_ref().map_err(Clone::clone)?;
            let cert = hardy_upper_bound(&h, 2, &quad)?.value;
            Ok((
                json!({ "truncated": bi.aplus.truncated_norm, "certified": cert }),
                pass_if(bi.aplus.truncated_norm <= cert + 1e-6),
                None,
            ))
        })(),
    );
    let ps = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
    b.push(
        rec("thm1.hp_growth", "‖f‖_p = O(p)").input("p", json!(ps)),
        hp_growth(|p| h.eval(p), &ps, &h.singular_anchors(), &quad).map(|g| {
            (
                json!({ "norms": g.norms.iter().map(|n| n.value).collect::<Vec<_>>(), "slope": g.fit.slope, "intercept": g.fit.intercept }),
                evidence_if(g.fit.slope > 0.0 && !g.superlinear),
                None,
            )
        }),
    );
    b.push(
        rec(
            "thm1.log_singularity",
            "f(e^{it}) = α log|i - e^{it}| + g(t), g ∈ L^∞",
        )
        .input("windows", "10^-2..10^-6"),
        log_singularity_fit(&h, Quarter::I, 2..=6, 64).map(|f| {
            (
                json!({ "alpha": f.alpha, "g_sup": f.g_sup }),
                Verdict::Evidence,
                None,
            )
        }),
    );
    Ok(())
}

fn thm2_suite(
    b: &mut Builder,
    cfg: &SuiteConfig,
    norms: &NormConfig,
    harness: &HarnessConfig,
) -> Result<()> {
    let h = crate::symbols::build_thm2_symbol(cfg.p)?;
    let beta = match *h.spec() {
        SymbolSpec::Thm2 { beta, .. } => beta,
        _ => unreachable!("sector symbol"),
    };
    let quad = QuadConfig::default();
    let c = sample_containment(&h, cfg.containment_samples, cfg.seed);
    b.push(
        rec("thm2.containment", "f(D) ⊆ {|arg w| < π/2p} ∩ {Re w > 1}")
            .input("p", cfg.p)
            .input("samples", c.samples)
            .input("seed", cfg.seed),
        Ok((
            json!({ "outside": c.outside }),
            pass_if(c.outside == 0),
            None,
        )),
    );
    for n in [2u64, 10] {
        let measured = image_arclength(&h, n, &quad);
        let stated = sector_arclength_stated(beta, n);
        b.push(
            rec(
                format!("thm2.arclength_stated.{n}"),
                "∫|F_N'| = (2/cos β)(1/N) + (tan β/π)(ln N/N)",
            )
            .input("N", n)
            .input("p", cfg.p)
            .predicted(stated)
            .tolerance(cfg.tol),
            measured
                .clone()
                .map(|m| (json!(m), pass_if(rel_err(m, stated) <= cfg.tol), None)),
        );
        let geometric = sector_arclength_geometric(beta, n);
        b.push(
            rec(format!("thm2.arclength_geometric.{n}"), "plumbing")
                .input("N", n)
                .input("p", cfg.p)
                .predicted(geometric)
                .tolerance(cfg.tol),
            measured.map(|m| (json!(m), pass_if(rel_err(m, geometric) <= cfg.tol), None)),
        );
    }
    let anchors = h.singular_anchors();
    let below = 0.95 * cfg.p;
    let above = 1.05 * cfg.p;
    b.push(
        rec("thm2.hp_below", "f ∈ H^q for q < p").input("q", below),
        Ok(match hp_norm(|p| h.eval(p), below, &anchors, &quad) {
            Ok(n) => (json!(n.value), Verdict::Evidence, None),
            Err(e) => (Value::Null, Verdict::Inconclusive, Some(e.to_string())),
        }),
    );
    b.push(
        rec("thm2.hp_above", "f ∉ H^p").input("q", above),
        Ok(match hp_norm(|p| h.eval(p), above, &anchors, &quad) {
            Ok(n) => (
                json!(n.value),
                Verdict::Inconclusive,
                Some("quadrature stabilised".into()),
            ),
            Err(Error::QuadratureDivergence(m)) => (Value::Null, Verdict::Evidence, Some(m)),
            Err(e) => (Value::Null, Verdict::Inconclusive, Some(e.to_string())),
        }),
    );
    let ns: Vec<u64> = (2..=cfg.n_max).collect();
    let table = norm_table(&h, &ns, norms);
    table_checks(b, "thm2", &h, &table, cfg, harness);
    Ok(())
}

fn counterexample_suite(b: &mut Builder, cfg: &SuiteConfig, harness: &HarnessConfig) -> Result<()> {
    let h = crate::symbols::build_counterexample_symbol(cfg.a)?;
    let probe = ProbeConfig::default();
    let c = sample_containment(&h, cfg.containment_samples, cfg.seed);
    b.push(
        rec("counterexample.containment", "φ(C₀) ⊆ C_A")
            .input("A", cfg.a)
            .input("samples", c.samples)
            .input("seed", cfg.seed),
        Ok((
            json!({ "outside": c.outside }),
            pass_if(c.outside == 0),
            None,
        )),
    );
    let limit_tol = 1e-5;
    b.push(
        rec("counterexample.radial_limit", "φ has a limit or Re φ → +∞")
            .input("a", 0.0)
            .input("A", cfg.a)
            .predicted(cfg.a + 1.0)
            .tolerance(limit_tol),
        limit_probe(&h, &PathSpec::radial(0.0), 256, &probe).map(|v| match v.kind {
            ProbeKind::Limit { re, im } => {
                let ok = (C::new(re, im) - C::new(cfg.a + 1.0, 0.0)).norm() <= limit_tol;
                (json!({ "re": re, "im": im }), evidence_if(ok), None)
            }
            k => (json!(k), Verdict::Inconclusive, None),
        }),
    );
    let modulus = (-2.0 / 2f64.ln()).exp();
    b.push(
        rec(
            "counterexample.parabolic_oscillation",
            "φ has no limit as s → 0",
        )
        .input("a", 0.0)
        .input("c", 1.0)
        .predicted(modulus)
        .tolerance(0.1),
        limit_probe(&h, &PathSpec::parabolic(0.0, 1.0), 256, &probe).map(|v| {
            let m = v.tail_modulus.unwrap_or(f64::NAN);
            let ok = v.kind == ProbeKind::Oscillation && rel_err(m, modulus) <= 0.1;
            (
                json!({ "kind": v.kind, "tail_modulus": m, "arg_range": v.tail_arg_range }),
                evidence_if(ok),
                None,
            )
        }),
    );
    let schedule = dyadic_schedule(cfg.order);
    b.push(
        rec("counterexample.non_convergence", "N^{-φ} ∉ 𝒜⁺").input("N", 2).input("schedule", json!(schedule)).tolerance(1e-3),
        (|| {
            let bi = basis_image(&h, 2, cfg.order, harness)?;
            let r = aplus_divergence_probe(&bi.series, &schedule, 1e-3)?;
            Ok((
                json!({ "partial_sums": r.partial_sums, "increments": r.increments, "route_diff": bi.route_diff, "certified": bi.certified }),
                evidence_if(r.no_convergence),
                None,
            ))
        })(),
    );
    Ok(())
}

fn bflq_suite(
    b: &mut Builder,
    cfg: &SuiteConfig,
    norms: &NormConfig,
    harness: &HarnessConfig,
) -> Result<()> {
    let h = crate::symbols::build_bflq_symbol(cfg.c1, cfg.cr, cfg.cr2, cfg.r)?;
    let exact = cfg.c1.norm() + cfg.cr + cfg.cr2;
    b.push(
        rec("bflq.symbol_norm", "‖φ‖_{𝒜⁺} = |c₁| + c_r + c_{r²}")
            .input("c1", json!([cfg.c1.re, cfg.c1.im]))
            .predicted(exact),
        h.series(2).map(|s| {
            let m = aplus_norm(&s, &[]).truncated_norm;
            (json!(m), pass_if(m == exact), None)
        }),
    );
    let ns: Vec<u64> = (2..=cfg.n_max).collect();
    let predicted_unbounded = cfg.c1.re < cfg.cr * cfg.cr / (8.0 * cfg.cr2);
    let mut tables = Vec::new();
    let outcome = (|| {
        if cfg.n_max < 4 {
            return Err(Error::InvalidParameter(
                "boundedness needs N_max ≥ 4".into(),
            ));
        }
        let table = norm_table(&h, &ns, norms)?;
        let r = boundedness_from_table(table.clone(), harness.growth_multiple);
        tables.push(("bflq_norms".to_string(), table));
        let matches = match r.verdict {
            Evidence::UnboundedEvidence => predicted_unbounded,
            Evidence::BoundedEvidence => !predicted_unbounded,
            Evidence::Inconclusive => false,
        };
        Ok((
            json!({ "verdict": r.verdict, "growth": r.growth }),
            evidence_if(matches),
            None,
        ))
    })();
    b.tables.append(&mut tables);
    b.push(
        rec(
            "bflq.boundedness",
            "C_φ unbounded if Re c₁ < c_r²/(8 c_{r²})",
        )
        .input("n_max", cfg.n_max)
        .input("predicted_unbounded", predicted_unbounded),
        outcome,
    );
    Ok(())
}

fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        b = b.num_threads(w);
    }
    b.build().map_err(|e| Error::Config(e.to_string()))
}

/// Runs the selected suite. Configuration errors abort before any
/// computation; per-check numerical errors become failed or inconclusive
/// records.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let pool = thread_pool(cfg.workers)?;
    let norms = NormConfig::with_order(cfg.order);
    let harness = HarnessConfig::default();
    let mut b = Builder {
        records: Vec::new(),
        tables: Vec::new(),
    };
    pool.install(|| -> Result<()> {
        let all = cfg.suite == Suite::All;
        if all || cfg.suite == Suite::Thm1 {
            thm1_suite(&mut b, cfg, &norms, &harness)?;
        }
        if all || cfg.suite == Suite::Thm2 {
            thm2_suite(&mut b, cfg, &norms, &harness)?;
        }
        if all || cfg.suite == Suite::Counterexample {
            counterexample_suite(&mut b, cfg, &harness)?;
        }
        if all || cfg.suite == Suite::Bflq {
            bflq_suite(&mut b, cfg, &norms, &harness)?;
        }
        Ok(())
    })?;
    let mut totals = Totals::default();
    for r in &b.records {
        match r.verdict {
            Verdict::Pass => totals.pass += 1,
            Verdict::Fail => totals.fail += 1,
            Verdict::Evidence => totals.evidence += 1,
            Verdict::Inconclusive => totals.inconclusive += 1,
        }
    }
    let report = VerificationReport {
        schema_version: SCHEMA_VERSION,
        suite: cfg.suite,
        environment: Environment {
            version: env!("CARGO_PKG_VERSION").into(),
            precision: "f64".into(),
            logarithm: "natural".into(),
            seed: cfg.seed,
        },
        records: b.records,
        totals,
        tables: b.tables,
    };
    if let Some(out) = &cfg.out {
        report.write_json(out)?;
    }
    if let Some(dir) = &cfg.csv_dir {
        report.write_csv(dir)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: Suite) -> SuiteConfig {
        SuiteConfig {
            suite,
            n_max: 8,
            order: 256,
            containment_samples: 1000,
            ..Default::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig {
            p: 1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SuiteConfig {
            a: -1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SuiteConfig {
            n_max: 1,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SuiteConfig {
            workers: Some(0),
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SuiteConfig::default().validate().is_ok());
        assert!("thm3".parse::<Suite>().is_err());
        assert_eq!("bflq".parse::<Suite>().unwrap(), Suite::Bflq);
    }

    #[test]
    fn exit_code_contract() {
        let mut r = run_suite(&small(Suite::Bflq)).unwrap();
        r.totals = Totals {
            pass: 1,
            ..Default::default()
        };
        assert_eq!(r.exit_code(), 0);
        r.totals.inconclusive = 1;
        assert_eq!(r.exit_code(), 2);
        r.totals.fail = 1;
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn report_is_deterministic_and_versioned() {
        let a = run_suite(&small(Suite::Counterexample))
            .unwrap()
            .to_json()
            .unwrap();
        let b = run_suite(&small(Suite::Counterexample))
            .unwrap()
            .to_json()
            .unwrap();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema_version"], json!(SCHEMA_VERSION));
        assert!(v["records"]
            .as_array()
            .unwrap()
            .iter()
            .all(|r| !r["anchor"].as_str().unwrap().is_empty()));
    }

    #[test]
    fn degenerate_half_strip_run_is_inconclusive() {
        let cfg = SuiteConfig {
            suite: Suite::Thm1,
            n_max: 2,
            order: 16,
            containment_samples: 1000,
            ..Default::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert!(r.totals.inconclusive > 0);
        assert_eq!(
            r.totals.fail,
            0,
            "{:#?}",
            r.records
                .iter()
                .filter(|r| r.verdict == Verdict::Fail)
                .collect::<Vec<_>>()
        );
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn csv_tables_written() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SuiteConfig {
            csv_dir: Some(dir.path().into()),
            ..small(Suite::Bflq)
        };
        run_suite(&cfg).unwrap();
        let t =
            NormTable::read_csv(std::fs::File::open(dir.path().join("bflq_norms.csv")).unwrap())
                .unwrap();
        assert_eq!(t.rows.len(), 7);
    }
}
