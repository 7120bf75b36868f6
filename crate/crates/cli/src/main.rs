use anyhow::{Context, Result};
use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;
use wiener_core::report::{run_suite, Suite, SuiteConfig, Verdict};
use wiener_core::Complex64;

/// Run numerical verification suites for composition operators on the
/// Wiener algebra of Dirichlet series.
///
/// Exit status: 0 when no check fails, 1 when any check fails, 2 when
/// none fail but some are inconclusive.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Args {
    /// One of thm1, thm2, counterexample, bflq, all.
    suite: Suite,
    /// Sector parameter p > 1 (opening π/2p).
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Shift A ≥ 0 of the counterexample symbol.
    #[arg(long = "A", default_value_t = 0.0)]
    a: f64,
    /// Constant coefficient c₁ of the polynomial symbol, as `re` or `re,im`.
    #[arg(long, default_value = "0", value_parser = parse_complex)]
    c1: Complex64,
    #[arg(long, default_value_t = 4.0)]
    cr: f64,
    #[arg(long, default_value_t = 1.0)]
    cr2: f64,
    #[arg(long, default_value_t = 2)]
    r: u64,
    #[arg(long, default_value_t = 64)]
    nmax: u64,
    /// Truncation order M of the coefficient computations.
    #[arg(long, default_value_t = 65536)]
    order: usize,
    /// Relative tolerance for closed-form comparisons.
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write norm tables as CSV into this directory.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => Ok(Complex64::new(parse(s)?, 0.0)),
    }
}

fn run(args: Args) -> Result<i32> {
    let cfg = SuiteConfig {
        suite: args.suite,
        p: args.p,
        a: args.a,
        c1: args.c1,
        cr: args.cr,
        cr2: args.cr2,
        r: args.r,
        n_max: args.nmax,
        order: args.order,
        tol: args.tol,
        workers: args.workers,
        seed: args.seed,
        out: args.out,
        csv_dir: args.csv,
        ..Default::default()
    };
    let report = run_suite(&cfg).context("suite did not run")?;
    for r in &report.records {
        let tag = match r.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Evidence => "EVIDENCE",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        println!("{tag:<13} {:<40} {}", r.id, r.measured);
        if let Some(d) = &r.detail {
            println!("{:<13} {:<40} {d}", "", "");
        }
    }
    let t = &report.totals;
    println!(
        "totals: {} pass, {} fail, {} evidence, {} inconclusive",
        t.pass, t.fail, t.evidence, t.inconclusive
    );
    if cfg.out.is_none() {
        eprintln!("(no --out given; JSON report not written)");
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
