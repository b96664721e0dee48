#![forbid(unsafe_code)]

//! `verify`: runs the exact verification suites against a chosen target,
//! writes a signed JSON report with sidecar certificate bundles, and
//! re-checks previously written reports.
//!
//! Exit codes: 0 every requested suite passed; 1 at least one claim failed
//! (the report still records everything that ran); 2 configuration or I/O
//! problem.

use clap::{Args, Parser, Subcommand};
use kt_core::cert::bundle::{reduced_summary, Bundle, Payload};
use kt_core::cert::report::{BundleRef, ConfigEcho, Report, SuiteReport};
use kt_core::cert::reverify::reverify_report;
use kt_core::error::Error;
use kt_core::linalg::modular::{default_primes, is_prime_u64};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

/// Trial counts behind the fixed claims; sampling-sized suites take their
/// row counts from `--samples` instead.
const KILLING_TRIALS: usize = 100;
const OP2_ALGEBRA_TRIALS: usize = 30;
const OP2_KILLING_FORMS: usize = 20;
const FLOW_TRIALS: usize = 4;
const FLOW_GRID: usize = 40;
const OP2_MIN_SAMPLES: usize = 1500;

const HPN_SUITES: &[&str] = &["algebra", "killing", "lie", "kernel", "indecomposable"];
const OP2_SUITES: &[&str] = &["algebra", "killing", "indecomposable", "flow"];

#[derive(Parser)]
#[command(
    name = "verify",
    version,
    about = "Exact verification suites for quadratic Killing tensors on the quaternionic and octonionic projective spaces"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Quaternionic projective space of quaternionic dimension --n.
    Hpn(RunArgs),
    /// The octonionic projective plane.
    Op2(RunArgs),
    /// Re-check the exact certificates of a written report.
    Reverify {
        /// Report file produced by a previous run.
        #[arg(long, env = "VERIFY_REPORT")]
        report: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Quaternionic dimension (hpn only, at least 1).
    #[arg(long, env = "VERIFY_N")]
    n: Option<usize>,
    /// Comma-separated suites; defaults to every suite of the target.
    #[arg(long = "suite", env = "VERIFY_SUITE", value_delimiter = ',')]
    suite: Vec<String>,
    /// Sample rows for the evaluation-matrix suites.
    #[arg(long, default_value_t = 2000, env = "VERIFY_SAMPLES")]
    samples: usize,
    #[arg(long, default_value_t = 42, env = "VERIFY_SEED")]
    seed: u64,
    /// Comma-separated 62-bit primes for the modular layer.
    #[arg(long, env = "VERIFY_PRIMES", value_delimiter = ',')]
    primes: Vec<u64>,
    /// Advisory tolerance for the floating-point flow suite.
    #[arg(long, default_value_t = 1e-9, env = "VERIFY_TOL")]
    tol: f64,
    /// Report path; certificate bundles are written next to it.
    #[arg(long, env = "VERIFY_OUT")]
    out: PathBuf,
    /// Confirm configurations expected to run for hours (hpn --n 4).
    #[arg(long, default_value_t = false)]
    allow_long: bool,
    /// Worker threads for intra-suite parallelism (default 1).
    #[arg(long, env = "VERIFY_JOBS")]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Hpn(args) => run_target("hpn", args),
        Cmd::Op2(args) => run_target("op2", args),
        Cmd::Reverify { report } => reverify(&report),
    }
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn run_target(target: &str, args: RunArgs) -> ExitCode {
    let config = match validate(target, &args) {
        Ok(c) => c,
        Err(msg) => return config_error(msg),
    };
    let threads = args.jobs.unwrap_or(1);
    if rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .is_err()
    {
        return config_error("thread pool already configured");
    }
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        if let Err(e) = std::fs::create_dir_all(parent) {
            return config_error(format!("cannot create {}: {e}", parent.display()));
        }
    }

    let mut report = Report::new(config);
    for suite in report.config.suites.clone() {
        let started = Instant::now();
        let result = run_suite(target, &suite, &report.config, &args.out);
        let elapsed = started.elapsed().as_secs_f64();
        let entry = match result {
            Ok(entry) => entry,
            Err(Error::Io(e)) => return config_error(e),
            Err(e) => {
                eprintln!("suite {suite} failed: {e}");
                SuiteReport {
                    suite: suite.clone(),
                    status: "fail".into(),
                    summary: json!({ "error": e.to_string() }),
                    bundle: None,
                }
            }
        };
        println!(
            "{target}.{suite}: {} ({elapsed:.1}s)",
            entry.status.to_uppercase()
        );
        report.suites.push(entry);
        report.timing_seconds.insert(suite, elapsed);
    }

    if let Err(e) = report.seal().and_then(|()| report.write_atomic(&args.out)) {
        return config_error(e);
    }
    println!("report: {}", args.out.display());
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn validate(target: &str, args: &RunArgs) -> Result<ConfigEcho, String> {
    let known: &[&str] = if target == "hpn" { HPN_SUITES } else { OP2_SUITES };
    let n = match (target, args.n) {
        ("hpn", Some(n)) if n >= 1 => Some(n),
        ("hpn", Some(_)) => return Err("--n must be at least 1".into()),
        ("hpn", None) => return Err("hpn requires --n".into()),
        ("op2", Some(_)) => return Err("--n only applies to hpn".into()),
        _ => None,
    };

    let mut suites: Vec<String> = Vec::new();
    if args.suite.is_empty() {
        suites.extend(known.iter().map(|s| s.to_string()));
    } else {
        for s in &args.suite {
            if !known.contains(&s.as_str()) {
                return Err(format!(
                    "unknown suite {s:?} for {target}; available: {}",
                    known.join(",")
                ));
            }
        }
        // Dependency order is fixed: algebra first, kernel before
        // indecomposable. The requested set is run in canonical order.
        suites.extend(
            known
                .iter()
                .filter(|k| args.suite.iter().any(|s| s == *k))
                .map(|s| s.to_string()),
        );
    }

    let primes = if args.primes.is_empty() {
        default_primes().to_vec()
    } else {
        for &p in &args.primes {
            if p < (1 << 61) || p >= (1 << 62) || !is_prime_u64(p) {
                return Err(format!("{p} is not a 62-bit prime"));
            }
        }
        args.primes.clone()
    };

    if !(args.tol > 0.0) {
        return Err("--tol must be positive".into());
    }
    if target == "op2"
        && suites.iter().any(|s| s == "indecomposable")
        && args.samples < OP2_MIN_SAMPLES
    {
        return Err(format!(
            "op2 indecomposable needs at least {OP2_MIN_SAMPLES} samples"
        ));
    }
    if target == "hpn" && n.unwrap_or(0) >= 4 {
        let heavy = suites
            .iter()
            .any(|s| s == "kernel" || s == "indecomposable");
        if heavy && !args.allow_long {
            return Err(
                "hpn --n 4 matrix suites run for hours (roughly 10-20x the --n 3 run, \
                 dominated by witness reconstruction); pass --allow-long to confirm"
                    .into(),
            );
        }
        if heavy {
            println!(
                "long run confirmed: expect hours of witness reconstruction at --n {}",
                n.unwrap_or(0)
            );
        }
    }

    Ok(ConfigEcho {
        target: target.to_string(),
        n,
        suites,
        samples: args.samples,
        seed: args.seed,
        primes,
        tol: args.tol,
    })
}

fn run_suite(
    target: &str,
    suite: &str,
    config: &ConfigEcho,
    out: &Path,
) -> Result<SuiteReport, Error> {
    let payload = match (target, suite) {
        ("hpn", "algebra") => {
            let out = kt_core::hpn::suites::algebra_suite(config.n.unwrap())?;
            return Ok(plain(suite, serde_json::to_value(out)?));
        }
        ("hpn", "killing") => {
            let out =
                kt_core::hpn::suites::killing_suite(config.n.unwrap(), KILLING_TRIALS, config.seed)?;
            return Ok(plain(suite, serde_json::to_value(out)?));
        }
        ("hpn", "lie") => {
            let out = kt_core::hpn::suites::lie_suite(config.n.unwrap())?;
            return Ok(plain(suite, serde_json::to_value(out)?));
        }
        ("hpn", "kernel") => Payload::HpnKernel(kt_core::hpn::suites::phi_kernel_suite(
            config.n.unwrap(),
            config.samples,
            config.seed,
            &config.primes,
        )?),
        ("hpn", "indecomposable") => {
            Payload::HpnPairing(kt_core::hpn::suites::indecomposability_suite(
                config.n.unwrap(),
                config.samples,
                config.seed,
                &config.primes,
            )?)
        }
        ("op2", "algebra") => {
            let out = kt_core::op2::suites::algebra_suite_op2(OP2_ALGEBRA_TRIALS, config.seed)?;
            return Ok(plain(suite, serde_json::to_value(out)?));
        }
        ("op2", "killing") => {
            let out = kt_core::op2::suites::killing_suite_op2(OP2_KILLING_FORMS, config.seed)?;
            return Ok(plain(suite, serde_json::to_value(out)?));
        }
        ("op2", "flow") => {
            let out =
                kt_core::op2::flow::flow_suite(FLOW_TRIALS, FLOW_GRID, config.seed, config.tol)?;
            return Ok(plain(suite, serde_json::to_value(out)?));
        }
        ("op2", "indecomposable") => {
            Payload::Op2Pairing(kt_core::op2::suites::indecomposability_suite_op2(
                config.samples,
                config.seed,
                &config.primes,
            )?)
        }
        _ => return Err(Error::invalid(format!("no suite {suite} for {target}"))),
    };

    let bundle = Bundle::new(target, suite, payload);
    let name = bundle_name(out, suite);
    let sha256 = bundle.write_atomic(&out.with_file_name(&name))?;
    Ok(SuiteReport {
        suite: suite.to_string(),
        status: "pass".into(),
        summary: reduced_summary(&bundle.payload),
        bundle: Some(BundleRef { path: name, sha256 }),
    })
}

fn plain(suite: &str, summary: serde_json::Value) -> SuiteReport {
    SuiteReport {
        suite: suite.to_string(),
        status: "pass".into(),
        summary,
        bundle: None,
    }
}

fn bundle_name(out: &Path, suite: &str) -> String {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    format!("{stem}.{suite}.bundle.json")
}

fn reverify(path: &Path) -> ExitCode {
    let outcome = match reverify_report(path) {
        Ok(o) => o,
        Err(e) => return config_error(e),
    };
    let mut failed = 0usize;
    for check in &outcome.checks {
        if check.ok {
            continue;
        }
        failed += 1;
        println!("FAIL {} — {}", check.name, check.detail);
    }
    println!(
        "reverify: {} checks, {} failed ({})",
        outcome.checks.len(),
        failed,
        outcome.report
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
