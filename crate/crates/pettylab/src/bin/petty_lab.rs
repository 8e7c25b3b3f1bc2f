//! Command-line driver for the verification suites.
//!
//! Exit codes: 0 all cases passed, 1 at least one case failed,
//! 2 configuration or runtime error. Worker threads are bounded only by
//! the RAYON_NUM_THREADS environment variable.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::Parser;

use pettylab::harness::{config_parse, report_write, run_suite, Suite, SuiteConfig, SUITES};

#[derive(Parser)]
#[command(
    name = "petty-lab",
    version,
    about = "Verification suites for mth-order Lp projection and centroid bodies",
    long_about = "Runs one named verification suite and writes a JSON report plus a CSV \
                  summary. Every field of the suite config has a default, so a bare suite \
                  name is a complete invocation. Reports are bit-identical across reruns \
                  with the same config and seed. Set RAYON_NUM_THREADS to bound the worker \
                  pool."
)]
struct Cli {
    /// Suite to run: petty_baseline, petty, duality, fixed_point,
    /// busemann_petty, steiner, projfind, opnorm, santalo, sobolev.
    suite: String,

    /// JSON config file; omitted fields take the suite defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory override for the JSON/CSV reports.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_config(cli: &Cli) -> pettylab::Result<SuiteConfig> {
    let suite = Suite::from_str(&cli.suite)?;
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                pettylab::Error::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            let cfg = config_parse(&text)?;
            if cfg.suite != suite {
                return Err(pettylab::Error::Config(format!(
                    "config is for suite '{}' but the command line asked for '{}'",
                    cfg.suite.name(),
                    suite.name()
                )));
            }
            cfg
        }
        None => SuiteConfig::defaults(suite),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            let _ = SUITES; // names are listed in the error message itself
            return ExitCode::from(2);
        }
    };
    let report = match run_suite(&cfg) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let failures = report.failures();
    println!(
        "suite {}: {} cases, {} failures, seed {}, {} ms",
        report.suite,
        report.cases.len(),
        failures.len(),
        report.master_seed,
        report.wall_ms
    );
    println!("  statement: {}", report.citation);
    for case in &failures {
        println!(
            "  FAIL {} lhs {} rhs {} margin {} (replay seed {})",
            case.case, case.lhs, case.rhs, case.margin, case.replay_seed
        );
    }
    let out_dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("petty-lab-out"));
    match report_write(&report, &out_dir) {
        Ok((json_path, csv_path)) => {
            println!("  report: {}", json_path.display());
            println!("  summary: {}", csv_path.display());
        }
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            return ExitCode::from(2);
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
