//! `dicke`: correlation scans and cross-method verification from the shell.
//!
//! Exit status: 0 on success, 1 when a verification suite fails, 2 for an
//! invalid configuration, 3 when the output cannot be written.

mod config;
mod output;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use dicke_core::verify::{rel_dev, run_verification, Fault, VerifyConfig};
use dicke_core::{scan_curve, summarize, EmitterGeometry, Method};

use config::{Args, Format, ScanConfig, VerifyRun};
use output::ScanReport;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: e.to_string(),
        }
    }
}

fn run_scan(cfg: &ScanConfig) -> Result<String, Failure> {
    let geometry = EmitterGeometry::new(cfg.n_atoms, cfg.kd).map_err(Failure::config)?;
    let grid = cfg.theta2_grid();
    let curve = scan_curve(&geometry, cfg.order, cfg.theta1, &grid, cfg.method)
        .map_err(Failure::config)?;
    let closed = if cfg.method == Method::Closed {
        curve.values.clone()
    } else {
        scan_curve(&geometry, cfg.order, cfg.theta1, &grid, Method::Closed)
            .map_err(Failure::config)?
            .values
    };
    let max_dev_vs_closed = curve
        .values
        .iter()
        .zip(&closed)
        .map(|(&a, &b)| rel_dev(a, b))
        .fold(0.0, f64::max);
    let summary = summarize(&curve);
    let report = ScanReport {
        config: cfg,
        curve: &curve,
        summary: &summary,
        max_dev_vs_closed,
    };
    Ok(match cfg.format {
        Format::Csv => output::scan_csv(&report),
        Format::Json => output::scan_json(&report),
    })
}

fn run_verify(run: &VerifyRun) -> Result<(String, bool), Failure> {
    let cfg = VerifyConfig {
        max_emitters: run.max_atoms,
        kd: run.kd,
        seed: run.seed,
        samples: run.samples,
        fault: run.inject_fault.then_some(Fault::FlipDetectorSign),
        ..VerifyConfig::default()
    };
    let report = run_verification(&cfg).map_err(Failure::config)?;
    let text = match run.format {
        Format::Csv => output::verify_text(run, &report),
        Format::Json => output::verify_json(run, &report),
    };
    Ok((text, report.passed()))
}

fn emit(args: &Args, text: &str) -> Result<(), Failure> {
    let result = match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| format!("stdout: {e}")),
    };
    result.map_err(|message| Failure {
        code: EXIT_IO,
        message,
    })
}

fn run(args: &Args) -> Result<(), Failure> {
    if args.verify {
        let run = args.verify_config().map_err(Failure::config)?;
        let (text, passed) = run_verify(&run)?;
        emit(args, &text)?;
        if !passed {
            return Err(Failure {
                code: EXIT_VERIFY_FAILED,
                message: "verification failed".into(),
            });
        }
        Ok(())
    } else {
        let cfg = args.scan_config().map_err(Failure::config)?;
        let text = run_scan(&cfg)?;
        emit(args, &text)
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dicke: error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
