//! CSV and JSON renderings of scans and verification reports.
//!
//! Every float is written with 17 significant digits so a round trip through
//! text reproduces the binary value.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::value::RawValue;

use dicke_core::verify::VerifyReport;
use dicke_core::{CorrelationCurve, CurveSummary};

use crate::config::{ScanConfig, VerifyRun};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Box<RawValue> {
    // JSON has no NaN or infinity literals.
    let text = if x.is_finite() { fmt_f64(x) } else { "null".to_owned() };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

fn raw_opt(x: Option<f64>) -> Box<RawValue> {
    x.map_or_else(|| RawValue::from_string("null".into()).unwrap(), raw)
}

/// Summary of a scan plus the largest relative deviation from the closed form
/// over the same grid.
pub struct ScanReport<'a> {
    pub config: &'a ScanConfig,
    pub curve: &'a CorrelationCurve,
    pub summary: &'a CurveSummary,
    pub max_dev_vs_closed: f64,
}

fn opt_text(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_owned(), fmt_f64)
}

pub fn scan_csv(r: &ScanReport<'_>) -> String {
    let c = r.config;
    let s = r.summary;
    let mut out = String::new();
    writeln!(out, "# {TOOL} {VERSION}").unwrap();
    writeln!(
        out,
        "# config: n_atoms={} order={} kd={} theta1={} theta2_min={} theta2_max={} theta2_steps={} method={} seed={}",
        c.n_atoms,
        c.order,
        fmt_f64(c.kd),
        fmt_f64(c.theta1),
        fmt_f64(c.theta2_min),
        fmt_f64(c.theta2_max),
        c.theta2_steps,
        c.method,
        c.seed
    )
    .unwrap();
    writeln!(
        out,
        "# summary: visibility={} peak_value={} peak_theta2={} first_zero_phase={} angular_mean={} max_rel_dev_vs_closed={}",
        fmt_f64(s.visibility),
        fmt_f64(s.peak_value),
        fmt_f64(r.curve.theta2_grid[s.peak_index]),
        opt_text(s.first_zero_phase),
        fmt_f64(s.angular_mean),
        fmt_f64(r.max_dev_vs_closed)
    )
    .unwrap();
    out.push_str("theta2_rad,phase_x,value,method\n");
    let method = r.curve.method.as_str();
    for ((t, x), v) in r
        .curve
        .theta2_grid
        .iter()
        .zip(&r.curve.phase_x)
        .zip(&r.curve.values)
    {
        writeln!(out, "{},{},{},{method}", fmt_f64(*t), fmt_f64(*x), fmt_f64(*v)).unwrap();
    }
    out
}

#[derive(Serialize)]
struct JsonScanConfig {
    n_atoms: usize,
    order: usize,
    kd: Box<RawValue>,
    theta1: Box<RawValue>,
    theta2_min: Box<RawValue>,
    theta2_max: Box<RawValue>,
    theta2_steps: usize,
    method: &'static str,
    seed: u64,
}

#[derive(Serialize)]
struct JsonSummary {
    visibility: Box<RawValue>,
    peak_value: Box<RawValue>,
    peak_theta2: Box<RawValue>,
    first_zero_phase: Box<RawValue>,
    angular_mean: Box<RawValue>,
    max_rel_dev_vs_closed: Box<RawValue>,
}

#[derive(Serialize)]
struct JsonPoint {
    theta2_rad: Box<RawValue>,
    phase_x: Box<RawValue>,
    value: Box<RawValue>,
}

#[derive(Serialize)]
struct JsonScan {
    tool: &'static str,
    version: &'static str,
    config: JsonScanConfig,
    summary: JsonSummary,
    points: Vec<JsonPoint>,
}

pub fn scan_json(r: &ScanReport<'_>) -> String {
    let c = r.config;
    let s = r.summary;
    let doc = JsonScan {
        tool: TOOL,
        version: VERSION,
        config: JsonScanConfig {
            n_atoms: c.n_atoms,
            order: c.order,
            kd: raw(c.kd),
            theta1: raw(c.theta1),
            theta2_min: raw(c.theta2_min),
            theta2_max: raw(c.theta2_max),
            theta2_steps: c.theta2_steps,
            method: c.method.as_str(),
            seed: c.seed,
        },
        summary: JsonSummary {
            visibility: raw(s.visibility),
            peak_value: raw(s.peak_value),
            peak_theta2: raw(r.curve.theta2_grid[s.peak_index]),
            first_zero_phase: raw_opt(s.first_zero_phase),
            angular_mean: raw(s.angular_mean),
            max_rel_dev_vs_closed: raw(r.max_dev_vs_closed),
        },
        points: r
            .curve
            .theta2_grid
            .iter()
            .zip(&r.curve.phase_x)
            .zip(&r.curve.values)
            .map(|((t, x), v)| JsonPoint {
                theta2_rad: raw(*t),
                phase_x: raw(*x),
                value: raw(*v),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("scan serializes");
    text.push('\n');
    text
}

pub fn verify_text(run: &VerifyRun, report: &VerifyReport) -> String {
    let mut out = String::new();
    writeln!(out, "# {TOOL} {VERSION}").unwrap();
    writeln!(
        out,
        "# verify: max_atoms={} kd={} seed={} samples={}{}",
        run.max_atoms,
        fmt_f64(run.kd),
        run.seed,
        run.samples,
        if run.inject_fault { " fault=flip-detector-sign" } else { "" }
    )
    .unwrap();
    for s in &report.suites {
        writeln!(
            out,
            "{:<16} {} checks={} max_deviation={:.3e} tolerance={:.0e} worst: {}",
            s.name,
            if s.passed() { "PASS" } else { "FAIL" },
            s.checks,
            s.max_deviation,
            s.tolerance,
            s.worst
        )
        .unwrap();
    }
    writeln!(
        out,
        "overall: {}",
        if report.passed() { "PASS" } else { "FAIL" }
    )
    .unwrap();
    out
}

#[derive(Serialize)]
struct JsonSuite<'a> {
    name: &'a str,
    passed: bool,
    checks: usize,
    max_deviation: Box<RawValue>,
    tolerance: Box<RawValue>,
    worst: &'a str,
}

#[derive(Serialize)]
struct JsonVerify<'a> {
    tool: &'static str,
    version: &'static str,
    max_atoms: usize,
    kd: Box<RawValue>,
    seed: u64,
    samples: usize,
    inject_fault: bool,
    passed: bool,
    suites: Vec<JsonSuite<'a>>,
}

pub fn verify_json(run: &VerifyRun, report: &VerifyReport) -> String {
    let doc = JsonVerify {
        tool: TOOL,
        version: VERSION,
        max_atoms: run.max_atoms,
        kd: raw(run.kd),
        seed: run.seed,
        samples: run.samples,
        inject_fault: run.inject_fault,
        passed: report.passed(),
        suites: report
            .suites
            .iter()
            .map(|s| JsonSuite {
                name: s.name,
                passed: s.passed(),
                checks: s.checks,
                max_deviation: raw(s.max_deviation),
                tolerance: raw(s.tolerance),
                worst: &s.worst,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}
