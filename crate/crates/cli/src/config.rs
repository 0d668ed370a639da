//! Command-line flags and their validated form.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use dicke_core::{Method, MAX_EXACT_EMITTERS};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("--theta2-steps must be at least 2, got {0}")]
    TooFewSteps(usize),
    #[error("--theta2-max ({max}) must exceed --theta2-min ({min})")]
    EmptyRange { min: f64, max: f64 },
    #[error("--{flag} must be finite, got {value}")]
    NonFinite { flag: &'static str, value: f64 },
    #[error("--n-atoms must be at least {min}, got {got}")]
    TooFewAtoms { min: usize, got: usize },
    #[error("--n-atoms {got} exceeds the exact-engine cap of {cap}")]
    TooManyAtoms { got: usize, cap: usize },
    #[error("--order must lie in 1..={n}, got {got}")]
    Order { n: usize, got: usize },
    #[error("--kd must be positive, got {0}")]
    Spacing(f64),
    #[error("--samples must be at least 1")]
    NoSamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Pathsum,
    Closed,
    Functional,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Exact => Method::Exact,
            MethodArg::Pathsum => Method::PathSum,
            MethodArg::Closed => Method::Closed,
            MethodArg::Functional => Method::Functional,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Scan m-th order photon correlations of N fully excited emitters, or run
/// the cross-method verification suites.
#[derive(Debug, Parser)]
#[command(name = "dicke", version, about)]
pub struct Args {
    /// Number of emitters (scan default 2; with --verify, the largest N checked, default 8)
    #[arg(long = "n-atoms")]
    pub n_atoms: Option<usize>,

    /// Correlation order m: m-1 detectors at theta1, one scanned at theta2
    #[arg(long, default_value_t = 2)]
    pub order: usize,

    /// Spacing parameter kd = 2 pi d / lambda
    #[arg(long, default_value_t = 2.0 * PI)]
    pub kd: f64,

    /// Angle of the m-1 coincident detectors (rad)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta1: f64,

    #[arg(long = "theta2-min", default_value_t = -FRAC_PI_2, allow_negative_numbers = true)]
    pub theta2_min: f64,

    #[arg(long = "theta2-max", default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
    pub theta2_max: f64,

    #[arg(long = "theta2-steps", default_value_t = 181)]
    pub theta2_steps: usize,

    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Run the verification suites instead of a scan
    #[arg(long)]
    pub verify: bool,

    /// Seed for the random detector angles of --verify
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Random detector tuples per (N, m) pair in --verify
    #[arg(long, default_value_t = 100)]
    pub samples: usize,

    /// Corrupt the exact-engine route to self-test the verification harness
    #[arg(long = "inject-fault", hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub n_atoms: usize,
    pub order: usize,
    pub kd: f64,
    pub theta1: f64,
    pub theta2_min: f64,
    pub theta2_max: f64,
    pub theta2_steps: usize,
    pub method: Method,
    pub format: Format,
    pub seed: u64,
}

impl ScanConfig {
    pub fn theta2_grid(&self) -> Vec<f64> {
        let span = self.theta2_max - self.theta2_min;
        let last = (self.theta2_steps - 1) as f64;
        (0..self.theta2_steps)
            .map(|k| {
                if k + 1 == self.theta2_steps {
                    self.theta2_max
                } else {
                    self.theta2_min + span * k as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRun {
    pub max_atoms: usize,
    pub kd: f64,
    pub seed: u64,
    pub samples: usize,
    pub format: Format,
    pub inject_fault: bool,
}

fn finite(flag: &'static str, value: f64) -> Result<f64, ConfigError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ConfigError::NonFinite { flag, value })
    }
}

fn spacing(kd: f64) -> Result<f64, ConfigError> {
    let kd = finite("kd", kd)?;
    if kd <= 0.0 {
        return Err(ConfigError::Spacing(kd));
    }
    Ok(kd)
}

impl Args {
    pub fn scan_config(&self) -> Result<ScanConfig, ConfigError> {
        let n_atoms = self.n_atoms.unwrap_or(2);
        if n_atoms == 0 {
            return Err(ConfigError::TooFewAtoms { min: 1, got: 0 });
        }
        if self.order == 0 || self.order > n_atoms {
            return Err(ConfigError::Order {
                n: n_atoms,
                got: self.order,
            });
        }
        if self.theta2_steps < 2 {
            return Err(ConfigError::TooFewSteps(self.theta2_steps));
        }
        let theta2_min = finite("theta2-min", self.theta2_min)?;
        let theta2_max = finite("theta2-max", self.theta2_max)?;
        if theta2_max <= theta2_min {
            return Err(ConfigError::EmptyRange {
                min: theta2_min,
                max: theta2_max,
            });
        }
        Ok(ScanConfig {
            n_atoms,
            order: self.order,
            kd: spacing(self.kd)?,
            theta1: finite("theta1", self.theta1)?,
            theta2_min,
            theta2_max,
            theta2_steps: self.theta2_steps,
            method: self.method.into(),
            format: self.format,
            seed: self.seed,
        })
    }

    pub fn verify_config(&self) -> Result<VerifyRun, ConfigError> {
        let max_atoms = self.n_atoms.unwrap_or(8);
        if max_atoms < 2 {
            return Err(ConfigError::TooFewAtoms {
                min: 2,
                got: max_atoms,
            });
        }
        if max_atoms > MAX_EXACT_EMITTERS {
            return Err(ConfigError::TooManyAtoms {
                got: max_atoms,
                cap: MAX_EXACT_EMITTERS,
            });
        }
        if self.samples == 0 {
            return Err(ConfigError::NoSamples);
        }
        Ok(VerifyRun {
            max_atoms,
            kd: spacing(self.kd)?,
            seed: self.seed,
            samples: self.samples,
            format: self.format,
            inject_fault: self.inject_fault,
        })
    }
}
