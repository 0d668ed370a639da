//! Cross-route verification suites.
//!
//! Each suite evaluates the same physical quantity along independent routes
//! over seeded random detector configurations and reports the largest
//! relative deviation together with the configuration that produced it.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::correlations::{
    dicke_normalization, g_m_closed_coincident, g_m_exact, g_m_pathsum_with_budget,
    DEFAULT_PATH_BUDGET,
};
use crate::error::{Error, Result};
use crate::functional::{build_functional, extract_gm};
use crate::geometry::{DetectorList, EmitterGeometry, MAX_EXACT_EMITTERS};
use crate::projection::{cascade_subtract, verify_factorization};
use crate::state::StateVector;

/// Scale below which relative deviations fall back to an absolute floor:
/// `rel_dev <= 1e-9` then means `|a - b| <= 1e-12`.
const SCALE_FLOOR: f64 = 1e-3;

/// `|a - b| / max(|a|, |b|, 1e-3)`.
pub fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(SCALE_FLOOR)
}

pub const CROSS_METHOD_TOLERANCE: f64 = 1e-9;
pub const FIDELITY_TOLERANCE: f64 = 1e-12;

/// Deliberate corruption of the exact-engine route, used to check that the
/// harness actually detects disagreement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negate the angle of the last detector before the exact engine sees it.
    FlipDetectorSign,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub max_emitters: usize,
    pub kd: f64,
    pub seed: u64,
    /// Random detector tuples per `(N, m)` pair.
    pub samples: usize,
    /// Points of the uniform phase grid over `[0, 2 pi]`.
    pub grid_points: usize,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_emitters: 8,
            kd: 2.0 * PI,
            seed: 0,
            samples: 100,
            grid_points: 181,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub tolerance: f64,
    pub max_deviation: f64,
    /// Where the largest deviation occurred.
    pub worst: String,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

#[derive(Debug, Clone, Default)]
struct Worst {
    checks: usize,
    deviation: f64,
    location: String,
}

impl Worst {
    fn record(&mut self, deviation: f64, location: impl FnOnce() -> String) {
        self.checks += 1;
        // NaN must never hide
        if deviation > self.deviation || (deviation.is_nan() && !self.deviation.is_nan()) {
            self.deviation = deviation;
            self.location = location();
        }
    }

    fn merge(mut self, other: Worst) -> Worst {
        self.checks += other.checks;
        if other.deviation > self.deviation || (other.deviation.is_nan() && !self.deviation.is_nan())
        {
            self.deviation = other.deviation;
            self.location = other.location;
        }
        self
    }

    fn into_report(self, name: &'static str, tolerance: f64) -> SuiteReport {
        SuiteReport {
            name,
            checks: self.checks,
            tolerance,
            max_deviation: self.deviation,
            worst: self.location,
        }
    }
}

fn rng_for(seed: u64, suite: u64, n: usize, m: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite << 32) | ((n as u64) << 16) | m as u64);
    rng
}

fn random_angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-FRAC_PI_2..=FRAC_PI_2)
}

fn exact_route(
    geometry: &EmitterGeometry,
    detectors: &DetectorList,
    state: &StateVector,
    fault: Option<Fault>,
) -> Result<f64> {
    match fault {
        None => g_m_exact(geometry, detectors, state),
        Some(Fault::FlipDetectorSign) => {
            let mut angles = detectors.angles().to_vec();
            if let Some(last) = angles.last_mut() {
                *last = -*last;
            }
            g_m_exact(geometry, &DetectorList::new(angles)?, state)
        }
    }
}

fn fmt_angles(angles: &[f64]) -> String {
    let parts: Vec<String> = angles.iter().map(|a| format!("{a:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn pairs(lo: usize, hi: usize) -> Vec<(usize, usize)> {
    (lo..=hi)
        .flat_map(|n| (1..=n).map(move |m| (n, m)))
        .collect()
}

fn run_pairs<F>(lo: usize, hi: usize, f: F) -> Result<Worst>
where
    F: Fn(usize, usize) -> Result<Worst> + Sync,
{
    let results: Vec<Worst> = pairs(lo, hi)
        .par_iter()
        .map(|&(n, m)| f(n, m))
        .collect::<Result<_>>()?;
    Ok(results.into_iter().fold(Worst::default(), Worst::merge))
}

/// Exact engine against the path-sum oracle at random detector tuples.
pub fn cross_method_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let worst = run_pairs(2, cfg.max_emitters, |n, m| {
        let g = EmitterGeometry::new(n, cfg.kd)?;
        let phi = StateVector::fully_excited(n)?;
        let mut rng = rng_for(cfg.seed, 1, n, m);
        let mut w = Worst::default();
        for _ in 0..cfg.samples {
            let angles: Vec<f64> = (0..m).map(|_| random_angle(&mut rng)).collect();
            let d = DetectorList::new(angles)?;
            let e = exact_route(&g, &d, &phi, cfg.fault)?;
            let p = g_m_pathsum_with_budget(&g, &d, DEFAULT_PATH_BUDGET)?;
            w.record(rel_dev(e, p), || {
                format!("N={n} m={m} angles={}", fmt_angles(d.angles()))
            });
        }
        Ok(w)
    })?;
    Ok(worst.into_report("cross-method", CROSS_METHOD_TOLERANCE))
}

/// Coincident detectors: exact engine, closed form and functional
/// extraction over a uniform phase grid and at random angle pairs.
pub fn closed_form_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let worst = run_pairs(2, cfg.max_emitters, |n, m| {
        let phi = StateVector::fully_excited(n)?;
        let mut w = Worst::default();
        let mut check = |g: &EmitterGeometry, t1: f64, t2: f64| -> Result<()> {
            let d = DetectorList::coincident(m, t1, t2)?;
            let x = g.detector_phase_difference(t1, t2);
            let e = exact_route(g, &d, &phi, cfg.fault)?;
            let c = g_m_closed_coincident(n, m, x)?;
            let f = extract_gm(&build_functional(g, &[t1, t2])?, &[m - 1, 1])?;
            let dev = rel_dev(e, c).max(rel_dev(e, f)).max(rel_dev(c, f));
            w.record(dev, || {
                format!("N={n} m={m} kd={} theta1={t1:.6} theta2={t2:.6} x={x:.6}", g.kd())
            });
            Ok(())
        };

        // theta1 = pi/2 with kd = 2 pi reaches every x in [0, 2 pi]
        let grid_geometry = EmitterGeometry::new(n, 2.0 * PI)?;
        for k in 0..cfg.grid_points {
            let x = 2.0 * PI * k as f64 / (cfg.grid_points.max(2) - 1) as f64;
            let t2 = grid_geometry.theta_for_phase_difference(FRAC_PI_2, x)?;
            check(&grid_geometry, FRAC_PI_2, t2)?;
        }

        let g = EmitterGeometry::new(n, cfg.kd)?;
        let mut rng = rng_for(cfg.seed, 2, n, m);
        for _ in 0..cfg.samples {
            let (t1, t2) = (random_angle(&mut rng), random_angle(&mut rng));
            check(&g, t1, t2)?;
        }
        Ok(w)
    })?;
    Ok(worst.into_report("closed-form", CROSS_METHOD_TOLERANCE))
}

/// Conditional-projection factorization of `G^(m)` at random angles, plus the
/// Dicke-state route at `theta1 = 0`.
pub fn factorization_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let worst = run_pairs(2, cfg.max_emitters, |n, m| {
        let g = EmitterGeometry::new(n, cfg.kd)?;
        let mut rng = rng_for(cfg.seed, 3, n, m);
        let mut w = Worst::default();
        for i in 0..cfg.samples {
            let t1 = if i % 2 == 0 { 0.0 } else { random_angle(&mut rng) };
            let t2 = random_angle(&mut rng);
            let report = match verify_factorization(&g, m, t1, t2) {
                Ok(r) => r,
                // a subradiant zero on the way down the cascade; nothing to compare
                Err(Error::ImpossibleDetection { .. }) => continue,
                Err(e) => return Err(e),
            };
            w.record(report.max_deviation, || {
                format!("N={n} m={m} theta1={t1:.6} theta2={t2:.6}")
            });
        }
        Ok(w)
    })?;
    Ok(worst.into_report("factorization", CROSS_METHOD_TOLERANCE))
}

/// Cascaded subtraction at `theta1 = 0`: fidelity deficit against the
/// symmetric Dicke state and relative error of the cumulative weight.
pub fn dicke_preparation_suites(cfg: &VerifyConfig) -> Result<(SuiteReport, SuiteReport)> {
    let results: Vec<(Worst, Worst)> = pairs(1, cfg.max_emitters)
        .par_iter()
        .map(|&(n, m)| -> Result<(Worst, Worst)> {
            let g = EmitterGeometry::new(n, cfg.kd)?;
            let phi = StateVector::fully_excited(n)?;
            let r = cascade_subtract(&g, 0.0, m - 1, &phi)?;
            let target = StateVector::dicke_state(n, m - 1)?;
            let mut fid = Worst::default();
            fid.record(1.0 - r.projected_state.fidelity(&target)?, || {
                format!("N={n} m={m}")
            });
            let mut weight = Worst::default();
            weight.record(rel_dev(r.weight, dicke_normalization(n, m)?), || {
                format!("N={n} m={m}")
            });
            Ok((fid, weight))
        })
        .collect::<Result<_>>()?;
    let (fid, weight) = results.into_iter().fold(
        (Worst::default(), Worst::default()),
        |(a, b), (c, d)| (a.merge(c), b.merge(d)),
    );
    Ok((
        fid.into_report("dicke-fidelity", FIDELITY_TOLERANCE),
        weight.into_report("dicke-weight", CROSS_METHOD_TOLERANCE),
    ))
}

fn multiplicity_patterns(k: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; k];
    fn rec(pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == cur.len() {
            if cur.iter().sum::<usize>() > 0 {
                out.push(cur.clone());
            }
            return;
        }
        for a in 0..=left {
            cur[pos] = a;
            rec(pos + 1, left - a, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, max_total, &mut cur, &mut out);
    out
}

/// Functional extraction against the exact engine for every multiplicity
/// pattern over up to three distinct angles.
pub fn functional_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let per_n: Vec<Worst> = (2..=cfg.max_emitters)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| -> Result<Worst> {
            let g = EmitterGeometry::new(n, cfg.kd)?;
            let phi = StateVector::fully_excited(n)?;
            let mut rng = rng_for(cfg.seed, 4, n, 0);
            let mut w = Worst::default();
            let sets = (cfg.samples / 10).max(3);
            for s in 0..sets {
                let k = 1 + s % 3;
                let angles: Vec<f64> = (0..k).map(|_| random_angle(&mut rng)).collect();
                let poly = build_functional(&g, &angles)?;
                for mult in multiplicity_patterns(k, n) {
                    let dets: Vec<f64> = mult
                        .iter()
                        .zip(&angles)
                        .flat_map(|(&a, &t)| std::iter::repeat(t).take(a))
                        .collect();
                    let d = DetectorList::new(dets)?;
                    let e = exact_route(&g, &d, &phi, cfg.fault)?;
                    let v = extract_gm(&poly, &mult)?;
                    w.record(rel_dev(e, v), || {
                        format!(
                            "N={n} angles={} multiplicities={mult:?}",
                            fmt_angles(&angles)
                        )
                    });
                }
            }
            Ok(w)
        })
        .collect::<Result<_>>()?;
    let worst = per_n.into_iter().fold(Worst::default(), Worst::merge);
    Ok(worst.into_report("functional", CROSS_METHOD_TOLERANCE))
}

/// Runs every suite.
pub fn run_verification(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.max_emitters < 2 {
        return Err(Error::Unsupported(
            "verification needs at least two emitters".into(),
        ));
    }
    if cfg.max_emitters > MAX_EXACT_EMITTERS {
        return Err(Error::TooManyEmitters {
            n: cfg.max_emitters,
            cap: MAX_EXACT_EMITTERS,
        });
    }
    if !(cfg.kd.is_finite() && cfg.kd > 0.0) {
        return Err(Error::InvalidSpacing(cfg.kd));
    }
    if cfg.grid_points < 2 {
        return Err(Error::InvalidGrid("needs at least two points"));
    }
    let (fidelity, weight) = dicke_preparation_suites(cfg)?;
    Ok(VerifyReport {
        suites: vec![
            cross_method_suite(cfg)?,
            closed_form_suite(cfg)?,
            factorization_suite(cfg)?,
            fidelity,
            weight,
            functional_suite(cfg)?,
        ],
    })
}
