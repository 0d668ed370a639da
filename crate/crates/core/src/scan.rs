//! Angular scans of the coincident-detector correlation and their summary
//! statistics.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::correlations::{
    g_m_closed_coincident, g_m_exact, g_m_pathsum_with_budget, path_count, DEFAULT_PATH_BUDGET,
};
use crate::error::{Error, Result};
use crate::functional::{build_functional_truncated, extract_gm};
use crate::geometry::{DetectorList, EmitterGeometry};
use crate::state::StateVector;

/// Values this far below zero are rounding residue and are shown as 0.
pub const NEGATIVE_RESIDUE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    PathSum,
    Closed,
    Functional,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Exact,
        Method::PathSum,
        Method::Closed,
        Method::Functional,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::PathSum => "pathsum",
            Method::Closed => "closed",
            Method::Functional => "functional",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown method {s:?}")))
    }
}

/// `G^(m)(theta1 x (m-1), theta2)` sampled over a `theta2` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationCurve {
    pub theta2_grid: Vec<f64>,
    /// Detector phase difference `phi(1, theta1) - phi(1, theta2)` per point.
    pub phase_x: Vec<f64>,
    pub values: Vec<f64>,
    pub method: Method,
    pub n_emitters: usize,
    pub order_m: usize,
    pub theta1: f64,
    pub kd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSummary {
    pub visibility: f64,
    pub peak_value: f64,
    pub peak_index: usize,
    /// Phase distance from the peak to the nearest interior minimum, if the
    /// scan contains one.
    pub first_zero_phase: Option<f64>,
    /// Trapezoidal mean of the curve over the scanned phase range.
    pub angular_mean: f64,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("is empty"));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("contains non-finite angles"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("is not strictly increasing"));
    }
    Ok(())
}

/// Evaluates `G^(m)` at every grid angle with the chosen `method`. Points
/// are independent and computed in parallel; output order follows the grid.
pub fn scan_curve(
    geometry: &EmitterGeometry,
    m: usize,
    theta1: f64,
    theta2_grid: &[f64],
    method: Method,
) -> Result<CorrelationCurve> {
    check_grid(theta2_grid)?;
    let n = geometry.n_emitters();
    if m == 0 || m > n {
        return Err(Error::OrderOutOfRange { m, n });
    }
    if !theta1.is_finite() {
        return Err(Error::NonFiniteAngle(theta1));
    }
    if method == Method::PathSum {
        let paths = path_count(n, m);
        if paths > DEFAULT_PATH_BUDGET {
            return Err(Error::PathBudgetExceeded {
                paths,
                budget: DEFAULT_PATH_BUDGET,
            });
        }
    }
    let initial = match method {
        Method::Exact => Some(StateVector::fully_excited(n)?),
        _ => None,
    };

    let raw: Vec<f64> = theta2_grid
        .par_iter()
        .map(|&theta2| -> Result<f64> {
            match method {
                Method::Exact => {
                    let d = DetectorList::coincident(m, theta1, theta2)?;
                    g_m_exact(geometry, &d, initial.as_ref().expect("initial state"))
                }
                Method::PathSum => {
                    let d = DetectorList::coincident(m, theta1, theta2)?;
                    g_m_pathsum_with_budget(geometry, &d, DEFAULT_PATH_BUDGET)
                }
                Method::Closed => {
                    let x = geometry.detector_phase_difference(theta1, theta2);
                    g_m_closed_coincident(n, m, x)
                }
                Method::Functional => {
                    let poly = build_functional_truncated(geometry, &[theta1, theta2], m)?;
                    extract_gm(&poly, &[m - 1, 1])
                }
            }
        })
        .collect::<Result<_>>()?;

    let values = raw
        .into_iter()
        .map(|v| if (-NEGATIVE_RESIDUE..0.0).contains(&v) { 0.0 } else { v })
        .collect();
    let phase_x = theta2_grid
        .iter()
        .map(|&t2| geometry.detector_phase_difference(theta1, t2))
        .collect();

    Ok(CorrelationCurve {
        theta2_grid: theta2_grid.to_vec(),
        phase_x,
        values,
        method,
        n_emitters: n,
        order_m: m,
        theta1,
        kd: geometry.kd(),
    })
}

/// Walks away from `peak` in direction `step` while the curve does not rise
/// and returns the index where it turns up again, if that happens inside
/// the grid after a genuine drop.
fn descend(values: &[f64], peak: usize, step: isize) -> Option<usize> {
    let len = values.len() as isize;
    let mut j = peak as isize;
    while j + step >= 0 && j + step < len && values[(j + step) as usize] <= values[j as usize] {
        j += step;
    }
    let next = j + step;
    let interior = next >= 0 && next < len;
    (interior && values[j as usize] < values[peak]).then_some(j as usize)
}

pub fn summarize(curve: &CorrelationCurve) -> CurveSummary {
    let v = &curve.values;
    let x = &curve.phase_x;

    let (peak_index, peak_value) = v
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, val)| {
            if val > bv {
                (i, val)
            } else {
                (bi, bv)
            }
        });
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let visibility = if peak_value + min > 0.0 {
        (peak_value - min) / (peak_value + min)
    } else {
        0.0
    };

    let first_zero_phase = [descend(v, peak_index, 1), descend(v, peak_index, -1)]
        .into_iter()
        .flatten()
        .map(|j| (x[j] - x[peak_index]).abs())
        .reduce(f64::min);

    let mut span = 0.0;
    let mut area = 0.0;
    for i in 1..v.len() {
        let dx = (x[i] - x[i - 1]).abs();
        span += dx;
        area += 0.5 * (v[i] + v[i - 1]) * dx;
    }
    let angular_mean = if span > 0.0 {
        area / span
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    };

    CurveSummary {
        visibility,
        peak_value,
        peak_index,
        first_zero_phase,
        angular_mean,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::{angular_average_gm, visibility_formula};
    use std::f64::consts::PI;

    fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
        (0..steps)
            .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
            .collect()
    }

    #[test]
    fn method_names_roundtrip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("ryser".parse::<Method>().is_err());
    }

    #[test]
    fn closed_matches_exact_on_grid() {
        let g = EmitterGeometry::new(6, 2.0 * PI).unwrap();
        let grid = grid(-1.2, 1.3, 121);
        for m in 1..=6 {
            let a = scan_curve(&g, m, 0.25, &grid, Method::Closed).unwrap();
            let b = scan_curve(&g, m, 0.25, &grid, Method::Exact).unwrap();
            for (p, q) in a.values.iter().zip(&b.values) {
                assert!((p - q).abs() / p.abs().max(q.abs()).max(1e-3) <= 1e-9);
            }
        }
    }

    #[test]
    fn all_methods_agree() {
        let g = EmitterGeometry::new(4, 3.0).unwrap();
        let grid = grid(-0.9, 0.9, 31);
        let curves: Vec<_> = Method::ALL
            .iter()
            .map(|&method| scan_curve(&g, 3, -0.2, &grid, method).unwrap())
            .collect();
        for c in &curves[1..] {
            for (p, q) in c.values.iter().zip(&curves[0].values) {
                assert!((p - q).abs() / q.abs().max(1e-3) <= 1e-9);
            }
        }
    }

    #[test]
    fn symmetric_when_theta1_is_zero() {
        let g = EmitterGeometry::new(5, 2.0 * PI).unwrap();
        let grid = grid(-1.0, 1.0, 101);
        let c = scan_curve(&g, 4, 0.0, &grid, Method::Exact).unwrap();
        for i in 0..grid.len() {
            let j = grid.len() - 1 - i;
            let (a, b) = (c.values[i], c.values[j]);
            assert!((a - b).abs() <= 1e-9 * a.max(b).max(1.0));
        }
    }

    #[test]
    fn constant_curve_has_no_visibility() {
        let g = EmitterGeometry::new(5, 1.0).unwrap();
        let c = scan_curve(&g, 1, 0.0, &grid(-1.0, 1.0, 50), Method::Closed).unwrap();
        let s = summarize(&c);
        assert_eq!(s.visibility, 0.0);
        assert_eq!(s.peak_index, 0);
        assert_eq!(s.first_zero_phase, None);
        assert!((s.angular_mean - 5.0).abs() < 1e-12);
    }

    #[test]
    fn full_visibility_at_m_equals_n() {
        // theta2 = asin(1 - x / 2 pi) makes the x grid uniform over [0, 2 pi]
        let g = EmitterGeometry::new(6, 2.0 * PI).unwrap();
        let xs: Vec<f64> = (0..=720).rev().map(|k| 2.0 * PI * k as f64 / 720.0).collect();
        let thetas: Vec<f64> = xs.iter().map(|x| (1.0 - x / (2.0 * PI)).asin()).collect();
        let c = scan_curve(&g, 6, PI / 2.0, &thetas, Method::Closed).unwrap();
        let s = summarize(&c);
        assert!((s.visibility - 1.0).abs() < 1e-9);
        assert!((s.visibility - visibility_formula(6, 6).unwrap()).abs() < 1e-9);
        assert!((s.first_zero_phase.unwrap() - 2.0 * PI / 6.0).abs() < 2.0 * PI / 720.0);
        let avg = angular_average_gm(6, 6).unwrap();
        assert!((s.angular_mean - avg).abs() / avg < 1e-9);
    }

    #[test]
    fn grid_and_parameter_errors() {
        let g = EmitterGeometry::new(3, 1.0).unwrap();
        assert!(matches!(
            scan_curve(&g, 2, 0.0, &[], Method::Closed),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            scan_curve(&g, 2, 0.0, &[0.2, 0.1], Method::Closed),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            scan_curve(&g, 4, 0.0, &[0.1], Method::Exact),
            Err(Error::OrderOutOfRange { .. })
        ));
        let big = EmitterGeometry::new(14, 1.0).unwrap();
        assert!(matches!(
            scan_curve(&big, 12, 0.0, &[0.1], Method::PathSum),
            Err(Error::PathBudgetExceeded { .. })
        ));
        let huge = EmitterGeometry::new(24, 1.0).unwrap();
        assert!(matches!(
            scan_curve(&huge, 2, 0.0, &[0.1], Method::Exact),
            Err(Error::TooManyEmitters { .. })
        ));
    }

    #[test]
    fn peak_tie_breaks_to_first_index() {
        let c = CorrelationCurve {
            theta2_grid: vec![0.0, 1.0, 2.0, 3.0],
            phase_x: vec![0.0, 1.0, 2.0, 3.0],
            values: vec![1.0, 3.0, 0.5, 3.0],
            method: Method::Closed,
            n_emitters: 2,
            order_m: 2,
            theta1: 0.0,
            kd: 1.0,
        };
        let s = summarize(&c);
        assert_eq!(s.peak_index, 1);
        assert_eq!(s.first_zero_phase, Some(1.0));
    }
}
