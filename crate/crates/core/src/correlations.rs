//! Three independent routes to the normally ordered m-th order correlation
//! `G^(m)` of fully excited emitters, plus the closed-form observables
//! derived from it.
//!
//! * [`g_m_exact`] applies the field operator `m` times to a dense state.
//! * [`g_m_pathsum`] enumerates every m-photon quantum path: a sum over
//!   emitter subsets of squared-modulus permanents. Deliberately naive.
//! * [`g_m_closed_coincident`] is the closed form for `m - 1` detectors at one
//!   angle and the last detector at another.

use itertools::Itertools;
use num_complex::Complex64;

use crate::combinatorics::{binomial, factorial, falling_factorial};
use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};
use crate::geometry::{DetectorList, EmitterGeometry};
use crate::state::{apply_field, StateVector};

/// Default cap on `C(N, m) * m!` for the path-sum oracle.
pub const DEFAULT_PATH_BUDGET: f64 = 1e8;

/// Below this `|sin(x/2)|` the interference ratio takes its limit `N^2`.
pub const SINGULARITY_THRESHOLD: f64 = 1e-8;

/// `||E^+(theta_m) ... E^+(theta_1) |state>||^2`.
///
/// Returns exactly 0 when `m` exceeds the number of excitations.
pub fn g_m_exact(
    geometry: &EmitterGeometry,
    detectors: &DetectorList,
    state: &StateVector,
) -> Result<f64> {
    state.require_normalized()?;
    let mut psi = apply_field(geometry, detectors.angles()[0], state)?;
    for &theta in &detectors.angles()[1..] {
        if psi.is_zero() {
            return Ok(0.0);
        }
        psi = apply_field(geometry, theta, &psi)?;
    }
    Ok(psi.norm_sqr())
}

/// Number of permutation terms the path sum enumerates: `C(N, m) * m!`.
pub fn path_count(n: usize, m: usize) -> f64 {
    binomial(n as u64, m as u64) * factorial(m as u64)
}

/// Path-sum oracle for the fully excited state with the default budget.
pub fn g_m_pathsum(geometry: &EmitterGeometry, detectors: &DetectorList) -> Result<f64> {
    g_m_pathsum_with_budget(geometry, detectors, DEFAULT_PATH_BUDGET)
}

/// `sum_{sigma_1 < ... < sigma_m} |perm(A_sigma)|^2` with
/// `A_sigma[j][k] = e^{-i phi(sigma_k, theta_j)}`.
pub fn g_m_pathsum_with_budget(
    geometry: &EmitterGeometry,
    detectors: &DetectorList,
    budget: f64,
) -> Result<f64> {
    let n = geometry.n_emitters();
    let m = detectors.order();
    if m > n {
        return Err(Error::OrderOutOfRange { m, n });
    }
    let paths = path_count(n, m);
    if paths > budget {
        return Err(Error::PathBudgetExceeded { paths, budget });
    }

    // phase[j][l]: detector j, emitter l (0-based)
    let phase: Vec<Vec<Complex64>> = detectors
        .angles()
        .iter()
        .map(|&theta| {
            (1..=n)
                .map(|l| Complex64::from_polar(1.0, -geometry.phase_unchecked(l, theta)))
                .collect()
        })
        .collect();

    let mut total = 0.0;
    let mut sub = vec![Complex64::new(0.0, 0.0); m * m];
    for subset in (0..n).combinations(m) {
        for (j, row) in phase.iter().enumerate() {
            for (k, &emitter) in subset.iter().enumerate() {
                sub[j * m + k] = row[emitter];
            }
        }
        total += naive_permanent(&sub, m).norm_sqr();
    }
    Ok(total)
}

/// Permanent of a row-major `m x m` matrix by explicit enumeration of all
/// `m!` permutations (Heap's algorithm), summed with compensation.
fn naive_permanent(a: &[Complex64], m: usize) -> Complex64 {
    let term = |perm: &[usize]| -> Complex64 {
        perm.iter()
            .enumerate()
            .map(|(j, &k)| a[j * m + k])
            .product()
    };
    let mut perm: Vec<usize> = (0..m).collect();
    let mut counters = vec![0usize; m];
    let mut sum = CompensatedSum::new();
    sum.add(term(&perm));
    let mut i = 1;
    while i < m {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sum.add(term(&perm));
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    sum.value()
}

/// `sin^2(N x / 2) / sin^2(x / 2)`, with the removable singularities at
/// `x = 2 pi q` replaced by the limit `N^2`.
pub fn interference_ratio(n: usize, x: f64) -> f64 {
    let n_f = n as f64;
    // reduce to (-pi, pi] so near-singular points sit next to zero
    let tau = 2.0 * std::f64::consts::PI;
    let mut r = x.rem_euclid(tau);
    if r > std::f64::consts::PI {
        r -= tau;
    }
    let den = (0.5 * r).sin();
    if den.abs() < SINGULARITY_THRESHOLD {
        return n_f * n_f;
    }
    let num = (0.5 * n_f * r).sin();
    (num * num) / (den * den)
}

fn check_order(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NoEmitters);
    }
    if m == 0 || m > n {
        return Err(Error::OrderOutOfRange { m, n });
    }
    Ok(())
}

/// Bracket shared by the coincident-detector correlation and the Dicke-state
/// intensity: `(N-m)/(N-1) + (m-1)/(N(N-1)) * ratio(N, x)`. Requires `N >= 2`.
fn fringe_bracket(n: usize, m: usize, x: f64) -> f64 {
    let n_f = n as f64;
    let m_f = m as f64;
    (n_f - m_f) / (n_f - 1.0) + (m_f - 1.0) / (n_f * (n_f - 1.0)) * interference_ratio(n, x)
}

/// Closed form of `G^(m)(theta1, ..., theta1, theta2)` for `N` fully excited
/// emitters, as a function of `x = phi(1, theta1) - phi(1, theta2)`.
pub fn g_m_closed_coincident(n: usize, m: usize, x: f64) -> Result<f64> {
    check_order(n, m)?;
    if n == 1 {
        return Ok(1.0);
    }
    let prefactor = falling_factorial(n as u64, m as u64) * factorial(m as u64 - 1);
    Ok(prefactor * fringe_bracket(n, m, x))
}

/// Intensity of the symmetric Dicke state with `m - 1` de-excitations,
/// `(N - m + 1) * bracket`, as a function of the detector phase.
pub fn dicke_intensity_closed(n: usize, m: usize, phi: f64) -> Result<f64> {
    check_order(n, m)?;
    if n == 1 {
        return Ok(1.0);
    }
    Ok((n - m + 1) as f64 * fringe_bracket(n, m, phi))
}

/// `G^(m)` at the central maximum `x = 0`: `N! m! / (N - m)!`.
pub fn peak_gm(n: usize, m: usize) -> Result<f64> {
    check_order(n, m)?;
    Ok(falling_factorial(n as u64, m as u64) * factorial(m as u64))
}

/// Two-atom normalized intensity correlation `g^(2) = (1 + cos x) / 2`.
pub fn g2_two_atom_normalized(x: f64) -> f64 {
    0.5 * (1.0 + x.cos())
}

/// Thermal-source reference `g^(2) = 1 + |gamma|^2`.
pub fn g2_thermal_reference(gamma_mod: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma_mod) {
        return Err(Error::CoherenceOutOfRange(gamma_mod));
    }
    Ok(1.0 + gamma_mod * gamma_mod)
}

/// Fringe visibility of the coincident-detector correlation,
/// `(m - 1) / (m + 1 - 2m / N)`.
pub fn visibility_formula(n: usize, m: usize) -> Result<f64> {
    check_order(n, m)?;
    if n < 2 {
        return Err(Error::Unsupported(
            "visibility needs at least two emitters".into(),
        ));
    }
    let n_f = n as f64;
    let m_f = m as f64;
    Ok((m_f - 1.0) / (m_f + 1.0 - 2.0 * m_f / n_f))
}

/// Angular width `2 pi / (N kd)` of the central maximum.
pub fn peak_width_estimate(n: usize, kd: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Unsupported(
            "peak width needs at least two emitters".into(),
        ));
    }
    if !(kd.is_finite() && kd > 0.0) {
        return Err(Error::InvalidSpacing(kd));
    }
    Ok(2.0 * std::f64::consts::PI / (n as f64 * kd))
}

/// Mean of the coincident-detector correlation over one fringe period:
/// `((m-1)!)^2 C(N, m-1) (N - m + 1)`.
pub fn angular_average_gm(n: usize, m: usize) -> Result<f64> {
    check_order(n, m)?;
    let fm1 = factorial(m as u64 - 1);
    Ok(fm1 * fm1 * binomial(n as u64, m as u64 - 1) * (n - m + 1) as f64)
}

/// Normalization weight `C(N, m-1) ((m-1)!)^2` of `m - 1` collective
/// lowerings of the fully excited state.
pub fn dicke_normalization(n: usize, m: usize) -> Result<f64> {
    check_order(n, m)?;
    let fm1 = factorial(m as u64 - 1);
    Ok(binomial(n as u64, m as u64 - 1) * fm1 * fm1)
}
