//! Photon subtraction: conditioning on a detection at angle `theta` maps a
//! state to `E^+(theta)|psi> / ||E^+(theta)|psi>||`. Repeating this at one
//! angle on the fully excited state walks down the symmetric (or timed)
//! Dicke ladder, and the product of stage weights is the coincident-detector
//! correlation that prepared it.

use crate::correlations::{dicke_normalization, g_m_exact};
use crate::error::{Error, Result};
use crate::geometry::{DetectorList, EmitterGeometry};
use crate::state::{apply_field, intensity, StateVector};
use crate::verify::rel_dev;

pub use crate::correlations::dicke_intensity_closed;

/// Weights at or below this are treated as an impossible detection.
pub const IMPOSSIBLE_WEIGHT: f64 = 1e-20;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    /// Normalized post-detection state.
    pub projected_state: StateVector,
    /// Squared norm of the field image before normalization, i.e. the
    /// (cumulative) detection probability weight.
    pub weight: f64,
}

/// Conditions `state` on one detection at `theta`.
pub fn photon_subtract(
    geometry: &EmitterGeometry,
    theta: f64,
    state: &StateVector,
) -> Result<ProjectionResult> {
    state.require_normalized()?;
    let image = apply_field(geometry, theta, state)?;
    let weight = image.norm_sqr();
    if weight <= IMPOSSIBLE_WEIGHT {
        return Err(Error::ImpossibleDetection { weight });
    }
    let (projected_state, weight) = image
        .normalized()
        .ok_or(Error::ImpossibleDetection { weight })?;
    Ok(ProjectionResult {
        projected_state,
        weight,
    })
}

/// `count` successive detections at `theta1`. The returned weight is the
/// product of the stage weights, which equals `G^(count)(theta1, ..., theta1)`.
pub fn cascade_subtract(
    geometry: &EmitterGeometry,
    theta1: f64,
    count: usize,
    state: &StateVector,
) -> Result<ProjectionResult> {
    state.require_normalized()?;
    let available = state.max_excitations();
    if count > available {
        return Err(Error::TooManySubtractions { count, available });
    }
    let mut acc = ProjectionResult {
        projected_state: state.clone(),
        weight: 1.0,
    };
    for _ in 0..count {
        let step = photon_subtract(geometry, theta1, &acc.projected_state)?;
        acc.weight *= step.weight;
        acc.projected_state = step.projected_state;
    }
    Ok(acc)
}

/// Conditional correlation `G^(2)(theta2, theta1) / G^(1)(theta2)` of the
/// fully excited state: the intensity at `theta1_probe` after a detection at
/// `theta2`. For two emitters this is `1 + cos x` with `x` the inter-detector
/// phase difference.
pub fn conditional_g2(geometry: &EmitterGeometry, theta2: f64, theta1_probe: f64) -> Result<f64> {
    let phi = StateVector::fully_excited(geometry.n_emitters())?;
    let projected = photon_subtract(geometry, theta2, &phi)?;
    intensity(geometry, theta1_probe, &projected.projected_state)
}

/// The three routes to `G^(m)(theta1 x (m-1), theta2)` compared by
/// [`verify_factorization`].
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    /// `G^(m)` from the exact engine.
    pub direct: f64,
    /// Intensity of the `(m-1)`-fold projected state at `theta2` times the
    /// cascade weight.
    pub factorized: f64,
    /// Symmetric Dicke-state intensity times `C(N, m-1) ((m-1)!)^2`; only
    /// defined for `theta1 = 0`.
    pub dicke: Option<f64>,
    /// Largest pairwise relative deviation among the available routes.
    pub max_deviation: f64,
}

pub fn verify_factorization(
    geometry: &EmitterGeometry,
    m: usize,
    theta1: f64,
    theta2: f64,
) -> Result<FactorizationReport> {
    let n = geometry.n_emitters();
    if m == 0 || m > n {
        return Err(Error::OrderOutOfRange { m, n });
    }
    let phi = StateVector::fully_excited(n)?;
    let detectors = DetectorList::coincident(m, theta1, theta2)?;
    let direct = g_m_exact(geometry, &detectors, &phi)?;

    let cascade = cascade_subtract(geometry, theta1, m - 1, &phi)?;
    let factorized = intensity(geometry, theta2, &cascade.projected_state)? * cascade.weight;

    let dicke = if theta1 == 0.0 {
        let state = StateVector::dicke_state(n, m - 1)?;
        Some(intensity(geometry, theta2, &state)? * dicke_normalization(n, m)?)
    } else {
        None
    };

    let mut max_deviation = rel_dev(direct, factorized);
    if let Some(d) = dicke {
        max_deviation = max_deviation
            .max(rel_dev(direct, d))
            .max(rel_dev(factorized, d));
    }
    Ok(FactorizationReport {
        direct,
        factorized,
        dicke,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::g_m_closed_coincident;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn single_subtraction_from_two_excited_atoms() {
        let g = EmitterGeometry::new(2, 2.2).unwrap();
        let theta2 = 0.35;
        let r = photon_subtract(&g, theta2, &StateVector::fully_excited(2).unwrap()).unwrap();
        assert!((r.weight - 2.0).abs() < 1e-12);

        // |chi> = (|g,e> e^{-i phi(1)} + |e,g> e^{-i phi(2)}) / sqrt 2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[0b10] = Complex64::from_polar(h, -g.phase_of(1, theta2).unwrap());
        amps[0b01] = Complex64::from_polar(h, -g.phase_of(2, theta2).unwrap());
        let chi = StateVector::from_amplitudes(2, amps).unwrap();
        assert!((r.projected_state.fidelity(&chi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn impossible_detections() {
        let g = EmitterGeometry::new(2, PI).unwrap();
        let anti = StateVector::two_atom_delta_state(PI);
        assert!(matches!(
            photon_subtract(&g, 0.0, &anti),
            Err(Error::ImpossibleDetection { .. })
        ));
        let ground = StateVector::ground(2).unwrap();
        assert!(matches!(
            photon_subtract(&g, 0.4, &ground),
            Err(Error::ImpossibleDetection { weight }) if weight == 0.0
        ));
    }

    #[test]
    fn cascade_reaches_dicke_states() {
        for n in 1..=8 {
            let g = EmitterGeometry::new(n, 2.0 * PI).unwrap();
            let phi = StateVector::fully_excited(n).unwrap();
            for m in 1..=n {
                let r = cascade_subtract(&g, 0.0, m - 1, &phi).unwrap();
                let d = StateVector::dicke_state(n, m - 1).unwrap();
                assert!(r.projected_state.fidelity(&d).unwrap() >= 1.0 - 1e-12);
                let w = dicke_normalization(n, m).unwrap();
                assert!((r.weight - w).abs() / w < 1e-9);
            }
        }
    }

    #[test]
    fn single_offaxis_subtraction_gives_timed_dicke() {
        for n in 1..=6 {
            let g = EmitterGeometry::new(n, 1.7).unwrap();
            let phi = StateVector::fully_excited(n).unwrap();
            let r = cascade_subtract(&g, 0.8, 1, &phi).unwrap();
            let t = StateVector::timed_dicke_state(&g, 0.8).unwrap();
            assert!((r.projected_state.fidelity(&t).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cascade_rejects_excess_count() {
        let g = EmitterGeometry::new(3, 1.0).unwrap();
        let phi = StateVector::fully_excited(3).unwrap();
        assert_eq!(
            cascade_subtract(&g, 0.0, 4, &phi),
            Err(Error::TooManySubtractions {
                count: 4,
                available: 3
            })
        );
        let r = cascade_subtract(&g, 0.0, 0, &phi).unwrap();
        assert_eq!(r.weight, 1.0);
        assert_eq!(r.projected_state, phi);
    }

    #[test]
    fn conditional_g2_examples() {
        let g = EmitterGeometry::new(2, PI).unwrap();
        let theta2 = -PI / 2.0;
        for (x, want) in [(0.0, 2.0), (PI, 0.0), (PI / 2.0, 1.0)] {
            // x = phi(1, theta1) - phi(1, theta2)
            let theta1 = g.theta_for_phase_difference(theta2, -x).unwrap();
            let xr = g.detector_phase_difference(theta1, theta2);
            let v = conditional_g2(&g, theta2, theta1).unwrap();
            assert!((v - (1.0 + xr.cos())).abs() < 1e-12);
            assert!((v - want).abs() < 1e-9, "x={x}: {v}");
        }
    }

    #[test]
    fn delta_equivalence() {
        let kd = 2.0 * PI;
        let g = EmitterGeometry::new(2, kd).unwrap();
        let theta2 = 0.21;
        // the tuned entangled state: delta = -(phi(1, theta2) - phi(2, theta2))
        let delta = -(g.phase_of(1, theta2).unwrap() - g.phase_of(2, theta2).unwrap());
        let psi = StateVector::two_atom_delta_state(delta);
        for k in 0..=40 {
            let theta1 = -PI / 2.0 + PI * k as f64 / 40.0;
            let a = intensity(&g, theta1, &psi).unwrap();
            let b = conditional_g2(&g, theta2, theta1).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn factorization_routes_agree() {
        for n in 2..=6 {
            let g = EmitterGeometry::new(n, 2.0 * PI).unwrap();
            for m in 1..=n {
                let r = verify_factorization(&g, m, 0.3, -0.5).unwrap();
                assert!(r.dicke.is_none());
                assert!(r.max_deviation < 1e-9, "N={n} m={m}: {r:?}");

                let r = verify_factorization(&g, m, 0.0, 0.13).unwrap();
                assert!(r.max_deviation < 1e-9, "N={n} m={m}: {r:?}");
                let x = g.detector_phase_difference(0.0, 0.13);
                let closed = g_m_closed_coincident(n, m, x).unwrap();
                assert!((r.direct - closed).abs() / closed.max(1e-3) < 1e-9);
            }
        }
    }

    #[test]
    fn single_excitation_pattern() {
        for n in 2..=8 {
            let curve = |p: f64| dicke_intensity_closed(n, n, p).unwrap();
            let expect = |p: f64| {
                let s = (0.5 * p).sin();
                (0.5 * n as f64 * p).sin().powi(2) / (n as f64 * s * s)
            };
            for k in 1..40 {
                let p = 0.05 + 0.15 * k as f64;
                assert!((curve(p) - expect(p)).abs() < 1e-9);
            }
            assert!((curve(0.0) - n as f64).abs() < 1e-12);
            assert!(curve(2.0 * PI / n as f64) < 1e-12);
        }
    }
}
