//! Linear-chain emitter geometry and detector placement.
//!
//! Emitter `l` (1-based) sits at `l * d` along the chain. A photon emitted by
//! it and recorded in the far field at angle `theta` picks up the optical
//! phase `l * kd * sin(theta)` relative to a photon from the origin, where
//! `kd = 2 pi d / lambda` is the only geometric parameter.

use crate::error::{Error, Result};

/// Largest emitter count the dense state-vector engine accepts (2^20 amplitudes).
pub const MAX_EXACT_EMITTERS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterGeometry {
    n_emitters: usize,
    kd: f64,
}

impl EmitterGeometry {
    pub fn new(n_emitters: usize, kd: f64) -> Result<Self> {
        if n_emitters == 0 {
            return Err(Error::NoEmitters);
        }
        if !(kd.is_finite() && kd > 0.0) {
            return Err(Error::InvalidSpacing(kd));
        }
        Ok(Self { n_emitters, kd })
    }

    pub fn n_emitters(&self) -> usize {
        self.n_emitters
    }

    pub fn kd(&self) -> f64 {
        self.kd
    }

    /// Optical phase of emitter `emitter` (1-based) toward detector angle `theta`.
    pub fn phase_of(&self, emitter: usize, theta: f64) -> Result<f64> {
        if emitter == 0 || emitter > self.n_emitters {
            return Err(Error::EmitterIndex {
                index: emitter,
                n: self.n_emitters,
            });
        }
        Ok(self.phase_unchecked(emitter, theta))
    }

    #[inline]
    pub(crate) fn phase_unchecked(&self, emitter: usize, theta: f64) -> f64 {
        emitter as f64 * self.kd * theta.sin()
    }

    /// Phase difference `x = phi(1, theta1) - phi(1, theta2)` that drives the
    /// fringes of every coincident-detector correlation.
    pub fn detector_phase_difference(&self, theta1: f64, theta2: f64) -> f64 {
        self.kd * (theta1.sin() - theta2.sin())
    }

    /// Inverse of [`detector_phase_difference`](Self::detector_phase_difference):
    /// the angle `theta2` in `[-pi/2, pi/2]` at which the phase difference to
    /// `theta1` equals `x`. Fails when `|sin theta1 - x / kd| > 1`.
    pub fn theta_for_phase_difference(&self, theta1: f64, x: f64) -> Result<f64> {
        let s = theta1.sin() - x / self.kd;
        if !(-1.0..=1.0).contains(&s) {
            return Err(Error::Unsupported(format!(
                "phase difference {x} is not reachable from theta1 = {theta1} with kd = {}",
                self.kd
            )));
        }
        Ok(s.asin())
    }
}

/// Ordered detector angles (radians). Order never affects a correlation value.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorList {
    angles: Vec<f64>,
}

impl DetectorList {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::NoDetectors);
        }
        if let Some(&bad) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::NonFiniteAngle(bad));
        }
        Ok(Self { angles })
    }

    /// `m - 1` detectors at `theta1` followed by one at `theta2`.
    pub fn coincident(m: usize, theta1: f64, theta2: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::NoDetectors);
        }
        let mut angles = vec![theta1; m - 1];
        angles.push(theta2);
        Self::new(angles)
    }

    pub fn order(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}
