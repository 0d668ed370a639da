//! Dense state vectors over the `2^N` product basis of `N` two-level emitters.
//!
//! Basis convention: bit `l - 1` of a basis index is set iff emitter `l` is
//! excited. Index `2^N - 1` is the fully excited state, index 0 the ground
//! state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{EmitterGeometry, MAX_EXACT_EMITTERS};

/// Tolerance on `| ||psi||^2 - 1 |` for a state to count as normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_emitters: usize,
    amplitudes: Vec<Complex64>,
}

fn check_emitters(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NoEmitters);
    }
    if n > MAX_EXACT_EMITTERS {
        return Err(Error::TooManyEmitters {
            n,
            cap: MAX_EXACT_EMITTERS,
        });
    }
    Ok(())
}

#[inline]
fn excited_mask(n: usize) -> usize {
    (1usize << n) - 1
}

impl StateVector {
    /// Wraps raw amplitudes; the length must be exactly `2^n_emitters`.
    pub fn from_amplitudes(n_emitters: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_emitters(n_emitters)?;
        if amplitudes.len() != 1usize << n_emitters {
            return Err(Error::Unsupported(format!(
                "{} amplitudes supplied for {} emitters (need {})",
                amplitudes.len(),
                n_emitters,
                1usize << n_emitters
            )));
        }
        Ok(Self {
            n_emitters,
            amplitudes,
        })
    }

    fn basis(n_emitters: usize, index: usize) -> Result<Self> {
        check_emitters(n_emitters)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1usize << n_emitters];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_emitters,
            amplitudes,
        })
    }

    /// All emitters excited: the uncorrelated initial state.
    pub fn fully_excited(n_emitters: usize) -> Result<Self> {
        check_emitters(n_emitters)?;
        Self::basis(n_emitters, excited_mask(n_emitters))
    }

    /// All emitters in the ground state.
    pub fn ground(n_emitters: usize) -> Result<Self> {
        Self::basis(n_emitters, 0)
    }

    /// `(|e,g> + e^{i delta} |g,e>) / sqrt 2` for two emitters; `delta = 0` is
    /// the symmetric and `delta = pi` the antisymmetric single-excitation state.
    pub fn two_atom_delta_state(delta: f64) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 4];
        // |e,g>: emitter 1 excited -> index 0b01
        amplitudes[0b01] = Complex64::new(h, 0.0);
        // |g,e>: emitter 2 excited -> index 0b10
        amplitudes[0b10] = Complex64::from_polar(h, delta);
        Self {
            n_emitters: 2,
            amplitudes,
        }
    }

    /// Symmetric Dicke state with exactly `n_ground` emitters in the ground
    /// state: the equal-weight superposition of all `C(N, n_ground)` such
    /// basis states.
    pub fn dicke_state(n_emitters: usize, n_ground: usize) -> Result<Self> {
        check_emitters(n_emitters)?;
        if n_ground > n_emitters {
            return Err(Error::GroundCountOutOfRange {
                n_ground,
                n: n_emitters,
            });
        }
        let excited = (n_emitters - n_ground) as u32;
        let dim = 1usize << n_emitters;
        let count = (0..dim).filter(|i| i.count_ones() == excited).count();
        let a = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
        let amplitudes = (0..dim)
            .map(|i| {
                if i.count_ones() == excited {
                    a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok(Self {
            n_emitters,
            amplitudes,
        })
    }

    /// Timed Dicke state: one de-excitation shared by all emitters with the
    /// phase `e^{-i phi(l, theta1)}` imprinted by a detection at `theta1`.
    pub fn timed_dicke_state(geometry: &EmitterGeometry, theta1: f64) -> Result<Self> {
        let n = geometry.n_emitters();
        check_emitters(n)?;
        let full = excited_mask(n);
        let norm = 1.0 / (n as f64).sqrt();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1usize << n];
        for l in 1..=n {
            let phi = geometry.phase_unchecked(l, theta1);
            amplitudes[full ^ (1 << (l - 1))] = Complex64::from_polar(norm, -phi);
        }
        Ok(Self {
            n_emitters: n,
            amplitudes,
        })
    }

    pub fn n_emitters(&self) -> usize {
        self.n_emitters
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.iter().all(|a| *a == Complex64::new(0.0, 0.0))
    }

    /// Largest number of excited emitters among basis states with nonzero
    /// amplitude; 0 for the zero vector.
    pub fn max_excitations(&self) -> usize {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(i, _)| i.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Returns `self / ||self||` together with `||self||^2`, or `None` for the
    /// zero vector.
    pub fn normalized(&self) -> Option<(Self, f64)> {
        let w = self.norm_sqr();
        if w <= 0.0 {
            return None;
        }
        let s = 1.0 / w.sqrt();
        let amplitudes = self.amplitudes.iter().map(|a| a * s).collect();
        Some((
            Self {
                n_emitters: self.n_emitters,
                amplitudes,
            },
            w,
        ))
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n_emitters != other.n_emitters {
            return Err(Error::DimensionMismatch {
                expected: self.n_emitters,
                actual: other.n_emitters,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`, the fidelity between two normalized pure states.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                norm_sqr: self.norm_sqr(),
            })
        }
    }
}

fn check_geometry(geometry: &EmitterGeometry, state: &StateVector) -> Result<()> {
    if geometry.n_emitters() != state.n_emitters {
        return Err(Error::DimensionMismatch {
            expected: geometry.n_emitters(),
            actual: state.n_emitters,
        });
    }
    Ok(())
}

/// Positive-frequency field at detector angle `theta` applied to `state`:
/// `sum_l e^{-i phi(l, theta)} s_-^(l) |state>`. The result is unnormalized
/// and is the zero vector when no emitter can de-excite.
pub fn apply_field(
    geometry: &EmitterGeometry,
    theta: f64,
    state: &StateVector,
) -> Result<StateVector> {
    check_geometry(geometry, state)?;
    let n = state.n_emitters;
    let phases: Vec<Complex64> = (1..=n)
        .map(|l| Complex64::from_polar(1.0, -geometry.phase_unchecked(l, theta)))
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); state.dim()];
    for (bit, phase) in phases.iter().enumerate() {
        let mask = 1usize << bit;
        for (i, a) in state.amplitudes.iter().enumerate() {
            if i & mask != 0 {
                out[i ^ mask] += phase * a;
            }
        }
    }
    Ok(StateVector {
        n_emitters: n,
        amplitudes: out,
    })
}

/// First-order correlation `G^(1)(theta) = ||E^+(theta)|state>||^2` of a
/// normalized state.
pub fn intensity(geometry: &EmitterGeometry, theta: f64, state: &StateVector) -> Result<f64> {
    state.require_normalized()?;
    Ok(apply_field(geometry, theta, state)?.norm_sqr())
}
