//! Measurement-induced superradiance of independent two-level emitters.
//!
//! `N` emitters sit on a line with spacing parameter `kd` and start fully
//! excited. Detecting `m - 1` photons at one far-field angle projects them
//! onto a (timed) Dicke state; the m-th photon then shows the directional
//! emission pattern of that state. This crate computes the m-th order
//! intensity correlation `G^(m)` four independent ways:
//!
//! * dense state-vector algebra ([`correlations::g_m_exact`]),
//! * an explicit sum over m-photon quantum paths ([`correlations::g_m_pathsum`]),
//! * the closed form for coincident detectors ([`correlations::g_m_closed_coincident`]),
//! * coefficient extraction from the characteristic functional
//!   ([`functional::extract_gm`]),
//!
//! together with the photon-subtraction machinery ([`projection`]) and
//! scan/verification drivers used by the `dicke` command-line tool.

pub mod combinatorics;
pub mod compensated;
pub mod correlations;
pub mod error;
pub mod functional;
pub mod geometry;
pub mod projection;
pub mod scan;
pub mod state;
pub mod verify;

pub use correlations::{
    angular_average_gm, dicke_intensity_closed, g2_thermal_reference, g2_two_atom_normalized,
    g_m_closed_coincident, g_m_exact, g_m_pathsum, peak_width_estimate, visibility_formula,
};
pub use error::{Error, Result};
pub use functional::{build_functional, extract_gm, FormalPolynomial};
pub use geometry::{DetectorList, EmitterGeometry, MAX_EXACT_EMITTERS};
pub use projection::{cascade_subtract, conditional_g2, photon_subtract, ProjectionResult};
pub use scan::{scan_curve, summarize, CorrelationCurve, CurveSummary, Method};
pub use state::{apply_field, intensity, StateVector};
