//! Fixtures shared by the criterion benchmarks.

use dicke_core::{DetectorList, EmitterGeometry};

/// Chain with `d = lambda` and `n` emitters.
pub fn geometry(n: usize) -> EmitterGeometry {
    EmitterGeometry::new(n, 2.0 * std::f64::consts::PI).expect("valid geometry")
}

/// `m` detectors spread over `[-1, 1]` rad so no two coincide.
pub fn spread_detectors(m: usize) -> DetectorList {
    let angles = (0..m)
        .map(|j| -1.0 + 2.0 * (j as f64 + 0.5) / m as f64)
        .collect();
    DetectorList::new(angles).expect("non-empty detector list")
}

pub fn theta_grid(steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| -1.0 + 2.0 * k as f64 / (steps - 1) as f64)
        .collect()
}
