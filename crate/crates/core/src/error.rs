//! Error type shared by every engine in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("emitter count must be at least 1")]
    NoEmitters,

    #[error("emitter count {n} exceeds the exact-engine cap of {cap}")]
    TooManyEmitters { n: usize, cap: usize },

    #[error("spacing parameter kd must be finite and positive, got {0}")]
    InvalidSpacing(f64),

    #[error("emitter index {index} outside 1..={n}")]
    EmitterIndex { index: usize, n: usize },

    #[error("detector list must contain at least one angle")]
    NoDetectors,

    #[error("non-finite angle {0}")]
    NonFiniteAngle(f64),

    #[error("correlation order {m} outside 1..={n}")]
    OrderOutOfRange { m: usize, n: usize },

    #[error("ground-state count {n_ground} exceeds emitter count {n}")]
    GroundCountOutOfRange { n_ground: usize, n: usize },

    #[error("state has squared norm {norm_sqr}, expected a normalized state")]
    NotNormalized { norm_sqr: f64 },

    #[error("state spans {actual} emitters but the geometry has {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("path sum needs {paths} permutation terms, above the budget of {budget}")]
    PathBudgetExceeded { paths: f64, budget: f64 },

    #[error("detection is impossible (projection weight {weight:e})")]
    ImpossibleDetection { weight: f64 },

    #[error("{count} photon subtractions requested from a state with {available} excitations")]
    TooManySubtractions { count: usize, available: usize },

    #[error("functional supports 1..={max} distinct angles, got {k}")]
    TooManyVariables { k: usize, max: usize },

    #[error("multiplicity list has {got} entries, functional has {expected} variables")]
    MultiplicityArity { expected: usize, got: usize },

    #[error("extracted correlation has imaginary residue {imag:e}")]
    NonRealCorrelation { imag: f64 },

    #[error("coherence modulus must lie in [0, 1], got {0}")]
    CoherenceOutOfRange(f64),

    #[error("scan grid {0}")]
    InvalidGrid(&'static str),

    #[error("{0}")]
    Unsupported(String),
}
