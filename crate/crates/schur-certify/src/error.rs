//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not unitary: max residual {residual:e} exceeds {tolerance:e}")]
    NotUnitary { residual: f64, tolerance: f64 },

    #[error("spectral decomposition failed to reconstruct the input: residual {residual:e}")]
    ReconstructionFailed { residual: f64 },

    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    #[error("degenerate spectrum: minimal eigenvalue gap {gap:e} at or below {tolerance:e}")]
    DegenerateSpectrum { gap: f64, tolerance: f64 },

    #[error("tableau oracle too large: {count} tableaux exceeds the guard of {limit}")]
    OracleTooLarge { count: u128, limit: u128 },

    #[error("enumeration guard exceeded: {reason}")]
    EnumerationGuard { reason: String },

    #[error("epsilon {epsilon} outside (0, 1]")]
    EpsilonOutOfRange { epsilon: f64 },

    #[error("{name} = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("parameter s must be odd, got {s}")]
    EvenS { s: u64 },

    #[error("tester kind {kind} does not support this operation")]
    PlanKindMismatch { kind: &'static str },

    #[error("risk denominator is nonpositive for n = {n}, d = {d}: not applicable")]
    NonpositiveDenominator { n: u64, d: u64 },

    #[error("empty grid")]
    EmptyGrid,
}
