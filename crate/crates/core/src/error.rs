//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced while building or verifying model structures.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("basis dimension {states} exceeds the configured bound {bound}")]
    DimensionBound { states: u128, bound: usize },

    #[error("mode index {mode} out of range for {mode_count} modes")]
    ModeOutOfRange { mode: usize, mode_count: usize },

    #[error("monomial factor list is empty")]
    EmptyMonomial,

    #[error("operands are bound to different Fock bases")]
    BasisMismatch,

    #[error("interior margin {margin} exceeds total cutoff {cutoff}")]
    MarginTooLarge { margin: u32, cutoff: u32 },

    #[error("block dimension {dimension} too small for a degree-{degree} fit (need {needed} weights)")]
    BlockTooSmall {
        dimension: usize,
        degree: usize,
        needed: usize,
    },

    #[error("model violation: {0}")]
    ModelViolation(String),

    #[error("representation defect: {0}")]
    RepresentationDefect(String),

    #[error("spectral anomaly: eigenvalue {eigenvalue} does not match p(p+1) for any admissible p (closest deviation {deviation})")]
    SpectralAnomaly { eigenvalue: f64, deviation: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("non-hermitian parameter set: {0}")]
    NonHermitian(String),

    #[error("coupling tensor is not symmetric: {0}")]
    AsymmetricTensor(String),

    #[error("coupling tensor is not rank-one (deviation {deviation:.3e} exceeds {tolerance:.3e})")]
    NotRankOne { deviation: f64, tolerance: f64 },

    #[error("block operator flagged non-invariant (leakage {leakage:.3e})")]
    NonInvariantBlock { leakage: f64 },

    #[error("integration failure: step size underflow at t = {t_reached}")]
    IntegrationFailure { t_reached: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
