//! Numerical tolerances used by the verification operations.
//!
//! Identity checks on sparse operator matrices are exact up to f64
//! rounding; the 1e-12/1e-10 levels allow for accumulation over matrix
//! products at the dimensions this crate targets. Polynomial and dynamics
//! tolerances account for interpolation conditioning and discretization.

/// Entrywise identities that hold exactly in exact arithmetic
/// (truncated commutation relations on the interior, hermiticity).
pub const EXACT: f64 = 1e-12;

/// Commutation-relation residuals of the realized algebra, scaled by
/// operand norms.
pub const COMMUTATOR: f64 = 1e-10;

/// Block invariance leakage and su(2) triple residuals.
pub const BLOCK: f64 = 1e-10;

/// Structure-polynomial reproduction and Casimir residuals, relative.
pub const POLY: f64 = 1e-9;

/// Eigenvalue matching for the polarization Casimir spectrum.
pub const SPECTRAL: f64 = 1e-8;

/// P-scalar moment magnitudes.
pub const MOMENT: f64 = 1e-10;

/// Norm drift of block-exact evolution.
pub const NORM_DRIFT: f64 = 1e-10;

/// Conserved-quantity drift over a dynamics window.
pub const CONSERVATION: f64 = 1e-8;

/// Ehrenfest finite-difference residual on fine grids.
pub const EHRENFEST: f64 = 1e-6;

/// First integrals of the classical Bloch system.
pub const CLASSICAL_INTEGRAL: f64 = 1e-8;

/// Second-order-form residual of the classical trajectory, relative
/// (limited by the centered finite difference).
pub const SECOND_ORDER: f64 = 1e-4;

/// Spectrum agreement under the rank-one mode rotation.
pub const SPECTRUM_MATCH: f64 = 1e-9;

/// Scale for relative comparisons: max(1, norms...).
pub fn scale_of(norms: &[f64]) -> f64 {
    norms.iter().copied().fold(1.0_f64, f64::max)
}
