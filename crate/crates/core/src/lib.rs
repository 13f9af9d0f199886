//! Polynomial Lie algebras of multiboson models.
//!
//! This crate realizes the generator algebras of G-invariant multiboson
//! Hamiltonians on truncated Fock spaces, verifies their defining
//! commutation relations numerically, decomposes the model Hilbert spaces
//! into exact invariant blocks, and compares block-exact quantum dynamics
//! with the mean-field nonlinear Bloch system.
//!
//! Module map:
//! - [`fock`]: occupation-number bases and sparse ladder-operator matrices;
//! - [`pla`]: the polynomial Lie algebra of the multiphoton scattering
//!   model, its structure polynomial, Casimir identity, Holstein-Primakoff
//!   map and differential realization;
//! - [`blocks`]: invariant-subspace decomposition (chain blocks and
//!   polarization domains) and block restriction;
//! - [`polarization`]: polarization quasispin, biphoton clusters and
//!   P-scalar states;
//! - [`dynamics`]: Hamiltonian assembly, block-exact evolution, the
//!   classical Bloch integrator and the quantum-classical comparison.

pub mod blocks;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod pla;
pub mod polarization;
pub mod report;
pub mod tol;

pub use error::CoreError;
