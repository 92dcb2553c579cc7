//! Spectral theory of the spherical harmonic oscillator
//! `L_omega = Laplacian(S^d) + omega^2 r^2` in stereographic coordinates.
//!
//! The crate provides closed-form eigenvalues and multiplicities, radial
//! eigenfunctions built from terminating hypergeometric polynomials,
//! heat-trace partition functions with certified truncation bounds, the
//! conjectural chiral-model partition product, and an independent
//! finite-difference Sturm-Liouville eigensolver used to validate the
//! closed forms.

pub mod chiral;
pub mod eigenfunctions;
pub mod error;
pub mod oracle;
pub mod params;
pub mod partition;
mod quadrature;
pub mod special;
pub mod spectrum;

pub use error::{Error, Result};
pub use params::{DegeneracyGroup, EigenvalueRecord, GroundState, ModeIndex, ModelParams};
