//! Multiphoton-modified spontaneous decay of a driven effective two-level atom.
//!
//! The pipeline runs from atomic data to a population trace:
//!
//! 1. [`levelscheme`] loads levels and dipole-allowed transitions.
//! 2. [`couplings`] evaluates the adiabatically eliminated two- and
//!    three-photon coefficients at a vacuum frequency.
//! 3. [`eom`] performs the Markov reduction and assembles the banded
//!    equation-of-motion coefficients.
//! 4. [`dynamics`] integrates the Fock-resolved excited-state amplitudes.
//! 5. [`oracle`] integrates the unreduced amplitude equations on a discrete
//!    vacuum-mode grid for small instances.

// `!(x > 0.0)` is used deliberately so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod couplings;
pub mod dynamics;
pub mod eom;
mod error;
pub mod integrator;
pub mod levelscheme;
pub mod oracle;

pub use couplings::{Detunings, EffectiveCouplings, FieldConfig};
pub use dynamics::{AmplitudeVector, PopulationTrace, SimulationConfig};
pub use eom::{EomCoefficients, Pathway, VertexFactor, VertexRole};
pub use error::{Error, Result};
pub use levelscheme::{Level, LevelScheme, Transition};
pub use num_complex::Complex64;
pub use oracle::{FullState, TraceComparison, VacuumModeGrid};
