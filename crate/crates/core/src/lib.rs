//! Frequency-domain simulation of Stokes/anti-Stokes coherence in
//! dispersively coupled bosonic modes.
//!
//! All rates, detunings and frequencies are expressed in units of the
//! low-frequency mode frequency `ω_b`. Absolute frequencies only enter
//! thermal occupations.

pub mod chain;
pub mod cli;
pub mod error;
pub mod metrics;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod spectra;

pub use error::{Error, Result};
pub use numerics::ComplexMatrix;
