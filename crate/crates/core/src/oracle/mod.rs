//! Time-domain check of the frequency-domain pipeline.
//!
//! Integrates the linear Langevin system with classical Gaussian noise whose
//! symmetrized correlators equal `(n_th + ½)δ(t − t′)` and estimates the
//! output quadrature spectra by Welch averaging. Every quantity compared is a
//! symmetrized second moment of a linear system, for which this classical
//! surrogate is exact; it is not a quantum simulation.

mod compare;
mod discretize;
mod simulate;
mod window;

pub use compare::{compare, ComparisonReport};
pub use discretize::{ExactStep, RealSystem, PAIR_TOLERANCE};
pub use window::{expected_welch, hann_kernel};
pub use simulate::{simulate, InitialState, OracleConfig, OracleRun, PortPsd, Scheme};
