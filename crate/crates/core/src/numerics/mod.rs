//! Dense complex linear algebra and small numerical utilities.

mod eigen;
mod expm;
mod fit;
mod lu;
mod matrix;
mod optimize;
mod psd;
mod quadrature;
mod welch;

pub use eigen::{eigenvalues, spectral_abscissa, MAX_SWEEPS};
pub use expm::expm;
pub use fit::{fit_line, LineFit};
pub use lu::{invert, lu_solve, Lu};
pub use matrix::ComplexMatrix;
pub use optimize::{golden_section_max, linspace, refine_from_samples, scan_and_refine};
pub use psd::cholesky_psd;
pub use quadrature::gauss_legendre;
pub use welch::{hann, welch, WelchEstimate};
