use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eigenvalues, spectral_abscissa, ComplexMatrix};

/// Eigenvalues with real part at or above `-STABILITY_MARGIN` (units of `ω_b`)
/// count as unstable.
pub const STABILITY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub spectral_abscissa: f64,
    pub eigenvalues: Vec<Complex64>,
}

impl StabilityVerdict {
    /// Converts an unstable verdict into an error.
    pub fn require_stable(&self) -> Result<()> {
        if self.stable {
            Ok(())
        } else {
            Err(Error::Unstable {
                abscissa: self.spectral_abscissa,
            })
        }
    }

    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn check_stability(m: &ComplexMatrix) -> Result<StabilityVerdict> {
    let eigenvalues = eigenvalues(m)?;
    let spectral_abscissa = spectral_abscissa(&eigenvalues);
    Ok(StabilityVerdict {
        stable: spectral_abscissa < -STABILITY_MARGIN,
        spectral_abscissa,
        eigenvalues,
    })
}
