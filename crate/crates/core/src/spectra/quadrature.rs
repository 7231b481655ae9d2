use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::TransferResult;
use crate::error::{Error, Result};

/// Coefficients `C_k` of each input channel in the homodyne quadrature
/// `x = (out e^{−iψ} + out† e^{iψ})/√2` of one output port.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureCoefficients {
    pub port: usize,
    pub psi: f64,
    pub coefficients: Vec<Complex64>,
}

impl QuadratureCoefficients {
    /// Annihilation-channel coefficient of mode `j`.
    pub fn plus(&self, j: usize) -> Complex64 {
        self.coefficients[2 * j]
    }

    /// Creation-channel coefficient of mode `j`.
    pub fn minus(&self, j: usize) -> Complex64 {
        self.coefficients[2 * j + 1]
    }

    /// Quadrature transfer of a Hermitian signal riding on mode `j`:
    /// `|C_{j,+} + C_{j,−}|²`.
    pub fn hermitian_gain(&self, j: usize) -> f64 {
        (self.plus(j) + self.minus(j)).norm_sqr()
    }

    /// Symmetrized noise power `Σ_k |C_k|² N_k` for per-channel noise `N_k`.
    pub fn noise_power(&self, noise: &[f64]) -> f64 {
        self.coefficients
            .iter()
            .zip(noise)
            .map(|(c, n)| c.norm_sqr() * n)
            .sum()
    }
}

pub fn quadrature_coefficients(tr: &TransferResult, port: usize, psi: f64) -> Result<QuadratureCoefficients> {
    let modes = tr.mode_count();
    if port >= modes {
        return Err(Error::InvalidParameter(format!(
            "port {port} out of range for {modes} modes"
        )));
    }
    let g = &tr.gamma;
    let (em, ep) = (
        Complex64::from_polar(1.0, -psi),
        Complex64::from_polar(1.0, psi),
    );
    let coefficients = (0..2 * modes)
        .map(|k| (g[(2 * port, k)] * em + g[(2 * port + 1, k)] * ep) / std::f64::consts::SQRT_2)
        .collect();
    Ok(QuadratureCoefficients {
        port,
        psi,
        coefficients,
    })
}
