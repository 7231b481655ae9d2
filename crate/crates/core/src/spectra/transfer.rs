use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{StabilityVerdict, SystemModel};
use crate::numerics::{eigenvalues, invert, ComplexMatrix};

/// Sign pattern of `Λ` in `Γ(ω) = L(iωΛ − M)⁻¹L − I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `Λ = diag(−1, 1, −1, 1, …)`. Gives `PΓ(ω)P = Γ(ω)*` at real `ω`.
    #[default]
    Alternating,
    /// `Λ = −I`: every channel, including the conjugate ones, is the Fourier
    /// transform of the time-domain field. Gives `PΓ(ω)*P = Γ(−ω)` and matches
    /// spectra estimated from trajectories.
    Physical,
}

impl Convention {
    fn lambda(self, channel: usize) -> f64 {
        match self {
            Convention::Alternating if channel % 2 == 1 => 1.0,
            _ => -1.0,
        }
    }
}

/// `Γ(ω)` at a single frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferResult {
    pub omega: f64,
    pub gamma: ComplexMatrix,
    pub convention: Convention,
}

impl TransferResult {
    pub fn mode_count(&self) -> usize {
        self.gamma.rows() / 2
    }
}

/// Precomputed `M` and `L` for repeated evaluation of `Γ(ω)`.
#[derive(Debug, Clone)]
pub struct TransferEngine {
    drift: ComplexMatrix,
    sqrt_kappa: Vec<f64>,
    convention: Convention,
    verdict: Option<StabilityVerdict>,
}

impl TransferEngine {
    /// Checks stability first and fails with [`crate::Error::Unstable`].
    pub fn new(model: &SystemModel, convention: Convention) -> Result<Self> {
        let verdict = model.stability()?;
        verdict.require_stable()?;
        let mut e = Self::new_unchecked(model, convention);
        e.verdict = Some(verdict);
        Ok(e)
    }

    /// Skips the stability gate. Spectra of unstable models are not
    /// stationary and should only be used for diagnostics.
    pub fn new_unchecked(model: &SystemModel, convention: Convention) -> Self {
        Self {
            drift: model.drift(),
            sqrt_kappa: model
                .modes
                .iter()
                .flat_map(|m| [m.kappa.sqrt(), m.kappa.sqrt()])
                .collect(),
            convention,
            verdict: None,
        }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn verdict(&self) -> Option<&StabilityVerdict> {
        self.verdict.as_ref()
    }

    pub fn drift(&self) -> &ComplexMatrix {
        &self.drift
    }

    /// Complex frequencies at which `iωΛ − M` is singular. Since `Λ² = I`
    /// these are `ω = −iμ` for the eigenvalues `μ` of `ΛM`; the real part is
    /// a line centre and the imaginary part its half width.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let n = self.drift.rows();
        let mut lm = self.drift.clone();
        for r in 0..n {
            let s = self.convention.lambda(r);
            for c in 0..n {
                lm[(r, c)] *= s;
            }
        }
        Ok(eigenvalues(&lm)?
            .into_iter()
            .map(|mu| Complex64::new(mu.im, -mu.re))
            .collect())
    }

    pub fn at(&self, omega: f64) -> Result<TransferResult> {
        let n = self.drift.rows();
        let mut a = self.drift.scale(Complex64::new(-1.0, 0.0));
        for k in 0..n {
            a[(k, k)] += Complex64::new(0.0, omega * self.convention.lambda(k));
        }
        let inv = invert(&a)?;
        let mut gamma = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                gamma[(r, c)] = inv[(r, c)] * (self.sqrt_kappa[r] * self.sqrt_kappa[c]);
            }
            gamma[(r, r)] -= 1.0;
        }
        Ok(TransferResult {
            omega,
            gamma,
            convention: self.convention,
        })
    }
}

/// `Γ(ω)` under the default convention, with the stability gate.
pub fn transfer_matrix(model: &SystemModel, omega: f64) -> Result<TransferResult> {
    TransferEngine::new(model, Convention::Alternating)?.at(omega)
}
