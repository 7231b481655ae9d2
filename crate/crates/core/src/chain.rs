//! N-mode chains of dispersive units and their end-to-end gain scaling.
//!
//! Modes alternate high/low, neighbouring units share a low-frequency mode.
//! High-mode parameters and couplings cycle through user-given patterns, so
//! a two-entry high-mode pattern realizes the alternating-detuning drive
//! `(Δ, Δ′, Δ, …)`.
//!
//! The amplitude-modulated variant, whose matching condition reads
//! `|χ_jχ_q[G*_{j,j}(−ω)G_{j,j+1}(−ω) − c.c.]| ≡ 𝒢(ω)`, is not implemented.

use std::ops::RangeInclusive;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CouplingParams, ModeParams, SystemModel};
use crate::numerics::{fit_line, LineFit};
use crate::spectra::{quadrature_coefficients, SpectrumOptions, TransferEngine};

/// Gain base quoted for static alternating-detuning chains; reported for
/// comparison only.
pub const REFERENCE_BASE: f64 = 3.68;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    /// Cycled over the high-frequency (even-index) modes.
    pub high_modes: Vec<ModeParams>,
    /// Shared by every low-frequency (odd-index) mode.
    pub low_mode: ModeParams,
    /// Cycled over the couplings.
    pub couplings: Vec<CouplingParams>,
    pub temperature: f64,
}

impl ChainSpec {
    /// Uses the even-index modes of `model` as the high-mode pattern, its
    /// first low mode as the low mode and its couplings as the coupling
    /// pattern. A three-mode template therefore reproduces itself at `N = 3`.
    pub fn from_template(model: &SystemModel) -> Self {
        Self {
            high_modes: model.modes.iter().step_by(2).cloned().collect(),
            low_mode: model.modes[1].clone(),
            couplings: model.couplings.clone(),
            temperature: model.temperature,
        }
    }

    /// Replaces the high-mode detunings by the pattern `(first, second)`.
    pub fn with_alternating_detuning(mut self, first: f64, second: f64) -> Self {
        if self.high_modes.len() == 1 {
            self.high_modes.push(self.high_modes[0].clone());
        }
        for (k, m) in self.high_modes.iter_mut().enumerate() {
            m.detuning = if k % 2 == 0 { first } else { second };
        }
        self
    }

    pub fn model(&self, n_modes: usize) -> Result<SystemModel> {
        if self.high_modes.is_empty() || self.couplings.is_empty() {
            return Err(Error::InvalidParameter(
                "chain needs at least one high mode and one coupling in its pattern".into(),
            ));
        }
        if n_modes < 2 {
            return Err(Error::InvalidParameter(format!("chain needs at least 2 modes, got {n_modes}")));
        }
        let label = |base: &str, k: usize, len: usize| {
            if k < len {
                base.to_string()
            } else {
                format!("{base}{k}")
            }
        };
        let modes = (0..n_modes)
            .map(|i| {
                let k = i / 2;
                let mut m = if i % 2 == 0 {
                    self.high_modes[k % self.high_modes.len()].clone()
                } else {
                    self.low_mode.clone()
                };
                let len = if i % 2 == 0 { self.high_modes.len() } else { 1 };
                m.label = label(&m.label, k, len);
                m
            })
            .collect();
        let couplings = (0..n_modes - 1)
            .map(|i| self.couplings[i % self.couplings.len()])
            .collect();
        SystemModel::chain(modes, couplings, self.temperature)
    }
}

/// `|C_{1,+} + C_{1,−}|²` of the last mode's output quadrature: transfer of a
/// Hermitian signal entering the first mode.
pub fn end_to_end_gain(model: &SystemModel, omega: f64, opts: &SpectrumOptions) -> Result<f64> {
    let engine = TransferEngine::new(model, opts.convention)?;
    let tr = engine.at(omega)?;
    Ok(quadrature_coefficients(&tr, model.mode_count() - 1, opts.psi)?.hermitian_gain(0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub omega: f64,
    pub n_values: Vec<usize>,
    pub gains: Vec<f64>,
    /// Lengths left out of the fit (unstable or zero gain).
    pub excluded: Vec<(usize, String)>,
    pub fit: LineFit,
    /// `exp(slope)` of `ln(gain)` against `N`.
    pub base: f64,
    pub reference_base: f64,
}

/// Fits `ln(gain) = N ln 𝒜 + c` over the chain lengths in `ns`.
pub fn scaling_fit(spec: &ChainSpec, ns: RangeInclusive<usize>, omega: f64, opts: &SpectrumOptions) -> Result<ScalingReport> {
    let mut n_values = Vec::new();
    let mut gains = Vec::new();
    let mut excluded = Vec::new();
    for n in ns {
        let model = spec.model(n)?;
        match end_to_end_gain(&model, omega, opts) {
            Ok(g) if g > 0.0 => {
                n_values.push(n);
                gains.push(g);
            }
            Ok(_) => {
                warn!("chain length {n}: zero gain, excluded from fit");
                excluded.push((n, "zero gain".to_string()));
            }
            Err(Error::Unstable { abscissa }) => {
                warn!("chain length {n}: unstable (abscissa {abscissa:.3e}), excluded from fit");
                excluded.push((n, format!("unstable, spectral abscissa {abscissa:.6e}")));
            }
            Err(e) => return Err(e),
        }
    }
    if n_values.len() < 3 {
        return Err(Error::Degenerate(format!(
            "scaling fit needs at least 3 usable chain lengths, got {}",
            n_values.len()
        )));
    }
    let xs: Vec<f64> = n_values.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = gains.iter().map(|g| g.ln()).collect();
    let fit = fit_line(&xs, &ys)?;
    Ok(ScalingReport {
        omega,
        n_values,
        gains,
        excluded,
        base: fit.slope.exp(),
        fit,
        reference_base: REFERENCE_BASE,
    })
}
