use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One bosonic mode.
///
/// `kappa` and `detuning` are in units of `ω_b`. For a low-frequency mode the
/// `detuning` slot holds its frequency (1.0 for the reference mode).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeParams {
    pub label: String,
    /// rad/s, only used for thermal occupation.
    pub absolute_frequency: f64,
    pub kappa: f64,
    pub detuning: f64,
}

impl ModeParams {
    pub fn new(label: impl Into<String>, absolute_frequency: f64, kappa: f64, detuning: f64) -> Self {
        Self {
            label: label.into(),
            absolute_frequency,
            kappa,
            detuning,
        }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{path}.kappa must be positive and finite, got {}",
                self.kappa
            )));
        }
        if !(self.absolute_frequency.is_finite() && self.absolute_frequency > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{path}.absolute_frequency must be positive and finite, got {}",
                self.absolute_frequency
            )));
        }
        if !self.detuning.is_finite() {
            return Err(Error::InvalidParameter(format!("{path}.detuning must be finite")));
        }
        Ok(())
    }
}

/// Linearized coupling `G = |G| e^{iθ}` in units of `ω_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingParams {
    pub magnitude: f64,
    pub phase: f64,
}

impl CouplingParams {
    pub fn new(magnitude: f64, phase: f64) -> Self {
        Self { magnitude, phase }
    }

    pub fn from_complex(g: Complex64) -> Self {
        Self {
            magnitude: g.norm(),
            phase: g.arg(),
        }
    }

    pub fn complex(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if !(self.magnitude.is_finite() && self.magnitude >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{path}.magnitude must be non-negative and finite, got {}",
                self.magnitude
            )));
        }
        if !self.phase.is_finite() {
            return Err(Error::InvalidParameter(format!("{path}.phase must be finite")));
        }
        Ok(())
    }
}

/// Bare drive and coupling of a dispersive unit, in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BareDriveParams {
    pub g: f64,
    pub epsilon: f64,
    pub drive_frequency: f64,
}

impl BareDriveParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "drive.epsilon must be non-negative and finite, got {}",
                self.epsilon
            )));
        }
        if !self.g.is_finite() || !self.drive_frequency.is_finite() {
            return Err(Error::InvalidParameter("drive parameters must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Du,
    ThreeMode,
    /// Number of modes in the chain.
    Chain(usize),
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Du => write!(f, "du"),
            Topology::ThreeMode => write!(f, "three_mode"),
            Topology::Chain(n) => write!(f, "chain({n})"),
        }
    }
}

/// A linearized system of alternating high- and low-frequency modes.
///
/// Modes at even indices are high-frequency (driven) modes, odd indices are
/// low-frequency modes. Coupling `i` joins modes `i` and `i + 1`. A DU is
/// `(a, b)`, the three-mode system is `(m, b, c)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemModel {
    pub topology: Topology,
    pub modes: Vec<ModeParams>,
    pub couplings: Vec<CouplingParams>,
    /// Environment temperature in kelvin.
    pub temperature: f64,
}

impl SystemModel {
    pub fn du(a: ModeParams, b: ModeParams, g: CouplingParams, temperature: f64) -> Result<Self> {
        Self::build(Topology::Du, vec![a, b], vec![g], temperature)
    }

    pub fn three_mode(
        m: ModeParams,
        b: ModeParams,
        c: ModeParams,
        g_m: CouplingParams,
        g_c: CouplingParams,
        temperature: f64,
    ) -> Result<Self> {
        Self::build(Topology::ThreeMode, vec![m, b, c], vec![g_m, g_c], temperature)
    }

    pub fn chain(modes: Vec<ModeParams>, couplings: Vec<CouplingParams>, temperature: f64) -> Result<Self> {
        Self::build(Topology::Chain(modes.len()), modes, couplings, temperature)
    }

    fn build(
        topology: Topology,
        modes: Vec<ModeParams>,
        couplings: Vec<CouplingParams>,
        temperature: f64,
    ) -> Result<Self> {
        let m = Self {
            topology,
            modes,
            couplings,
            temperature,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let expected_modes = match self.topology {
            Topology::Du => 2,
            Topology::ThreeMode => 3,
            Topology::Chain(n) => {
                if n < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "chain needs at least 2 modes, got {n}"
                    )));
                }
                n
            }
        };
        if self.modes.len() != expected_modes {
            return Err(Error::InvalidParameter(format!(
                "topology {} needs {} modes, got {}",
                self.topology,
                expected_modes,
                self.modes.len()
            )));
        }
        if self.couplings.len() != expected_modes - 1 {
            return Err(Error::InvalidParameter(format!(
                "topology {} needs {} couplings, got {}",
                self.topology,
                expected_modes - 1,
                self.couplings.len()
            )));
        }
        for (i, m) in self.modes.iter().enumerate() {
            m.validate(&format!("modes[{i}]"))?;
        }
        for (i, c) in self.couplings.iter().enumerate() {
            c.validate(&format!("couplings[{i}]"))?;
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature must be non-negative and finite, got {}",
                self.temperature
            )));
        }
        Ok(())
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// `(high, low)` mode indices joined by coupling `i`.
    pub fn coupling_ends(i: usize) -> (usize, usize) {
        if i.is_multiple_of(2) {
            (i, i + 1)
        } else {
            (i + 1, i)
        }
    }

    pub fn kappas(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.kappa).collect()
    }

    /// Index of a mode by label.
    pub fn port(&self, label: &str) -> Option<usize> {
        self.modes.iter().position(|m| m.label == label)
    }
}
