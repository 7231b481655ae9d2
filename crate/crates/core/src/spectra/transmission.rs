use serde::{Deserialize, Serialize};

use super::TransferResult;
use crate::error::{Error, Result};

/// Inputs below this are treated as exactly zero by [`asymmetry`].
pub const ASYMMETRY_FLOOR: f64 = 1e-300;

/// Transmission coefficients of a dispersive unit `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuTransmission {
    pub t_a: f64,
    pub t_b: f64,
    pub t_a_plus: f64,
    pub t_a_minus: f64,
    pub t_b_plus: f64,
    pub t_b_minus: f64,
}

impl DuTransmission {
    /// `R_ab = (T_{a+} − T_{b−})/(T_{a+} + T_{b−})`
    pub fn r_ab(&self) -> Result<f64> {
        asymmetry(self.t_a_plus, self.t_b_minus)
    }
}

/// Transmission coefficients of the `(m, b, c)` system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeTransmission {
    /// b → m
    pub t_m_pm: f64,
    /// m → b
    pub t_pm_b: f64,
    /// c → b
    pub t_b_pm: f64,
    /// b → c
    pub t_pm_c: f64,
}

impl ThreeTransmission {
    pub fn r_mb(&self) -> Result<f64> {
        asymmetry(self.t_m_pm, self.t_pm_b)
    }

    pub fn r_bc(&self) -> Result<f64> {
        asymmetry(self.t_b_pm, self.t_pm_c)
    }
}

/// `|Γ_{2p,k} + Γ_{2p+1,k}|²` with zero-based mode `p` and channel `k`.
pub fn port_transmission(tr: &TransferResult, port: usize, channel: usize) -> f64 {
    let g = &tr.gamma;
    (g[(2 * port, channel)] + g[(2 * port + 1, channel)]).norm_sqr()
}

fn expect_modes(tr: &TransferResult, n: usize) -> Result<()> {
    if tr.mode_count() == n {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "expected a {n}-mode transfer matrix, got {} modes",
            tr.mode_count()
        )))
    }
}

pub fn transmission_du(tr: &TransferResult) -> Result<DuTransmission> {
    expect_modes(tr, 2)?;
    Ok(DuTransmission {
        t_a: port_transmission(tr, 0, 0),
        t_b: port_transmission(tr, 1, 2),
        t_a_plus: port_transmission(tr, 0, 2),
        t_a_minus: port_transmission(tr, 0, 3),
        t_b_plus: port_transmission(tr, 1, 0),
        t_b_minus: port_transmission(tr, 1, 1),
    })
}

pub fn transmission_three(tr: &TransferResult) -> Result<ThreeTransmission> {
    expect_modes(tr, 3)?;
    Ok(ThreeTransmission {
        t_m_pm: port_transmission(tr, 0, 2),
        t_pm_b: port_transmission(tr, 1, 0),
        t_b_pm: port_transmission(tr, 1, 4),
        t_pm_c: port_transmission(tr, 2, 2),
    })
}

/// `(T₊ − T₋)/(T₊ + T₋)`, an error when both vanish.
pub fn asymmetry(t_plus: f64, t_minus: f64) -> Result<f64> {
    if !(t_plus >= 0.0 && t_minus >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "transmission coefficients must be non-negative, got {t_plus}, {t_minus}"
        )));
    }
    if t_plus < ASYMMETRY_FLOOR && t_minus < ASYMMETRY_FLOOR {
        return Err(Error::UndefinedAsymmetry);
    }
    Ok(((t_plus - t_minus) / (t_plus + t_minus)).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymmetry_limits() {
        assert_eq!(asymmetry(2.0, 2.0).unwrap(), 0.0);
        assert_eq!(asymmetry(3.0, 0.0).unwrap(), 1.0);
        assert_eq!(asymmetry(0.0, 3.0).unwrap(), -1.0);
        assert_eq!(asymmetry(0.0, 0.0), Err(Error::UndefinedAsymmetry));
        assert!(asymmetry(-1.0, 1.0).is_err());
        assert!(asymmetry(f64::NAN, 1.0).is_err());
    }
}
