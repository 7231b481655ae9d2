use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::validate_grid;
use super::{
    asymmetry, input_noise, quadrature_coefficients, transmission_du, transmission_three, Convention,
    SpectrumTable, TransferEngine,
};
use crate::error::{Error, Result};
use crate::model::{SystemModel, Topology};

/// Settings shared by all spectrum evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumOptions {
    #[serde(default)]
    pub convention: Convention,
    /// Homodyne phase ψ in rad.
    #[serde(default)]
    pub psi: f64,
}

/// Evaluates `f` at every grid point in parallel, keeping grid order.
fn map_grid<T, F>(omega: &[f64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync,
{
    validate_grid(omega)?;
    omega.par_iter().map(|&w| f(w)).collect()
}

fn check_port(model: &SystemModel, port: usize) -> Result<()> {
    if port < model.mode_count() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "port {port} out of range for {} modes",
            model.mode_count()
        )))
    }
}

/// Symmetrized homodyne output spectrum `Σ_k |C_k(ω)|² (n_k + ½)` of `port`.
pub fn output_spectrum_point(engine: &TransferEngine, noise: &[f64], omega: f64, port: usize, psi: f64) -> Result<f64> {
    let tr = engine.at(omega)?;
    Ok(quadrature_coefficients(&tr, port, psi)?.noise_power(noise))
}

pub fn output_spectrum(model: &SystemModel, omega: &[f64], port: usize, opts: &SpectrumOptions) -> Result<SpectrumTable> {
    check_port(model, port)?;
    let engine = TransferEngine::new(model, opts.convention)?;
    let noise = input_noise(model);
    let values = map_grid(omega, |w| output_spectrum_point(&engine, &noise, w, port, opts.psi))?;
    let mut t = SpectrumTable::new(omega.to_vec())?;
    t.push(format!("S_out_{}", model.modes[port].label), values)?;
    Ok(t)
}

/// `(S_AP, S_SNR)` at one frequency for a Hermitian unit signal entering
/// through `signal` and read out at `readout`.
pub fn snr_point(
    engine: &TransferEngine,
    noise: &[f64],
    omega: f64,
    signal: usize,
    readout: usize,
    psi: f64,
) -> Result<(f64, f64)> {
    let tr = engine.at(omega)?;
    let q = quadrature_coefficients(&tr, readout, psi)?;
    let s_ap = q.hermitian_gain(signal);
    if s_ap == 0.0 {
        return Ok((0.0, 0.0));
    }
    Ok((s_ap, s_ap / q.noise_power(noise)))
}

pub fn amplification_spectrum(
    model: &SystemModel,
    omega: &[f64],
    signal: usize,
    readout: usize,
    opts: &SpectrumOptions,
) -> Result<SpectrumTable> {
    let full = snr_spectrum(model, omega, signal, readout, opts)?;
    let mut t = SpectrumTable::new(omega.to_vec())?;
    t.push("S_AP", full.column("S_AP").expect("S_AP column").to_vec())?;
    Ok(t)
}

pub fn snr_spectrum(
    model: &SystemModel,
    omega: &[f64],
    signal: usize,
    readout: usize,
    opts: &SpectrumOptions,
) -> Result<SpectrumTable> {
    check_port(model, signal)?;
    check_port(model, readout)?;
    let engine = TransferEngine::new(model, opts.convention)?;
    let noise = input_noise(model);
    let rows = map_grid(omega, |w| snr_point(&engine, &noise, w, signal, readout, opts.psi))?;
    let mut t = SpectrumTable::new(omega.to_vec())?;
    t.push("S_AP", rows.iter().map(|r| r.0).collect())?;
    t.push("S_SNR", rows.iter().map(|r| r.1).collect())?;
    Ok(t)
}

/// Transmission coefficients and asymmetry factors over a grid.
///
/// DU columns: `T_a+`, `T_a-`, `T_b+`, `T_b-`, `R_ab`. Three-mode columns:
/// `T_m+-`, `T_+-b`, `T_b+-`, `T_+-c`, `R_mb`, `R_bc`.
pub fn asymmetry_spectrum(model: &SystemModel, omega: &[f64], opts: &SpectrumOptions) -> Result<SpectrumTable> {
    let engine = TransferEngine::new(model, opts.convention)?;
    let mut t = SpectrumTable::new(omega.to_vec())?;
    match model.topology {
        Topology::Du => {
            let rows = map_grid(omega, |w| transmission_du(&engine.at(w)?))?;
            t.push("T_a+", rows.iter().map(|r| r.t_a_plus).collect())?;
            t.push("T_a-", rows.iter().map(|r| r.t_a_minus).collect())?;
            t.push("T_b+", rows.iter().map(|r| r.t_b_plus).collect())?;
            t.push("T_b-", rows.iter().map(|r| r.t_b_minus).collect())?;
            t.push("R_ab", rows.iter().map(|r| r.r_ab()).collect::<Result<_>>()?)?;
        }
        Topology::ThreeMode => {
            let rows = map_grid(omega, |w| transmission_three(&engine.at(w)?))?;
            t.push("T_m+-", rows.iter().map(|r| r.t_m_pm).collect())?;
            t.push("T_+-b", rows.iter().map(|r| r.t_pm_b).collect())?;
            t.push("T_b+-", rows.iter().map(|r| r.t_b_pm).collect())?;
            t.push("T_+-c", rows.iter().map(|r| r.t_pm_c).collect())?;
            t.push("R_mb", rows.iter().map(|r| asymmetry(r.t_m_pm, r.t_pm_b)).collect::<Result<_>>()?)?;
            t.push("R_bc", rows.iter().map(|r| asymmetry(r.t_b_pm, r.t_pm_c)).collect::<Result<_>>()?)?;
        }
        Topology::Chain(_) => {
            return Err(Error::InvalidParameter(
                "asymmetry spectra are defined for du and three_mode topologies".into(),
            ))
        }
    }
    Ok(t)
}
