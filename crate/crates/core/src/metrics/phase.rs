use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{SystemModel, Topology};
use crate::numerics::{linspace, scan_and_refine};
use crate::spectra::{transmission_three, SpectrumOptions, TransferEngine};

/// Residual below which a phase search counts as hitting its target.
pub const EXACT_RESIDUAL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymmetryIndex {
    /// `R_mb`, searched over `θ_m`.
    Mb,
    /// `R_bc`, searched over `θ_c`.
    Bc,
}

impl AsymmetryIndex {
    fn coupling(self) -> usize {
        match self {
            AsymmetryIndex::Mb => 0,
            AsymmetryIndex::Bc => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSearch {
    pub theta: f64,
    pub achieved: f64,
    pub residual: f64,
    /// `residual < EXACT_RESIDUAL`
    pub exact: bool,
}

/// Minimizes `|r(θ) − target|` over `θ ∈ [0, 2π]` with a uniform grid of
/// `points` samples and golden-section refinement. Undefined samples
/// (`None`) are skipped.
pub fn search_phase<F>(r: F, target: f64, points: usize) -> Result<PhaseSearch>
where
    F: Fn(f64) -> Result<Option<f64>>,
{
    let grid = linspace(0.0, std::f64::consts::TAU, points.max(3));
    let found = scan_and_refine(&grid, |t| Ok(r(t)?.map(|v| -(v - target).abs())), 1e-12)?;
    let (theta, neg) = found.ok_or(Error::UndefinedAsymmetry)?;
    let residual = -neg;
    let achieved = r(theta)?.ok_or(Error::UndefinedAsymmetry)?;
    Ok(PhaseSearch {
        theta,
        achieved,
        residual,
        exact: residual < EXACT_RESIDUAL,
    })
}

fn expect_three(model: &SystemModel) -> Result<()> {
    if model.topology == Topology::ThreeMode {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "phase search needs a three_mode model, got {}",
            model.topology
        )))
    }
}

fn r_value(model: &SystemModel, which: AsymmetryIndex, omega: f64, opts: &SpectrumOptions) -> Result<Option<f64>> {
    let engine = TransferEngine::new(model, opts.convention)?;
    let t = transmission_three(&engine.at(omega)?)?;
    let r = match which {
        AsymmetryIndex::Mb => t.r_mb(),
        AsymmetryIndex::Bc => t.r_bc(),
    };
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedAsymmetry) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Phase of the coupling that controls `which` so that `R ≈ target` at `ω`.
pub fn find_phase_for_target_r(
    model: &SystemModel,
    target: f64,
    which: AsymmetryIndex,
    omega: f64,
    opts: &SpectrumOptions,
    points: usize,
) -> Result<PhaseSearch> {
    expect_three(model)?;
    if !(-1.0..=1.0).contains(&target) {
        return Err(Error::InvalidParameter(format!("target {target} outside [-1, 1]")));
    }
    let k = which.coupling();
    search_phase(
        |theta| {
            let mut m = model.clone();
            m.couplings[k].phase = theta;
            r_value(&m, which, omega, opts)
        },
        target,
        points,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    /// `max_{θ_m} [max_{θ_c} R_mb − min_{θ_c} R_mb]`; `None` if `R_mb` is
    /// undefined everywhere.
    pub r_mb_cross_variation: Option<f64>,
    /// Mirrored quantity for `R_bc` over `θ_m`.
    pub r_bc_cross_variation: Option<f64>,
}

/// Measures how much each asymmetry factor depends on the other unit's phase.
pub fn independence_check(
    model: &SystemModel,
    theta_m: &[f64],
    theta_c: &[f64],
    omega: f64,
    opts: &SpectrumOptions,
) -> Result<IndependenceReport> {
    expect_three(model)?;
    let values: Vec<(Option<f64>, Option<f64>)> = theta_m
        .iter()
        .flat_map(|&a| theta_c.iter().map(move |&b| (a, b)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(a, b)| {
            let mut m = model.clone();
            m.couplings[0].phase = a;
            m.couplings[1].phase = b;
            let engine = TransferEngine::new(&m, opts.convention)?;
            let t = transmission_three(&engine.at(omega)?)?;
            Ok((t.r_mb().ok(), t.r_bc().ok()))
        })
        .collect::<Result<_>>()?;
    let nc = theta_c.len();
    let spread = |it: &mut dyn Iterator<Item = Option<f64>>| -> Option<f64> {
        let v: Vec<f64> = it.flatten().collect();
        if v.is_empty() {
            return None;
        }
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        Some(hi - lo)
    };
    let rmb = (0..theta_m.len())
        .filter_map(|i| spread(&mut (0..nc).map(|j| values[i * nc + j].0)))
        .reduce(f64::max);
    let rbc = (0..nc)
        .filter_map(|j| spread(&mut (0..theta_m.len()).map(|i| values[i * nc + j].1)))
        .reduce(f64::max);
    Ok(IndependenceReport {
        r_mb_cross_variation: rmb,
        r_bc_cross_variation: rbc,
    })
}
