use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{max_snr_over_omega, GridRange, Readout, SnrMax};
use crate::error::{Error, Result};
use crate::model::SystemModel;

/// Damping and detuning of the `m` and `c` modes in the incoherent-scattering
/// baseline, in units of `ω_b`.
pub const ICS_KAPPA: f64 = 0.1;
pub const ICS_DETUNING: f64 = 1.0;

/// Coherent-scattering model plus its incoherent-scattering baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonConfig {
    pub cs: SystemModel,
    pub ics: SystemModel,
    pub search: GridRange,
    pub readout: Readout,
}

impl ComparisonConfig {
    /// Builds the baseline from `cs` by setting `κ = 0.1ω_b` and `Δ = ω_b` on
    /// both high-frequency modes; everything else, including the coupling
    /// phases, is shared.
    pub fn new(cs: SystemModel, search: GridRange, readout: Readout) -> Result<Self> {
        let mut ics = cs.clone();
        for k in high_modes(&ics)? {
            ics.modes[k].kappa = ICS_KAPPA;
            ics.modes[k].detuning = ICS_DETUNING;
        }
        Ok(Self {
            cs,
            ics,
            search,
            readout,
        })
    }

    /// CS model at the given detunings of `c` (last high mode) and `m` (first).
    pub fn cs_at(&self, delta_c: f64, delta_m: f64) -> Result<SystemModel> {
        let mut m = self.cs.clone();
        let highs = high_modes(&m)?;
        m.modes[highs[0]].detuning = delta_m;
        m.modes[*highs.last().unwrap()].detuning = delta_c;
        Ok(m)
    }

    pub fn ics_max(&self) -> Result<SnrMax> {
        max_snr_over_omega(&self.ics, &self.search, &self.readout)
    }
}

fn high_modes(model: &SystemModel) -> Result<Vec<usize>> {
    let v: Vec<usize> = (0..model.mode_count()).step_by(2).collect();
    if v.len() < 2 {
        return Err(Error::InvalidParameter(
            "CS/ICS comparison needs two high-frequency modes".into(),
        ));
    }
    Ok(v)
}

/// `f = max S_SNR^CS / max S_SNR^ICS` at detunings `(Δ_c, Δ_m)`.
pub fn f_factor(cfg: &ComparisonConfig, delta_c: f64, delta_m: f64) -> Result<f64> {
    let cs = max_snr_over_omega(&cfg.cs_at(delta_c, delta_m)?, &cfg.search, &cfg.readout)?;
    Ok(cs.snr / cfg.ics_max()?.snr)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapCell {
    pub delta_c: f64,
    pub delta_m: f64,
    /// `None` for detunings where the CS model is unstable.
    pub f: Option<f64>,
    pub s_ap: Option<f64>,
    pub omega_star: Option<f64>,
}

/// `f` over a `(Δ_c, Δ_m)` grid, row-major in `Δ_c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapResult {
    pub delta_c: Vec<f64>,
    pub delta_m: Vec<f64>,
    pub ics: SnrMax,
    pub cells: Vec<MapCell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionReport {
    pub cells_above_one: usize,
    pub unstable_cells: usize,
    pub components: usize,
    pub largest_component: usize,
    /// Grid cell nearest to `(0, 0)`.
    pub origin: (usize, usize),
    pub origin_above_one: bool,
    pub origin_in_largest: bool,
}

pub fn f_map(cfg: &ComparisonConfig, delta_c: &[f64], delta_m: &[f64]) -> Result<MapResult> {
    let ics = cfg.ics_max()?;
    let cells = delta_c
        .iter()
        .flat_map(|&dc| delta_m.iter().map(move |&dm| (dc, dm)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(dc, dm)| {
            let model = cfg.cs_at(dc, dm)?;
            match max_snr_over_omega(&model, &cfg.search, &cfg.readout) {
                Ok(best) => Ok(MapCell {
                    delta_c: dc,
                    delta_m: dm,
                    f: Some(best.snr / ics.snr),
                    s_ap: Some(best.s_ap),
                    omega_star: Some(best.omega),
                }),
                Err(Error::Unstable { .. }) => Ok(MapCell {
                    delta_c: dc,
                    delta_m: dm,
                    f: None,
                    s_ap: None,
                    omega_star: None,
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MapResult {
        delta_c: delta_c.to_vec(),
        delta_m: delta_m.to_vec(),
        ics,
        cells,
    })
}

impl MapResult {
    pub fn cell(&self, i: usize, j: usize) -> &MapCell {
        &self.cells[i * self.delta_m.len() + j]
    }

    /// 4-connected components of the `f > 1` cell set.
    pub fn region_report(&self) -> RegionReport {
        let (nr, nc) = (self.delta_c.len(), self.delta_m.len());
        let above = |i: usize, j: usize| self.cell(i, j).f.is_some_and(|f| f > 1.0);
        let nearest = |v: &[f64]| {
            v.iter()
                .enumerate()
                .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .map_or(0, |(i, _)| i)
        };
        let origin = (nearest(&self.delta_c), nearest(&self.delta_m));

        let mut label = vec![usize::MAX; nr * nc];
        let mut sizes = Vec::new();
        for i in 0..nr {
            for j in 0..nc {
                if !above(i, j) || label[i * nc + j] != usize::MAX {
                    continue;
                }
                let id = sizes.len();
                let mut size = 0;
                let mut queue = VecDeque::from([(i, j)]);
                label[i * nc + j] = id;
                while let Some((r, c)) = queue.pop_front() {
                    size += 1;
                    let mut nb = Vec::with_capacity(4);
                    if r > 0 {
                        nb.push((r - 1, c));
                    }
                    if r + 1 < nr {
                        nb.push((r + 1, c));
                    }
                    if c > 0 {
                        nb.push((r, c - 1));
                    }
                    if c + 1 < nc {
                        nb.push((r, c + 1));
                    }
                    for (a, b) in nb {
                        if above(a, b) && label[a * nc + b] == usize::MAX {
                            label[a * nc + b] = id;
                            queue.push_back((a, b));
                        }
                    }
                }
                sizes.push(size);
            }
        }
        let largest = sizes
            .iter()
            .enumerate()
            .max_by_key(|(_, s)| **s)
            .map(|(i, _)| i);
        let origin_label = label[origin.0 * nc + origin.1];
        RegionReport {
            cells_above_one: sizes.iter().sum(),
            unstable_cells: self.cells.iter().filter(|c| c.f.is_none()).count(),
            components: sizes.len(),
            largest_component: largest.map_or(0, |i| sizes[i]),
            origin,
            origin_above_one: above(origin.0, origin.1),
            origin_in_largest: largest.is_some_and(|l| l == origin_label),
        }
    }
}
