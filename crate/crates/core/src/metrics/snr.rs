use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemModel;
use crate::numerics::{linspace, refine_from_samples};
use crate::spectra::{input_noise, snr_point, SpectrumOptions, TransferEngine};

/// Inclusive, evenly sampled frequency window in units of `ω_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridRange {
    pub const fn new(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points }
    }

    pub fn samples(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.points)
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.max < self.min {
            return Err(Error::InvalidParameter(format!(
                "{path}: need finite min <= max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.points == 0 || (self.points > 1 && self.max == self.min) {
            return Err(Error::InvalidParameter(format!("{path}.points is inconsistent with the range")));
        }
        Ok(())
    }
}

/// Default SNR search window `[−3ω_b, 3ω_b]`.
pub const DEFAULT_SEARCH: GridRange = GridRange::new(-3.0, 3.0, 401);

/// Minimum number of coarse samples for the SNR maximization.
pub const MIN_SEARCH_POINTS: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrMax {
    pub omega: f64,
    pub snr: f64,
    pub s_ap: f64,
}

/// Ports and phase of an SNR measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Readout {
    pub signal: usize,
    pub readout: usize,
    pub options: SpectrumOptions,
}

impl Readout {
    /// Signal on the first mode, readout on the last.
    pub fn end_to_end(model: &SystemModel, options: SpectrumOptions) -> Self {
        Self {
            signal: 0,
            readout: model.mode_count() - 1,
            options,
        }
    }
}

/// Uniform samples on `[lo, hi]` plus clusters around every pole whose
/// centre falls inside: multiples of the pole's half width and a decade
/// ladder `{1, 2, 5}·10^k`, `k = −6..−1`. Lines far narrower than the
/// uniform spacing are otherwise stepped over. Undamped poles (real `ω`,
/// which the alternating convention produces) have their centre left out.
pub fn resonance_grid(engine: &TransferEngine, lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    const WIDTHS: [f64; 7] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0];
    let mut grid = linspace(lo, hi, points);
    for p in engine.poles()? {
        let width = p.im.abs();
        let undamped = width <= 1e-9 * (1.0 + p.re.abs());
        let mut offsets: Vec<f64> = (-6..=-1)
            .flat_map(|k| [1.0, 2.0, 5.0].map(|m| m * 10f64.powi(k)))
            .collect();
        if !undamped {
            grid.push(p.re);
            offsets.extend(WIDTHS.map(|o| o * width));
        }
        for o in offsets {
            grid.push(p.re - o);
            grid.push(p.re + o);
        }
    }
    grid.retain(|w| *w >= lo && *w <= hi);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

/// Scan over at least 401 uniform points plus resonance clusters, then
/// golden-section refinement on the best bracket.
pub fn max_snr_over_omega(model: &SystemModel, search: &GridRange, readout: &Readout) -> Result<SnrMax> {
    search.validate("omega_search")?;
    let engine = TransferEngine::new(model, readout.options.convention)?;
    let noise = input_noise(model);
    let points = search.points.max(MIN_SEARCH_POINTS);
    let grid = resonance_grid(&engine, search.min, search.max, points)?;
    let eval = |w: f64| snr_point(&engine, &noise, w, readout.signal, readout.readout, readout.options.psi);
    // a cluster centre can land exactly on an undamped line
    let sample = |w: f64| match eval(w) {
        Ok(r) => Ok(Some(r.1)),
        Err(Error::Singular { .. }) => Ok(None),
        Err(e) => Err(e),
    };

    // the coarse scan is the expensive part, parallelize it
    let coarse: Vec<Option<f64>> = grid
        .par_iter()
        .map(|&w| sample(w))
        .collect::<Result<_>>()?;
    let found = refine_from_samples(&grid, &coarse, sample, 1e-10)?;
    let (omega, snr) = found.ok_or_else(|| Error::Degenerate("SNR undefined on the whole search grid".into()))?;
    let s_ap = eval(omega)?.0;
    Ok(SnrMax { omega, snr, s_ap })
}
