//! Figures of merit and deterministic parameter searches.

mod compare;
mod phase;
mod snr;

pub use compare::{f_factor, f_map, ComparisonConfig, MapCell, MapResult, RegionReport, ICS_DETUNING, ICS_KAPPA};
pub use phase::{
    find_phase_for_target_r, independence_check, search_phase, AsymmetryIndex, IndependenceReport, PhaseSearch,
    EXACT_RESIDUAL,
};
pub use snr::{max_snr_over_omega, resonance_grid, GridRange, Readout, SnrMax, DEFAULT_SEARCH, MIN_SEARCH_POINTS};
