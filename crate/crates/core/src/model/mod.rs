//! Physical parameters, drift matrices, mean fields and stability.

mod drift;
mod params;
mod stability;
mod steady;

pub use drift::{build_drift_matrix_chain, build_drift_matrix_du, build_drift_matrix_three, drift_matrix};
pub use params::{BareDriveParams, CouplingParams, ModeParams, SystemModel, Topology};
pub use stability::{check_stability, StabilityVerdict, STABILITY_MARGIN};
pub use steady::{solve_steady_state, BranchSelection, SteadyBranch, SteadyState, DEGENERATE_TOL};

impl SystemModel {
    pub fn drift(&self) -> crate::numerics::ComplexMatrix {
        drift_matrix(self)
    }

    pub fn stability(&self) -> crate::Result<StabilityVerdict> {
        check_stability(&self.drift())
    }
}
