use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BareDriveParams, CouplingParams, ModeParams};
use crate::error::{Error, Result};

/// Relative tolerance on the cubic discriminant for flagging a double root.
pub const DEGENERATE_TOL: f64 = 1e-9;

/// One self-consistent mean-field solution. Amplitudes are dimensionless,
/// detuning is in units of `ω_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyBranch {
    pub a: Complex64,
    pub b: Complex64,
    pub effective_detuning: f64,
    /// `|⟨a⟩|²`
    pub occupation: f64,
    /// Largest relative residual of the two fixed-point equations.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchSelection {
    /// Smallest intracavity occupation, connected to zero drive.
    #[default]
    Lowest,
    Highest,
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    /// Real branches ordered by increasing occupation.
    pub branches: Vec<SteadyBranch>,
    pub selected: usize,
    /// Set when the cubic discriminant vanishes within tolerance.
    pub degenerate: bool,
}

impl SteadyState {
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branch(&self) -> &SteadyBranch {
        &self.branches[self.selected]
    }

    pub fn a(&self) -> Complex64 {
        self.branch().a
    }

    pub fn b(&self) -> Complex64 {
        self.branch().b
    }

    pub fn effective_detuning(&self) -> f64 {
        self.branch().effective_detuning
    }

    /// Linearized coupling `G = g⟨a⟩` in units of `ω_b`.
    pub fn coupling(&self, bare: &BareDriveParams, b_mode: &ModeParams) -> CouplingParams {
        CouplingParams::from_complex(self.a() * (bare.g / b_mode.absolute_frequency))
    }
}

/// Solves the mean-field fixed point of a driven dispersive unit.
///
/// `high` carries the cavity frequency and damping, `low` the reference mode.
/// Bare parameters are in rad/s and are rescaled by the low mode's absolute
/// frequency. The occupation `n = |⟨a⟩|²` obeys
/// `η²n³ − 2Δ₀ηn² + (Δ₀² + κ²/4)n − ε² = 0` with `η = 2g²ω_b/(ω_b² + κ_b²/4)`.
pub fn solve_steady_state(
    bare: &BareDriveParams,
    high: &ModeParams,
    low: &ModeParams,
    selection: BranchSelection,
) -> Result<SteadyState> {
    bare.validate()?;
    high.validate("high")?;
    low.validate("low")?;
    let unit = low.absolute_frequency;
    let d0 = (high.absolute_frequency - bare.drive_frequency) / unit;
    let g = bare.g / unit;
    let eps = bare.epsilon / unit;
    let (kappa, kappa_b, wb) = (high.kappa, low.kappa, low.detuning);

    let branch = |n: f64| -> SteadyBranch {
        let eta = 2.0 * g * g * wb / (wb * wb + kappa_b * kappa_b / 4.0);
        let dt = d0 - eta * n;
        let a = Complex64::new(eps, 0.0) / Complex64::new(kappa / 2.0, dt);
        let b = Complex64::new(0.0, -g * a.norm_sqr()) / Complex64::new(kappa_b / 2.0, wb);
        // substitute back into both equations independently
        let dt_from_b = d0 + g * 2.0 * b.re;
        let a_rhs = Complex64::new(eps, 0.0) / Complex64::new(kappa / 2.0, dt_from_b);
        let b_rhs = Complex64::new(0.0, -g * a.norm_sqr()) / Complex64::new(kappa_b / 2.0, wb);
        let rel = |x: Complex64, y: Complex64| {
            let s = x.norm().max(y.norm());
            if s == 0.0 {
                0.0
            } else {
                (x - y).norm() / s
            }
        };
        SteadyBranch {
            a,
            b,
            effective_detuning: dt_from_b,
            occupation: a.norm_sqr(),
            residual: rel(a, a_rhs).max(rel(b, b_rhs)),
        }
    };

    let (roots, degenerate) = if eps == 0.0 {
        (vec![0.0], false)
    } else {
        let eta = 2.0 * g * g * wb / (wb * wb + kappa_b * kappa_b / 4.0);
        occupation_roots(eta, d0, kappa, eps)
    };
    let branches: Vec<SteadyBranch> = roots.into_iter().map(branch).collect();
    let selected = match selection {
        BranchSelection::Lowest => 0,
        BranchSelection::Highest => branches.len() - 1,
        BranchSelection::Index(i) if i < branches.len() => i,
        BranchSelection::Index(i) => {
            return Err(Error::InvalidParameter(format!(
                "branch {i} requested but only {} exist",
                branches.len()
            )))
        }
    };
    Ok(SteadyState {
        branches,
        selected,
        degenerate,
    })
}

/// Real roots of `η²n³ − 2Δ₀ηn² + (Δ₀² + κ²/4)n − ε²`, ascending.
fn occupation_roots(eta: f64, d0: f64, kappa: f64, eps: f64) -> (Vec<f64>, bool) {
    let c1 = d0 * d0 + kappa * kappa / 4.0;
    let e2 = eps * eps;
    if eta == 0.0 {
        return (vec![e2 / c1], false);
    }
    let poly = |n: f64| ((eta * eta * n - 2.0 * d0 * eta) * n + c1) * n - e2;
    let dpoly = |n: f64| (3.0 * eta * eta * n - 4.0 * d0 * eta) * n + c1;

    // monic form n³ + b n² + c n + d
    let b = -2.0 * d0 / eta;
    let c = c1 / (eta * eta);
    let d = -e2 / (eta * eta);
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    let scale = 4.0 * (p * p * p).abs() + 27.0 * q * q;
    let degenerate = disc.abs() <= DEGENERATE_TOL * scale;

    let mut ts = if disc > 0.0 || (degenerate && p < 0.0) {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3).map(|k| r * (phi - 2.0 * PI * k as f64 / 3.0).cos()).collect::<Vec<_>>()
    } else {
        let s = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt()]
    };
    for t in &mut ts {
        let mut n = *t - b / 3.0;
        for _ in 0..50 {
            let dp = dpoly(n);
            if dp == 0.0 {
                break;
            }
            let step = poly(n) / dp;
            n -= step;
            if step.abs() <= 1e-16 * n.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        *t = n;
    }
    ts.sort_by(f64::total_cmp);
    (ts, degenerate)
}

#[cfg(test)]
mod tests {
    use super::*;

    const WB: f64 = 2.0 * PI * 1e7;

    fn modes(kappa: f64, kappa_b: f64, omega_a: f64) -> (ModeParams, ModeParams) {
        (
            ModeParams::new("a", omega_a, kappa, 0.0),
            ModeParams::new("b", WB, kappa_b, 1.0),
        )
    }

    #[test]
    fn zero_drive_gives_exact_zeros() {
        let (a, b) = modes(0.5, 1e-4, 1e15);
        let bare = BareDriveParams {
            g: 1e3,
            epsilon: 0.0,
            drive_frequency: 1e15 - 0.3 * WB,
        };
        let s = solve_steady_state(&bare, &a, &b, BranchSelection::Lowest).unwrap();
        assert_eq!(s.branch_count(), 1);
        assert_eq!(s.a(), Complex64::new(0.0, 0.0));
        assert_eq!(s.b(), Complex64::new(0.0, 0.0));
        assert!((s.effective_detuning() - 0.3).abs() < 1e-6);
    }

    #[test]
    fn uncoupled_is_linear_cavity() {
        let (a, b) = modes(0.5, 1e-4, 1e15);
        let bare = BareDriveParams {
            g: 0.0,
            epsilon: 3.0 * WB,
            drive_frequency: 1e15 - 0.2 * WB,
        };
        let s = solve_steady_state(&bare, &a, &b, BranchSelection::Lowest).unwrap();
        let d = (1e15 - bare.drive_frequency) / WB;
        let want = Complex64::new(3.0, 0.0) / Complex64::new(0.25, d);
        assert!((s.a() - want).norm() < 1e-12 * want.norm());
        assert_eq!(s.b(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn out_of_range_branch_index() {
        let (a, b) = modes(0.5, 1e-4, 1e15);
        let bare = BareDriveParams {
            g: 0.0,
            epsilon: 1.0,
            drive_frequency: 1e15,
        };
        assert!(solve_steady_state(&bare, &a, &b, BranchSelection::Index(2)).is_err());
    }
}
