use num_complex::Complex64;

use super::{SystemModel, Topology};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Drift matrix of the linearized Langevin equations in the basis
/// `(δj₀, δj₀†, δj₁, δj₁†, …)`.
///
/// Each coupling between a high mode `h` and a low mode `l` contributes
/// `-iG(δl + δl†)` to the `δh` row and `-i(G δh† + G* δh)` to the `δl` row,
/// plus the conjugate rows.
pub fn drift_matrix(model: &SystemModel) -> ComplexMatrix {
    let n = model.mode_count();
    let mut m = ComplexMatrix::zeros(2 * n, 2 * n);
    for (k, mode) in model.modes.iter().enumerate() {
        m[(2 * k, 2 * k)] = -(I * mode.detuning + mode.kappa / 2.0);
        m[(2 * k + 1, 2 * k + 1)] = I * mode.detuning - mode.kappa / 2.0;
    }
    for (i, c) in model.couplings.iter().enumerate() {
        let (h, l) = SystemModel::coupling_ends(i);
        let g = c.complex();
        let gc = g.conj();
        m[(2 * h, 2 * l)] += -I * g;
        m[(2 * h, 2 * l + 1)] += -I * g;
        m[(2 * h + 1, 2 * l)] += I * gc;
        m[(2 * h + 1, 2 * l + 1)] += I * gc;
        m[(2 * l, 2 * h)] += -I * gc;
        m[(2 * l, 2 * h + 1)] += -I * g;
        m[(2 * l + 1, 2 * h)] += I * gc;
        m[(2 * l + 1, 2 * h + 1)] += I * g;
    }
    m
}

fn expect(model: &SystemModel, want: fn(&Topology) -> bool, name: &str) -> Result<()> {
    if want(&model.topology) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} called on topology {}",
            model.topology
        )))
    }
}

/// 4×4 drift matrix of a dispersive unit `(a, b)`.
pub fn build_drift_matrix_du(model: &SystemModel) -> Result<ComplexMatrix> {
    expect(model, |t| matches!(t, Topology::Du), "build_drift_matrix_du")?;
    Ok(drift_matrix(model))
}

/// 6×6 drift matrix of the `(m, b, c)` system.
pub fn build_drift_matrix_three(model: &SystemModel) -> Result<ComplexMatrix> {
    expect(model, |t| matches!(t, Topology::ThreeMode), "build_drift_matrix_three")?;
    Ok(drift_matrix(model))
}

/// 2N×2N drift matrix of an N-mode chain.
pub fn build_drift_matrix_chain(model: &SystemModel) -> Result<ComplexMatrix> {
    expect(model, |t| matches!(t, Topology::Chain(_)), "build_drift_matrix_chain")?;
    Ok(drift_matrix(model))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CouplingParams, ModeParams};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn du(delta: f64, kappa_a: f64, g: f64, theta: f64) -> SystemModel {
        SystemModel::du(
            ModeParams::new("a", 1e15, kappa_a, delta),
            ModeParams::new("b", 2e7 * std::f64::consts::PI, 1e-4, 1.0),
            CouplingParams::new(g, theta),
            0.01,
        )
        .unwrap()
    }

    #[test]
    fn decoupled_du_is_diagonal() {
        let m = build_drift_matrix_du(&du(0.0, 0.7, 0.0, 0.0)).unwrap();
        let want = ComplexMatrix::from_diag(&[c(-0.35, 0.0), c(-0.35, 0.0), c(-5e-5, -1.0), c(-5e-5, 1.0)]);
        assert_eq!(m, want);
    }

    #[test]
    fn du_template_first_row() {
        let m = build_drift_matrix_du(&du(0.0, 1.0, 0.1, 0.0)).unwrap();
        assert_eq!(m.row(0), &[c(-0.5, 0.0), c(0.0, 0.0), c(0.0, -0.1), c(0.0, -0.1)]);
    }

    #[test]
    fn du_template_all_rows() {
        let g = Complex64::from_polar(0.3, 0.8);
        let (da, ka, kb) = (0.4, 0.9, 0.02);
        let model = SystemModel::du(
            ModeParams::new("a", 1.0, ka, da),
            ModeParams::new("b", 1.0, kb, 1.0),
            CouplingParams::new(0.3, 0.8),
            0.0,
        )
        .unwrap();
        let m = build_drift_matrix_du(&model).unwrap();
        let z = c(0.0, 0.0);
        let want = ComplexMatrix::from_rows(&[
            vec![-(I * da + ka / 2.0), z, -I * g, -I * g],
            vec![z, I * da - ka / 2.0, I * g.conj(), I * g.conj()],
            vec![-I * g.conj(), -I * g, -(I + kb / 2.0), z],
            vec![I * g.conj(), I * g, z, I - kb / 2.0],
        ])
        .unwrap();
        assert!(m.max_abs_diff(&want) < 1e-16);
    }

    #[test]
    fn wrong_topology_is_rejected() {
        assert!(build_drift_matrix_three(&du(0.0, 1.0, 0.1, 0.0)).is_err());
    }
}
