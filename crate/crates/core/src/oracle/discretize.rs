//! Real-coordinate form of the linear Langevin system and its exact
//! one-step Gaussian transition.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{cholesky_psd, expm, lu_solve, ComplexMatrix};

/// Largest tolerated imaginary part of the real drift, relative to its norm.
pub const PAIR_TOLERANCE: f64 = 1e-8;

/// `dx = A x dt + L dV` with `x = (Re δj₀, Im δj₀, Re δj₁, …)` and
/// independent real noise `dV` of intensity `q`.
#[derive(Debug, Clone)]
pub struct RealSystem {
    pub dim: usize,
    /// Row-major `dim × dim`.
    pub a: Vec<f64>,
    pub sqrt_kappa: Vec<f64>,
    pub q: Vec<f64>,
}

impl RealSystem {
    /// Maps the complex drift onto real coordinates with `z = U x`,
    /// `U = [[1, i], [1, −i]]` per mode, and checks that the result is real,
    /// i.e. that the conjugate-pair structure holds.
    pub fn from_drift(m: &ComplexMatrix, sqrt_kappa: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let dim = m.rows();
        let mut u = ComplexMatrix::zeros(dim, dim);
        let mut u_inv = ComplexMatrix::zeros(dim, dim);
        let i = Complex64::new(0.0, 1.0);
        for k in 0..dim / 2 {
            let (r, s) = (2 * k, 2 * k + 1);
            u[(r, r)] = 1.0.into();
            u[(r, s)] = i;
            u[(s, r)] = 1.0.into();
            u[(s, s)] = -i;
            u_inv[(r, r)] = 0.5.into();
            u_inv[(r, s)] = 0.5.into();
            u_inv[(s, r)] = -i * 0.5;
            u_inv[(s, s)] = i * 0.5;
        }
        let ac = &(&u_inv * m) * &u;
        let scale = ac.max_abs().max(f64::MIN_POSITIVE);
        let worst = ac.as_slice().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if worst > PAIR_TOLERANCE * scale {
            return Err(Error::IntegrationQuality(format!(
                "drift breaks the conjugate-pair structure (relative imaginary part {:.3e})",
                worst / scale
            )));
        }
        Ok(Self {
            dim,
            a: ac.real_part(),
            sqrt_kappa,
            q,
        })
    }

    fn a_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real(self.dim, self.dim, &self.a).expect("finite drift")
    }

    /// Stationary covariance from `A P + P Aᵀ + L Q L = 0`.
    pub fn stationary_covariance(&self) -> Result<Vec<f64>> {
        let d = self.dim;
        let nn = d * d;
        // vec(A P + P Aᵀ) = (I ⊗ A + A ⊗ I) vec(P), row-major vec
        let mut k = ComplexMatrix::zeros(nn, nn);
        for i in 0..d {
            for j in 0..d {
                let row = i * d + j;
                for l in 0..d {
                    k[(row, l * d + j)] += Complex64::from(self.a[i * d + l]);
                    k[(row, i * d + l)] += Complex64::from(self.a[j * d + l]);
                }
            }
        }
        let mut rhs = ComplexMatrix::zeros(nn, 1);
        for i in 0..d {
            rhs[(i * d + i, 0)] = (-self.sqrt_kappa[i] * self.sqrt_kappa[i] * self.q[i]).into();
        }
        let p = lu_solve(&k, &rhs)?;
        let mut out = vec![0.0; nn];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = 0.5 * (p[(i * d + j, 0)].re + p[(j * d + i, 0)].re);
            }
        }
        Ok(out)
    }
}

/// Exact transition over one step `h`:
/// `x' = Φx + ζ`, step-averaged output `ȳ = (L(Kx + μ) − ΔV)/h`, with
/// `(ζ, μ, ΔV)` jointly Gaussian.
#[derive(Debug, Clone)]
pub struct ExactStep {
    pub dim: usize,
    pub h: f64,
    pub phi: Vec<f64>,
    /// `L K / h`, row-major.
    pub lk_over_h: Vec<f64>,
    /// Cholesky factor of the `3·dim` joint noise covariance.
    pub chol: Vec<f64>,
}

impl ExactStep {
    pub fn new(sys: &RealSystem, h: f64) -> Result<Self> {
        let d = sys.dim;
        let a = sys.a_matrix();

        // [[A, I], [0, 0]] h  ->  [[Φ, K], [0, I]]
        let mut z = ComplexMatrix::zeros(2 * d, 2 * d);
        z.set_block(0, 0, &a.scale(h.into()));
        z.set_block(0, d, &ComplexMatrix::identity(d).scale(h.into()));
        let e = expm(&z)?;
        let phi = e.block(0, 0, d, d).real_part();
        let kmat = e.block(0, d, d, d).real_part();
        let mut lk_over_h = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                lk_over_h[i * d + j] = sys.sqrt_kappa[i] * kmat[i * d + j] / h;
            }
        }

        // Van Loan on w = (ζ, μ, V): dw = F w dt + G dV
        let n3 = 3 * d;
        let mut f = ComplexMatrix::zeros(n3, n3);
        f.set_block(0, 0, &a);
        f.set_block(d, 0, &ComplexMatrix::identity(d));
        let mut gqg = ComplexMatrix::zeros(n3, n3);
        for i in 0..d {
            let (l, q) = (sys.sqrt_kappa[i], sys.q[i]);
            gqg[(i, i)] = (l * l * q).into();
            gqg[(i, 2 * d + i)] = (l * q).into();
            gqg[(2 * d + i, i)] = (l * q).into();
            gqg[(2 * d + i, 2 * d + i)] = q.into();
        }
        let mut vl = ComplexMatrix::zeros(2 * n3, 2 * n3);
        vl.set_block(0, 0, &f.scale((-h).into()));
        vl.set_block(0, n3, &gqg.scale(h.into()));
        vl.set_block(n3, n3, &f.transpose().scale(h.into()));
        let c = expm(&vl)?;
        let c12 = c.block(0, n3, n3, n3);
        let c22 = c.block(n3, n3, n3, n3);
        let qd = &c22.transpose() * &c12;
        let mut cov = vec![0.0; n3 * n3];
        for i in 0..n3 {
            for j in 0..n3 {
                cov[i * n3 + j] = 0.5 * (qd[(i, j)].re + qd[(j, i)].re);
            }
        }
        let chol = cholesky_psd(&cov, n3, 1e-13)?;
        Ok(Self {
            dim: d,
            h,
            phi,
            lk_over_h,
            chol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Single damped mode: Φ = e^{-κh/2} R(Δh), stationary variance q per
    /// component.
    #[test]
    fn single_mode_transition() {
        let (kappa, delta, h) = (0.4, 0.9, 0.05);
        let m = ComplexMatrix::from_diag(&[
            Complex64::new(-kappa / 2.0, -delta),
            Complex64::new(-kappa / 2.0, delta),
        ]);
        let q = 0.3;
        let sys = RealSystem::from_drift(&m, vec![kappa.sqrt(); 2], vec![q; 2]).unwrap();
        // d(Re z)/dt = -κ/2 Re z + Δ Im z
        assert!((sys.a[0] + kappa / 2.0).abs() < 1e-15);
        assert!((sys.a[1] - delta).abs() < 1e-15);
        let p = sys.stationary_covariance().unwrap();
        assert!((p[0] - q).abs() < 1e-12 && (p[3] - q).abs() < 1e-12 && p[1].abs() < 1e-12);

        let step = ExactStep::new(&sys, h).unwrap();
        let decay = (-kappa * h / 2.0).exp();
        assert!((step.phi[0] - decay * (delta * h).cos()).abs() < 1e-13);
        assert!((step.phi[1] - decay * (delta * h).sin()).abs() < 1e-13);
        // the ζ block of the joint covariance is q(1 - e^{-κh})
        let n3 = 6;
        let l = &step.chol;
        let zz: f64 = (0..n3).map(|k| l[k] * l[k]).sum();
        assert!((zz - q * (1.0 - (-kappa * h).exp())).abs() < 1e-12);
    }

    #[test]
    fn rejects_broken_pair_structure() {
        let m = ComplexMatrix::from_diag(&[Complex64::new(-1.0, 0.0), Complex64::new(-2.0, 0.0)]);
        assert!(matches!(
            RealSystem::from_drift(&m, vec![1.0; 2], vec![1.0; 2]),
            Err(Error::IntegrationQuality(_))
        ));
    }
}
