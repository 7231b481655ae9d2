use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// LU factorization with partial pivoting, `P A = L U`, stored packed.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if !a.is_finite() {
            return Err(Error::NonFinite { row: 0, col: 0 });
        }
        let n = a.rows();
        let tol = f64::EPSILON * (n as f64) * a.norm_inf();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;

        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|r| (r, lu[(r, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmag <= tol || pmag == 0.0 {
                return Err(Error::Singular { pivot: k });
            }
            if p != k {
                for c in 0..n {
                    let tmp = lu[(k, c)];
                    lu[(k, c)] = lu[(p, c)];
                    lu[(p, c)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let inv = lu[(k, k)].inv();
            for r in (k + 1)..n {
                let f = lu[(r, k)] * inv;
                lu[(r, k)] = f;
                if f.re == 0.0 && f.im == 0.0 {
                    continue;
                }
                for c in (k + 1)..n {
                    let u = lu[(k, c)];
                    lu[(r, c)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(Error::Dimension(format!(
                "right-hand side has {} rows, expected {}",
                b.rows(),
                n
            )));
        }
        let mut x = ComplexMatrix::zeros(n, b.cols());
        for c in 0..b.cols() {
            let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[(p, c)]).collect();
            for i in 0..n {
                let mut s = y[i];
                for j in 0..i {
                    s -= self.lu[(i, j)] * y[j];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in (i + 1)..n {
                    s -= self.lu[(i, j)] * y[j];
                }
                y[i] = s / self.lu[(i, i)];
            }
            for i in 0..n {
                x[(i, c)] = y[i];
            }
        }
        Ok(x)
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.lu.rows();
        (0..n).fold(Complex64::new(self.sign, 0.0), |d, i| d * self.lu[(i, i)])
    }
}

/// Solves `A X = B`.
pub fn lu_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    Lu::factor(a)?.solve(b)
}

/// Inverse with one step of iterative refinement, which recovers a few
/// digits near resonances where `iωΛ − M` is badly conditioned.
pub fn invert(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let lu = Lu::factor(a)?;
    let id = ComplexMatrix::identity(a.rows());
    let x = lu.solve(&id)?;
    let r = &id - &(a * &x);
    Ok(&x + &lu.solve(&r)?)
}
