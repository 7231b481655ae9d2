use crate::error::{Error, Result};

/// Lower-triangular factor `L` with `L Lᵀ = A` for a symmetric positive
/// semidefinite real matrix stored row-major.
///
/// Pivots below `rel_tol * max(diag)` are treated as exact zeros, which makes
/// the factorization usable for rank-deficient covariances.
pub fn cholesky_psd(a: &[f64], n: usize, rel_tol: f64) -> Result<Vec<f64>> {
    if a.len() != n * n {
        return Err(Error::Dimension(format!("expected {}x{} matrix", n, n)));
    }
    let max_diag = (0..n).map(|i| a[i * n + i]).fold(0.0, f64::max);
    let tol = rel_tol * max_diag.max(f64::MIN_POSITIVE);
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d < -tol {
            return Err(Error::Degenerate(format!(
                "matrix is not positive semidefinite (pivot {j} = {d:.3e})"
            )));
        }
        if d <= tol {
            continue;
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(l: &[f64], n: usize) -> Vec<f64> {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = (0..n).map(|k| l[i * n + k] * l[j * n + k]).sum();
            }
        }
        a
    }

    #[test]
    fn positive_definite() {
        let a = [4.0, 2.0, 0.4, 2.0, 5.0, 1.0, 0.4, 1.0, 3.0];
        let l = cholesky_psd(&a, 3, 1e-14).unwrap();
        for (x, y) in reconstruct(&l, 3).iter().zip(&a) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn rank_deficient() {
        // v vᵀ with v = (1, 2, 0)
        let a = [1.0, 2.0, 0.0, 2.0, 4.0, 0.0, 0.0, 0.0, 0.0];
        let l = cholesky_psd(&a, 3, 1e-12).unwrap();
        for (x, y) in reconstruct(&l, 3).iter().zip(&a) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn indefinite_is_rejected() {
        assert!(cholesky_psd(&[1.0, 0.0, 0.0, -1.0], 2, 1e-12).is_err());
    }
}
