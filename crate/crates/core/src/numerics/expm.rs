use num_complex::Complex64;

use super::{invert, ComplexMatrix};
use crate::error::Result;

/// Matrix exponential by scaling and squaring with a (6, 6) Padé approximant.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    let norm = a.norm_inf();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale(Complex64::new(0.5f64.powi(s), 0.0));

    // c_k = (2p-k)! p! / ((2p)! k! (p-k)!), p = 6
    const C: [f64; 7] = [
        1.0,
        0.5,
        5.0 / 44.0,
        1.0 / 66.0,
        1.0 / 792.0,
        1.0 / 15840.0,
        1.0 / 665280.0,
    ];
    let mut num = ComplexMatrix::identity(n);
    let mut den = ComplexMatrix::identity(n);
    let mut power = ComplexMatrix::identity(n);
    for (k, &ck) in C.iter().enumerate().skip(1) {
        power = &power * &scaled;
        let term = power.scale(Complex64::new(ck, 0.0));
        num = &num + &term;
        den = if k % 2 == 0 { &den + &term } else { &den - &term };
    }
    let mut e = &invert(&den)? * &num;
    for _ in 0..s {
        e = &e * &e;
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_exponential() {
        let d = [Complex64::new(-1.0, 2.0), Complex64::new(3.0, 0.0)];
        let e = expm(&ComplexMatrix::from_diag(&d)).unwrap();
        for (i, di) in d.iter().enumerate() {
            assert!((e[(i, i)] - di.exp()).norm() < 1e-12 * di.exp().norm());
        }
        assert!(e[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn rotation_exponential() {
        let t = 7.3;
        let a = ComplexMatrix::from_real(2, 2, &[0.0, t, -t, 0.0]).unwrap();
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-12);
        assert!((e[(0, 1)].re - t.sin()).abs() < 1e-12);
        assert!((e[(1, 0)].re + t.sin()).abs() < 1e-12);
    }

    #[test]
    fn nilpotent_exponential() {
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
        let e = expm(&a).unwrap();
        assert!((e[(0, 1)].re - 2.0).abs() < 1e-14);
        assert!((e[(0, 0)].re - 1.0).abs() < 1e-14);
    }
}
