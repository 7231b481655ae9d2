mod common;

use common::*;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sasc::numerics::{eigenvalues, invert, lu_solve};
use sasc::ComplexMatrix;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ComplexMatrix::from_vec(n, n, data).unwrap()
}

/// Random entries plus a diagonal shift keeps the condition number modest.
fn well_conditioned(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let mut a = random_matrix(rng, n);
    for i in 0..n {
        a[(i, i)] += c(n as f64, 0.0);
    }
    a
}

fn residual_from_identity(a: &ComplexMatrix, x: &ComplexMatrix) -> f64 {
    (&(a * x) - &ComplexMatrix::identity(a.rows())).max_abs()
}

#[test]
fn inverse_residual_on_a_thousand_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let worst = (0..1000)
        .map(|_| {
            let a = well_conditioned(&mut rng, 6);
            residual_from_identity(&a, &invert(&a).unwrap())
        })
        .fold(0.0, f64::max);
    assert!(worst < 1e-12, "worst residual {worst:e}");
}

#[test]
fn solve_residual_on_a_thousand_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let a = well_conditioned(&mut rng, 6);
        let b = random_matrix(&mut rng, 6);
        let x = lu_solve(&a, &b).unwrap();
        assert!((&(&a * &x) - &b).max_abs() < 1e-12);
    }
}

#[test]
fn inverse_matches_cofactor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in [4, 6] {
        for _ in 0..20 {
            let a = well_conditioned(&mut rng, n);
            let want = cofactor_inverse(&rows(&a));
            let got = invert(&a).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert!((got[(i, j)] - want[i][j]).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn double_inverse_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let a = well_conditioned(&mut rng, 6);
        let back = invert(&invert(&a).unwrap()).unwrap();
        assert!(back.max_abs_diff(&a) < 1e-10);
    }
}

#[test]
fn eigenvalues_match_characteristic_polynomial_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in [2, 3, 4, 5, 6] {
        for _ in 0..50 {
            let a = random_matrix(&mut rng, n);
            let want = poly_roots(&charpoly(&rows(&a)));
            let got = eigenvalues(&a).unwrap();
            let d = set_distance(&got, &want);
            assert!(d < 1e-8, "n={n}: distance {d:e}\n{a:?}");
        }
    }
}

#[test]
fn drift_spectrum_is_closed_under_conjugation() {
    // P M* P = M, so eig(M) is a conjugate-closed set
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let m = random_stable(&mut rng).drift();
        let ev = eigenvalues(&m).unwrap();
        let swapped = eigenvalues(&m.conj().pair_swapped()).unwrap();
        let conj: Vec<C> = ev.iter().map(|z| z.conj()).collect();
        assert!(set_distance(&swapped, &ev) < 1e-9);
        assert!(set_distance(&conj, &ev) < 1e-9);
    }
}
