//! Independent reference computations shared by the integration tests.
//! Nothing here calls the library's LU or QR code.
#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64 as C;
use rand::Rng;
use sasc::model::{CouplingParams, ModeParams, SystemModel};
use sasc::spectra::Convention;
use sasc::ComplexMatrix;

pub const WB: f64 = TAU * 1e7;
pub const WA: f64 = TAU * 1e10;
pub const WC: f64 = 1.7703e15;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rows(a: &ComplexMatrix) -> Vec<Vec<C>> {
    (0..a.rows()).map(|r| a.row(r).to_vec()).collect()
}

/// Determinant by Laplace expansion along the first row.
pub fn det(a: &[Vec<C>]) -> C {
    let n = a.len();
    match n {
        0 => c(1.0, 0.0),
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        _ => {
            let mut sum = c(0.0, 0.0);
            for j in 0..n {
                if a[0][j] == c(0.0, 0.0) {
                    continue;
                }
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sum += a[0][j] * sign * det(&minor(a, 0, j));
            }
            sum
        }
    }
}

fn minor(a: &[Vec<C>], r: usize, col: usize) -> Vec<Vec<C>> {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, z)| *z).collect())
        .collect()
}

/// Inverse as adjugate over determinant.
pub fn cofactor_inverse(a: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = a.len();
    let d = det(a);
    let mut inv = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            inv[j][i] = det(&minor(a, i, j)) * sign / d;
        }
    }
    inv
}

fn matmul(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// Monic characteristic polynomial coefficients, highest power first,
/// by the Faddeev–LeVerrier recursion.
pub fn charpoly(a: &[Vec<C>]) -> Vec<C> {
    let n = a.len();
    let mut coeffs = vec![c(1.0, 0.0)];
    let mut m = vec![vec![c(0.0, 0.0); n]; n];
    let mut prev = c(1.0, 0.0);
    for k in 1..=n {
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += prev;
        }
        m = matmul(a, &m);
        let tr: C = (0..n).map(|i| m[i][i]).sum();
        prev = -tr / k as f64;
        coeffs.push(prev);
    }
    coeffs
}

fn horner(p: &[C], x: C) -> C {
    p.iter().fold(c(0.0, 0.0), |acc, &k| acc * x + k)
}

fn derivative(p: &[C]) -> Vec<C> {
    let n = p.len() - 1;
    p[..n].iter().enumerate().map(|(i, &k)| k * (n - i) as f64).collect()
}

/// Roots of a monic polynomial by Durand–Kerner iteration, polished by Newton.
pub fn poly_roots(p: &[C]) -> Vec<C> {
    let n = p.len() - 1;
    let scale = 1.0 + p.iter().skip(1).map(|z| z.norm()).fold(0.0, f64::max);
    let seed = c(0.4, 0.9);
    let mut z: Vec<C> = (0..n).map(|k| seed.powu(k as u32) * scale).collect();
    for _ in 0..5000 {
        let mut delta = 0.0_f64;
        for i in 0..n {
            let denom: C = (0..n).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            let step = horner(p, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * scale {
            break;
        }
    }
    let dp = derivative(p);
    for r in &mut z {
        for _ in 0..3 {
            let d = horner(&dp, *r);
            if d.norm() > 0.0 {
                *r -= horner(p, *r) / d;
            }
        }
    }
    z
}

/// Largest distance in a greedy nearest matching of two equal-size sets.
pub fn set_distance(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut left: Vec<C> = b.to_vec();
    let mut worst = 0.0_f64;
    for x in a {
        let (k, d) = left
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        worst = worst.max(d);
        left.swap_remove(k);
    }
    worst
}

/// `Γ(ω) = L(iωΛ − M)⁻¹L − I` with a cofactor inverse.
pub fn gamma_oracle(model: &SystemModel, omega: f64, conv: Convention) -> Vec<Vec<C>> {
    let m = rows(&model.drift());
    let n = m.len();
    let lambda = |k: usize| match conv {
        Convention::Alternating if k % 2 == 1 => 1.0,
        _ => -1.0,
    };
    let a: Vec<Vec<C>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = if i == j { c(0.0, omega * lambda(i)) } else { c(0.0, 0.0) };
                    d - m[i][j]
                })
                .collect()
        })
        .collect();
    let inv = cofactor_inverse(&a);
    let sk: Vec<f64> = model.modes.iter().flat_map(|md| [md.kappa.sqrt(); 2]).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| sk[i] * inv[i][j] * sk[j] - if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn du(kappa_a: f64, delta_a: f64, g: f64, theta: f64) -> SystemModel {
    SystemModel::du(
        ModeParams::new("a", WA, kappa_a, delta_a),
        ModeParams::new("b", WB, 1e-4, 1.0),
        CouplingParams::new(g, theta),
        0.01,
    )
    .unwrap()
}

/// Fig. 3 parameter set: `Δ_m = Δ_c = 0`, `G = 0.1`, `κ_m = κ_c = 1`, `κ_b = 1e-4`.
pub fn three(theta_m: f64, theta_c: f64) -> SystemModel {
    SystemModel::three_mode(
        ModeParams::new("m", WA, 1.0, 0.0),
        ModeParams::new("b", WB, 1e-4, 1.0),
        ModeParams::new("c", WC, 1.0, 0.0),
        CouplingParams::new(0.1, theta_m),
        CouplingParams::new(0.1, theta_c),
        0.01,
    )
    .unwrap()
}

fn random_mode<R: Rng>(rng: &mut R, label: &str, high: bool) -> ModeParams {
    if high {
        ModeParams::new(label, WA, rng.gen_range(0.05..5.0), rng.gen_range(-2.0..2.0))
    } else {
        ModeParams::new(label, WB, rng.gen_range(1e-4..0.5), rng.gen_range(0.5..1.5))
    }
}

fn random_coupling<R: Rng>(rng: &mut R) -> CouplingParams {
    CouplingParams::new(rng.gen_range(0.0..0.3), rng.gen_range(0.0..TAU))
}

/// Random stable two- or three-mode model; draws until stable.
pub fn random_stable<R: Rng>(rng: &mut R) -> SystemModel {
    loop {
        let t = rng.gen_range(0.0..0.1);
        let model = if rng.gen_bool(0.5) {
            SystemModel::du(random_mode(rng, "a", true), random_mode(rng, "b", false), random_coupling(rng), t)
        } else {
            SystemModel::three_mode(
                random_mode(rng, "m", true),
                random_mode(rng, "b", false),
                random_mode(rng, "c", true),
                random_coupling(rng),
                random_coupling(rng),
                t,
            )
        }
        .unwrap();
        if model.stability().unwrap().stable {
            return model;
        }
    }
}
