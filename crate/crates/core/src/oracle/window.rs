//! Expected value of the Welch estimator for a known spectrum.
//!
//! A Welch bin does not sample `S(ω)` at its centre: it averages `S` against
//! the window's spectral kernel `|W(θ)|²`, roughly two bins wide. Features
//! narrower than a bin (the `κ_b = 10⁻⁴ω_b` mechanical line, for instance)
//! are therefore smeared over neighbouring bins. This module predicts that
//! smearing from the frequency-domain spectrum so the time-domain estimate
//! can be compared bin by bin.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::model::SystemModel;
use crate::numerics::{gauss_legendre, hann};
use crate::spectra::{input_noise, output_spectrum_point, SpectrumOptions, TransferEngine};

/// Kernel half-width in bins; Hann sidelobes are below 1e-7 beyond it.
const HALF_WIDTH_BINS: f64 = 16.0;
const NODES: usize = 16;

/// `Σ_{n<N} e^{−iθn}`
fn dirichlet(theta: f64, n: usize) -> Complex64 {
    // the sum is 2π-periodic in θ
    let t = theta - 2.0 * PI * (theta / (2.0 * PI)).round();
    let nf = n as f64;
    let phase = Complex64::from_polar(1.0, -t * (nf - 1.0) / 2.0);
    let s = (t / 2.0).sin();
    if s.abs() < 1e-12 {
        return phase * nf;
    }
    phase * ((nf * t / 2.0).sin() / s)
}

/// `|Σ_n w_n e^{−iθn}|²` for the periodic Hann window of length `n`.
pub fn hann_kernel(theta: f64, n: usize) -> f64 {
    let d = 2.0 * PI / n as f64;
    let w = dirichlet(theta, n) * 0.5 - (dirichlet(theta - d, n) + dirichlet(theta + d, n)) * 0.25;
    w.norm_sqr()
}

/// Expected Welch estimate of the output quadrature spectrum of `port` at the
/// bin frequencies `omega`, for step `dt` and Hann segments of `segment_len`.
///
/// Aliasing and step-averaging corrections are neglected; both are below
/// `10⁻⁴` relative for `|ω| ≪ 1/dt`.
pub fn expected_welch(
    model: &SystemModel,
    omega: &[f64],
    dt: f64,
    segment_len: usize,
    port: usize,
    opts: &SpectrumOptions,
) -> Result<Vec<f64>> {
    let engine = TransferEngine::new(model, opts.convention)?;
    let noise = input_noise(model);
    let bin = 2.0 * PI / (segment_len as f64 * dt);
    let reach = HALF_WIDTH_BINS * bin;
    let lo = omega.iter().copied().fold(f64::INFINITY, f64::min) - reach;
    let hi = omega.iter().copied().fold(f64::NEG_INFINITY, f64::max) + reach;

    let mut breaks: Vec<f64> = Vec::new();
    let mut x = lo;
    while x < hi {
        breaks.push(x);
        x += bin / 4.0;
    }
    breaks.push(hi);
    // resolve every line, however narrow, with geometric breakpoints
    if let Some(v) = engine.verdict() {
        for ev in &v.eigenvalues {
            let width = ev.re.abs().max(1e-12);
            for centre in [ev.im, -ev.im] {
                breaks.push(centre);
                for j in -1..=3 {
                    let off = width * 10f64.powi(j);
                    breaks.push(centre - off);
                    breaks.push(centre + off);
                }
            }
        }
    }
    breaks.retain(|b| *b >= lo && *b <= hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-13);

    let (gx, gw) = gauss_legendre(NODES);
    let mut nodes = Vec::with_capacity(breaks.len() * NODES);
    for p in breaks.windows(2) {
        let (mid, half) = ((p[0] + p[1]) / 2.0, (p[1] - p[0]) / 2.0);
        for (x, w) in gx.iter().zip(&gw) {
            nodes.push((mid + half * x, half * w));
        }
    }
    let s: Vec<f64> = nodes
        .par_iter()
        .map(|(nu, _)| output_spectrum_point(&engine, &noise, *nu, port, opts.psi))
        .collect::<Result<_>>()?;

    let wss: f64 = hann(segment_len).iter().map(|w| w * w).sum();
    let norm = dt / (wss * 2.0 * PI);
    Ok(omega
        .par_iter()
        .map(|&wk| {
            let a = nodes.partition_point(|(nu, _)| *nu < wk - reach);
            let b = nodes.partition_point(|(nu, _)| *nu <= wk + reach);
            let acc: f64 = (a..b)
                .map(|j| s[j] * nodes[j].1 * hann_kernel((wk - nodes[j].0) * dt, segment_len))
                .sum();
            acc * norm
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_matches_direct_sum() {
        let n = 64;
        let w = hann(n);
        for &theta in &[0.0, 1e-9, 0.013, 0.098, 0.5, 2.0 * PI / 64.0, 3.0] {
            let direct: Complex64 = w
                .iter()
                .enumerate()
                .map(|(k, wk)| Complex64::from_polar(*wk, -theta * k as f64))
                .sum();
            let k = hann_kernel(theta, n);
            assert!((k - direct.norm_sqr()).abs() < 1e-9 * direct.norm_sqr().max(1.0), "θ={theta}");
        }
    }

    #[test]
    fn kernel_integrates_to_window_energy() {
        let n = 32;
        let m = 20000;
        let s: f64 = (0..m)
            .map(|k| hann_kernel(2.0 * PI * (k as f64 + 0.5) / m as f64 - PI, n))
            .sum::<f64>()
            * (2.0 * PI / m as f64);
        let wss: f64 = hann(n).iter().map(|w| w * w).sum();
        assert!((s / (2.0 * PI) - wss).abs() < 1e-9);
    }
}
