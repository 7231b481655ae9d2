use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Welch estimate of a two-sided power spectral density.
#[derive(Debug, Clone)]
pub struct WelchEstimate {
    /// Angular frequencies `2πk / (segment·dt)` for `k = 0..=segment/2`.
    pub omega: Vec<f64>,
    pub psd: Vec<f64>,
    pub segments: usize,
}

/// Periodic Hann window.
pub fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 0.5 - 0.5 * (2.0 * PI * k as f64 / n as f64).cos())
        .collect()
}

/// Averages windowed periodograms over overlapping segments.
///
/// Normalized so that white noise with autocorrelation `S δ(t)` (sampled as
/// step averages of width `dt`) has estimate `S` in every bin; i.e. the
/// density is per unit angular frequency over `2π`, matching
/// `S(ω) = ∫ ⟨x(t) x(0)⟩ e^{iωt} dt`.
pub fn welch(x: &[f64], dt: f64, segment: usize, overlap: f64) -> Result<WelchEstimate> {
    if segment < 4 || !segment.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "Welch segment length must be a power of two >= 4, got {segment}"
        )));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::InvalidParameter(format!("overlap must be in [0, 1), got {overlap}")));
    }
    if x.len() < segment {
        return Err(Error::InvalidParameter(format!(
            "series of length {} is shorter than one segment ({segment})",
            x.len()
        )));
    }
    let step = ((segment as f64) * (1.0 - overlap)).round().max(1.0) as usize;
    let window = hann(segment);
    let wss: f64 = window.iter().map(|w| w * w).sum();
    let fft = FftPlanner::new().plan_fft_forward(segment);
    let bins = segment / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex64::new(0.0, 0.0); segment];
    let mut segments = 0;
    let mut start = 0;
    while start + segment <= x.len() {
        for (k, b) in buf.iter_mut().enumerate() {
            *b = Complex64::new(x[start + k] * window[k], 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
        segments += 1;
        start += step;
    }
    let norm = dt / (wss * segments as f64);
    Ok(WelchEstimate {
        omega: (0..bins)
            .map(|k| 2.0 * PI * k as f64 / (segment as f64 * dt))
            .collect(),
        psd: acc.into_iter().map(|a| a * norm).collect(),
        segments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn white_noise_level() {
        let dt = 0.01;
        let s: f64 = 0.7;
        // step averages of white noise with intensity s have variance s/dt
        let normal = Normal::new(0.0, (s / dt).sqrt()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..1 << 18).map(|_| normal.sample(&mut rng)).collect();
        let est = welch(&x, dt, 1024, 0.5).unwrap();
        let mid = &est.psd[10..500];
        let mean = mid.iter().sum::<f64>() / mid.len() as f64;
        assert!((mean / s - 1.0).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn sinusoid_lands_on_its_bin() {
        let dt = 0.01;
        let seg = 1024;
        let k0 = 37;
        let w0 = 2.0 * PI * k0 as f64 / (seg as f64 * dt);
        let x: Vec<f64> = (0..8 * seg).map(|n| (w0 * n as f64 * dt).cos()).collect();
        let est = welch(&x, dt, seg, 0.5).unwrap();
        let peak = est
            .psd
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(peak, k0);
        assert_eq!(est.segments, 15);
    }

    #[test]
    fn rejects_short_series() {
        assert!(welch(&[0.0; 10], 0.1, 16, 0.5).is_err());
    }
}
