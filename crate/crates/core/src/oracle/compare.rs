use serde::{Deserialize, Serialize};

use super::PortPsd;
use crate::error::{Error, Result};

/// Per-bin z-scores of an oracle PSD against a predicted spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub omega: Vec<f64>,
    pub measured: Vec<f64>,
    pub stderr: Vec<f64>,
    pub predicted: Vec<f64>,
    pub z: Vec<f64>,
    /// Bins inside the predicted support but with zero error bar.
    pub skipped: usize,
    /// Fraction of compared bins with `|z| ≤ 3`.
    pub pass_fraction: f64,
    pub max_abs_z: f64,
}

impl ComparisonReport {
    /// Pass fraction restricted to `lo ≤ ω ≤ hi`; `None` if no bin qualifies.
    pub fn pass_fraction_within(&self, lo: f64, hi: f64) -> Option<f64> {
        let sel: Vec<f64> = self
            .omega
            .iter()
            .zip(&self.z)
            .filter(|(w, _)| **w >= lo && **w <= hi)
            .map(|(_, z)| *z)
            .collect();
        (!sel.is_empty()).then(|| sel.iter().filter(|z| z.abs() <= 3.0).count() as f64 / sel.len() as f64)
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
        return None;
    }
    let i = xs.partition_point(|&v| v < x);
    if i < xs.len() && xs[i] == x {
        return Some(ys[i]);
    }
    let (x0, x1, y0, y1) = (xs[i - 1], xs[i], ys[i - 1], ys[i]);
    Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}

/// Compares a measured PSD on `omega` with a prediction sampled on
/// `pred_omega`, interpolated linearly onto the measured bins.
pub fn compare(omega: &[f64], measured: &PortPsd, pred_omega: &[f64], predicted: &[f64]) -> Result<ComparisonReport> {
    if pred_omega.len() != predicted.len() {
        return Err(Error::Dimension("predicted grid and values differ in length".into()));
    }
    let mut r = ComparisonReport {
        omega: Vec::new(),
        measured: Vec::new(),
        stderr: Vec::new(),
        predicted: Vec::new(),
        z: Vec::new(),
        skipped: 0,
        pass_fraction: 0.0,
        max_abs_z: 0.0,
    };
    for (i, &w) in omega.iter().enumerate() {
        let Some(p) = interpolate(pred_omega, predicted, w) else {
            continue;
        };
        let se = measured.stderr[i];
        if se == 0.0 {
            r.skipped += 1;
            continue;
        }
        let z = (measured.psd[i] - p) / se;
        r.omega.push(w);
        r.measured.push(measured.psd[i]);
        r.stderr.push(se);
        r.predicted.push(p);
        r.z.push(z);
    }
    if r.z.is_empty() && r.skipped == 0 {
        return Err(Error::DisjointSupport);
    }
    if !r.z.is_empty() {
        r.pass_fraction = r.z.iter().filter(|z| z.abs() <= 3.0).count() as f64 / r.z.len() as f64;
        r.max_abs_z = r.z.iter().map(|z| z.abs()).fold(0.0, f64::max);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psd(values: Vec<f64>, err: f64) -> PortPsd {
        PortPsd {
            port: 0,
            label: "a".into(),
            stderr: vec![err; values.len()],
            psd: values,
        }
    }

    #[test]
    fn identical_tables_have_zero_z() {
        let w = vec![0.0, 1.0, 2.0];
        let r = compare(&w, &psd(vec![1.0, 2.0, 3.0], 0.1), &w, &[1.0, 2.0, 3.0]).unwrap();
        assert!(r.z.iter().all(|z| *z == 0.0));
        assert_eq!(r.pass_fraction, 1.0);
    }

    #[test]
    fn zero_error_bars_are_skipped() {
        let w = vec![0.0, 1.0];
        let r = compare(&w, &psd(vec![1.0, 1.0], 0.0), &w, &[1.0, 1.0]).unwrap();
        assert_eq!(r.skipped, 2);
        assert!(r.z.is_empty());
    }

    #[test]
    fn doubled_prediction_fails() {
        let w: Vec<f64> = (0..50).map(|k| k as f64).collect();
        let m = psd(vec![1.0; 50], 0.05);
        let r = compare(&w, &m, &w, &vec![2.0; 50]).unwrap();
        assert_eq!(r.pass_fraction, 0.0);
    }

    #[test]
    fn disjoint_support() {
        let r = compare(&[10.0, 11.0], &psd(vec![1.0, 1.0], 0.1), &[0.0, 1.0], &[1.0, 1.0]);
        assert_eq!(r, Err(Error::DisjointSupport));
    }

    #[test]
    fn linear_interpolation() {
        assert_eq!(interpolate(&[0.0, 2.0], &[1.0, 3.0], 0.5), Some(1.5));
        assert_eq!(interpolate(&[0.0, 2.0], &[1.0, 3.0], 2.0), Some(3.0));
        assert_eq!(interpolate(&[0.0, 2.0], &[1.0, 3.0], 2.5), None);
    }
}
