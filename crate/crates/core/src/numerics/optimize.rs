use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal function on `[a, b]`.
///
/// Returns `(x, f(x))` for the best point evaluated.
pub fn golden_section_max<F>(mut f: F, a: f64, b: f64, tol: f64, max_iter: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::InvalidParameter(format!("bad bracket [{a}, {b}]")));
    }
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..max_iter {
        if hi - lo <= tol * (1.0 + best.0.abs()) {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
        for cand in [(x1, f1), (x2, f2)] {
            if cand.1 > best.1 {
                best = cand;
            }
        }
    }
    Ok(best)
}

/// Scans `f` over `grid`, then refines around the best sample with
/// golden-section search on its neighbouring bracket.
///
/// Samples where `f` yields `None` are skipped. Returns `None` when no sample
/// is defined. The result is never below the best grid sample.
pub fn scan_and_refine<F>(grid: &[f64], mut f: F, tol: f64) -> Result<Option<(f64, f64)>>
where
    F: FnMut(f64) -> Result<Option<f64>>,
{
    let samples = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    refine_from_samples(grid, &samples, f, tol)
}

/// Refinement half of [`scan_and_refine`] for samples computed elsewhere.
pub fn refine_from_samples<F>(grid: &[f64], samples: &[Option<f64>], mut f: F, tol: f64) -> Result<Option<(f64, f64)>>
where
    F: FnMut(f64) -> Result<Option<f64>>,
{
    let best = samples
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.filter(|v| v.is_finite()).map(|v| (i, v)))
        .fold(None, |acc: Option<(usize, f64)>, cur| match acc {
            Some(a) if a.1 >= cur.1 => Some(a),
            _ => Some(cur),
        });
    let Some((i, v)) = best else {
        return Ok(None);
    };
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    if hi <= lo {
        return Ok(Some((grid[i], v)));
    }
    let (x, fx) = golden_section_max(
        |x| Ok(f(x)?.filter(|v| v.is_finite()).unwrap_or(f64::NEG_INFINITY)),
        lo,
        hi,
        tol,
        200,
    )?;
    Ok(Some(if fx > v { (x, fx) } else { (grid[i], v) }))
}

/// `n` evenly spaced points covering `[a, b]` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    b
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| Ok(-(x - 0.3f64).powi(2) + 2.0), -1.0, 1.0, 1e-12, 300).unwrap();
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn scan_refines_lorentzian() {
        let f = |x: f64| Ok(Some(1.0 / (1.0 + ((x - 0.123_456) / 0.01).powi(2))));
        let grid = linspace(-3.0, 3.0, 401);
        let (x, v) = scan_and_refine(&grid, f, 1e-12).unwrap().unwrap();
        assert!((x - 0.123_456).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scan_with_no_defined_samples() {
        assert_eq!(scan_and_refine(&[0.0, 1.0], |_| Ok(None), 1e-9).unwrap(), None);
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-2.0, 2.0, 41);
        assert_eq!(g.len(), 41);
        assert_eq!(g[0], -2.0);
        assert_eq!(g[40], 2.0);
        assert!((g[20]).abs() < 1e-15);
    }
}
