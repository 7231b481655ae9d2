use std::f64::consts::SQRT_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::discretize::{ExactStep, RealSystem};
use crate::error::{Error, Result};
use crate::model::SystemModel;
use crate::numerics::{cholesky_psd, welch};
use crate::spectra::input_noise;

/// State magnitude treated as divergence.
const DIVERGENCE: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Exact Gaussian transition of the linear SDE over each step.
    #[default]
    Exact,
    /// First-order Euler–Maruyama. Biased for weakly damped modes unless
    /// `dt ≪ κ`.
    EulerMaruyama,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// Sampled from the stationary covariance.
    #[default]
    Stationary,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    /// Step in units of `1/ω_b`; `None` selects the largest allowed step.
    #[serde(default)]
    pub dt: Option<f64>,
    /// Welch segments per ensemble member (50% overlap fixes the length).
    #[serde(default = "default_segments")]
    pub segments: usize,
    #[serde(default = "default_ensemble")]
    pub ensemble: usize,
    pub seed: u64,
    #[serde(default = "default_segment_len")]
    pub segment_len: usize,
    #[serde(default = "default_overlap")]
    pub overlap: f64,
    /// Mode indices whose output quadrature is recorded.
    pub ports: Vec<usize>,
    #[serde(default)]
    pub psi: f64,
    /// Multiplies every noise amplitude.
    #[serde(default = "default_noise_scale")]
    pub noise_scale: f64,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default)]
    pub initial: InitialState,
}

fn default_segments() -> usize {
    16
}
fn default_ensemble() -> usize {
    64
}
fn default_segment_len() -> usize {
    4096
}
fn default_overlap() -> f64 {
    0.5
}
fn default_noise_scale() -> f64 {
    1.0
}

impl OracleConfig {
    pub fn new(seed: u64, ports: Vec<usize>) -> Self {
        Self {
            dt: None,
            segments: default_segments(),
            ensemble: default_ensemble(),
            seed,
            segment_len: default_segment_len(),
            overlap: default_overlap(),
            ports,
            psi: 0.0,
            noise_scale: default_noise_scale(),
            scheme: Scheme::default(),
            initial: InitialState::default(),
        }
    }

    /// Steps per member for the configured number of Welch segments.
    pub fn steps(&self) -> usize {
        let hop = ((self.segment_len as f64) * (1.0 - self.overlap)).round().max(1.0) as usize;
        self.segment_len + hop * self.segments.saturating_sub(1)
    }

    /// Largest step allowed for a drift with eigenvalue modulus `max_modulus`.
    pub fn max_dt(max_modulus: f64) -> f64 {
        0.01 / max_modulus.max(1.0)
    }
}

/// Ensemble-averaged quadrature PSD of one output port.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortPsd {
    pub port: usize,
    pub label: String,
    pub psd: Vec<f64>,
    /// Standard error of the ensemble mean per bin.
    pub stderr: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRun {
    /// Welch bin frequencies, units of `ω_b`.
    pub omega: Vec<f64>,
    pub ports: Vec<PortPsd>,
    pub dt: f64,
    pub steps: usize,
    pub segments_per_member: usize,
    pub config: OracleConfig,
}

impl OracleRun {
    pub fn port(&self, port: usize) -> Option<&PortPsd> {
        self.ports.iter().find(|p| p.port == port)
    }
}

struct Member {
    psd: Vec<Vec<f64>>,
    segments: usize,
}

pub fn simulate(model: &SystemModel, cfg: &OracleConfig) -> Result<OracleRun> {
    let verdict = model.stability()?;
    verdict.require_stable()?;
    if cfg.ensemble == 0 {
        return Err(Error::InvalidParameter("ensemble must be at least 1".into()));
    }
    if cfg.ports.is_empty() || cfg.ports.iter().any(|&p| p >= model.mode_count()) {
        return Err(Error::InvalidParameter("oracle ports must be valid mode indices".into()));
    }
    if !(cfg.noise_scale.is_finite() && cfg.noise_scale >= 0.0) {
        return Err(Error::InvalidParameter("noise_scale must be non-negative".into()));
    }
    let dt_max = OracleConfig::max_dt(verdict.max_modulus());
    let dt = cfg.dt.unwrap_or(dt_max);
    if !(dt > 0.0 && dt <= dt_max * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "dt = {dt} exceeds the bound 0.01/max(|λ|, 1) = {dt_max}"
        )));
    }
    let steps = cfg.steps();

    let noise = input_noise(model);
    let q: Vec<f64> = noise
        .iter()
        .map(|n| cfg.noise_scale * cfg.noise_scale * n / 2.0)
        .collect();
    let sqrt_kappa: Vec<f64> = model
        .modes
        .iter()
        .flat_map(|m| [m.kappa.sqrt(), m.kappa.sqrt()])
        .collect();
    let sys = RealSystem::from_drift(&model.drift(), sqrt_kappa, q)?;
    let d = sys.dim;
    let init_chol = match cfg.initial {
        InitialState::Stationary => Some(cholesky_psd(&sys.stationary_covariance()?, d, 1e-13)?),
        InitialState::Zero => None,
    };
    let stepper = match cfg.scheme {
        Scheme::Exact => Some(ExactStep::new(&sys, dt)?),
        Scheme::EulerMaruyama => None,
    };

    let members: Vec<Member> = (0..cfg.ensemble)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let series = integrate(&sys, stepper.as_ref(), init_chol.as_deref(), cfg, dt, steps, &mut rng)?;
            let mut psd = Vec::with_capacity(series.len());
            let mut segments = 0;
            for s in &series {
                let est = welch(s, dt, cfg.segment_len, cfg.overlap)?;
                segments = est.segments;
                psd.push(est.psd);
            }
            Ok(Member { psd, segments })
        })
        .collect::<Result<_>>()?;

    let omega = welch(&vec![0.0; cfg.segment_len], dt, cfg.segment_len, cfg.overlap)?.omega;
    let bins = omega.len();
    let e = cfg.ensemble as f64;
    let segments_per_member = members[0].segments;
    let ports = cfg
        .ports
        .iter()
        .enumerate()
        .map(|(pi, &port)| {
            let mut mean = vec![0.0; bins];
            for m in &members {
                for (acc, v) in mean.iter_mut().zip(&m.psd[pi]) {
                    *acc += v / e;
                }
            }
            let stderr = if cfg.ensemble > 1 {
                let mut var = vec![0.0; bins];
                for m in &members {
                    for ((acc, v), mu) in var.iter_mut().zip(&m.psd[pi]).zip(&mean) {
                        *acc += (v - mu).powi(2) / (e - 1.0);
                    }
                }
                var.iter().map(|v| (v / e).sqrt()).collect()
            } else {
                // single member: Welch averaging error of roughly 1/√K
                mean.iter()
                    .map(|m| m / (segments_per_member as f64).sqrt())
                    .collect()
            };
            PortPsd {
                port,
                label: model.modes[port].label.clone(),
                psd: mean,
                stderr,
            }
        })
        .collect();

    Ok(OracleRun {
        omega,
        ports,
        dt,
        steps,
        segments_per_member,
        config: cfg.clone(),
    })
}

fn gaussians(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    for v in out.iter_mut() {
        *v = StandardNormal.sample(rng);
    }
}

fn lower_mul(l: &[f64], n: usize, g: &[f64], out: &mut [f64]) {
    for i in 0..n {
        out[i] = (0..=i).map(|k| l[i * n + k] * g[k]).sum();
    }
}

/// Returns one quadrature time series per configured port.
fn integrate(
    sys: &RealSystem,
    exact: Option<&ExactStep>,
    init_chol: Option<&[f64]>,
    cfg: &OracleConfig,
    h: f64,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<f64>>> {
    let d = sys.dim;
    let mut x = vec![0.0; d];
    if let Some(l) = init_chol {
        let mut g = vec![0.0; d];
        gaussians(rng, &mut g);
        lower_mul(l, d, &g, &mut x);
    }
    let (c, s) = (cfg.psi.cos() * SQRT_2, cfg.psi.sin() * SQRT_2);
    let mut out: Vec<Vec<f64>> = cfg.ports.iter().map(|_| Vec::with_capacity(steps)).collect();
    let mut y = vec![0.0; d];
    let mut xn = vec![0.0; d];

    match exact {
        Some(st) => {
            let n3 = 3 * d;
            let mut g = vec![0.0; n3];
            let mut xi = vec![0.0; n3];
            for _ in 0..steps {
                gaussians(rng, &mut g);
                lower_mul(&st.chol, n3, &g, &mut xi);
                for i in 0..d {
                    let row = i * d;
                    let mut lkx = 0.0;
                    let mut px = 0.0;
                    for j in 0..d {
                        lkx += st.lk_over_h[row + j] * x[j];
                        px += st.phi[row + j] * x[j];
                    }
                    y[i] = lkx + (sys.sqrt_kappa[i] * xi[d + i] - xi[2 * d + i]) / h;
                    xn[i] = px + xi[i];
                }
                record(&mut out, &cfg.ports, &y, c, s);
                std::mem::swap(&mut x, &mut xn);
                check_divergence(&x)?;
            }
        }
        None => {
            let sd: Vec<f64> = sys.q.iter().map(|q| (q * h).sqrt()).collect();
            let mut dv = vec![0.0; d];
            for _ in 0..steps {
                gaussians(rng, &mut dv);
                for (v, s) in dv.iter_mut().zip(&sd) {
                    *v *= s;
                }
                for i in 0..d {
                    let row = i * d;
                    let ax: f64 = (0..d).map(|j| sys.a[row + j] * x[j]).sum();
                    y[i] = sys.sqrt_kappa[i] * x[i] - dv[i] / h;
                    xn[i] = x[i] + h * ax + sys.sqrt_kappa[i] * dv[i];
                }
                record(&mut out, &cfg.ports, &y, c, s);
                std::mem::swap(&mut x, &mut xn);
                check_divergence(&x)?;
            }
        }
    }
    Ok(out)
}

#[inline]
fn record(out: &mut [Vec<f64>], ports: &[usize], y: &[f64], c: f64, s: f64) {
    for (series, &p) in out.iter_mut().zip(ports) {
        series.push(c * y[2 * p] + s * y[2 * p + 1]);
    }
}

#[inline]
fn check_divergence(x: &[f64]) -> Result<()> {
    if x.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE) {
        return Err(Error::Unstable {
            abscissa: f64::INFINITY,
        });
    }
    Ok(())
}
