mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use common::*;
use sasc::chain::*;
use sasc::cli::builtin;
use sasc::model::{CouplingParams, SystemModel};
use sasc::numerics::fit_line;
use sasc::spectra::*;

fn fig4_spec() -> ChainSpec {
    let (model, _) = builtin("chain").unwrap().build_model().unwrap();
    ChainSpec::from_template(&model).with_alternating_detuning(1.0, 0.0)
}

/// First-to-last Hermitian quadrature gain from the cofactor Γ.
fn gain_oracle(model: &SystemModel, omega: f64) -> f64 {
    let g = gamma_oracle(model, omega, Convention::Alternating);
    let p = 2 * (model.mode_count() - 1);
    let coeff = |k: usize| (g[p][k] + g[p + 1][k]) * FRAC_1_SQRT_2;
    (coeff(0) + coeff(1)).norm_sqr()
}

#[test]
fn two_and_three_mode_chains_reproduce_the_small_pipelines() {
    let spec = fig4_spec();
    let opts = SpectrumOptions::default();
    let chain3 = spec.model(3).unwrap();
    let three = SystemModel::three_mode(
        chain3.modes[0].clone(),
        chain3.modes[1].clone(),
        chain3.modes[2].clone(),
        chain3.couplings[0],
        chain3.couplings[1],
        chain3.temperature,
    )
    .unwrap();
    let e3 = TransferEngine::new(&three, Convention::Alternating).unwrap();
    for w in [0.0, 0.6, 1.15, 2.0] {
        let s_ap = snr_point(&e3, &input_noise(&three), w, 0, 2, 0.0).unwrap().0;
        let g = end_to_end_gain(&chain3, w, &opts).unwrap();
        assert!((g - s_ap).abs() <= 1e-10 * s_ap.max(1e-300), "ω={w}: {g} vs {s_ap}");
    }

    let chain2 = spec.model(2).unwrap();
    let du = SystemModel::du(chain2.modes[0].clone(), chain2.modes[1].clone(), chain2.couplings[0], 0.01).unwrap();
    let e2 = TransferEngine::new(&du, Convention::Alternating).unwrap();
    for w in [0.0, 0.6, 1.15] {
        let s_ap = snr_point(&e2, &input_noise(&du), w, 0, 1, 0.0).unwrap().0;
        assert_eq!(end_to_end_gain(&chain2, w, &opts).unwrap(), s_ap);
    }
}

#[test]
fn uncoupled_chain_has_no_gain() {
    let mut spec = fig4_spec();
    spec.couplings = vec![CouplingParams::new(0.0, 0.0)];
    for n in 2..=6 {
        assert_eq!(end_to_end_gain(&spec.model(n).unwrap(), 1.15, &SpectrumOptions::default()).unwrap(), 0.0);
    }
}

#[test]
fn five_mode_gain_matches_cofactor_oracle() {
    let model = fig4_spec().model(5).unwrap();
    let g = end_to_end_gain(&model, 1.15, &SpectrumOptions::default()).unwrap();
    let want = gain_oracle(&model, 1.15);
    assert!((g - want).abs() < 1e-10 * want, "{g} vs {want}");
    // regression value
    assert!((g - 14.80713713818).abs() < 1e-8 * g, "{g}");
}

#[test]
fn synthetic_exponential_is_recovered_exactly() {
    let xs: Vec<f64> = (2..=6).map(|n| n as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&n| (0.7 * 3.68f64.powf(n)).ln()).collect();
    let fit = fit_line(&xs, &ys).unwrap();
    assert!((fit.slope.exp() - 3.68).abs() < 1e-12);
    assert!((fit.r_squared.unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn unstable_lengths_are_reported_not_fitted() {
    let (model, _) = builtin("chain").unwrap().build_model().unwrap();
    // resonant drives on every high mode only stay stable up to three modes
    let spec = ChainSpec::from_template(&model).with_alternating_detuning(0.0, 0.0);
    assert!(spec.model(3).unwrap().stability().unwrap().stable);
    assert!(!spec.model(4).unwrap().stability().unwrap().stable);
    let err = scaling_fit(&spec, 2..=6, 1.15, &SpectrumOptions::default()).unwrap_err();
    assert!(err.to_string().contains("got 2"), "{err}");
}
