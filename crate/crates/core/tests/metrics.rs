mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sasc::metrics::*;
use sasc::model::{CouplingParams, ModeParams, SystemModel};
use sasc::numerics::linspace;
use sasc::spectra::*;

fn fig4(theta_m: f64, theta_c: f64) -> SystemModel {
    SystemModel::three_mode(
        ModeParams::new("m", WA, 1.0, 0.0),
        ModeParams::new("b", WB, 1e-4, 1.0),
        ModeParams::new("c", WC, 0.1, 0.0),
        CouplingParams::new(0.2, theta_m),
        CouplingParams::new(0.1, theta_c),
        0.01,
    )
    .unwrap()
}

fn readout(model: &SystemModel) -> Readout {
    Readout::end_to_end(model, SpectrumOptions::default())
}

/// `(ω, SNR)` of the largest sample on a uniform grid.
fn dense_argmax(model: &SystemModel, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let e = TransferEngine::new(model, Convention::Alternating).unwrap();
    let noise = input_noise(model);
    linspace(lo, hi, points)
        .into_iter()
        .filter_map(|w| snr_point(&e, &noise, w, 0, model.mode_count() - 1, 0.0).ok().map(|r| (w, r.1)))
        .fold((f64::NAN, 0.0), |a, b| if b.1 > a.1 { b } else { a })
}

fn dense_max(model: &SystemModel, lo: f64, hi: f64, points: usize) -> f64 {
    dense_argmax(model, lo, hi, points).1
}

#[test]
fn search_beats_every_scanned_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let search = GridRange::new(-3.0, 3.0, 401);
    for _ in 0..10 {
        let model = loop {
            let m = random_stable(&mut rng);
            if m.mode_count() == 3 {
                break m;
            }
        };
        let best = max_snr_over_omega(&model, &search, &readout(&model)).unwrap();
        let e = TransferEngine::new(&model, Convention::Alternating).unwrap();
        let grid = resonance_grid(&e, -3.0, 3.0, 401).unwrap();
        let noise = input_noise(&model);
        for w in grid {
            let Ok((_, s)) = snr_point(&e, &noise, w, 0, 2, 0.0) else { continue };
            assert!(best.snr >= s, "sample {s} at {w} above reported max {}", best.snr);
        }
    }
}

#[test]
fn narrow_dressed_resonance_is_not_stepped_over() {
    // the peak is ~1e-3 wide; a 401-point uniform scan alone lands on 0.05
    let cfg = ComparisonConfig::new(
        fig4(0.3695971655 * PI, 0.5301250636 * PI),
        GridRange::new(-3.0, 3.0, 401),
        readout(&fig4(0.0, 0.0)),
    )
    .unwrap();
    let model = cfg.cs_at(-0.5, 0.1).unwrap();
    let best = max_snr_over_omega(&model, &cfg.search, &cfg.readout).unwrap();
    assert!((best.omega - 1.14848).abs() < 1e-4, "{best:?}");
    assert!(best.snr > 3.85, "{best:?}");
    assert!(best.snr >= dense_max(&model, 1.14, 1.16, 20001));
}

#[test]
fn baseline_maximum_matches_dense_grid() {
    let cfg = ComparisonConfig::new(
        fig4(1.1611658078821874, 1.6169597105305684),
        GridRange::new(-3.0, 3.0, 401),
        readout(&fig4(0.0, 0.0)),
    )
    .unwrap();
    let ics = cfg.ics_max().unwrap();
    // 10^5 points, then 10^4 more across the two cells around the best one
    let (w0, _) = dense_argmax(&cfg.ics, -3.0, 3.0, 100_001);
    let dense = dense_max(&cfg.ics, w0 - 6e-5, w0 + 6e-5, 10_001);
    assert!(ics.snr >= dense, "{ics:?} vs {dense}");
    assert!(ics.snr - dense < 1e-6 * dense, "{} vs dense {dense}", ics.snr);
}

#[test]
fn identical_schemes_give_unit_f() {
    let mut m = fig4(0.7, 1.9);
    for k in [0, 2] {
        m.modes[k].kappa = ICS_KAPPA;
        m.modes[k].detuning = ICS_DETUNING;
    }
    let cfg = ComparisonConfig::new(m.clone(), GridRange::new(-3.0, 3.0, 401), readout(&m)).unwrap();
    assert_eq!(cfg.cs, cfg.ics);
    assert_eq!(f_factor(&cfg, ICS_DETUNING, ICS_DETUNING).unwrap(), 1.0);
}

#[test]
fn f_is_invariant_under_common_noise_scaling() {
    let cs = fig4(1.16, 1.62);
    let cfg = ComparisonConfig::new(cs.clone(), GridRange::new(-3.0, 3.0, 401), readout(&cs)).unwrap();
    let grid = linspace(-3.0, 3.0, 3001);
    let best = |m: &SystemModel, scale: f64| {
        let e = TransferEngine::new(m, Convention::Alternating).unwrap();
        let noise: Vec<f64> = input_noise(m).iter().map(|n| n * scale).collect();
        grid.iter().map(|&w| snr_point(&e, &noise, w, 0, 2, 0.0).unwrap().1).fold(0.0, f64::max)
    };
    let f1 = best(&cfg.cs, 1.0) / best(&cfg.ics, 1.0);
    let f3 = best(&cfg.cs, 3.0) / best(&cfg.ics, 3.0);
    assert!((f1 - f3).abs() < 1e-12 * f1);
    // scaling one side only does change it
    assert!((best(&cfg.cs, 3.0) / best(&cfg.ics, 1.0) - f1).abs() > 0.1 * f1);
}

#[test]
fn synthetic_cosine_phase_search() {
    let s = search_phase(|t| Ok(Some(t.cos())), -1.0, 37).unwrap();
    assert!((s.theta - PI).abs() < 1e-6);
    assert!(s.exact);
    let s = search_phase(|t| Ok(Some(0.5 * t.cos())), 1.0, 37).unwrap();
    assert!(!s.exact);
    assert!((s.residual - 0.5).abs() < 1e-12);
}

#[test]
fn phase_residual_does_not_grow_with_refinement() {
    let opts = SpectrumOptions::default();
    for (target, which, w) in [(-0.5, AsymmetryIndex::Mb, 0.5), (0.3, AsymmetryIndex::Bc, 0.2), (-0.999, AsymmetryIndex::Mb, 0.0)] {
        let coarse = find_phase_for_target_r(&three(0.0, 0.0), target, which, w, &opts, 13).unwrap();
        let fine = find_phase_for_target_r(&three(0.0, 0.0), target, which, w, &opts, 721).unwrap();
        assert!(fine.residual <= coarse.residual + 1e-12, "{coarse:?} {fine:?}");
    }
}

#[test]
fn without_c_coupling_r_bc_is_undefined_and_r_mb_is_flat() {
    let mut m = three(0.0, 0.0);
    m.couplings[1].magnitude = 0.0;
    let grid = linspace(0.0, TAU, 25);
    let rep = independence_check(&m, &grid, &grid, 1.0, &SpectrumOptions::default()).unwrap();
    assert_eq!(rep.r_bc_cross_variation, None);
    assert_eq!(rep.r_mb_cross_variation, Some(0.0));
}

#[test]
fn cross_variation_vanishes_even_at_strong_coupling() {
    // R_mb only sees the c unit through a factor shared by T_{m±} and T_{±b}
    let mut m = three(0.0, 0.0);
    m.couplings[0].magnitude = 0.5;
    m.couplings[1].magnitude = 0.5;
    m.modes[0].kappa = 0.2;
    m.modes[2].kappa = 0.2;
    assert!(m.stability().unwrap().stable);
    let grid = linspace(0.0, TAU, 37);
    for w in [0.0, 0.5, 1.0] {
        let rep = independence_check(&m, &grid, &grid, w, &SpectrumOptions::default()).unwrap();
        assert!(rep.r_mb_cross_variation.unwrap() < 1e-12);
        assert!(rep.r_bc_cross_variation.unwrap() < 1e-12);
    }
}
