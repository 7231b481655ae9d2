use num_complex::Complex64;

use crate::model::SystemModel;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Bose–Einstein occupation at angular frequency `omega` (rad/s) and
/// temperature `t` (K).
pub fn thermal_occupation(omega: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega / (K_B * t);
    1.0 / x.exp_m1()
}

/// Symmetrized input noise `n_th + 1/2` for every channel of the model.
pub fn input_noise(model: &SystemModel) -> Vec<f64> {
    model
        .modes
        .iter()
        .flat_map(|m| {
            let n = thermal_occupation(m.absolute_frequency, model.temperature) + 0.5;
            [n, n]
        })
        .collect()
}

/// `χ = 1/(i(Δ − ω) + κ/2)`
pub fn susceptibility(delta: f64, kappa: f64, omega: f64) -> Complex64 {
    Complex64::new(kappa / 2.0, delta - omega).inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_temperature_is_vacuum() {
        assert_eq!(thermal_occupation(1e9, 0.0), 0.0);
    }

    #[test]
    fn mechanical_mode_at_ten_millikelvin() {
        let n = thermal_occupation(2.0 * PI * 1e7, 0.01);
        // kT/ħω - 1/2 to leading order
        let x = HBAR * 2.0 * PI * 1e7 / (K_B * 0.01);
        assert!((n - (1.0 / x - 0.5 + x / 12.0)).abs() < 1e-3);
        assert!((n - 20.3406).abs() < 1e-4, "{n}");
    }

    #[test]
    fn microwave_mode_is_in_vacuum() {
        assert!(thermal_occupation(2.0 * PI * 1e10, 0.01) < 1e-20);
    }

    #[test]
    fn susceptibility_on_resonance() {
        assert!((susceptibility(0.7, 0.4, 0.7) - Complex64::new(5.0, 0.0)).norm() < 1e-15);
        assert!(susceptibility(0.0, 1.0, 1e12).norm() < 1e-11);
    }
}
