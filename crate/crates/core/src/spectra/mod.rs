//! Transfer matrices, transmission and asymmetry, homodyne spectra.

mod noise;
mod quadrature;
mod spectrum;
mod table;
mod transfer;
mod transmission;

pub use noise::{input_noise, susceptibility, thermal_occupation, HBAR, K_B};
pub use quadrature::{quadrature_coefficients, QuadratureCoefficients};
pub use spectrum::{
    amplification_spectrum, asymmetry_spectrum, output_spectrum, output_spectrum_point, snr_point, snr_spectrum,
    SpectrumOptions,
};
pub use table::{Column, SpectrumTable};
pub use transfer::{transfer_matrix, Convention, TransferEngine, TransferResult};
pub use transmission::{
    asymmetry, port_transmission, transmission_du, transmission_three, DuTransmission, ThreeTransmission,
    ASYMMETRY_FLOOR,
};
