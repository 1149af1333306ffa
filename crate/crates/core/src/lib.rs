//! Design toolkit for non-degenerate, polarization-entangled photon-pair
//! sources in type-II dual-period poled Ti:LiNbO3 channel waveguides.
//!
//! The crate is organised bottom-up:
//!
//! * [`dispersion`]: bulk Sellmeier indices, Ti in-diffusion index increments
//!   and the graded transverse index profile.
//! * [`modesolver`]: variational fundamental-mode solver over a two-parameter
//!   Hermite-Gauss family, plus group indices.
//! * [`qpm`]: QPM spatial frequencies, carrier/modulation periods, poling
//!   pattern synthesis and exact Fourier analysis of that pattern.
//! * [`spdc`]: overlap integrals, relative process amplitudes, the
//!   entanglement parameter, bandwidths and emission spectra.
//! * [`design`]: the end-to-end pipeline tying the above together.
//!
//! Units at the public surface: wavelengths in nm, transverse geometry and
//! poling periods in um, spatial frequencies in rad/um, interaction lengths
//! in mm, temperatures in degrees Celsius.
//!
//! ```
//! use dppln_core::{SourceDesigner, WaveguideGeometry};
//!
//! let designer = SourceDesigner::with_defaults(WaveguideGeometry::new(10.0, 10.0)?)?;
//! let result = designer.evaluate()?;
//! assert!(result.gamma > 0.99);
//! assert!((result.grating.lambda1_um - 4.58).abs() < 0.01);
//! # Ok::<(), dppln_core::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod design;
pub mod dispersion;
pub mod error;
pub mod export;
pub mod modesolver;
pub mod optimize;
pub mod qpm;
pub mod quadrature;
pub mod spdc;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use design::{DesignModes, DesignResult, Material, SourceDesigner, SpectrumOptions};
pub use dispersion::{IndexIncrementTable, SellmeierModel, SellmeierSet, WaveguideGeometry};
pub use error::{Error, Result};
pub use modesolver::{CutoffPolicy, ModalSolution, SolverSettings, TrialField};
pub use qpm::{GratingDesign, InteractionSpec, ModeIndices, PolingPattern, Process};
pub use spdc::{EntanglementReport, ProcessAmplitudes, Spectrum};

/// Polarization eigenmode of the uniaxial crystal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    Ordinary,
    Extraordinary,
}

impl Polarization {
    pub fn short(self) -> &'static str {
        match self {
            Polarization::Ordinary => "o",
            Polarization::Extraordinary => "e",
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::Ordinary => f.write_str("ordinary"),
            Polarization::Extraordinary => f.write_str("extraordinary"),
        }
    }
}

/// Unnormalized sinc, `sin(x)/x`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Idler wavelength fixed by energy conservation at a monochromatic pump.
pub fn idler_wavelength_nm(lambda_p_nm: f64, lambda_s_nm: f64) -> f64 {
    1.0 / (1.0 / lambda_p_nm - 1.0 / lambda_s_nm)
}
