use thiserror::Error;

use crate::Polarization;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{quantity} = {value} is outside the validated range [{min}, {max}]")]
    OutOfRange {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("energy conservation violated: 1/{lambda_p_nm} nm != 1/{lambda_s_nm} nm + 1/{lambda_i_nm} nm")]
    EnergyConservation {
        lambda_p_nm: f64,
        lambda_s_nm: f64,
        lambda_i_nm: f64,
    },

    #[error(
        "adaptive quadrature did not reach tolerance {tolerance:e} (estimated error {estimate:e})"
    )]
    QuadratureFailure { tolerance: f64, estimate: f64 },

    #[error("no guided {polarization} mode at {wavelength_nm} nm")]
    NoGuidedMode {
        wavelength_nm: f64,
        polarization: Polarization,
    },

    #[error("required QPM spatial frequency {name} = {value} rad/um is not positive")]
    NonPositiveFrequency { name: &'static str, value: f64 },

    #[error("K1 and K2 coincide; a single-period grating suffices")]
    DegenerateModulation,

    #[error("group-index difference {difference:e} is too small; bandwidth is unbounded")]
    DegenerateGroupIndices { difference: f64 },

    #[error("entanglement parameter undefined: both amplitudes vanish")]
    UndefinedGamma,

    #[error("filter width {filter_nm} nm is not narrower than the narrowest process bandwidth {bandwidth_nm} nm")]
    FilterTooWide { filter_nm: f64, bandwidth_nm: f64 },

    #[error("failed to parse {what}: {message}")]
    Parse { what: &'static str, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that mean the requested design is physically infeasible,
    /// as opposed to bad input.
    pub fn is_physics_infeasibility(&self) -> bool {
        matches!(
            self,
            Error::NoGuidedMode { .. }
                | Error::NonPositiveFrequency { .. }
                | Error::DegenerateModulation
                | Error::DegenerateGroupIndices { .. }
                | Error::UndefinedGamma
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
