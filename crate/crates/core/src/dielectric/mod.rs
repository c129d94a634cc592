//! Dielectric permittivities along the imaginary frequency axis.
//!
//! Optical tables are turned into `ε(iξ)` with the dispersion relation;
//! free-carrier contributions use the closed-form Drude expression.

mod cache;
mod drude;
mod kramers_kronig;
mod model;
pub mod presets;
mod table;

use thiserror::Error;

use crate::quad::QuadError;

pub use cache::{CacheGrid, CachedPermittivity};
pub use drude::{
    drude_eps_imag_axis, drude_im_eps, plasma_frequency, relaxation_parameter, CarrierParams,
    DrudeParams,
};
pub use kramers_kronig::{kramers_kronig, KramersKronig, KramersKronigOptions};
pub use model::{doped_si_eps, LorentzOscillator, OscillatorModel, PermittivityModel};
pub use table::OpticalDataTable;

#[derive(Debug, Error)]
pub enum DielectricError {
    #[error("frequency must be positive and finite, got {value:e}")]
    NonPositiveFrequency { value: f64 },
    #[error("invalid {name}: {value:e}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("invalid optical table: {0}")]
    InvalidTable(String),
    #[error("optical table line {line}: {message}")]
    TableLine { line: u64, message: String },
    #[error(
        "uncovered low-frequency tail at xi = {xi:e} rad/s: table starts at {omega_min:e} rad/s \
         and the missing region contributes about {estimate:e}; supply a Drude extrapolation"
    )]
    UncoveredLowFrequencyTail { xi: f64, omega_min: f64, estimate: f64 },
    #[error("dispersion integral failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("cannot read optical table: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot open {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Anything that yields `ε(iξ)` for `ξ > 0` (rad/s).
pub trait Permittivity: Send + Sync {
    fn eps(&self, xi: f64) -> Result<f64, DielectricError>;
}

impl<T: Permittivity + ?Sized> Permittivity for &T {
    fn eps(&self, xi: f64) -> Result<f64, DielectricError> {
        (**self).eps(xi)
    }
}

impl<T: Permittivity + ?Sized> Permittivity for std::sync::Arc<T> {
    fn eps(&self, xi: f64) -> Result<f64, DielectricError> {
        (**self).eps(xi)
    }
}
