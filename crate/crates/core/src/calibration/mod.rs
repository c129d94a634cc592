//! Electrostatic calibration: the sphere-plate electrostatic force, and the
//! fits that give the residual potential `V₀`, the contact separation `z₀` and
//! the deflection coefficient `m`.

mod electrostatic;
mod fitting;

use rayon::prelude::*;
use thiserror::Error;

pub use electrostatic::{
    exact_coefficient, exact_electrostatic_force, polynomial_coefficient,
    polynomial_electrostatic_force, ELECTROSTATIC_COEFFICIENTS, POLYNOMIAL_VALIDITY,
    SERIES_TOLERANCE,
};
pub use fitting::{
    eval_polynomial, fit_contact_separation, fit_deflection_coefficient, fit_polynomial,
    fit_voltage_parabola, locate_crossing, ContactFit, DeflectionFit, ParabolaFit,
};

#[derive(Debug, Error)]
pub enum CalibrationError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("electrostatic series not converged after {terms} terms (relative tail {tail:e})")]
    SeriesNotConverged { terms: usize, tail: f64 },
    #[error("degenerate fit: {0}")]
    Degenerate(String),
    #[error("fit failed: {0}")]
    FitFailed(String),
    #[error("separation {z:e} m: {source}")]
    AtSeparation {
        z: f64,
        #[source]
        source: Box<CalibrationError>,
    },
}

/// Conversion from piezo position and deflection signal to absolute separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationModel {
    /// Deflection coefficient, m per unit signal.
    pub m: f64,
    /// Separation at contact, m.
    pub z0: f64,
    /// Residual potential difference, V.
    pub v0: f64,
    /// Force per unit deflection signal, N.
    pub force_calibration: f64,
}

impl SeparationModel {
    pub fn new(m: f64, z0: f64, v0: f64, force_calibration: f64) -> Result<Self, CalibrationError> {
        if !(m > 0.0) || !(z0 > 0.0) {
            return Err(CalibrationError::InvalidInput(format!(
                "deflection coefficient and contact separation must be positive (m = {m:e}, z0 = {z0:e})"
            )));
        }
        if !(force_calibration > 0.0) || !v0.is_finite() {
            return Err(CalibrationError::InvalidInput(format!(
                "force calibration {force_calibration:e}, V0 {v0}"
            )));
        }
        Ok(Self {
            m,
            z0,
            v0,
            force_calibration,
        })
    }

    /// Deflection signal produced by force `f`.
    pub fn signal_for_force(&self, f: f64) -> f64 {
        f / self.force_calibration
    }
}

/// `z = z_piezo + S_def · m + z₀`.
pub fn reconstruct_separation(z_piezo: f64, s_def: f64, model: &SeparationModel) -> f64 {
    z_piezo + s_def * model.m + model.z0
}

/// Parabola fit at one relative separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationFit {
    pub z_rel: f64,
    pub parabola: ParabolaFit,
}

/// Outcome of a full electrostatic calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    pub per_separation: Vec<SeparationFit>,
    /// Mean of the fitted `V₀` over separations, V.
    pub v0_mean: f64,
    /// Sample standard deviation of the fitted `V₀`, V.
    pub v0_spread: f64,
    pub contact: ContactFit,
}

/// Groups `(z_rel, V, F)` records by separation, fits a parabola at each one
/// and then fits `z₀` to the resulting curvatures.
pub fn calibrate(records: &[(f64, f64, f64)], radius: f64) -> Result<CalibrationReport, CalibrationError> {
    let mut sorted = records.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut groups: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
    for &(z, v, f) in &sorted {
        match groups.last_mut() {
            Some((gz, g)) if (*gz - z).abs() <= 1e-6 * z.abs().max(1e-15) => g.push((v, f)),
            _ => groups.push((z, vec![(v, f)])),
        }
    }
    let per_separation = groups
        .par_iter()
        .map(|(z, g)| {
            fit_voltage_parabola(g)
                .map(|parabola| SeparationFit { z_rel: *z, parabola })
                .map_err(|e| CalibrationError::AtSeparation {
                    z: *z,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let n = per_separation.len() as f64;
    let v0_mean = per_separation.iter().map(|s| s.parabola.v0).sum::<f64>() / n;
    let v0_spread = if per_separation.len() > 1 {
        (per_separation
            .iter()
            .map(|s| (s.parabola.v0 - v0_mean).powi(2))
            .sum::<f64>()
            / (n - 1.0))
            .sqrt()
    } else {
        0.0
    };
    let xs: Vec<(f64, f64)> = per_separation
        .iter()
        .map(|s| (s.z_rel, s.parabola.curvature))
        .collect();
    let contact = fit_contact_separation(&xs, radius)?;
    Ok(CalibrationReport {
        per_separation,
        v0_mean,
        v0_spread,
        contact,
    })
}
