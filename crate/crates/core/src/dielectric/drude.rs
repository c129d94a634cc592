use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, EV_TO_RAD_PER_S, VACUUM_PERMITTIVITY};

use super::DielectricError;

/// Free-carrier response: plasma frequency and relaxation parameter, both rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeParams {
    omega_p: f64,
    gamma: f64,
}

impl DrudeParams {
    pub fn new(omega_p: f64, gamma: f64) -> Result<Self, DielectricError> {
        positive("omega_p", omega_p)?;
        positive("gamma", gamma)?;
        Ok(Self { omega_p, gamma })
    }

    pub fn from_ev(omega_p_ev: f64, gamma_ev: f64) -> Result<Self, DielectricError> {
        Self::new(omega_p_ev * EV_TO_RAD_PER_S, gamma_ev * EV_TO_RAD_PER_S)
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `ω_p² / [ξ(ξ + γ)]`, the Drude contribution to ε(iξ) − 1.
    pub(crate) fn susceptibility_imaginary_axis(&self, xi: f64) -> f64 {
        self.omega_p * self.omega_p / (xi * (xi + self.gamma))
    }
}

/// Imaginary part of the Drude permittivity on the real frequency axis,
/// `ω_p² γ / [ω (ω² + γ²)]`.
pub fn drude_im_eps(p: &DrudeParams, omega: f64) -> Result<f64, DielectricError> {
    frequency(omega)?;
    Ok(p.omega_p * p.omega_p * p.gamma / (omega * (omega * omega + p.gamma * p.gamma)))
}

/// Drude permittivity along the imaginary frequency axis, `1 + ω_p² / [ξ(ξ + γ)]`.
pub fn drude_eps_imag_axis(p: &DrudeParams, xi: f64) -> Result<f64, DielectricError> {
    frequency(xi)?;
    Ok(1.0 + p.susceptibility_imaginary_axis(xi))
}

/// Carrier description of a doped semiconductor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierParams {
    /// Carrier density, m⁻³.
    pub density: f64,
    /// Optical effective mass in units of the electron mass.
    pub effective_mass_ratio: f64,
    /// DC resistivity, Ω·m.
    pub resistivity: f64,
}

impl CarrierParams {
    pub fn new(density: f64, effective_mass_ratio: f64, resistivity: f64) -> Result<Self, DielectricError> {
        positive("carrier density", density)?;
        positive("effective mass ratio", effective_mass_ratio)?;
        positive("resistivity", resistivity)?;
        Ok(Self {
            density,
            effective_mass_ratio,
            resistivity,
        })
    }

    /// Drude parameters implied by the carrier density and resistivity.
    pub fn drude(&self) -> Result<DrudeParams, DielectricError> {
        let omega_p = plasma_frequency(self);
        DrudeParams::new(omega_p, relaxation_parameter(self, omega_p)?)
    }
}

/// `ω_p = e √n / √(ε₀ m*)`.
pub fn plasma_frequency(c: &CarrierParams) -> f64 {
    let m_eff = c.effective_mass_ratio * ELECTRON_MASS;
    ELEMENTARY_CHARGE * c.density.sqrt() / (VACUUM_PERMITTIVITY * m_eff).sqrt()
}

/// `γ = ε₀ ρ ω_p²`.
pub fn relaxation_parameter(c: &CarrierParams, omega_p: f64) -> Result<f64, DielectricError> {
    positive("omega_p", omega_p)?;
    Ok(VACUUM_PERMITTIVITY * c.resistivity * omega_p * omega_p)
}

fn positive(name: &'static str, value: f64) -> Result<(), DielectricError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(DielectricError::InvalidParameter { name, value })
    }
}

pub(crate) fn frequency(value: f64) -> Result<(), DielectricError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(DielectricError::NonPositiveFrequency { value })
    }
}
