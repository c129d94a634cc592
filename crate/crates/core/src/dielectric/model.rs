use crate::constants::EV_TO_RAD_PER_S;

use super::drude::frequency;
use super::{DielectricError, DrudeParams, KramersKronig, Permittivity};

/// Damped Lorentz oscillator: `g / (ω₀² + ξ² + γξ)` on the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzOscillator {
    /// Oscillator strength, (rad/s)².
    pub strength: f64,
    /// Resonance frequency, rad/s.
    pub resonance: f64,
    /// Damping, rad/s (zero for a lossless oscillator).
    pub damping: f64,
}

impl LorentzOscillator {
    pub fn new(strength: f64, resonance: f64, damping: f64) -> Result<Self, DielectricError> {
        for (name, v) in [("strength", strength), ("resonance", resonance)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DielectricError::InvalidParameter { name, value: v });
            }
        }
        if !(damping >= 0.0 && damping.is_finite()) {
            return Err(DielectricError::InvalidParameter {
                name: "damping",
                value: damping,
            });
        }
        Ok(Self {
            strength,
            resonance,
            damping,
        })
    }

    /// Strength in eV², resonance and damping in eV.
    pub fn from_ev(strength_ev2: f64, resonance_ev: f64, damping_ev: f64) -> Result<Self, DielectricError> {
        Self::new(
            strength_ev2 * EV_TO_RAD_PER_S * EV_TO_RAD_PER_S,
            resonance_ev * EV_TO_RAD_PER_S,
            damping_ev * EV_TO_RAD_PER_S,
        )
    }

    fn imaginary_axis(&self, xi: f64) -> f64 {
        self.strength / (self.resonance * self.resonance + xi * xi + self.damping * xi)
    }

    fn im_eps(&self, omega: f64) -> f64 {
        let d = self.resonance * self.resonance - omega * omega;
        let gw = self.damping * omega;
        self.strength * gw / (d * d + gw * gw)
    }
}

/// Closed-form oscillator model, optionally with a free-carrier term.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorModel {
    pub drude: Option<DrudeParams>,
    pub oscillators: Vec<LorentzOscillator>,
    /// Accuracy annotation carried into reports.
    pub note: Option<String>,
}

impl OscillatorModel {
    pub fn eval(&self, xi: f64) -> f64 {
        let free = self.drude.map_or(0.0, |d| d.susceptibility_imaginary_axis(xi));
        1.0 + free + self.oscillators.iter().map(|o| o.imaginary_axis(xi)).sum::<f64>()
    }

    /// `Im ε(ω)` on the real axis; lossless oscillators contribute nothing off resonance.
    pub fn im_eps(&self, omega: f64) -> Result<f64, DielectricError> {
        frequency(omega)?;
        let free = match self.drude {
            Some(d) => super::drude_im_eps(&d, omega)?,
            None => 0.0,
        };
        Ok(free + self.oscillators.iter().map(|o| o.im_eps(omega)).sum::<f64>())
    }
}

/// A material's dielectric response along the imaginary frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub enum PermittivityModel {
    Vacuum,
    /// `ε → ∞`: perfectly reflecting in both polarizations.
    IdealMetal,
    Drude(DrudeParams),
    Oscillator(OscillatorModel),
    /// Optical table transformed with the dispersion relation.
    Tabulated(Box<KramersKronig>),
    /// `1 + Σ (εᵢ − 1)`: adds the susceptibilities of the components.
    Sum(Vec<PermittivityModel>),
}

impl PermittivityModel {
    /// Base model plus a free-carrier term.
    pub fn doped(base: PermittivityModel, carriers: DrudeParams) -> Self {
        PermittivityModel::Sum(vec![base, PermittivityModel::Drude(carriers)])
    }

    pub fn contains_table(&self) -> bool {
        match self {
            PermittivityModel::Tabulated(_) => true,
            PermittivityModel::Sum(parts) => parts.iter().any(Self::contains_table),
            _ => false,
        }
    }

    pub fn is_ideal_metal(&self) -> bool {
        match self {
            PermittivityModel::IdealMetal => true,
            PermittivityModel::Sum(parts) => parts.iter().any(Self::is_ideal_metal),
            _ => false,
        }
    }

    /// Accuracy annotations of this model and its components.
    pub fn notes(&self) -> Vec<String> {
        match self {
            PermittivityModel::Oscillator(o) => o.note.iter().cloned().collect(),
            PermittivityModel::Sum(parts) => parts.iter().flat_map(Self::notes).collect(),
            _ => Vec::new(),
        }
    }
}

impl Permittivity for PermittivityModel {
    fn eps(&self, xi: f64) -> Result<f64, DielectricError> {
        frequency(xi)?;
        Ok(match self {
            PermittivityModel::Vacuum => 1.0,
            PermittivityModel::IdealMetal => f64::INFINITY,
            PermittivityModel::Drude(d) => 1.0 + d.susceptibility_imaginary_axis(xi),
            PermittivityModel::Oscillator(o) => o.eval(xi),
            PermittivityModel::Tabulated(kk) => kk.eval(xi)?,
            PermittivityModel::Sum(parts) => {
                let mut total = 1.0;
                for p in parts {
                    total += p.eps(xi)? - 1.0;
                }
                total
            }
        })
    }
}

/// `ε̃(iξ) + ω_p² / [ξ(ξ + γ)]` for a doped semiconductor with base model `base`.
pub fn doped_si_eps<P: Permittivity + ?Sized>(
    base: &P,
    d: &DrudeParams,
    xi: f64,
) -> Result<f64, DielectricError> {
    frequency(xi)?;
    Ok(base.eps(xi)? + d.susceptibility_imaginary_axis(xi))
}
