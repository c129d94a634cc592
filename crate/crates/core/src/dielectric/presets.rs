//! Ready-made material models for the gold sphere and silicon plate.

use crate::constants::EV_TO_RAD_PER_S;

use super::{
    CarrierParams, DrudeParams, KramersKronig, LorentzOscillator, OpticalDataTable, OscillatorModel,
    PermittivityModel,
};

pub const GOLD_PLASMA_EV: f64 = 9.0;
pub const GOLD_RELAXATION_EV: f64 = 0.035;

/// Interband oscillators of gold as (strength eV², resonance eV, damping eV).
const GOLD_OSCILLATORS: [(f64, f64, f64); 6] = [
    (7.091, 3.05, 0.75),
    (41.46, 4.15, 1.85),
    (2.7, 5.4, 1.0),
    (154.7, 8.5, 7.0),
    (44.55, 13.5, 6.0),
    (309.6, 21.5, 9.0),
];

pub const SILICON_STATIC_PERMITTIVITY: f64 = 11.67;
const SILICON_CORE_SUSCEPTIBILITY: f64 = 0.035;
const SILICON_VALENCE_RESONANCE: f64 = 6.6e15;
const SILICON_CORE_RESONANCE: f64 = 1e17;

/// Lowest photon energy of the synthesized gold optical table, eV.
pub const GOLD_TABLE_MIN_EV: f64 = 0.125;

pub const APPROXIMATE_SILICON_NOTE: &str = "approximate (≈10% force error)";

pub fn gold_drude() -> DrudeParams {
    DrudeParams::from_ev(GOLD_PLASMA_EV, GOLD_RELAXATION_EV).expect("valid constants")
}

fn gold_oscillators() -> OscillatorModel {
    OscillatorModel {
        drude: Some(gold_drude()),
        oscillators: GOLD_OSCILLATORS
            .iter()
            .map(|&(g, w, d)| LorentzOscillator::from_ev(g, w, d).expect("valid constants"))
            .collect(),
        note: None,
    }
}

/// Gold as a Drude term plus six damped interband oscillators.
pub fn gold() -> PermittivityModel {
    PermittivityModel::Oscillator(gold_oscillators())
}

/// Optical table of gold sampled from the oscillator model above
/// `GOLD_TABLE_MIN_EV`, for exercising the dispersion-relation path.
pub fn gold_optical_table() -> OpticalDataTable {
    let model = gold_oscillators();
    let (lo, hi, per_decade) = (GOLD_TABLE_MIN_EV, 1.0e4, 100usize);
    let n = ((hi / lo).log10() * per_decade as f64).round() as usize;
    let omega: Vec<f64> = (0..=n)
        .map(|i| lo * (hi / lo).powf(i as f64 / n as f64) * EV_TO_RAD_PER_S)
        .collect();
    OpticalDataTable::sample(omega, |w| model.im_eps(w).expect("positive frequency"))
        .expect("valid samples")
}

/// Gold from the optical table with Drude extrapolation below it.
pub fn gold_tabulated() -> PermittivityModel {
    gold_from_table(gold_optical_table())
}

pub fn gold_from_table(table: OpticalDataTable) -> PermittivityModel {
    PermittivityModel::Tabulated(Box::new(KramersKronig::new(table, Some(gold_drude()))))
}

/// Closed-form dielectric silicon: a valence oscillator carrying the static
/// response and a weak core term, `ε(0) = 11.67`.
pub fn silicon_dielectric() -> PermittivityModel {
    let valence = (SILICON_STATIC_PERMITTIVITY - 1.0 - SILICON_CORE_SUSCEPTIBILITY)
        * SILICON_VALENCE_RESONANCE
        * SILICON_VALENCE_RESONANCE;
    let core = SILICON_CORE_SUSCEPTIBILITY * SILICON_CORE_RESONANCE * SILICON_CORE_RESONANCE;
    PermittivityModel::Oscillator(OscillatorModel {
        drude: None,
        oscillators: vec![
            LorentzOscillator::new(valence, SILICON_VALENCE_RESONANCE, 0.0).expect("valid constants"),
            LorentzOscillator::new(core, SILICON_CORE_RESONANCE, 0.0).expect("valid constants"),
        ],
        note: Some(APPROXIMATE_SILICON_NOTE.to_string()),
    })
}

/// Dielectric silicon from an optical table (no low-frequency extrapolation).
pub fn silicon_from_table(table: OpticalDataTable) -> PermittivityModel {
    PermittivityModel::Tabulated(Box::new(KramersKronig::new(table, None)))
}

/// Carrier parameters of the B-doped silicon plate.
pub fn silicon_carriers() -> CarrierParams {
    CarrierParams::new(3.0e25, 0.206, 3.5e-5).expect("valid constants")
}

/// Doped silicon: dielectric base plus the carrier Drude term.
pub fn silicon_doped() -> PermittivityModel {
    silicon_doped_from(silicon_dielectric())
}

pub fn silicon_doped_from(base: PermittivityModel) -> PermittivityModel {
    let carriers = silicon_carriers().drude().expect("valid constants");
    PermittivityModel::doped(base, carriers)
}
