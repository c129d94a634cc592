use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal, Uniform};

use casimir_core::calibration::{
    calibrate, fit_contact_separation, fit_deflection_coefficient, polynomial_coefficient,
    reconstruct_separation, SeparationModel,
};
use casimir_core::constants::{EV_TO_RAD_PER_S, MICROMETRE, NANOMETRE, PICONEWTON};
use casimir_core::dielectric::{presets, CachedPermittivity, Permittivity};
use casimir_core::fixtures::{self, FORCE_TABLE};
use casimir_core::stats::{
    align_to_grid, band_conformity, mean_force, normality_check, ConfidenceBand, RawCurve,
};

const R: f64 = fixtures::SPHERE_RADIUS_UM * MICROMETRE;

#[test]
fn doped_silicon_lies_above_dielectric_silicon() {
    let doped = presets::silicon_doped();
    let bare = presets::silicon_dielectric();
    for k in 0..=70 {
        let xi = 1e11 * 10f64.powf(k as f64 / 10.0);
        assert!(doped.eps(xi).unwrap() > bare.eps(xi).unwrap(), "ξ = {xi:e}");
    }
}

#[test]
fn cached_gold_table_matches_direct_transform() {
    let direct = presets::gold_tabulated();
    let cached = CachedPermittivity::new(presets::gold_tabulated()).unwrap();
    assert!(cached.is_cached());
    for ev in [0.01, 0.3, 2.0, 17.0, 150.0] {
        let xi = ev * EV_TO_RAD_PER_S;
        let (a, b) = (direct.eps(xi).unwrap(), cached.eps(xi).unwrap());
        assert!(((a - 1.0) / (b - 1.0) - 1.0).abs() < 1e-5, "{ev} eV: {a} vs {b}");
    }
}

#[test]
fn calibration_recovers_contact_separation_under_noise() {
    let z0 = fixtures::CONTACT_SEPARATION_NM * NANOMETRE;
    let v0 = fixtures::RESIDUAL_POTENTIAL_V;
    let noise = Normal::new(0.0, 1.0).unwrap();
    let mut rng = StdRng::seed_from_u64(42);
    let mut errors = Vec::new();
    for _ in 0..20 {
        let mut records = Vec::new();
        for i in 0..20 {
            let z_rel = 0.6e-6 + 4.4e-6 * i as f64 / 19.0;
            let x = polynomial_coefficient(R, z_rel + z0).unwrap();
            for k in 0..9 {
                let v = v0 - 0.4 + 0.1 * k as f64;
                let f = x * (v - v0) * (v - v0);
                records.push((z_rel, v, f + 2e-4 * x.abs() * 0.16 * noise.sample(&mut rng)));
            }
        }
        let rep = calibrate(&records, R).unwrap();
        assert!((rep.v0_mean - v0).abs() < 2e-3);
        errors.push(rep.contact.z0 - z0);
    }
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    let worst = errors.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    assert!(mean.abs() < 0.5 * NANOMETRE, "bias {:e}", mean);
    assert!(worst < 2.0 * NANOMETRE, "worst {:e}", worst);
}

#[test]
fn contact_fit_is_insensitive_to_sample_order() {
    let z0 = 32.1e-9;
    let mut samples: Vec<(f64, f64)> = (0..12)
        .map(|i| {
            let z = 1.0e-6 + 0.35e-6 * i as f64;
            (z, polynomial_coefficient(R, z + z0).unwrap())
        })
        .collect();
    let a = fit_contact_separation(&samples, R).unwrap().z0;
    samples.reverse();
    let b = fit_contact_separation(&samples, R).unwrap().z0;
    assert!((a - b).abs() < 1e-13);
}

#[test]
fn deflection_then_separation_round_trip() {
    let m_true = fixtures::DEFLECTION_COEFFICIENT_NM * NANOMETRE;
    let contacts: Vec<(f64, f64)> = (0..15)
        .map(|i| {
            let s = 0.2 * i as f64;
            (s, 5e-7 - m_true * s)
        })
        .collect();
    let fit = fit_deflection_coefficient(&contacts).unwrap();
    assert!((fit.m - m_true).abs() < 1e-15);
    let model = SeparationModel::new(fit.m, 32.1e-9, -0.114, 1.44e-9).unwrap();
    let f = -200e-12;
    let z = reconstruct_separation(100e-9, model.signal_for_force(f), &model);
    assert!((z - (100e-9 + f / 1.44e-9 * m_true + 32.1e-9)).abs() < 1e-18);
}

#[test]
fn published_differences_fall_in_published_bands() {
    let xi95: Vec<f64> = FORCE_TABLE.iter().map(|r| r.xi95).collect();
    let band = ConfidenceBand {
        xi70: xi95.iter().map(|x| x / 2.0).collect(),
        xi95,
    };
    let conductive: Vec<f64> = FORCE_TABLE.iter().map(|r| r.diff_conductive).collect();
    let c = band_conformity(&conductive, &band).unwrap();
    assert_eq!(c.fraction95(), 1.0);

    let dielectric: Vec<f64> = FORCE_TABLE.iter().map(|r| r.diff_dielectric).collect();
    let d = band_conformity(&dielectric, &band).unwrap();
    let below_100: Vec<bool> = FORCE_TABLE
        .iter()
        .zip(&d.inside70)
        .filter(|(r, _)| r.z_nm > 65.0 && r.z_nm < 101.0)
        .map(|(_, i)| *i)
        .collect();
    assert_eq!(below_100, vec![false; 4]);
    assert!(d.fraction70() < c.fraction70());
}

#[test]
fn published_mean_forces_pass_through_alignment() {
    let grid: Vec<f64> = FORCE_TABLE.iter().map(|r| r.z_nm).collect();
    let force: Vec<f64> = FORCE_TABLE.iter().map(|r| r.f_expt).collect();
    let curve = RawCurve { z: grid.clone(), force: force.clone() };
    let set = align_to_grid(&[curve.clone(), curve], &grid).unwrap();
    assert_eq!(mean_force(&set).unwrap(), force);
    assert_eq!(mean_force(&set).unwrap()[0], -380.0);
}

/// Acceptance counts over 100 fixed-seed trials of 65 samples.
#[test]
fn normality_monte_carlo_rates() {
    let mut rng = StdRng::seed_from_u64(2024);
    let g = Normal::new(-140.0 * PICONEWTON, 12.0 * PICONEWTON).unwrap();
    let u = Uniform::new(-20.0, 20.0).unwrap();
    let (mut normal, mut uniform) = (0, 0);
    for _ in 0..100 {
        let a: Vec<f64> = (0..65).map(|_| g.sample(&mut rng)).collect();
        let b: Vec<f64> = (0..65).map(|_| u.sample(&mut rng)).collect();
        normal += normality_check(&a).unwrap().accepted as usize;
        uniform += normality_check(&b).unwrap().accepted as usize;
    }
    assert_eq!((normal, uniform), (60, 10));
}
