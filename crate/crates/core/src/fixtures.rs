//! Published reference data for the Au sphere / B-doped Si plate experiment.
//! Heights in nm, forces in pN, relative errors in percent.

/// Sphere radius and its uncertainty, μm.
pub const SPHERE_RADIUS_UM: f64 = 101.3;
pub const SPHERE_RADIUS_ERROR_UM: f64 = 0.15;
/// Separation uncertainty, nm.
pub const SEPARATION_ERROR_NM: f64 = 0.8;
/// Relative error of the optical data, as a fraction.
pub const OPTICAL_DATA_ERROR: f64 = 0.005;

/// Number of repeated force-distance measurements.
pub const MEASUREMENT_SETS: usize = 65;
/// Grid pitch and bounds of the averaged force curves, nm.
pub const GRID_PITCH_NM: f64 = 0.17;
pub const GRID_START_NM: f64 = 62.33;
pub const GRID_POINTS: usize = 1693;
/// Smoothed standard deviation of the mean force, pN.
pub const SMOOTHED_STD_OF_MEAN_PN: f64 = 1.5;
/// Systematic error components, pN: force calibration, deflection-coefficient
/// and separation errors, and instrumental noise.
pub const SYSTEMATIC_COMPONENTS_PN: [f64; 4] = [0.82, 0.55, 0.31, 0.12];
pub const SYSTEMATIC_TOTAL_PN: f64 = 1.17;
pub const RANDOM_ERROR_PN: f64 = 3.0;
pub const TOTAL_ERROR_PN: f64 = 3.33;

/// Calibration results.
pub const DEFLECTION_COEFFICIENT_NM: f64 = 43.3;
pub const DEFLECTION_COEFFICIENT_ERROR_NM: f64 = 0.3;
pub const RESIDUAL_POTENTIAL_V: f64 = -0.114;
pub const RESIDUAL_POTENTIAL_ERROR_V: f64 = 0.002;
pub const CONTACT_SEPARATION_NM: f64 = 32.1;
pub const FORCE_CALIBRATION_NN: f64 = 1.440;

/// Height distribution of the Au coating: (h nm, fraction).
pub const AU_TOPOGRAPHY: [(f64, f64); 26] = [
    (0.0, 8e-5),
    (1.0, 8.5e-4),
    (2.0, 1.21e-3),
    (3.0, 1.6e-3),
    (4.0, 4.09e-3),
    (5.0, 4.77e-3),
    (6.0, 4.71e-3),
    (7.0, 5.62e-3),
    (8.0, 1.111e-2),
    (9.0, 1.671e-2),
    (10.0, 2.591e-2),
    (11.0, 4.148e-2),
    (12.0, 6.052e-2),
    (13.0, 8.644e-2),
    (14.0, 8.165e-2),
    (15.0, 0.15265),
    (16.0, 0.1262),
    (17.0, 0.107),
    (18.0, 9.802e-2),
    (19.0, 6.958e-2),
    (20.0, 4.98e-2),
    (21.0, 2.58e-2),
    (22.0, 1.288e-2),
    (23.0, 6.4e-3),
    (24.0, 3.29e-3),
    (25.0, 1.11e-3),
];

/// Height distribution of the Si plate: (h nm, fraction).
pub const SI_TOPOGRAPHY: [(f64, f64); 11] = [
    (0.0, 2.0e-5),
    (0.1, 8.1e-4),
    (0.2, 8.84e-3),
    (0.3, 4.27e-2),
    (0.4, 0.10384),
    (0.5, 0.34379),
    (0.6, 0.3683),
    (0.7, 9.9e-2),
    (0.8, 3.05e-2),
    (0.9, 2.13e-3),
    (1.0, 7.0e-5),
];

/// Published zero levels and stochastic variances, nm.
pub const AU_ZERO_LEVEL_NM: f64 = 15.352;
pub const SI_ZERO_LEVEL_NM: f64 = 0.545;
pub const AU_STOCHASTIC_VARIANCE_NM: f64 = 3.446;
pub const SI_STOCHASTIC_VARIANCE_NM: f64 = 0.111;

/// Mean measured force, theory for conductive and dielectric Si, their
/// differences from experiment and the confidence half-widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceRow {
    pub z_nm: f64,
    pub f_expt: f64,
    pub f_conductive: f64,
    pub f_dielectric: f64,
    pub diff_conductive: f64,
    pub xi95: f64,
    pub diff_dielectric: f64,
    pub xi70: f64,
}

const fn row(v: [f64; 8]) -> ForceRow {
    ForceRow {
        z_nm: v[0],
        f_expt: v[1],
        f_conductive: v[2],
        f_dielectric: v[3],
        diff_conductive: v[4],
        xi95: v[5],
        diff_dielectric: v[6],
        xi70: v[7],
    }
}

pub const FORCE_TABLE: [ForceRow; 13] = [
    row([62.33, -380.0, -380.5, -374.4, -0.50, 15.2, 5.7, 7.6]),
    row([69.98, -280.9, -277.9, -272.9, 3.0, 10.4, 8.0, 5.2]),
    row([80.01, -196.4, -192.8, -188.9, 3.6, 7.1, 7.5, 3.55]),
    row([90.04, -140.4, -139.4, -136.3, 1.0, 5.4, 4.1, 2.7]),
    row([100.07, -106.2, -104.2, -101.7, 2.0, 4.5, 4.5, 2.25]),
    row([109.93, -80.30, -80.35, -78.23, -0.05, 4.1, 2.1, 2.05]),
    row([119.96, -62.90, -63.05, -61.26, -0.15, 3.9, 1.64, 1.95]),
    row([140.02, -40.98, -40.96, -39.64, 0.02, 3.8, 1.35, 1.9]),
    row([160.08, -26.93, -28.14, -27.11, -1.2, 3.7, -0.19, 1.8]),
    row([180.14, -19.70, -20.18, -19.36, -0.48, 3.7, 0.34, 1.8]),
    row([200.03, -14.71, -15.02, -14.35, -0.31, 3.7, 0.36, 1.8]),
    row([250.18, -7.132, -7.968, -7.539, -0.84, 3.7, -0.41, 1.8]),
    row([299.99, -5.221, -4.756, -4.455, 0.46, 3.7, 0.76, 1.8]),
];

/// Relative errors in percent at the separations of `FORCE_TABLE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeErrorRow {
    pub z_nm: f64,
    pub rand: f64,
    pub syst: f64,
    pub total: f64,
    pub theory_delta0: f64,
    pub theory_delta3: f64,
    pub theory_total: f64,
}

const fn rel(v: [f64; 7]) -> RelativeErrorRow {
    RelativeErrorRow {
        z_nm: v[0],
        rand: v[1],
        syst: v[2],
        total: v[3],
        theory_delta0: v[4],
        theory_delta3: v[5],
        theory_total: v[6],
    }
}

pub const RELATIVE_ERROR_TABLE: [RelativeErrorRow; 13] = [
    rel([62.33, 0.78, 0.31, 0.87, 0.55, 3.8, 3.8]),
    rel([69.98, 1.1, 0.42, 1.2, 0.56, 3.4, 3.4]),
    rel([80.01, 1.6, 0.60, 1.7, 0.56, 2.9, 2.9]),
    rel([90.04, 2.1, 0.84, 2.4, 0.56, 2.7, 2.7]),
    rel([100.07, 2.9, 1.1, 3.1, 0.56, 2.4, 2.4]),
    rel([109.93, 3.7, 1.4, 4.1, 0.56, 2.2, 2.2]),
    rel([119.96, 4.7, 1.8, 5.3, 0.56, 2.0, 2.0]),
    rel([140.02, 7.3, 2.8, 8.1, 0.57, 1.8, 1.9]),
    rel([160.08, 10.0, 4.1, 12.0, 0.58, 1.5, 1.7]),
    rel([180.14, 15.0, 5.7, 17.0, 0.58, 1.4, 1.6]),
    rel([200.03, 20.0, 7.7, 22.0, 0.59, 1.2, 1.4]),
    rel([250.18, 42.0, 16.0, 47.0, 0.61, 1.0, 1.3]),
    rel([299.99, 57.0, 22.0, 64.0, 0.64, 0.9, 1.2]),
];

/// Number of significant decimals printed for each relative-error entry,
/// used to judge agreement within printing precision.
pub fn printed_decimals(value: f64) -> u32 {
    if value >= 10.0 {
        0
    } else if value >= 1.0 {
        1
    } else {
        2
    }
}

/// The averaged-force separation grid in nm.
pub fn separation_grid_nm() -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|i| GRID_START_NM + GRID_PITCH_NM * i as f64)
        .collect()
}
