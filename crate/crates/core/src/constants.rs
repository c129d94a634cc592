//! Physical constants and unit conversions (SI unless stated otherwise).

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Electron rest mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Angular frequency corresponding to 1 eV, rad/s (optical-data convention).
pub const EV_TO_RAD_PER_S: f64 = 1.519e15;

pub const NANOMETRE: f64 = 1e-9;
pub const MICROMETRE: f64 = 1e-6;
pub const PICONEWTON: f64 = 1e-12;

#[inline]
pub fn ev_to_rad_per_s(ev: f64) -> f64 {
    ev * EV_TO_RAD_PER_S
}

#[inline]
pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega / EV_TO_RAD_PER_S
}
