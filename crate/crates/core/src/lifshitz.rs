//! Zero-temperature Lifshitz force between a sphere and a plate in the
//! proximity-force form.
//!
//! With `ζ = 2zξ/c` and `y = 2zq` the force becomes
//! `F = ħcR/(16πz³) ∫₀^∞ dζ ∫_ζ^∞ dy y Σ_pol ln(1 − r⁽¹⁾r⁽²⁾e^{−y})`,
//! evaluated with nested adaptive quadrature.

use rayon::prelude::*;
use thiserror::Error;

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::dielectric::{DielectricError, Permittivity};
use crate::quad::{integrate_to_infinity, QuadError, QuadOptions};

/// Separation-to-radius ratio above which the proximity form is flagged.
pub const PROXIMITY_WARNING_RATIO: f64 = 0.05;

#[derive(Debug, Error)]
pub enum LifshitzError {
    #[error("separation must be positive and finite, got {0:e} m")]
    InvalidSeparation(f64),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("permittivity must be at least 1, got {0}")]
    PermittivityBelowOne(f64),
    #[error(transparent)]
    Permittivity(#[from] DielectricError),
    #[error("force integral did not converge: estimate {estimate:e} N, error bound {error:e} N")]
    NotConverged { estimate: f64, error: f64 },
    #[error("force integral failed: {0}")]
    Quadrature(QuadError),
    #[error("separation grid must be strictly increasing (index {index})")]
    UnsortedGrid { index: usize },
    #[error("grid point {index} (z = {z:e} m): {source}")]
    Point {
        index: usize,
        z: f64,
        #[source]
        source: Box<LifshitzError>,
    },
}

/// Sphere of radius `R` above a plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePlateGeometry {
    radius: f64,
    radius_uncertainty: f64,
}

impl SpherePlateGeometry {
    pub fn new(radius: f64, radius_uncertainty: f64) -> Result<Self, LifshitzError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(LifshitzError::InvalidGeometry(format!("radius {radius:e} m")));
        }
        if !(radius_uncertainty >= 0.0 && radius_uncertainty.is_finite()) {
            return Err(LifshitzError::InvalidGeometry(format!(
                "radius uncertainty {radius_uncertainty:e} m"
            )));
        }
        Ok(Self {
            radius,
            radius_uncertainty,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn radius_uncertainty(&self) -> f64 {
        self.radius_uncertainty
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifshitzOptions {
    /// Relative tolerance of the outer (frequency) integral.
    pub outer_rel_tol: f64,
    /// Relative tolerance of the inner (wave-vector) integral.
    pub inner_rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for LifshitzOptions {
    fn default() -> Self {
        Self {
            outer_rel_tol: 1e-5,
            inner_rel_tol: 1e-7,
            max_intervals: 500,
        }
    }
}

/// Force value with its estimated absolute error, N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceEstimate {
    pub force: f64,
    pub error: f64,
}

/// Force against separation; `z` strictly increasing, forces in N.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ForceCurve {
    pub z: Vec<f64>,
    pub force: Vec<f64>,
}

impl ForceCurve {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.z.iter().copied().zip(self.force.iter().copied())
    }
}

/// Fresnel coefficients `(r_∥, r_⊥)` at imaginary frequency `ξ` and transverse
/// wave number `k⊥`. `ε = ∞` gives `(1, 1)`.
pub fn reflection_coefficients(eps: f64, xi: f64, k_perp: f64) -> Result<(f64, f64), LifshitzError> {
    if !(eps >= 1.0) {
        return Err(LifshitzError::PermittivityBelowOne(eps));
    }
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(DielectricError::NonPositiveFrequency { value: xi }.into());
    }
    if !(k_perp >= 0.0) {
        return Err(LifshitzError::InvalidGeometry(format!("k_perp {k_perp:e}")));
    }
    let w = xi / SPEED_OF_LIGHT;
    let q = (k_perp * k_perp + w * w).sqrt();
    Ok(coefficients(eps, q, w))
}

/// Coefficients in terms of `q` and `ξ/c` (or their dimensionless images `y`, `ζ`).
fn coefficients(eps: f64, q: f64, w: f64) -> (f64, f64) {
    if eps.is_infinite() {
        return (1.0, 1.0);
    }
    let extra = (eps - 1.0) * w * w;
    let k = (q * q + extra).sqrt();
    let r_par = (eps * q - k) / (eps * q + k);
    // (k − q)/(k + q) without cancellation.
    let r_perp = extra / ((k + q) * (k + q));
    (r_par, r_perp)
}

/// `F(z)` for a sphere of radius `R` at separation `z`.
pub fn casimir_force(
    geom: &SpherePlateGeometry,
    eps1: &dyn Permittivity,
    eps2: &dyn Permittivity,
    z: f64,
) -> Result<f64, LifshitzError> {
    casimir_force_with_options(geom, eps1, eps2, z, &LifshitzOptions::default()).map(|e| e.force)
}

pub fn casimir_force_with_options(
    geom: &SpherePlateGeometry,
    eps1: &dyn Permittivity,
    eps2: &dyn Permittivity,
    z: f64,
    opts: &LifshitzOptions,
) -> Result<ForceEstimate, LifshitzError> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(LifshitzError::InvalidSeparation(z));
    }
    if z / geom.radius > PROXIMITY_WARNING_RATIO {
        log::warn!(
            "z/R = {:.3} exceeds {PROXIMITY_WARNING_RATIO}; proximity-force form loses accuracy",
            z / geom.radius
        );
    }
    let prefactor = HBAR * SPEED_OF_LIGHT * geom.radius / (16.0 * std::f64::consts::PI * z.powi(3));
    let freq_scale = SPEED_OF_LIGHT / (2.0 * z);

    let inner_opts = QuadOptions {
        rel_tol: opts.inner_rel_tol,
        abs_tol: 0.0,
        max_intervals: opts.max_intervals,
    };
    let outer_opts = QuadOptions {
        rel_tol: opts.outer_rel_tol,
        abs_tol: 0.0,
        max_intervals: opts.max_intervals,
    };

    let mut failure: Option<LifshitzError> = None;
    let outer = integrate_to_infinity(
        |zeta: f64| {
            if failure.is_some() {
                return f64::NAN;
            }
            match inner_integral(eps1, eps2, zeta, freq_scale, &inner_opts) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    f64::NAN
                }
            }
        },
        0.0,
        &outer_opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    match outer {
        Ok(r) => {
            let force = prefactor * r.value;
            Ok(ForceEstimate {
                force,
                error: prefactor * r.error + opts.inner_rel_tol * force.abs(),
            })
        }
        Err(QuadError::NotConverged { estimate, error, .. }) => Err(LifshitzError::NotConverged {
            estimate: prefactor * estimate,
            error: prefactor * error,
        }),
        Err(e) => Err(LifshitzError::Quadrature(e)),
    }
}

fn inner_integral(
    eps1: &dyn Permittivity,
    eps2: &dyn Permittivity,
    zeta: f64,
    freq_scale: f64,
    opts: &QuadOptions,
) -> Result<f64, LifshitzError> {
    // Kronrod nodes never land on ζ = 0; the guard only keeps ξ positive.
    let xi = zeta.max(f64::MIN_POSITIVE) * freq_scale;
    let (e1, e2) = (eps1.eps(xi)?, eps2.eps(xi)?);
    for e in [e1, e2] {
        if !(e >= 1.0) {
            return Err(LifshitzError::PermittivityBelowOne(e));
        }
    }
    let f = |y: f64| {
        let (p1, s1) = coefficients(e1, y, zeta);
        let (p2, s2) = coefficients(e2, y, zeta);
        let decay = (-y).exp();
        y * ((-p1 * p2 * decay).ln_1p() + (-s1 * s2 * decay).ln_1p())
    };
    match integrate_to_infinity(f, zeta, opts) {
        Ok(r) => Ok(r.value),
        Err(QuadError::NotConverged { estimate, error, .. }) => {
            Err(LifshitzError::NotConverged { estimate, error })
        }
        Err(e) => Err(LifshitzError::Quadrature(e)),
    }
}

/// Ideal-metal proximity-force result `−π³ħcR/(360 z³)`.
pub fn ideal_metal_force(radius: f64, z: f64) -> f64 {
    -std::f64::consts::PI.powi(3) * HBAR * SPEED_OF_LIGHT * radius / (360.0 * z.powi(3))
}

/// Pointwise force over a strictly increasing grid, evaluated in parallel.
pub fn force_curve(
    geom: &SpherePlateGeometry,
    eps1: &dyn Permittivity,
    eps2: &dyn Permittivity,
    z_grid: &[f64],
) -> Result<ForceCurve, LifshitzError> {
    force_curve_with_options(geom, eps1, eps2, z_grid, &LifshitzOptions::default())
}

pub fn force_curve_with_options(
    geom: &SpherePlateGeometry,
    eps1: &dyn Permittivity,
    eps2: &dyn Permittivity,
    z_grid: &[f64],
    opts: &LifshitzOptions,
) -> Result<ForceCurve, LifshitzError> {
    if let Some(i) = z_grid.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(LifshitzError::UnsortedGrid { index: i + 1 });
    }
    let force = z_grid
        .par_iter()
        .enumerate()
        .map(|(index, &z)| {
            casimir_force_with_options(geom, eps1, eps2, z, opts)
                .map(|e| e.force)
                .map_err(|source| LifshitzError::Point {
                    index,
                    z,
                    source: Box::new(source),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ForceCurve {
        z: z_grid.to_vec(),
        force,
    })
}
