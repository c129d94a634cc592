use std::f64::consts::PI;

use crate::constants::VACUUM_PERMITTIVITY;

use super::CalibrationError;

/// Coefficients `c₋₁ … c₆` of the sphere-plate electrostatic polynomial.
pub const ELECTROSTATIC_COEFFICIENTS: [f64; 8] = [
    0.5, -1.18260, 22.2375, -571.366, 9592.45, -90200.5, 383084.0, -300357.0,
];

/// `z/R` range over which the polynomial was fitted.
pub const POLYNOMIAL_VALIDITY: (f64, f64) = (0.005, 0.06);

/// Relative size of the estimated series tail at which summation stops.
pub const SERIES_TOLERANCE: f64 = 1e-12;

/// Exact sphere-plate force `2πε₀(V−V₀)² Σₙ (coth α − n coth nα)/sinh nα`,
/// `cosh α = 1 + z/R`. Negative values are attractive.
pub fn exact_electrostatic_force(
    radius: f64,
    z: f64,
    v: f64,
    v0: f64,
    n_terms: usize,
) -> Result<f64, CalibrationError> {
    Ok(exact_coefficient(radius, z, n_terms)? * (v - v0) * (v - v0))
}

/// `F / (V − V₀)²` from the exact series, N/V².
pub fn exact_coefficient(radius: f64, z: f64, n_terms: usize) -> Result<f64, CalibrationError> {
    check_geometry(radius, z)?;
    let alpha = acosh_one_plus(z / radius);
    let coth = |x: f64| 1.0 / x.tanh();
    let coth_alpha = coth(alpha);

    let mut sum = 0.0;
    let mut prev = 0.0f64;
    for n in 2..=n_terms.max(2) {
        let na = n as f64 * alpha;
        if na > 700.0 {
            // Remaining terms underflow relative to the partial sum.
            return Ok(2.0 * PI * VACUUM_PERMITTIVITY * sum);
        }
        let term = (coth_alpha - n as f64 * coth(na)) / na.sinh();
        sum += term;
        let ratio = if prev != 0.0 { (term / prev).abs() } else { 1.0 };
        prev = term;
        if ratio < 1.0 {
            let tail = term.abs() * ratio / (1.0 - ratio);
            if tail < SERIES_TOLERANCE * sum.abs() {
                return Ok(2.0 * PI * VACUUM_PERMITTIVITY * sum);
            }
        }
    }
    let ratio = (-alpha).exp();
    Err(CalibrationError::SeriesNotConverged {
        terms: n_terms,
        tail: prev.abs() * ratio / (1.0 - ratio) / sum.abs(),
    })
}

/// `acosh(1 + x)` accurate for small `x`.
fn acosh_one_plus(x: f64) -> f64 {
    (x + (x * (x + 2.0)).sqrt()).ln_1p()
}

/// Polynomial basis `X(z) = −2πε₀ Σ cᵢ (z/R)^i`, N/V².
pub fn polynomial_coefficient(radius: f64, z: f64) -> Result<f64, CalibrationError> {
    check_geometry(radius, z)?;
    let t = z / radius;
    if t < POLYNOMIAL_VALIDITY.0 || t > POLYNOMIAL_VALIDITY.1 {
        log::warn!(
            "z/R = {t:.4} outside the polynomial validity range [{}, {}]",
            POLYNOMIAL_VALIDITY.0,
            POLYNOMIAL_VALIDITY.1
        );
    }
    Ok(polynomial_unchecked(radius, z))
}

pub(crate) fn polynomial_unchecked(radius: f64, z: f64) -> f64 {
    let t = z / radius;
    let series = ELECTROSTATIC_COEFFICIENTS[1..]
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * t + c);
    -2.0 * PI * VACUUM_PERMITTIVITY * (ELECTROSTATIC_COEFFICIENTS[0] / t + series)
}

/// `d X / d z` of the polynomial basis.
pub(crate) fn polynomial_derivative(radius: f64, z: f64) -> f64 {
    let t = z / radius;
    let mut d = -ELECTROSTATIC_COEFFICIENTS[0] / (t * t);
    for (i, c) in ELECTROSTATIC_COEFFICIENTS.iter().enumerate().skip(2) {
        let p = (i - 1) as i32;
        d += c * p as f64 * t.powi(p - 1);
    }
    -2.0 * PI * VACUUM_PERMITTIVITY * d / radius
}

/// `X(z)(V − V₀)²` with the polynomial basis.
pub fn polynomial_electrostatic_force(
    radius: f64,
    z: f64,
    v: f64,
    v0: f64,
) -> Result<f64, CalibrationError> {
    Ok(polynomial_coefficient(radius, z)? * (v - v0) * (v - v0))
}

fn check_geometry(radius: f64, z: f64) -> Result<(), CalibrationError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(CalibrationError::InvalidInput(format!("radius {radius:e} m")));
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(CalibrationError::InvalidInput(format!("separation {z:e} m")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: f64 = 101.3e-6;

    #[test]
    fn compensated_potential_gives_zero() {
        assert_eq!(exact_electrostatic_force(R, 2e-6, 0.3, 0.3, 10_000).unwrap(), 0.0);
    }

    #[test]
    fn parallel_capacitor_limit() {
        for t in [1e-4, 5e-4, 9e-4] {
            let z = t * R;
            let f = exact_electrostatic_force(R, z, 1.0, 0.0, 1_000_000).unwrap();
            let leading = -PI * VACUUM_PERMITTIVITY * R / z;
            assert!((f / leading - 1.0).abs() < 0.01, "z/R = {t}: {}", f / leading);
        }
    }

    #[test]
    fn polynomial_tracks_series() {
        let mut worst = 0.0f64;
        for k in 0..=64 {
            let z = 1.8e-6 + 3.2e-6 * k as f64 / 64.0;
            let a = exact_coefficient(R, z, 100_000).unwrap();
            let b = polynomial_coefficient(R, z).unwrap();
            worst = worst.max((b / a - 1.0).abs());
            assert!(b < 0.0);
        }
        assert!(worst <= 1.5e-5, "{worst:e}");
    }

    #[test]
    fn leading_term_alone() {
        let z = 3e-6;
        let lead = -2.0 * PI * VACUUM_PERMITTIVITY * ELECTROSTATIC_COEFFICIENTS[0] * R / z;
        assert!((lead / (-PI * VACUUM_PERMITTIVITY * R / z) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn doubling_terms_is_stable() {
        for t in [0.005, 0.02, 0.05] {
            let z = t * R;
            let a = exact_coefficient(R, z, 20_000).unwrap();
            let b = exact_coefficient(R, z, 40_000).unwrap();
            assert!((a / b - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn too_few_terms_reports_tail() {
        match exact_coefficient(R, 1e-3 * R, 5) {
            Err(CalibrationError::SeriesNotConverged { terms, tail }) => {
                assert_eq!(terms, 5);
                assert!(tail > 1e-8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let z = 2.5e-6;
        let h = 1e-12;
        let fd = (polynomial_unchecked(R, z + h) - polynomial_unchecked(R, z - h)) / (2.0 * h);
        assert!((polynomial_derivative(R, z) / fd - 1.0).abs() < 1e-6);
    }
}
