use std::f64::consts::PI;

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::{storage::Owned, DMatrix, DVector, Dyn, OMatrix, OVector, Vector1, Vector2, U1, U2};

use crate::constants::VACUUM_PERMITTIVITY;

use super::electrostatic::{polynomial_derivative, polynomial_unchecked};
use super::CalibrationError;

/// Vertex and curvature of `F = X (V − V₀)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolaFit {
    /// Residual potential, V.
    pub v0: f64,
    /// Curvature `X`, N/V².
    pub curvature: f64,
    /// Root-mean-square residual, N.
    pub rms: f64,
}

/// Shift `z₀` of the electrostatic basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactFit {
    /// Contact separation, m.
    pub z0: f64,
    /// Root-mean-square residual, N/V².
    pub rms: f64,
}

/// Slope of contact piezo position against deflection signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeflectionFit {
    /// Deflection coefficient, m per unit signal.
    pub m: f64,
    /// Standard error of `m`.
    pub std_error: f64,
    /// Piezo position at zero deflection, m.
    pub intercept: f64,
}

struct Parabola<'a> {
    v: &'a [f64],
    f: &'a [f64],
    scale: f64,
    params: Vector2<f64>,
}

impl LeastSquaresProblem<f64, Dyn, U2> for Parabola<'_> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, U2>;
    type ParameterStorage = Owned<f64, U2>;

    fn set_params(&mut self, x: &Vector2<f64>) {
        self.params = *x;
    }

    fn params(&self) -> Vector2<f64> {
        self.params
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        let (v0, x) = (self.params[0], self.params[1]);
        Some(DVector::from_iterator(
            self.v.len(),
            self.v
                .iter()
                .zip(self.f)
                .map(|(v, f)| x * (v - v0) * (v - v0) - f / self.scale),
        ))
    }

    fn jacobian(&self) -> Option<OMatrix<f64, Dyn, U2>> {
        let (v0, x) = (self.params[0], self.params[1]);
        let mut j = OMatrix::<f64, Dyn, U2>::zeros(self.v.len());
        for (i, v) in self.v.iter().enumerate() {
            j[(i, 0)] = -2.0 * x * (v - v0);
            j[(i, 1)] = (v - v0) * (v - v0);
        }
        Some(j)
    }
}

/// Least-squares fit of `F = X (V − V₀)²` to forces measured at one separation.
pub fn fit_voltage_parabola(samples: &[(f64, f64)]) -> Result<ParabolaFit, CalibrationError> {
    let mut distinct: Vec<f64> = samples.iter().map(|s| s.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(CalibrationError::Degenerate(format!(
            "parabola fit needs at least 3 distinct voltages, got {}",
            distinct.len()
        )));
    }
    if samples.iter().any(|(v, f)| !v.is_finite() || !f.is_finite()) {
        return Err(CalibrationError::InvalidInput("non-finite sweep sample".into()));
    }
    let v: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let f: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let scale = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Err(CalibrationError::Degenerate("all forces are zero".into()));
    }

    let v0 = samples
        .iter()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|s| s.0)
        .expect("non-empty");
    let (num, den) = v.iter().zip(&f).fold((0.0, 0.0), |(n, d), (vi, fi)| {
        let w = (vi - v0) * (vi - v0);
        (n + w * fi / scale, d + w * w)
    });
    let problem = Parabola {
        v: &v,
        f: &f,
        scale,
        params: Vector2::new(v0, num / den),
    };
    let (solved, report) = LevenbergMarquardt::new()
        .with_ftol(1e-15)
        .with_xtol(1e-15)
        .minimize(problem);
    if !report.termination.was_successful() {
        return Err(CalibrationError::FitFailed(format!("{:?}", report.termination)));
    }
    let p = solved.params;
    let rms = rms(&solved.residuals().expect("finite")) * scale;
    Ok(ParabolaFit {
        v0: p[0],
        curvature: p[1] * scale,
        rms,
    })
}

struct ContactShift<'a> {
    z: &'a [f64],
    x: &'a [f64],
    radius: f64,
    scale: f64,
    params: Vector1<f64>,
}

impl LeastSquaresProblem<f64, Dyn, U1> for ContactShift<'_> {
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, U1>;
    type ParameterStorage = Owned<f64, U1>;

    fn set_params(&mut self, x: &Vector1<f64>) {
        self.params = *x;
    }

    fn params(&self) -> Vector1<f64> {
        self.params
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        let z0 = self.params[0];
        if self.z.iter().any(|z| z + z0 <= 0.0) {
            return None;
        }
        Some(DVector::from_iterator(
            self.z.len(),
            self.z
                .iter()
                .zip(self.x)
                .map(|(z, x)| (polynomial_unchecked(self.radius, z + z0) - x) / self.scale),
        ))
    }

    fn jacobian(&self) -> Option<OMatrix<f64, Dyn, U1>> {
        let z0 = self.params[0];
        Some(OMatrix::<f64, Dyn, U1>::from_iterator(
            self.z.len(),
            self.z
                .iter()
                .map(|z| polynomial_derivative(self.radius, z + z0) / self.scale),
        ))
    }
}

/// Fits the shift `z₀` so that `X(z_rel + z₀)` matches the measured curvatures.
/// All samples carry equal weight.
pub fn fit_contact_separation(samples: &[(f64, f64)], radius: f64) -> Result<ContactFit, CalibrationError> {
    if samples.len() < 8 {
        return Err(CalibrationError::Degenerate(format!(
            "contact fit needs at least 8 samples, got {}",
            samples.len()
        )));
    }
    if !(radius > 0.0) {
        return Err(CalibrationError::InvalidInput(format!("radius {radius:e} m")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (lo, hi) = (sorted[0].0, sorted[sorted.len() - 1].0);
    if lo > 0.0 && hi / lo < 2.0 {
        return Err(CalibrationError::Degenerate(format!(
            "separations span only a factor {:.3}; at least 2 is required",
            hi / lo
        )));
    }
    if sorted.iter().any(|s| !(s.1 < 0.0) || !s.0.is_finite()) {
        return Err(CalibrationError::InvalidInput(
            "curvatures must be negative and separations finite".into(),
        ));
    }

    // Leading term X ≈ −πε₀R/z on the two closest samples.
    let estimate = |(z, x): (f64, f64)| -PI * VACUUM_PERMITTIVITY * radius / x - z;
    let z0_init = 0.5 * (estimate(sorted[0]) + estimate(sorted[1]));

    let z: Vec<f64> = sorted.iter().map(|s| s.0).collect();
    let x: Vec<f64> = sorted.iter().map(|s| s.1).collect();
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let problem = ContactShift {
        z: &z,
        x: &x,
        radius,
        scale,
        params: Vector1::new(z0_init.max(1e-12 - lo)),
    };
    let gradient: f64 = problem.jacobian().expect("finite").iter().map(|v| v * v).sum();
    if !(gradient > 0.0) {
        return Err(CalibrationError::Degenerate("objective is flat in z0".into()));
    }
    let (solved, report) = LevenbergMarquardt::new()
        .with_ftol(1e-15)
        .with_xtol(1e-15)
        .minimize(problem);
    if !report.termination.was_successful() {
        return Err(CalibrationError::FitFailed(format!("{:?}", report.termination)));
    }
    let residuals = solved.residuals().ok_or_else(|| {
        CalibrationError::FitFailed("fit moved a sample to non-positive separation".into())
    })?;
    Ok(ContactFit {
        z0: solved.params[0],
        rms: rms(&residuals) * scale,
    })
}

/// Linear regression of contact piezo position on deflection signal;
/// `m` is minus the slope. `contacts` are (deflection signal, z_piezo m).
pub fn fit_deflection_coefficient(contacts: &[(f64, f64)]) -> Result<DeflectionFit, CalibrationError> {
    let n = contacts.len();
    if n < 3 {
        return Err(CalibrationError::Degenerate(format!(
            "deflection fit needs at least 3 contacts, got {n}"
        )));
    }
    let nf = n as f64;
    let mean_s = contacts.iter().map(|c| c.0).sum::<f64>() / nf;
    let mean_z = contacts.iter().map(|c| c.1).sum::<f64>() / nf;
    let sxx: f64 = contacts.iter().map(|c| (c.0 - mean_s).powi(2)).sum();
    let spread = contacts.iter().fold(0.0f64, |m, c| m.max(c.0.abs()));
    if !(sxx > 1e-24 * spread * spread * nf) {
        return Err(CalibrationError::Degenerate(
            "all deflection signals are equal; slope is not identifiable".into(),
        ));
    }
    let sxy: f64 = contacts
        .iter()
        .map(|c| (c.0 - mean_s) * (c.1 - mean_z))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_z - slope * mean_s;
    let sse: f64 = contacts
        .iter()
        .map(|c| (c.1 - intercept - slope * c.0).powi(2))
        .sum();
    let std_error = if n > 2 { (sse / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(DeflectionFit {
        m: -slope,
        std_error,
        intercept,
    })
}

/// Position along `x` where `y` first reaches `level`, interpolating linearly
/// between the neighbouring samples.
pub fn locate_crossing(x: &[f64], y: &[f64], level: f64) -> Option<f64> {
    if x.len() != y.len() {
        return None;
    }
    for i in 0..x.len() {
        if y[i] == level {
            return Some(x[i]);
        }
        if i > 0 && (y[i - 1] - level) * (y[i] - level) < 0.0 {
            let s = (level - y[i - 1]) / (y[i] - y[i - 1]);
            return Some(x[i - 1] + s * (x[i] - x[i - 1]));
        }
    }
    None
}

/// Least-squares polynomial coefficients, lowest order first.
pub fn fit_polynomial(x: &[f64], y: &[f64], degree: usize) -> Result<Vec<f64>, CalibrationError> {
    if x.len() != y.len() {
        return Err(CalibrationError::InvalidInput("x and y lengths differ".into()));
    }
    if x.len() <= degree {
        return Err(CalibrationError::Degenerate(format!(
            "degree {degree} fit needs more than {degree} samples, got {}",
            x.len()
        )));
    }
    // Centre and scale x for conditioning, then expand back.
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let half = x.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
    if half == 0.0 {
        return Err(CalibrationError::Degenerate("all abscissae are equal".into()));
    }
    let a = DMatrix::from_fn(x.len(), degree + 1, |i, j| ((x[i] - mean) / half).powi(j as i32));
    let b = DVector::from_column_slice(y);
    let svd = a.svd(true, true);
    let max_sv = svd.singular_values.max();
    if svd.singular_values.min() <= 1e-12 * max_sv {
        return Err(CalibrationError::Degenerate("polynomial design is rank deficient".into()));
    }
    let scaled: OVector<f64, Dyn> = svd
        .solve(&b, 1e-14 * max_sv)
        .map_err(|e| CalibrationError::FitFailed(e.to_string()))?;

    // p(x) = Σ a_j ((x − mean)/half)^j, expanded with binomial coefficients.
    let mut coeffs = vec![0.0; degree + 1];
    for (j, aj) in scaled.iter().enumerate() {
        let s = aj / half.powi(j as i32);
        let mut binom = 1.0;
        for k in 0..=j {
            coeffs[k] += s * binom * (-mean).powi((j - k) as i32);
            binom = binom * (j - k) as f64 / (k + 1) as f64;
        }
    }
    Ok(coeffs)
}

/// Evaluates a polynomial with coefficients lowest order first.
pub fn eval_polynomial(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn rms(r: &DVector<f64>) -> f64 {
    (r.norm_squared() / r.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::electrostatic::polynomial_coefficient;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    const R: f64 = 101.3e-6;

    fn sweep(x: f64, v0: f64, voltages: &[f64]) -> Vec<(f64, f64)> {
        voltages.iter().map(|v| (*v, x * (v - v0).powi(2))).collect()
    }

    #[test]
    fn parabola_round_trip() {
        let x = polynomial_coefficient(R, 2e-6).unwrap();
        let volts: Vec<f64> = (0..9).map(|i| -0.5 + 0.1 * i as f64).collect();
        let fit = fit_voltage_parabola(&sweep(x, -0.114, &volts)).unwrap();
        assert!((fit.v0 + 0.114).abs() < 1e-6);
        assert!((fit.curvature / x - 1.0).abs() < 1e-9);
    }

    #[test]
    fn parabola_through_three_points() {
        let fit = fit_voltage_parabola(&sweep(-2.0, 0.3, &[-1.0, 0.0, 2.0])).unwrap();
        assert!((fit.v0 - 0.3).abs() < 1e-10);
        assert!((fit.curvature + 2.0).abs() < 1e-10);
        assert!(fit.rms < 1e-10);
    }

    #[test]
    fn parabola_rejects_degenerate_design() {
        assert!(matches!(
            fit_voltage_parabola(&[(0.1, 1.0), (0.1, 1.1), (0.2, 2.0)]),
            Err(CalibrationError::Degenerate(_))
        ));
    }

    #[test]
    fn parabola_recovers_v0_under_voltage_noise() {
        // 5 voltages with 2 mV jitter on the applied voltage, 100 trials.
        let x = polynomial_coefficient(R, 3e-6).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        let noise = Normal::new(0.0, 0.002).unwrap();
        let nominal = [-0.4, -0.2, 0.0, 0.2, 0.4];
        let mut inside = 0;
        for _ in 0..100 {
            let samples: Vec<(f64, f64)> = nominal
                .iter()
                .map(|v| {
                    let actual: f64 = v + noise.sample(&mut rng);
                    (*v, x * (actual + 0.114).powi(2))
                })
                .collect();
            let fit = fit_voltage_parabola(&samples).unwrap();
            if (fit.v0 + 0.114).abs() <= 0.002 {
                inside += 1;
            }
        }
        assert!(inside >= 95, "coverage {inside}/100");
    }

    fn contact_samples(z0: f64) -> Vec<(f64, f64)> {
        (0..20)
            .map(|i| {
                let z_rel = 1.2e-6 + 3.8e-6 * i as f64 / 19.0;
                (z_rel, polynomial_unchecked(R, z_rel + z0))
            })
            .collect()
    }

    #[test]
    fn contact_round_trip() {
        let fit = fit_contact_separation(&contact_samples(32.1e-9), R).unwrap();
        assert!((fit.z0 - 32.1e-9).abs() < 0.1e-9, "{:e}", fit.z0);
        let fit = fit_contact_separation(&contact_samples(0.0), R).unwrap();
        assert!(fit.z0.abs() < 1e-12);
    }

    #[test]
    fn contact_fit_requirements() {
        let few = &contact_samples(32.1e-9)[..5];
        assert!(fit_contact_separation(few, R).is_err());
        let narrow: Vec<(f64, f64)> = (0..10)
            .map(|i| {
                let z = 2e-6 + 1e-8 * i as f64;
                (z, polynomial_unchecked(R, z))
            })
            .collect();
        assert!(fit_contact_separation(&narrow, R).is_err());
    }

    #[test]
    fn deflection_round_trip_and_symmetry() {
        let m = 43.3e-9;
        let contacts: Vec<(f64, f64)> =
            [0.1, 0.4, 0.9, 1.6, 2.5].iter().map(|s| (*s, 5e-7 - m * s)).collect();
        let fit = fit_deflection_coefficient(&contacts).unwrap();
        assert!((fit.m - m).abs() < 1e-18);
        let mut reversed = contacts.clone();
        reversed.reverse();
        assert_eq!(fit_deflection_coefficient(&reversed).unwrap().m, fit.m);

        let flat: Vec<(f64, f64)> = contacts.iter().map(|c| (c.0, 1e-7)).collect();
        assert_eq!(fit_deflection_coefficient(&flat).unwrap().m, 0.0);

        let collinear: Vec<(f64, f64)> = contacts.iter().map(|c| (1.0, c.1)).collect();
        assert!(fit_deflection_coefficient(&collinear).is_err());
    }

    #[test]
    fn polynomial_fit_recovers_quartic() {
        let coeffs = [3.0, -1.5, 0.25, 0.04, -0.002];
        let x: Vec<f64> = (0..40).map(|i| i as f64 * 0.25).collect();
        let y: Vec<f64> = x.iter().map(|v| eval_polynomial(&coeffs, *v)).collect();
        let fit = fit_polynomial(&x, &y, 4).unwrap();
        for (a, b) in fit.iter().zip(coeffs) {
            assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()), "{a} vs {b}");
        }
        assert!(fit_polynomial(&x[..3], &y[..3], 4).is_err());
    }

    #[test]
    fn crossing_interpolates_between_samples() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [0.0, 0.2, 1.0, 1.0];
        assert!((locate_crossing(&x, &y, 0.6).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(locate_crossing(&x, &y, 2.0), None);
    }
}
