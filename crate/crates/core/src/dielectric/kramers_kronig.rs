use std::f64::consts::FRAC_2_PI;

use crate::quad::{integrate, integrate_breakpoints, QuadOptions};

use super::drude::{frequency, DrudeParams};
use super::{DielectricError, OpticalDataTable};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KramersKronigOptions {
    /// Relative tolerance of each quadrature piece.
    pub rel_tol: f64,
    /// Largest tolerated relative contribution of the unmodelled region below
    /// `omega_min` when no low-frequency extrapolation is supplied.
    pub tail_tol: f64,
}

impl Default for KramersKronigOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            tail_tol: 1e-4,
        }
    }
}

/// Dispersion-relation transform of an optical table onto the imaginary axis.
///
/// `Im ε` is taken from the Drude extrapolation below the table, from the
/// interpolated table inside it, and from an `ω⁻³` decay fitted to the last
/// decade of samples above it.
#[derive(Debug, Clone, PartialEq)]
pub struct KramersKronig {
    table: OpticalDataTable,
    extrapolation: Option<DrudeParams>,
    tail_coefficient: f64,
    options: KramersKronigOptions,
}

impl KramersKronig {
    pub fn new(table: OpticalDataTable, extrapolation: Option<DrudeParams>) -> Self {
        Self::with_options(table, extrapolation, KramersKronigOptions::default())
    }

    pub fn with_options(
        table: OpticalDataTable,
        extrapolation: Option<DrudeParams>,
        options: KramersKronigOptions,
    ) -> Self {
        let tail_coefficient = fit_cubic_tail(&table);
        Self {
            table,
            extrapolation,
            tail_coefficient,
            options,
        }
    }

    pub fn table(&self) -> &OpticalDataTable {
        &self.table
    }

    pub fn extrapolation(&self) -> Option<&DrudeParams> {
        self.extrapolation.as_ref()
    }

    /// Coefficient `C` of the high-frequency closure `Im ε ≈ C ω⁻³`.
    pub fn tail_coefficient(&self) -> f64 {
        self.tail_coefficient
    }

    pub fn eval(&self, xi: f64) -> Result<f64, DielectricError> {
        frequency(xi)?;
        let table_part = self.table_part(xi)?;
        let high_part = self.high_part(xi);
        let low_part = match &self.extrapolation {
            Some(d) => self.low_part(d, xi)?,
            None => {
                let first = self.table.im_eps()[0];
                let w = self.table.omega_min();
                // Contribution of a flat continuation of the first sample down to 0.
                let estimate = first / std::f64::consts::PI * (w * w / (xi * xi)).ln_1p();
                let partial = 1.0 + FRAC_2_PI * (table_part + high_part);
                if estimate > self.options.tail_tol * partial {
                    return Err(DielectricError::UncoveredLowFrequencyTail {
                        xi,
                        omega_min: w,
                        estimate,
                    });
                }
                0.0
            }
        };
        Ok(1.0 + FRAC_2_PI * (low_part + table_part + high_part))
    }

    fn low_part(&self, d: &DrudeParams, xi: f64) -> Result<f64, DielectricError> {
        let w_min = self.table.omega_min();
        let wp2g = d.omega_p() * d.omega_p() * d.gamma();
        let g2 = d.gamma() * d.gamma();
        let xi2 = xi * xi;
        let f = |w: f64| {
            let w2 = w * w;
            wp2g / ((w2 + g2) * (w2 + xi2))
        };
        let mut points = vec![0.0, w_min];
        for p in [xi, d.gamma()] {
            for s in [0.1, 1.0, 10.0] {
                if p * s < w_min {
                    points.push(p * s);
                }
            }
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        Ok(integrate_breakpoints(f, &points, &QuadOptions::relative(self.options.rel_tol))?.value)
    }

    fn table_part(&self, xi: f64) -> Result<f64, DielectricError> {
        let omega = self.table.omega();
        let im = self.table.im_eps();
        let xi2 = xi * xi;
        let opts = QuadOptions::relative(self.options.rel_tol);
        let mut total = 0.0;
        for k in 0..omega.len() - 1 {
            if im[k] == 0.0 && im[k + 1] == 0.0 {
                continue;
            }
            // Integrate in u = ln ω: ω dω/(ω²+ξ²) → ω² du/(ω²+ξ²).
            let f = |u: f64| {
                let w = u.exp();
                let w2 = w * w;
                w2 * self.table.segment_value(k, w) / (w2 + xi2)
            };
            total += integrate(f, omega[k].ln(), omega[k + 1].ln(), &opts)?.value;
        }
        Ok(total)
    }

    /// `∫_{ω_max}^∞ C ω⁻² / (ω² + ξ²) dω`, in closed form.
    fn high_part(&self, xi: f64) -> f64 {
        if self.tail_coefficient == 0.0 {
            return 0.0;
        }
        let a = self.table.omega_max();
        let t = xi / a;
        let g = if t < 1e-2 {
            let t2 = t * t;
            1.0 / 3.0 - t2 / 5.0 + t2 * t2 / 7.0 - t2 * t2 * t2 / 9.0
        } else {
            (t - t.atan()) / (t * t * t)
        };
        self.tail_coefficient * g / (a * a * a)
    }
}

/// Least-squares fit of `ln Im ε = ln C − 3 ln ω` over the last decade of
/// positive samples.
fn fit_cubic_tail(table: &OpticalDataTable) -> f64 {
    let cutoff = table.omega_max() / 10.0;
    let (sum, count) = table
        .omega()
        .iter()
        .zip(table.im_eps())
        .filter(|(w, v)| **w >= cutoff && **v > 0.0)
        .fold((0.0, 0usize), |(s, n), (w, v)| (s + v.ln() + 3.0 * w.ln(), n + 1));
    if count == 0 {
        0.0
    } else {
        (sum / count as f64).exp()
    }
}

/// `1 + (2/π) ∫₀^∞ ω Im ε(ω) / (ω² + ξ²) dω` for a single frequency.
pub fn kramers_kronig(
    table: &OpticalDataTable,
    extrapolation: Option<&DrudeParams>,
    xi: f64,
) -> Result<f64, DielectricError> {
    KramersKronig::new(table.clone(), extrapolation.copied()).eval(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::EV_TO_RAD_PER_S;
    use crate::dielectric::{drude_eps_imag_axis, drude_im_eps};

    fn log_grid(lo_ev: f64, hi_ev: f64, per_decade: usize) -> Vec<f64> {
        let decades = (hi_ev / lo_ev).log10();
        let n = (decades * per_decade as f64).round() as usize;
        (0..=n)
            .map(|i| lo_ev * 10f64.powf(decades * i as f64 / n as f64) * EV_TO_RAD_PER_S)
            .collect()
    }

    fn drude_table(d: &DrudeParams) -> OpticalDataTable {
        OpticalDataTable::sample(log_grid(1e-4, 1e4, 100), |w| drude_im_eps(d, w).unwrap()).unwrap()
    }

    #[test]
    fn reproduces_analytic_drude() {
        let d = DrudeParams::from_ev(9.0, 0.035).unwrap();
        let kk = KramersKronig::new(drude_table(&d), Some(d));
        for xi_ev in [1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1000.0] {
            let xi = xi_ev * EV_TO_RAD_PER_S;
            let got = kk.eval(xi).unwrap();
            let want = drude_eps_imag_axis(&d, xi).unwrap();
            assert!(((got - want) / want).abs() < 1e-4, "ξ = {xi_ev} eV: {got} vs {want}");
        }
    }

    #[test]
    fn free_function_matches_struct() {
        let d = DrudeParams::from_ev(9.0, 0.035).unwrap();
        let t = drude_table(&d);
        let xi = 1.0 * EV_TO_RAD_PER_S;
        let a = kramers_kronig(&t, Some(&d), xi).unwrap();
        let b = KramersKronig::new(t, Some(d)).eval(xi).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_table_is_vacuum() {
        let t = OpticalDataTable::new(vec![1e14, 1e15, 1e16], vec![0.0; 3]).unwrap();
        let kk = KramersKronig::new(t, None);
        for xi in [1e12, 1e15, 1e18] {
            assert_eq!(kk.eval(xi).unwrap(), 1.0);
        }
    }

    #[test]
    fn missing_metal_extrapolation_is_reported() {
        let d = DrudeParams::from_ev(9.0, 0.035).unwrap();
        let omega = log_grid(0.125, 1e4, 50);
        let t = OpticalDataTable::sample(omega, |w| drude_im_eps(&d, w).unwrap()).unwrap();
        let err = KramersKronig::new(t, None).eval(1e13).unwrap_err();
        assert!(matches!(err, DielectricError::UncoveredLowFrequencyTail { .. }));
    }

    #[test]
    fn transform_is_linear_in_table() {
        let omega = log_grid(0.5, 50.0, 40);
        let t = OpticalDataTable::sample(omega, |w| {
            let e = w / EV_TO_RAD_PER_S;
            e * (-(e - 4.0).powi(2)).exp() + 1e-3
        })
        .unwrap();
        let base = KramersKronig::new(t.clone(), None);
        let scaled = KramersKronig::new(t.scaled(3.0).unwrap(), None);
        for xi in [3e15, 1e16] {
            let a = base.eval(xi).unwrap() - 1.0;
            let b = scaled.eval(xi).unwrap() - 1.0;
            assert!((b / a - 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tail_fit_recovers_cubic_decay() {
        let omega = log_grid(1.0, 100.0, 20);
        let t = OpticalDataTable::sample(omega, |w| 5e48 / (w * w * w)).unwrap();
        let c = fit_cubic_tail(&t);
        assert!((c / 5e48 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn closure_series_matches_direct_form() {
        let t = OpticalDataTable::new(vec![1e15, 1e16], vec![1.0, 1e-3]).unwrap();
        let kk = KramersKronig::new(t, None);
        let a = kk.table.omega_max();
        for xi in [0.0099 * a, 0.0101 * a] {
            let tt = xi / a;
            let direct = kk.tail_coefficient * (tt - tt.atan()) / (tt * tt * tt) / (a * a * a);
            assert!((kk.high_part(xi) / direct - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_non_positive_xi() {
        let t = OpticalDataTable::new(vec![1e14, 1e15], vec![0.0; 2]).unwrap();
        assert!(KramersKronig::new(t, None).eval(0.0).is_err());
    }
}
