use rayon::prelude::*;

use crate::interp::Pchip;

use super::{DielectricError, Permittivity, PermittivityModel};

/// Sampling of the cached grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheGrid {
    pub xi_min: f64,
    pub xi_max: f64,
    pub points_per_decade: usize,
}

impl Default for CacheGrid {
    fn default() -> Self {
        Self {
            xi_min: 1e11,
            xi_max: 1e18,
            points_per_decade: 200,
        }
    }
}

impl CacheGrid {
    pub fn points(&self) -> Vec<f64> {
        let decades = (self.xi_max / self.xi_min).log10();
        let n = (decades * self.points_per_decade as f64).round().max(1.0) as usize;
        (0..=n)
            .map(|i| self.xi_min * 10f64.powf(decades * i as f64 / n as f64))
            .collect()
    }
}

#[derive(Debug, Clone)]
enum Interpolant {
    /// PCHIP of `ln(ε − 1)` against `ln ξ`.
    LogSusceptibility(Pchip),
    /// PCHIP of `ε` against `ln ξ`, used when `ε − 1` is not positive everywhere.
    Plain(Pchip),
}

/// A model together with an optional pre-evaluated grid.
///
/// Models containing optical tables are sampled once and interpolated with a
/// monotone cubic in `ln ξ`; closed-form models are evaluated directly.
/// Frequencies outside the grid fall back to direct evaluation.
#[derive(Debug, Clone)]
pub struct CachedPermittivity {
    model: PermittivityModel,
    interpolant: Option<Interpolant>,
}

impl CachedPermittivity {
    pub fn new(model: PermittivityModel) -> Result<Self, DielectricError> {
        if model.contains_table() {
            Self::with_grid(model, CacheGrid::default())
        } else {
            Ok(Self::uncached(model))
        }
    }

    pub fn uncached(model: PermittivityModel) -> Self {
        Self {
            model,
            interpolant: None,
        }
    }

    pub fn with_grid(model: PermittivityModel, grid: CacheGrid) -> Result<Self, DielectricError> {
        let xs = grid.points();
        let values = xs
            .par_iter()
            .map(|&xi| model.eps(xi))
            .collect::<Result<Vec<_>, _>>()?;
        let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let interpolant = if values.iter().all(|v| *v > 1.0 && v.is_finite()) {
            let ly = values.iter().map(|v| (v - 1.0).ln()).collect();
            Pchip::new(lx, ly).map(Interpolant::LogSusceptibility)
        } else if values.iter().all(|v| v.is_finite()) {
            Pchip::new(lx, values).map(Interpolant::Plain)
        } else {
            None
        };
        Ok(Self { model, interpolant })
    }

    pub fn model(&self) -> &PermittivityModel {
        &self.model
    }

    pub fn is_cached(&self) -> bool {
        self.interpolant.is_some()
    }
}

impl Permittivity for CachedPermittivity {
    fn eps(&self, xi: f64) -> Result<f64, DielectricError> {
        let t = xi.ln();
        match &self.interpolant {
            Some(Interpolant::LogSusceptibility(p)) if p.contains(t) => Ok(1.0 + p.eval(t).exp()),
            Some(Interpolant::Plain(p)) if p.contains(t) => Ok(p.eval(t)),
            _ => self.model.eps(xi),
        }
    }
}

impl From<PermittivityModel> for CachedPermittivity {
    fn from(model: PermittivityModel) -> Self {
        Self::uncached(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::presets;

    #[test]
    fn cache_matches_direct_evaluation() {
        let model = presets::gold_tabulated();
        let grid = CacheGrid {
            xi_min: 1e12,
            xi_max: 1e17,
            points_per_decade: 40,
        };
        let cached = CachedPermittivity::with_grid(model.clone(), grid).unwrap();
        assert!(cached.is_cached());
        for xi in [1.7e12, 3.3e14, 5.5e15, 9.1e16] {
            let (a, b) = (cached.eps(xi).unwrap(), model.eps(xi).unwrap());
            assert!((a / b - 1.0).abs() < 1e-5, "{xi:e}: {a} vs {b}");
        }
        // Outside the grid the model is evaluated directly.
        assert_eq!(cached.eps(1e18).unwrap(), model.eps(1e18).unwrap());
    }

    #[test]
    fn closed_form_models_are_not_cached() {
        let c = CachedPermittivity::new(presets::gold()).unwrap();
        assert!(!c.is_cached());
        assert_eq!(c.eps(1e15).unwrap(), presets::gold().eps(1e15).unwrap());
    }

    #[test]
    fn grid_spacing() {
        let pts = CacheGrid::default().points();
        assert_eq!(pts.len(), 1401);
        assert!((pts[0] - 1e11).abs() < 1.0);
        assert!((pts[1400] / 1e18 - 1.0).abs() < 1e-12);
    }
}
