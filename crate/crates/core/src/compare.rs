//! Theory-experiment comparison: roughness-corrected theory curves for each
//! material variant, the error budget of a measurement campaign, confidence
//! bands and the acceptance or rejection of each variant.

use rayon::prelude::*;
use thiserror::Error;

use crate::dielectric::Permittivity;
use crate::interp::Pchip;
use crate::lifshitz::{force_curve_with_options, LifshitzError, LifshitzOptions, SpherePlateGeometry};
use crate::roughness::{additive_corrected_force, zero_level, RoughnessError, TopographyHistogram};
use crate::stats::{
    band_conformity, error_budget, mean_force, outlier_scan, smooth_variance, variance_of_mean,
    BandConformity, BudgetConfig, ConfidenceBand, ErrorBudget, ForceCurveSet, OutlierScan,
    SmoothingWeights, StatsError,
};

/// Default number of base-force nodes.
pub const DEFAULT_BASE_POINTS: usize = 400;

#[derive(Debug, Error)]
pub enum CompareError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("theory curve: {0}")]
    Lifshitz(#[from] LifshitzError),
    #[error("roughness correction: {0}")]
    Roughness(#[from] RoughnessError),
    #[error("statistics: {0}")]
    Stats(#[from] StatsError),
    #[error("separation {z:e} m outside the interpolated base force range [{lo:e}, {hi:e}] m")]
    OutsideBase { z: f64, lo: f64, hi: f64 },
    #[error("variant {name}: {source}")]
    Variant {
        name: String,
        #[source]
        source: Box<CompareError>,
    },
}

/// Lifshitz force between smooth surfaces on log-spaced nodes, interpolated
/// as `F z³` against `ln z`.
#[derive(Debug, Clone)]
pub struct InterpolatedForce {
    spline: Pchip,
}

impl InterpolatedForce {
    pub fn compute(
        geom: &SpherePlateGeometry,
        eps1: &dyn Permittivity,
        eps2: &dyn Permittivity,
        z_min: f64,
        z_max: f64,
        points: usize,
        opts: &LifshitzOptions,
    ) -> Result<Self, CompareError> {
        if !(z_min > 0.0 && z_max > z_min) || points < 4 {
            return Err(CompareError::InvalidInput(format!(
                "base range [{z_min:e}, {z_max:e}] m with {points} points"
            )));
        }
        let (a, b) = (z_min.ln(), z_max.ln());
        let t: Vec<f64> = (0..points)
            .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
            .collect();
        let mut z: Vec<f64> = t.iter().map(|v| v.exp()).collect();
        z[0] = z_min;
        z[points - 1] = z_max;
        let curve = force_curve_with_options(geom, eps1, eps2, &z, opts)?;
        let y = curve.points().map(|(z, f)| f * z * z * z).collect();
        let spline = Pchip::new(t, y).ok_or_else(|| CompareError::InvalidInput("base grid".into()))?;
        Ok(Self { spline })
    }

    /// Base nodes covering every shifted separation of a roughness correction
    /// over `[z_min, z_max]`.
    #[allow(clippy::too_many_arguments)]
    pub fn for_roughness(
        geom: &SpherePlateGeometry,
        eps1: &dyn Permittivity,
        eps2: &dyn Permittivity,
        t1: &TopographyHistogram,
        t2: &TopographyHistogram,
        z_min: f64,
        z_max: f64,
        points: usize,
        opts: &LifshitzOptions,
    ) -> Result<Self, CompareError> {
        let offset = zero_level(t1) + zero_level(t2);
        let lo = z_min + offset - t1.max_height() - t2.max_height();
        let hi = z_max + offset;
        if !(lo > 0.0) {
            return Err(RoughnessError::NonPositiveShift {
                z: z_min,
                shifted: lo,
                bin1: t1.len() - 1,
                bin2: t2.len() - 1,
            }
            .into());
        }
        // A small margin keeps rounding in the shifted separations inside the range.
        Self::compute(geom, eps1, eps2, lo * (1.0 - 1e-9), hi * (1.0 + 1e-9), points, opts)
    }

    pub fn domain(&self) -> (f64, f64) {
        let (a, b) = self.spline.domain();
        (a.exp(), b.exp())
    }

    pub fn eval(&self, z: f64) -> Result<f64, CompareError> {
        let t = z.ln();
        if !self.spline.contains(t) {
            let (lo, hi) = self.domain();
            return Err(CompareError::OutsideBase { z, lo, hi });
        }
        Ok(self.spline.eval(t) / (z * z * z))
    }
}

/// Additive roughness-corrected force on `z_grid` from an interpolated base.
pub fn rough_theory_curve(
    base: &InterpolatedForce,
    t1: &TopographyHistogram,
    t2: &TopographyHistogram,
    z_grid: &[f64],
) -> Result<Vec<f64>, CompareError> {
    z_grid
        .par_iter()
        .map(|&z| additive_corrected_force(|s| base.eval(s), t1, t2, z).map_err(CompareError::from))
        .collect()
}

/// Roughness-corrected theory on `z_grid` for one pair of materials.
#[allow(clippy::too_many_arguments)]
pub fn theory_curve(
    geom: &SpherePlateGeometry,
    sphere: &dyn Permittivity,
    plate: &dyn Permittivity,
    t1: &TopographyHistogram,
    t2: &TopographyHistogram,
    z_grid: &[f64],
    base_points: usize,
    opts: &LifshitzOptions,
) -> Result<Vec<f64>, CompareError> {
    let (first, last) = match (z_grid.first(), z_grid.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Ok(Vec::new()),
    };
    let base = InterpolatedForce::for_roughness(geom, sphere, plate, t1, t2, first, last, base_points, opts)?;
    rough_theory_curve(&base, t1, t2, z_grid)
}

/// Settings of a campaign comparison. Forces in N, lengths in m.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonConfig {
    pub budget: BudgetConfig,
    pub systematic_components: Vec<f64>,
    pub smoothing_window: usize,
    pub weights: SmoothingWeights,
    /// Confidence of the outlier check.
    pub outlier_beta: f64,
    /// Separation range over which variants are accepted or rejected.
    pub window: (f64, f64),
}

/// Agreement of one theory curve with the campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantReport {
    pub name: String,
    pub theory: Vec<f64>,
    /// `F^theor − F̄^expt`.
    pub differences: Vec<f64>,
    pub band: ConfidenceBand,
    pub conformity: BandConformity,
    /// Fractions of points inside the bands within the decision window.
    pub window_fraction95: f64,
    pub window_fraction70: f64,
    pub window_points: usize,
}

impl VariantReport {
    /// At least 95% of window points inside the 95% band and 70% inside the 70% band.
    pub fn consistent(&self) -> bool {
        self.window_fraction95 >= 0.95 && !self.rejected_at_70()
    }

    /// Fewer than 70% of window points inside the 70% band.
    pub fn rejected_at_70(&self) -> bool {
        self.window_fraction70 < 0.70
    }
}

/// Overall outcome of a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The designated variant is consistent and no variant is rejected.
    Accepted,
    /// At least one variant is rejected at 70% confidence, or the designated
    /// variant is inconsistent.
    VariantRejected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub z: Vec<f64>,
    pub mean: Vec<f64>,
    pub std_of_mean: Vec<f64>,
    pub smoothed: Vec<f64>,
    pub outliers: OutlierScan,
    pub budget: ErrorBudget,
    pub variants: Vec<VariantReport>,
}

impl Comparison {
    pub fn variant(&self, name: &str) -> Option<&VariantReport> {
        self.variants.iter().find(|v| v.name == name)
    }

    pub fn verdict(&self, designated: &str) -> Result<Verdict, CompareError> {
        let d = self
            .variant(designated)
            .ok_or_else(|| CompareError::InvalidInput(format!("no variant named {designated}")))?;
        if d.consistent() && !self.variants.iter().any(VariantReport::rejected_at_70) {
            Ok(Verdict::Accepted)
        } else {
            Ok(Verdict::VariantRejected)
        }
    }
}

/// Error budget, bands and conformity of each named theory curve (on the
/// campaign grid) against the campaign.
pub fn compare_campaign(
    set: &ForceCurveSet,
    theories: &[(String, Vec<f64>)],
    cfg: &ComparisonConfig,
) -> Result<Comparison, CompareError> {
    if !(cfg.window.1 >= cfg.window.0) {
        return Err(CompareError::InvalidInput(format!("decision window {:?}", cfg.window)));
    }
    let z = set.z().to_vec();
    let mean = mean_force(set)?;
    let std_of_mean = variance_of_mean(set)?;
    let smoothed = smooth_variance(&std_of_mean, cfg.smoothing_window, cfg.weights)?;
    let outliers = outlier_scan(set, cfg.outlier_beta)?;
    let budget = error_budget(&z, &smoothed, set.n(), &cfg.systematic_components, &cfg.budget)?;

    let in_window: Vec<bool> = z.iter().map(|v| *v >= cfg.window.0 && *v <= cfg.window.1).collect();
    let window_points = in_window.iter().filter(|b| **b).count();
    let variants = theories
        .iter()
        .map(|(name, theory)| {
            variant_report(name, theory, &mean, &budget, &in_window, window_points).map_err(|e| {
                CompareError::Variant {
                    name: name.clone(),
                    source: Box::new(e),
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Comparison {
        z,
        mean,
        std_of_mean,
        smoothed,
        outliers,
        budget,
        variants,
    })
}

fn variant_report(
    name: &str,
    theory: &[f64],
    mean: &[f64],
    budget: &ErrorBudget,
    in_window: &[bool],
    window_points: usize,
) -> Result<VariantReport, CompareError> {
    let theory_errors = budget.theory_absolute(theory)?;
    let band = ConfidenceBand::from_errors(&theory_errors, &budget.total)?;
    let differences: Vec<f64> = theory.iter().zip(mean).map(|(t, m)| t - m).collect();
    let conformity = band_conformity(&differences, &band)?;
    let fraction = |inside: &[bool]| {
        if window_points == 0 {
            return 1.0;
        }
        inside
            .iter()
            .zip(in_window)
            .filter(|(i, w)| **i && **w)
            .count() as f64
            / window_points as f64
    };
    Ok(VariantReport {
        name: name.to_string(),
        theory: theory.to_vec(),
        window_fraction95: fraction(&conformity.inside95),
        window_fraction70: fraction(&conformity.inside70),
        window_points,
        differences,
        band,
        conformity,
    })
}
