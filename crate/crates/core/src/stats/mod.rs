//! Experimental error analysis and the comparison of theory with measured
//! force curves: outlier screening, variance smoothing, random, systematic
//! and total errors, the theoretical error budget and confidence bands.

mod band;
mod budget;
mod campaign;
mod normality;
mod tables;

use thiserror::Error;

pub use band::{band_conformity, confidence_band, BandConformity, ConfidenceBand};
pub use budget::{
    combine_systematic, error_budget, random_error, relative_errors, theory_error_budget,
    total_experimental_error, BudgetConfig, ErrorBudget, TheoryBudget, TotalErrorPolicy,
    RATIO_LOWER, RATIO_MARGIN, RATIO_UPPER,
};
pub use campaign::{
    align_to_grid, mean_force, outlier_scan, sample_std, simulate_campaign, smooth_variance,
    variance_of_mean, ForceCurveSet, OutlierScan, RawCurve, SmoothingWeights,
    DEFAULT_SMOOTHING_WINDOW,
};
pub use normality::{normality_check, NormalityCheck, NORMALITY_MIN_SAMPLES, NORMALITY_P_THRESHOLD};
pub use tables::{
    k_coefficient, outlier_critical_value, q_coefficient, student_t_quantile, t_coefficient,
    K_LEVELS, K_MAX_COMPONENTS,
};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("probability {0} outside (0, 1)")]
    InvalidProbability(f64),
    #[error("unsupported {name} coefficient: {detail}")]
    UnsupportedCoefficient { name: &'static str, detail: String },
    #[error("grid point {point} (z = {z}) lies outside curve {curve}")]
    OutsideCurve { curve: usize, point: usize, z: f64 },
    #[error("distribution: {0}")]
    Distribution(String),
}
