use super::StatsError;

/// `(Ξ_0.95, Ξ_0.7)` for one separation: `min(a + b, 1.1 √(a² + b²))` and its half.
pub fn confidence_band(theory_error: f64, experiment_error: f64) -> Result<(f64, f64), StatsError> {
    if !(theory_error >= 0.0 && experiment_error >= 0.0) {
        return Err(StatsError::InvalidInput(format!(
            "errors must be non-negative (theory {theory_error}, experiment {experiment_error})"
        )));
    }
    let xi95 = (theory_error + experiment_error).min(1.1 * theory_error.hypot(experiment_error));
    Ok((xi95, 0.5 * xi95))
}

/// Half-widths of the 95% and 70% confidence intervals per separation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceBand {
    pub xi95: Vec<f64>,
    pub xi70: Vec<f64>,
}

impl ConfidenceBand {
    pub fn from_errors(theory: &[f64], experiment: &[f64]) -> Result<Self, StatsError> {
        if theory.len() != experiment.len() {
            return Err(StatsError::LengthMismatch {
                expected: theory.len(),
                got: experiment.len(),
            });
        }
        let (xi95, xi70) = theory
            .iter()
            .zip(experiment)
            .map(|(a, b)| confidence_band(*a, *b))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .unzip();
        Ok(Self { xi95, xi70 })
    }

    pub fn len(&self) -> usize {
        self.xi95.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi95.is_empty()
    }
}

/// Which differences fall inside each band (`|Δ| ≤ Ξ` counts as inside).
#[derive(Debug, Clone, PartialEq)]
pub struct BandConformity {
    pub inside95: Vec<bool>,
    pub inside70: Vec<bool>,
}

impl BandConformity {
    fn fraction(v: &[bool]) -> f64 {
        if v.is_empty() {
            return 1.0;
        }
        v.iter().filter(|b| **b).count() as f64 / v.len() as f64
    }

    pub fn fraction95(&self) -> f64 {
        Self::fraction(&self.inside95)
    }

    pub fn fraction70(&self) -> f64 {
        Self::fraction(&self.inside70)
    }
}

/// Scores theory-minus-experiment differences against a band.
pub fn band_conformity(differences: &[f64], band: &ConfidenceBand) -> Result<BandConformity, StatsError> {
    if differences.len() != band.len() {
        return Err(StatsError::LengthMismatch {
            expected: band.len(),
            got: differences.len(),
        });
    }
    let inside = |xi: &[f64]| {
        differences
            .iter()
            .zip(xi)
            .map(|(d, x)| d.abs() <= *x)
            .collect::<Vec<_>>()
    };
    Ok(BandConformity {
        inside95: inside(&band.xi95),
        inside70: inside(&band.xi70),
    })
}
