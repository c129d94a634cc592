//! Surface roughness from topography histograms: zero roughness levels,
//! stochastic variances, and the additive and multiplicative corrections to
//! a force-distance relation.

use std::error::Error as StdError;
use std::io::Read;

use thiserror::Error;

use crate::constants::NANOMETRE;

/// Fraction-sum deviation accepted silently.
pub const FRACTION_SUM_TOLERANCE: f64 = 1e-4;
/// Fraction-sum deviation accepted with a warning; beyond it the histogram is rejected.
pub const FRACTION_SUM_LIMIT: f64 = 1e-2;
/// Upper estimate of the diffraction and correlation effects at the shortest
/// separation, reported alongside the corrections and never applied.
pub const DIFFRACTION_CORRELATION_BOUND: f64 = 1.0204;

type BoxError = Box<dyn StdError + Send + Sync>;

#[derive(Debug, Error)]
pub enum RoughnessError {
    #[error("histogram has no bins")]
    Empty,
    #[error("fractions sum to {sum}, more than {FRACTION_SUM_LIMIT} away from 1")]
    FractionSum { sum: f64 },
    #[error("bin {index}: fraction {value} is negative or not finite")]
    NegativeFraction { index: usize, value: f64 },
    #[error("bin {index}: heights must be non-negative and strictly increasing")]
    Heights { index: usize },
    #[error("histogram line {line}: {message}")]
    Line { line: u64, message: String },
    #[error("cannot read histogram: {0}")]
    Csv(#[from] csv::Error),
    #[error("separation must be positive, got {0:e} m")]
    InvalidSeparation(f64),
    #[error("shifted separation {shifted:e} m is not positive for bins ({bin1}, {bin2}) at z = {z:e} m")]
    NonPositiveShift {
        z: f64,
        shifted: f64,
        bin1: usize,
        bin2: usize,
    },
    #[error("base force evaluation failed: {0}")]
    Base(#[source] BoxError),
}

/// Discrete roughness height distribution of one surface; heights in m.
#[derive(Debug, Clone, PartialEq)]
pub struct TopographyHistogram {
    heights: Vec<f64>,
    fractions: Vec<f64>,
}

impl TopographyHistogram {
    /// `bins` are (height m, fraction).
    pub fn new(bins: &[(f64, f64)]) -> Result<Self, RoughnessError> {
        if bins.is_empty() {
            return Err(RoughnessError::Empty);
        }
        for (index, &(h, v)) in bins.iter().enumerate() {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(RoughnessError::NegativeFraction { index, value: v });
            }
            let ordered = index == 0 || h > bins[index - 1].0;
            if !(h >= 0.0 && h.is_finite() && ordered) {
                return Err(RoughnessError::Heights { index });
            }
        }
        let sum: f64 = bins.iter().map(|b| b.1).sum();
        let deviation = (sum - 1.0).abs();
        if deviation > FRACTION_SUM_LIMIT {
            return Err(RoughnessError::FractionSum { sum });
        }
        if deviation > FRACTION_SUM_TOLERANCE {
            log::warn!("histogram fractions sum to {sum:.6}; using them as given");
        }
        Ok(Self {
            heights: bins.iter().map(|b| b.0).collect(),
            fractions: bins.iter().map(|b| b.1).collect(),
        })
    }

    /// Heights given in nm.
    pub fn from_nm(bins: &[(f64, f64)]) -> Result<Self, RoughnessError> {
        let si: Vec<(f64, f64)> = bins.iter().map(|&(h, v)| (h * NANOMETRE, v)).collect();
        Self::new(&si)
    }

    /// Parses `h_nm,v` CSV with `#` comments.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, RoughnessError> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["h_nm", "v"] {
            return Err(RoughnessError::Line {
                line: 1,
                message: "expected header h_nm,v".into(),
            });
        }
        let mut bins = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            let parse = |i: usize| -> Result<f64, RoughnessError> {
                let raw = record.get(i).unwrap_or("");
                raw.parse().map_err(|_| RoughnessError::Line {
                    line,
                    message: format!("cannot parse {raw:?}"),
                })
            };
            bins.push((parse(0)?, parse(1)?));
        }
        Self::from_nm(&bins).map_err(|e| match e {
            RoughnessError::NegativeFraction { index, .. } | RoughnessError::Heights { index } => {
                RoughnessError::Line {
                    line: index as u64 + 2,
                    message: e.to_string(),
                }
            }
            other => other,
        })
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn max_height(&self) -> f64 {
        self.heights[self.heights.len() - 1]
    }

    fn bins(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.heights.iter().copied().zip(self.fractions.iter().copied())
    }
}

/// Zero roughness level `H₀ = Σ hₖvₖ`.
pub fn zero_level(t: &TopographyHistogram) -> f64 {
    t.bins().map(|(h, v)| h * v).sum()
}

/// Mean deviation from the zero level, `Σ (H₀ − hₖ) vₖ`.
pub fn mean_deviation(t: &TopographyHistogram) -> f64 {
    let h0 = zero_level(t);
    t.bins().map(|(h, v)| (h0 - h) * v).sum()
}

/// `δ_st = [Σ (H₀ − hₖ)² vₖ]^{1/2}`.
pub fn stochastic_variance(t: &TopographyHistogram) -> f64 {
    let h0 = zero_level(t);
    t.bins().map(|(h, v)| (h0 - h) * (h0 - h) * v).sum::<f64>().sqrt()
}

/// `Σₖ Σₗ vₖ vₗ F(z + H₀⁽¹⁾ + H₀⁽²⁾ − hₖ − hₗ)`.
pub fn additive_corrected_force<F, E>(
    mut base: F,
    t1: &TopographyHistogram,
    t2: &TopographyHistogram,
    z: f64,
) -> Result<f64, RoughnessError>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: Into<BoxError>,
{
    if !(z > 0.0 && z.is_finite()) {
        return Err(RoughnessError::InvalidSeparation(z));
    }
    let offset = z + zero_level(t1) + zero_level(t2);
    let mut total = 0.0;
    for (k, (h1, v1)) in t1.bins().enumerate() {
        for (l, (h2, v2)) in t2.bins().enumerate() {
            let shifted = offset - h1 - h2;
            if !(shifted > 0.0) {
                return Err(RoughnessError::NonPositiveShift {
                    z,
                    shifted,
                    bin1: k,
                    bin2: l,
                });
            }
            if v1 * v2 == 0.0 {
                continue;
            }
            total += v1 * v2 * base(shifted).map_err(|e| RoughnessError::Base(e.into()))?;
        }
    }
    Ok(total)
}

/// Ratio `1 + 6[(δ₁/z)² + (δ₂/z)²]` of the multiplicative correction.
pub fn multiplicative_factor(d1: f64, d2: f64, z: f64) -> Result<f64, RoughnessError> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(RoughnessError::InvalidSeparation(z));
    }
    Ok(1.0 + 6.0 * ((d1 / z).powi(2) + (d2 / z).powi(2)))
}

/// `F(z) · {1 + 6[(δ₁/z)² + (δ₂/z)²]}`.
pub fn multiplicative_corrected_force<F, E>(
    mut base: F,
    d1: f64,
    d2: f64,
    z: f64,
) -> Result<f64, RoughnessError>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: Into<BoxError>,
{
    let factor = multiplicative_factor(d1, d2, z)?;
    Ok(factor * base(z).map_err(|e| RoughnessError::Base(e.into()))?)
}

/// Both correction ratios at one separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionRatios {
    pub z: f64,
    pub additive: f64,
    pub multiplicative: f64,
}

pub fn correction_ratios<F, E>(
    mut base: F,
    t1: &TopographyHistogram,
    t2: &TopographyHistogram,
    z: f64,
) -> Result<CorrectionRatios, RoughnessError>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: Into<BoxError>,
{
    let plain = base(z).map_err(|e| RoughnessError::Base(e.into()))?;
    let additive = additive_corrected_force(&mut base, t1, t2, z)? / plain;
    let multiplicative =
        multiplicative_factor(stochastic_variance(t1), stochastic_variance(t2), z)?;
    Ok(CorrectionRatios {
        z,
        additive,
        multiplicative,
    })
}
