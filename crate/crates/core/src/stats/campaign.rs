use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

use crate::interp::linear;

use super::tables::outlier_critical_value;
use super::StatsError;

/// `n` force-distance curves on a shared, strictly increasing separation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceCurveSet {
    z: Vec<f64>,
    forces: Vec<Vec<f64>>,
}

impl ForceCurveSet {
    pub fn new(z: Vec<f64>, forces: Vec<Vec<f64>>) -> Result<Self, StatsError> {
        if z.is_empty() {
            return Err(StatsError::InvalidInput("empty separation grid".into()));
        }
        if let Some(i) = z.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(StatsError::InvalidInput(format!(
                "separation grid not strictly increasing at index {}",
                i + 1
            )));
        }
        if let Some(j) = forces.iter().position(|f| f.len() != z.len()) {
            return Err(StatsError::LengthMismatch {
                expected: z.len(),
                got: forces[j].len(),
            });
        }
        Ok(Self { z, forces })
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn sets(&self) -> &[Vec<f64>] {
        &self.forces
    }

    pub fn n(&self) -> usize {
        self.forces.len()
    }

    pub fn grid_len(&self) -> usize {
        self.z.len()
    }

    /// Forces of every set at grid index `i`.
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.forces.iter().map(|f| f[i]).collect()
    }

    fn require(&self, needed: usize) -> Result<(), StatsError> {
        if self.n() < needed {
            Err(StatsError::TooFewSamples {
                needed,
                got: self.n(),
            })
        } else {
            Ok(())
        }
    }
}

/// A measured curve on its own separations.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCurve {
    pub z: Vec<f64>,
    pub force: Vec<f64>,
}

/// Linear interpolation of every raw curve onto `grid`.
pub fn align_to_grid(curves: &[RawCurve], grid: &[f64]) -> Result<ForceCurveSet, StatsError> {
    let mut forces = Vec::with_capacity(curves.len());
    for (c, curve) in curves.iter().enumerate() {
        if curve.z.len() != curve.force.len() {
            return Err(StatsError::LengthMismatch {
                expected: curve.z.len(),
                got: curve.force.len(),
            });
        }
        if curve.z.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(StatsError::InvalidInput(format!(
                "curve {c}: separations not strictly increasing"
            )));
        }
        let values = grid
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                linear(&curve.z, &curve.force, z).ok_or(StatsError::OutsideCurve {
                    curve: c,
                    point: i,
                    z,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        forces.push(values);
    }
    ForceCurveSet::new(grid.to_vec(), forces)
}

/// Mean over sets at each grid point.
pub fn mean_force(set: &ForceCurveSet) -> Result<Vec<f64>, StatsError> {
    set.require(2)?;
    let n = set.n() as f64;
    Ok((0..set.grid_len())
        .map(|i| set.forces.iter().map(|f| f[i]).sum::<f64>() / n)
        .collect())
}

/// Sample standard deviation `s_F` of the individual results at each point.
pub fn sample_std(set: &ForceCurveSet) -> Result<Vec<f64>, StatsError> {
    let means = mean_force(set)?;
    let n = set.n() as f64;
    Ok(means
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let ss: f64 = set.forces.iter().map(|f| (f[i] - m).powi(2)).sum();
            (ss / (n - 1.0)).sqrt()
        })
        .collect())
}

/// Standard deviation of the mean, `s_F / √n`, at each point.
pub fn variance_of_mean(set: &ForceCurveSet) -> Result<Vec<f64>, StatsError> {
    let n = set.n() as f64;
    Ok(sample_std(set)?.into_iter().map(|s| s / n.sqrt()).collect())
}

/// Result of the maximum-normed-deviation outlier check.
#[derive(Debug, Clone, PartialEq)]
pub struct OutlierScan {
    /// `T_i = max_j |F_ij − F̄_i| / s_F` (0 where all results coincide).
    pub statistic: Vec<f64>,
    pub critical: f64,
    /// Index of the most deviating set at each point.
    pub worst_set: Vec<usize>,
    pub flagged: Vec<bool>,
}

impl OutlierScan {
    pub fn flagged_count(&self) -> usize {
        self.flagged.iter().filter(|f| **f).count()
    }
}

/// Bilateral outlier check at confidence `β` for every grid point.
pub fn outlier_scan(set: &ForceCurveSet, beta: f64) -> Result<OutlierScan, StatsError> {
    set.require(3)?;
    let critical = outlier_critical_value(set.n(), beta)?;
    let means = mean_force(set)?;
    let stds = sample_std(set)?;
    let mut statistic = Vec::with_capacity(set.grid_len());
    let mut worst_set = Vec::with_capacity(set.grid_len());
    for i in 0..set.grid_len() {
        let (j, dev) = set
            .forces
            .iter()
            .map(|f| (f[i] - means[i]).abs())
            .enumerate()
            .fold((0, 0.0), |best, (j, d)| if d > best.1 { (j, d) } else { best });
        statistic.push(if stds[i] > 0.0 { dev / stds[i] } else { 0.0 });
        worst_set.push(j);
    }
    let flagged = statistic.iter().map(|t| *t > critical).collect();
    Ok(OutlierScan {
        statistic,
        critical,
        worst_set,
        flagged,
    })
}

/// Statistical weights of the smoothing window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmoothingWeights {
    /// `λ_k = 1/N`.
    #[default]
    Uniform,
    /// `λ_k ∝ 1/s_k²`.
    Inverse,
}

pub const DEFAULT_SMOOTHING_WINDOW: usize = 30;

/// `s̃_i = [N Σ λ_k² s_k²]^{1/2}` over the `N` neighbours of each point, half
/// on each side. Near the ends the window shrinks symmetrically; at the first
/// and last point only the point itself is used.
pub fn smooth_variance(s: &[f64], window: usize, weights: SmoothingWeights) -> Result<Vec<f64>, StatsError> {
    if window == 0 || !window.is_multiple_of(2) {
        return Err(StatsError::InvalidInput(format!(
            "smoothing window must be a positive even number, got {window}"
        )));
    }
    if window >= s.len() {
        return Err(StatsError::InvalidInput(format!(
            "smoothing window {window} does not fit a grid of {} points",
            s.len()
        )));
    }
    let half = window / 2;
    let last = s.len() - 1;
    (0..s.len())
        .map(|i| {
            let h = half.min(i).min(last - i);
            let neighbours: Vec<f64> = if h == 0 {
                vec![s[i]]
            } else {
                (i - h..i).chain(i + 1..=i + h).map(|k| s[k]).collect()
            };
            let n = neighbours.len() as f64;
            match weights {
                SmoothingWeights::Uniform => {
                    Ok((neighbours.iter().map(|v| v * v).sum::<f64>() / n).sqrt())
                }
                SmoothingWeights::Inverse => {
                    if neighbours.iter().any(|v| !(*v > 0.0)) {
                        return Err(StatsError::InvalidInput(format!(
                            "inverse weights need positive variances in the window of point {i}"
                        )));
                    }
                    Ok((n / neighbours.iter().map(|v| 1.0 / (v * v)).sum::<f64>()).sqrt())
                }
            }
        })
        .collect()
}

/// Synthetic measurement campaign: `sets` copies of `theory` with independent
/// Gaussian noise of standard deviation `sigma`.
pub fn simulate_campaign(
    z: &[f64],
    theory: &[f64],
    sets: usize,
    sigma: f64,
    seed: u64,
) -> Result<ForceCurveSet, StatsError> {
    if z.len() != theory.len() {
        return Err(StatsError::LengthMismatch {
            expected: z.len(),
            got: theory.len(),
        });
    }
    let noise = Normal::new(0.0, sigma).map_err(|e| StatsError::InvalidInput(e.to_string()))?;
    let mut rng = StdRng::seed_from_u64(seed);
    let forces = (0..sets)
        .map(|_| theory.iter().map(|f| f + noise.sample(&mut rng)).collect())
        .collect();
    ForceCurveSet::new(z.to_vec(), forces)
}
