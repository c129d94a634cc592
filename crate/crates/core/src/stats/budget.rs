use super::tables::{k_coefficient, q_coefficient, t_coefficient};
use super::StatsError;

/// Below this ratio of systematic error to smoothed variance the random error
/// alone is the total error.
pub const RATIO_LOWER: f64 = 0.8;
/// Above this ratio the systematic error alone is the total error.
pub const RATIO_UPPER: f64 = 8.0;
/// Half-width of the neighbourhood of `r` scanned by the conservative policy.
pub const RATIO_MARGIN: f64 = 0.05;

/// Absolute random error `s̃ · t_p(n−1)`, `p = (1+β)/2`.
pub fn random_error(s_tilde: f64, n: usize, beta: f64, paper_compat: bool) -> Result<f64, StatsError> {
    if !(s_tilde >= 0.0) {
        return Err(StatsError::InvalidInput(format!("smoothed variance {s_tilde}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(StatsError::InvalidProbability(beta));
    }
    Ok(s_tilde * t_coefficient(beta, n, paper_compat)?)
}

/// `Δ / |F̄|` at each point.
pub fn relative_errors(absolute: &[f64], mean: &[f64]) -> Result<Vec<f64>, StatsError> {
    if absolute.len() != mean.len() {
        return Err(StatsError::LengthMismatch {
            expected: mean.len(),
            got: absolute.len(),
        });
    }
    Ok(absolute.iter().zip(mean).map(|(d, f)| d / f.abs()).collect())
}

/// `min(Σ θ, k_β^(J) √Σ θ²)` for `J` independent systematic errors.
pub fn combine_systematic(errors: &[f64], beta: f64) -> Result<f64, StatsError> {
    if errors.is_empty() {
        return Err(StatsError::TooFewSamples { needed: 1, got: 0 });
    }
    if let Some(e) = errors.iter().find(|e| !(**e >= 0.0)) {
        return Err(StatsError::InvalidInput(format!("systematic error {e}")));
    }
    let k = k_coefficient(beta, errors.len())?;
    let sum: f64 = errors.iter().sum();
    let rss = errors.iter().map(|e| e * e).sum::<f64>().sqrt();
    Ok(sum.min(k * rss))
}

/// How the total error treats separations near a rule boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TotalErrorPolicy {
    /// Apply the single rule selected by the ratio.
    Standard,
    /// Take the largest outcome among rules applicable within the margin.
    #[default]
    Conservative,
}

/// Total experimental error from the random and systematic errors.
pub fn total_experimental_error(
    rand: f64,
    syst: f64,
    s_tilde: f64,
    beta: f64,
    policy: TotalErrorPolicy,
) -> Result<f64, StatsError> {
    if !(rand >= 0.0 && syst >= 0.0 && s_tilde >= 0.0) {
        return Err(StatsError::InvalidInput(format!(
            "errors must be non-negative (rand {rand}, syst {syst}, s {s_tilde})"
        )));
    }
    if s_tilde == 0.0 {
        if syst > 0.0 {
            log::warn!("zero smoothed variance: error ratio undefined, using max(rand, syst)");
        }
        return Ok(rand.max(syst));
    }
    let r = syst / s_tilde;
    let margin = match policy {
        TotalErrorPolicy::Standard => 0.0,
        TotalErrorPolicy::Conservative => RATIO_MARGIN,
    };
    let mut total = f64::NEG_INFINITY;
    if r < RATIO_LOWER + margin {
        total = total.max(rand);
    }
    if r > RATIO_UPPER - margin {
        total = total.max(syst);
    }
    if (RATIO_LOWER - margin..=RATIO_UPPER + margin).contains(&r) {
        total = total.max(q_coefficient(beta)? * (rand + syst));
    }
    Ok(total)
}

/// Relative theoretical errors at one separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryBudget {
    /// Optical data and proximity-approximation errors combined.
    pub delta0: f64,
    /// Proximity-approximation error `z/R`.
    pub delta2: f64,
    /// Error propagated from the uncertainties in `R` and `z`.
    pub delta3: f64,
    pub total: f64,
}

/// Relative theoretical error budget at separation `z` for a sphere of radius
/// `R`, with uncertainties `ΔR`, `Δz` and relative optical-data error `δ₁`.
pub fn theory_error_budget(
    z: f64,
    radius: f64,
    radius_error: f64,
    separation_error: f64,
    delta1: f64,
) -> Result<TheoryBudget, StatsError> {
    if !(z > 0.0 && radius > 0.0) {
        return Err(StatsError::InvalidInput(format!("z = {z:e}, R = {radius:e}")));
    }
    if !(radius_error >= 0.0 && separation_error >= 0.0 && delta1 >= 0.0) {
        return Err(StatsError::InvalidInput("uncertainties must be non-negative".into()));
    }
    let delta2 = z / radius;
    let delta0 = (delta1 + delta2).min(1.10 * delta1.hypot(delta2));
    let delta3 = 0.95 * (radius_error / radius + 3.0 * separation_error / z);
    let total = delta3.max(0.8 * (delta0 + delta3));
    Ok(TheoryBudget {
        delta0,
        delta2,
        delta3,
        total,
    })
}

/// Inputs of a per-separation error budget. Lengths in m, forces in N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetConfig {
    pub beta: f64,
    pub policy: TotalErrorPolicy,
    pub paper_compat: bool,
    pub radius: f64,
    pub radius_error: f64,
    pub separation_error: f64,
    pub optical_error: f64,
}

/// Experimental (absolute, N) and theoretical (relative) errors per separation.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBudget {
    pub beta: f64,
    pub z: Vec<f64>,
    pub random: Vec<f64>,
    pub systematic: Vec<f64>,
    pub total: Vec<f64>,
    pub theory: Vec<TheoryBudget>,
}

impl ErrorBudget {
    /// Absolute theoretical errors `δ^tot |F^theor|`.
    pub fn theory_absolute(&self, theory: &[f64]) -> Result<Vec<f64>, StatsError> {
        if theory.len() != self.z.len() {
            return Err(StatsError::LengthMismatch {
                expected: self.z.len(),
                got: theory.len(),
            });
        }
        Ok(self
            .theory
            .iter()
            .zip(theory)
            .map(|(t, f)| t.total * f.abs())
            .collect())
    }
}

/// Error budget on grid `z` from the smoothed variance `s̃` of `n` sets and
/// the systematic error components.
pub fn error_budget(
    z: &[f64],
    s_tilde: &[f64],
    n: usize,
    systematic_components: &[f64],
    cfg: &BudgetConfig,
) -> Result<ErrorBudget, StatsError> {
    if z.len() != s_tilde.len() {
        return Err(StatsError::LengthMismatch {
            expected: z.len(),
            got: s_tilde.len(),
        });
    }
    let syst = combine_systematic(systematic_components, cfg.beta)?;
    let t = t_coefficient(cfg.beta, n, cfg.paper_compat)?;
    let mut budget = ErrorBudget {
        beta: cfg.beta,
        z: z.to_vec(),
        random: Vec::with_capacity(z.len()),
        systematic: vec![syst; z.len()],
        total: Vec::with_capacity(z.len()),
        theory: Vec::with_capacity(z.len()),
    };
    for (&zi, &s) in z.iter().zip(s_tilde) {
        let rand = s * t;
        budget.random.push(rand);
        budget
            .total
            .push(total_experimental_error(rand, syst, s, cfg.beta, cfg.policy)?);
        budget.theory.push(theory_error_budget(
            zi,
            cfg.radius,
            cfg.radius_error,
            cfg.separation_error,
            cfg.optical_error,
        )?);
    }
    Ok(budget)
}
