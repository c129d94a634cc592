//! Statistical coefficients: Student-t quantiles, the `k` coefficients for
//! combining systematic errors, outlier critical values and `q_β`.

use statrs::distribution::{ContinuousCDF, StudentsT};

use super::StatsError;

/// Confidence levels with tabulated `k` coefficients.
pub const K_LEVELS: [f64; 3] = [0.90, 0.95, 0.99];
/// Largest number of combined components with a tabulated `k`.
pub const K_MAX_COMPONENTS: usize = 12;

/// `k_β^(J)` for `J = 2 ..= 12`: the β-quantile of a sum of `J` equal uniform
/// errors divided by its root-sum-square bound, to two decimals.
const K_TABLE: [[f64; 11]; 3] = [
    [0.97, 0.96, 0.95, 0.95, 0.95, 0.95, 0.95, 0.95, 0.95, 0.95, 0.95],
    [1.10, 1.12, 1.12, 1.12, 1.12, 1.12, 1.13, 1.13, 1.13, 1.13, 1.13],
    [1.27, 1.37, 1.41, 1.43, 1.44, 1.45, 1.45, 1.46, 1.46, 1.46, 1.46],
];

fn level_index(beta: f64, levels: &[f64]) -> Option<usize> {
    levels.iter().position(|l| (l - beta).abs() < 1e-9)
}

/// `k_β^(J)`; `J = 1` gives 1.
pub fn k_coefficient(beta: f64, components: usize) -> Result<f64, StatsError> {
    let unsupported = || StatsError::UnsupportedCoefficient {
        name: "k",
        detail: format!(
            "no k for J = {components}, beta = {beta}; supported: J = 1..={K_MAX_COMPONENTS}, beta in {K_LEVELS:?}"
        ),
    };
    let i = level_index(beta, &K_LEVELS).ok_or_else(unsupported)?;
    match components {
        0 => Err(unsupported()),
        1 => Ok(1.0),
        j if j <= K_MAX_COMPONENTS => Ok(K_TABLE[i][j - 2]),
        _ => Err(unsupported()),
    }
}

/// `q_β` for combining random and systematic errors of comparable size.
pub fn q_coefficient(beta: f64) -> Result<f64, StatsError> {
    match level_index(beta, &[0.95, 0.99]) {
        Some(0) => Ok(0.8),
        Some(_) => Ok(0.85),
        None => Err(StatsError::UnsupportedCoefficient {
            name: "q",
            detail: format!("no q for beta = {beta}; supported: 0.95, 0.99"),
        }),
    }
}

/// Student-t quantile `t_p(f)`.
pub fn student_t_quantile(p: f64, dof: f64) -> Result<f64, StatsError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(StatsError::InvalidProbability(p));
    }
    if !(dof > 0.0) {
        return Err(StatsError::TooFewSamples { needed: 2, got: 1 });
    }
    let t = StudentsT::new(0.0, 1.0, dof).map_err(|e| StatsError::Distribution(e.to_string()))?;
    Ok(t.inverse_cdf(p))
}

/// Two-sided coefficient `t_p(n−1)` with `p = (1+β)/2`; rounded to one
/// decimal in compatibility mode (`t_0.975(64) = 1.998 → 2.0`).
pub fn t_coefficient(beta: f64, n: usize, paper_compat: bool) -> Result<f64, StatsError> {
    if n < 2 {
        return Err(StatsError::TooFewSamples { needed: 2, got: n });
    }
    let t = student_t_quantile(0.5 * (1.0 + beta), (n - 1) as f64)?;
    Ok(if paper_compat { (t * 10.0).round() / 10.0 } else { t })
}

/// Critical value of the maximum normed deviation for a bilateral outlier check
/// of `n` results at confidence `β`:
/// `T = (n−1)/√n · √(t² / (n − 2 + t²))`, `t = t_{1−(1−β)/(4n)}(n − 2)`.
pub fn outlier_critical_value(n: usize, beta: f64) -> Result<f64, StatsError> {
    if n < 3 {
        return Err(StatsError::TooFewSamples { needed: 3, got: n });
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(StatsError::InvalidProbability(beta));
    }
    let nf = n as f64;
    let t = student_t_quantile(1.0 - (1.0 - beta) / (4.0 * nf), nf - 2.0)?;
    Ok((nf - 1.0) / nf.sqrt() * (t * t / (nf - 2.0 + t * t)).sqrt())
}
