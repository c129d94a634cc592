use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use super::StatsError;

/// Smallest sample accepted by the normality check.
pub const NORMALITY_MIN_SAMPLES: usize = 20;
/// Normality is accepted when the p-value reaches this level (70% confidence).
pub const NORMALITY_P_THRESHOLD: f64 = 0.3;

/// Pearson chi-square goodness-of-fit against a normal with fitted mean and
/// standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalityCheck {
    pub statistic: f64,
    pub bins: usize,
    pub dof: usize,
    pub p_value: f64,
    pub accepted: bool,
    /// Set when the test could not be carried out on the data.
    pub reason: Option<String>,
}

/// `k = max(5, round(n^0.4))` equiprobable bins, `k − 3` degrees of freedom.
pub fn normality_check(samples: &[f64]) -> Result<NormalityCheck, StatsError> {
    let n = samples.len();
    if n < NORMALITY_MIN_SAMPLES {
        return Err(StatsError::TooFewSamples {
            needed: NORMALITY_MIN_SAMPLES,
            got: n,
        });
    }
    if let Some(x) = samples.iter().find(|x| !x.is_finite()) {
        return Err(StatsError::InvalidInput(format!("non-finite sample {x}")));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let sd = (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt();
    let bins = 5usize.max(nf.powf(0.4).round() as usize);
    let dof = bins - 3;
    if !(sd > 0.0) {
        return Ok(NormalityCheck {
            statistic: f64::INFINITY,
            bins,
            dof,
            p_value: 0.0,
            accepted: false,
            reason: Some("all samples are equal: zero spread".into()),
        });
    }
    let dist = Normal::new(mean, sd).map_err(|e| StatsError::Distribution(e.to_string()))?;
    let edges: Vec<f64> = (1..bins)
        .map(|i| dist.inverse_cdf(i as f64 / bins as f64))
        .collect();
    let mut counts = vec![0usize; bins];
    for x in samples {
        counts[edges.partition_point(|e| e < x)] += 1;
    }
    let expected = nf / bins as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum::<f64>();
    let chi2 = ChiSquared::new(dof as f64).map_err(|e| StatsError::Distribution(e.to_string()))?;
    let p_value = chi2.sf(statistic);
    Ok(NormalityCheck {
        statistic,
        bins,
        dof,
        p_value,
        accepted: p_value >= NORMALITY_P_THRESHOLD,
        reason: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal as Gauss, Uniform};

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            normality_check(&[1.0; 19]),
            Err(StatsError::TooFewSamples { needed: 20, got: 19 })
        ));
    }

    #[test]
    fn constant_samples_rejected_with_reason() {
        let c = normality_check(&[2.5; 65]).unwrap();
        assert!(!c.accepted);
        assert!(c.reason.unwrap().contains("equal"));
    }

    #[test]
    fn bins_follow_sample_size() {
        let mut rng = StdRng::seed_from_u64(1);
        let g = Gauss::new(0.0, 1.0).unwrap();
        let xs: Vec<f64> = (0..1000).map(|_| g.sample(&mut rng)).collect();
        assert_eq!(normality_check(&xs[..65]).unwrap().bins, 5);
        let c = normality_check(&xs).unwrap();
        assert_eq!((c.bins, c.dof), (16, 13));
        assert!(c.p_value > 0.0 && c.p_value <= 1.0);
    }

    #[test]
    fn evenly_spread_normal_sample_accepted() {
        let d = Normal::new(0.0, 1.0).unwrap();
        let xs: Vec<f64> = (0..100).map(|i| d.inverse_cdf((i as f64 + 0.5) / 100.0)).collect();
        let c = normality_check(&xs).unwrap();
        assert!(c.statistic < 0.5, "{}", c.statistic);
        assert!(c.accepted);
    }

    #[test]
    fn uniform_samples_rejected_more_often_than_normal() {
        let mut rng = StdRng::seed_from_u64(77);
        let g = Gauss::new(0.0, 1.0).unwrap();
        let u = Uniform::new(-10.0, 10.0).unwrap();
        let mut normal = 0;
        let mut uniform = 0;
        for _ in 0..100 {
            let a: Vec<f64> = (0..65).map(|_| g.sample(&mut rng)).collect();
            let b: Vec<f64> = (0..65).map(|_| u.sample(&mut rng)).collect();
            normal += normality_check(&a).unwrap().accepted as usize;
            uniform += normality_check(&b).unwrap().accepted as usize;
        }
        assert!(normal > uniform, "{normal} vs {uniform}");
    }
}
