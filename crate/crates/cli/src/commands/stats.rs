//! Experimental error budget of a measurement campaign.

use anyhow::{Context, Result};
use serde::Serialize;

use casimir_core::compare::{compare_campaign, Comparison, ComparisonConfig};
use casimir_core::constants::{NANOMETRE, PICONEWTON};
use casimir_core::stats::{normality_check, ForceCurveSet};

use super::Report;
use crate::config::{Policy, RunConfig};
use crate::data::load_campaign;
use crate::output::{Cell, Outputs, Table};

pub(super) fn comparison_config(cfg: &RunConfig) -> Result<ComparisonConfig> {
    Ok(ComparisonConfig {
        budget: cfg.budget()?,
        systematic_components: cfg.systematic(),
        smoothing_window: cfg.smoothing_window,
        weights: cfg.smoothing_weights(),
        outlier_beta: cfg.outlier_beta,
        window: (
            cfg.decision_window_nm.0 * NANOMETRE,
            cfg.decision_window_nm.1 * NANOMETRE,
        ),
    })
}

#[derive(Serialize)]
pub(super) struct OutlierSummary {
    pub beta: f64,
    pub critical: f64,
    pub flagged_points: usize,
    pub flagged_z_nm: Vec<f64>,
}

impl OutlierSummary {
    pub fn of(cfg: &RunConfig, nm: &[f64], c: &Comparison) -> Self {
        Self {
            beta: cfg.outlier_beta,
            critical: c.outliers.critical,
            flagged_points: c.outliers.flagged_count(),
            flagged_z_nm: nm
                .iter()
                .zip(&c.outliers.flagged)
                .filter(|(_, f)| **f)
                .map(|(z, _)| *z)
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct NormalitySummary {
    tested_points: usize,
    accepted_points: usize,
    min_p_value: f64,
    rejected_z_nm: Vec<f64>,
}

fn normality(set: &ForceCurveSet, nm: &[f64]) -> Result<NormalitySummary> {
    let mut accepted = 0;
    let mut min_p = f64::INFINITY;
    let mut rejected = Vec::new();
    for (i, &z) in nm.iter().enumerate() {
        let check = normality_check(&set.column(i)).with_context(|| format!("normality at {z} nm"))?;
        min_p = min_p.min(check.p_value);
        if check.accepted {
            accepted += 1;
        } else {
            rejected.push(z);
        }
    }
    Ok(NormalitySummary {
        tested_points: set.grid_len(),
        accepted_points: accepted,
        min_p_value: min_p,
        rejected_z_nm: rejected,
    })
}

#[derive(Serialize)]
struct BudgetSummary {
    sets: usize,
    points: usize,
    beta: f64,
    policy: Policy,
    paper_compat: bool,
    smoothing_window: usize,
    outliers: OutlierSummary,
    normality: NormalitySummary,
}

pub fn stats(cfg: &RunConfig) -> Result<Report> {
    let set = load_campaign(cfg).context("loading campaign")?;
    let c = compare_campaign(&set, &[], &comparison_config(cfg)?).context("error budget")?;
    let nm = cfg.grid.nm();
    let normality = normality(&set, &nm)?;

    let mut table = Table::new(&[
        "z_nm",
        "F_expt_pN",
        "s_mean_pN",
        "s_smoothed_pN",
        "random_pN",
        "systematic_pN",
        "total_pN",
        "theory_rel",
        "outlier",
    ]);
    for i in 0..c.z.len() {
        table.row(&[
            Cell::Num(nm[i]),
            Cell::Num(c.mean[i] / PICONEWTON),
            Cell::Num(c.std_of_mean[i] / PICONEWTON),
            Cell::Num(c.smoothed[i] / PICONEWTON),
            Cell::Num(c.budget.random[i] / PICONEWTON),
            Cell::Num(c.budget.systematic[i] / PICONEWTON),
            Cell::Num(c.budget.total[i] / PICONEWTON),
            Cell::Num(c.budget.theory[i].total),
            Cell::Bool(c.outliers.flagged[i]),
        ]);
    }

    let summary = vec![
        format!("{} sets on {} points", set.n(), set.grid_len()),
        format!("{} points with outliers", c.outliers.flagged_count()),
        format!(
            "normality accepted at {} of {} points",
            normality.accepted_points, normality.tested_points
        ),
    ];
    let mut outputs = Outputs::new();
    outputs.table("error_budget.csv", table);
    outputs.json(
        "error_budget.json",
        &BudgetSummary {
            sets: set.n(),
            points: set.grid_len(),
            beta: cfg.beta,
            policy: cfg.policy,
            paper_compat: cfg.paper_compat,
            smoothing_window: cfg.smoothing_window,
            outliers: OutlierSummary::of(cfg, &nm, &c),
            normality,
        },
    )?;
    Ok(Report {
        summary,
        ..Report::new(outputs)
    })
}
