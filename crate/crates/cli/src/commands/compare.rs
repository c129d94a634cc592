//! Theory of every variant against the campaign, with the verdict.

use anyhow::{Context, Result};
use serde::Serialize;

use casimir_core::compare::{compare_campaign, Verdict};
use casimir_core::constants::PICONEWTON;

use super::stats::{comparison_config, OutlierSummary};
use super::{Report, Setup};
use crate::config::RunConfig;
use crate::data::load_campaign;
use crate::output::{Cell, Outputs, Table};

#[derive(Serialize)]
struct VariantSummary {
    name: String,
    fraction95: f64,
    fraction70: f64,
    window_fraction95: f64,
    window_fraction70: f64,
    window_points: usize,
    consistent: bool,
    rejected_at_70: bool,
}

#[derive(Serialize)]
struct ComparisonSummary {
    verdict: &'static str,
    designated: String,
    sets: usize,
    points: usize,
    beta: f64,
    decision_window_nm: (f64, f64),
    outliers: OutlierSummary,
    variants: Vec<VariantSummary>,
}

pub fn compare(cfg: &RunConfig) -> Result<Report> {
    let set = load_campaign(cfg).context("loading campaign")?;
    let setup = Setup::new(cfg)?;
    let theories = cfg
        .variants
        .iter()
        .map(|v| Ok((v.name.clone(), setup.rough_theory(cfg, &v.name, set.z())?)))
        .collect::<Result<Vec<_>>>()?;
    let c = compare_campaign(&set, &theories, &comparison_config(cfg)?).context("comparing theory with experiment")?;
    let verdict = c.verdict(&cfg.designated)?;
    let nm = cfg.grid.nm();

    let mut outputs = Outputs::new();
    let mut summary = Vec::new();
    let mut variants = Vec::new();
    for v in &c.variants {
        let mut table = Table::new(&[
            "z_nm",
            "F_theor_pN",
            "F_expt_pN",
            "diff_pN",
            "xi95_pN",
            "xi70_pN",
            "inside95",
            "inside70",
        ]);
        for i in 0..c.z.len() {
            table.row(&[
                Cell::Num(nm[i]),
                Cell::Num(v.theory[i] / PICONEWTON),
                Cell::Num(c.mean[i] / PICONEWTON),
                Cell::Num(v.differences[i] / PICONEWTON),
                Cell::Num(v.band.xi95[i] / PICONEWTON),
                Cell::Num(v.band.xi70[i] / PICONEWTON),
                Cell::Bool(v.conformity.inside95[i]),
                Cell::Bool(v.conformity.inside70[i]),
            ]);
        }
        outputs.table(format!("comparison_{}.csv", v.name), table);
        summary.push(format!(
            "{}: {:.1}% inside 95%, {:.1}% inside 70% in window{}",
            v.name,
            100.0 * v.window_fraction95,
            100.0 * v.window_fraction70,
            if v.rejected_at_70() { ", rejected at 70%" } else { "" }
        ));
        variants.push(VariantSummary {
            name: v.name.clone(),
            fraction95: v.conformity.fraction95(),
            fraction70: v.conformity.fraction70(),
            window_fraction95: v.window_fraction95,
            window_fraction70: v.window_fraction70,
            window_points: v.window_points,
            consistent: v.consistent(),
            rejected_at_70: v.rejected_at_70(),
        });
    }
    let verdict_name = match verdict {
        Verdict::Accepted => "accepted",
        Verdict::VariantRejected => "variant-rejected",
    };
    summary.push(format!("verdict: {verdict_name}"));
    outputs.json(
        "comparison.json",
        &ComparisonSummary {
            verdict: verdict_name,
            designated: cfg.designated.clone(),
            sets: set.n(),
            points: set.grid_len(),
            beta: cfg.beta,
            decision_window_nm: cfg.decision_window_nm,
            outliers: OutlierSummary::of(cfg, &nm, &c),
            variants,
        },
    )?;
    Ok(Report {
        outputs,
        rejected: verdict == Verdict::VariantRejected,
        summary,
    })
}
