//! Synthetic campaign: one variant's theory plus Gaussian noise.

use anyhow::{ensure, Context, Result};

use casimir_core::constants::PICONEWTON;
use casimir_core::stats::simulate_campaign;

use super::{Report, Setup};
use crate::config::RunConfig;
use crate::output::{Cell, Outputs, Table};

pub fn simulate(cfg: &RunConfig) -> Result<Report> {
    let sim = &cfg.simulation;
    ensure!(sim.sets >= 1, "simulation needs at least one set");
    ensure!(sim.sigma_pn >= 0.0, "simulation noise must be non-negative");
    let z = cfg.grid.metres();
    let setup = Setup::new(cfg)?;
    let theory = setup.rough_theory(cfg, &sim.variant, &z)?;
    let set = simulate_campaign(&z, &theory, sim.sets, sim.sigma_pn * PICONEWTON, sim.seed)
        .context("drawing synthetic campaign")?;

    let mut header = vec!["z_nm".to_string()];
    header.extend((1..=sim.sets).map(|k| format!("set_{k}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new(&header);
    for (i, zi) in cfg.grid.nm().into_iter().enumerate() {
        let mut row = vec![Cell::Num(zi)];
        row.extend(set.sets().iter().map(|f| Cell::Num(f[i] / PICONEWTON)));
        table.row(&row);
    }
    let mut outputs = Outputs::new();
    outputs.table("campaign.csv", table);
    Ok(Report {
        summary: vec![format!(
            "{} sets of variant {} with {} pN noise, seed {}",
            sim.sets, sim.variant, sim.sigma_pn, sim.seed
        )],
        ..Report::new(outputs)
    })
}
