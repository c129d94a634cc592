//! Smooth-surface and roughness-corrected force of every variant.

use anyhow::{Context, Result};

use casimir_core::compare::rough_theory_curve;
use casimir_core::constants::PICONEWTON;

use super::{Report, Setup};
use crate::config::RunConfig;
use crate::output::{Cell, Outputs, Table};

pub fn force(cfg: &RunConfig) -> Result<Report> {
    let setup = Setup::new(cfg)?;
    let z = cfg.grid.metres();
    let nm = cfg.grid.nm();
    let mut outputs = Outputs::new();
    for v in &cfg.variants {
        let plate = cfg.material(&v.plate).with_context(|| format!("plate material of variant {}", v.name))?;
        let base = setup
            .base(cfg, &plate, &z)
            .with_context(|| format!("Lifshitz force of variant {}", v.name))?;
        let rough = rough_theory_curve(&base, &setup.t1, &setup.t2, &z)
            .with_context(|| format!("roughness correction of variant {}", v.name))?;
        let mut table = Table::new(&["z_nm", "F_pN", "F_rough_pN"]);
        for ((&zi, r), &znm) in z.iter().zip(&rough).zip(&nm) {
            let smooth = base.eval(zi)?;
            table.row(&[
                Cell::Num(znm),
                Cell::Num(smooth / PICONEWTON),
                Cell::Num(r / PICONEWTON),
            ]);
        }
        outputs.table(format!("force_{}.csv", v.name), table);
    }
    Ok(Report::new(outputs))
}
