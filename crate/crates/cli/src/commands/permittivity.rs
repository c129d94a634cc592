//! `ε(iξ)` of the sphere and of every plate variant on the configured grid.

use anyhow::{Context, Result};

use casimir_core::dielectric::Permittivity;

use super::Report;
use crate::config::{MaterialSpec, RunConfig};
use crate::output::{Cell, Outputs, Table};

pub fn permittivity(cfg: &RunConfig) -> Result<Report> {
    let xi = cfg.frequencies.values();
    let mut materials: Vec<(String, &MaterialSpec)> = vec![("sphere".into(), &cfg.sphere)];
    materials.extend(cfg.variants.iter().map(|v| (v.name.clone(), &v.plate)));

    let mut outputs = Outputs::new();
    for (name, spec) in materials {
        let model = cfg.material(spec).with_context(|| format!("material {name}"))?;
        let mut table = Table::new(&["xi_rad_s", "eps"]);
        for &x in &xi {
            let eps = model
                .eps(x)
                .with_context(|| format!("ε of {name} at ξ = {x:e} rad/s"))?;
            table.row(&[Cell::Num(x), Cell::Num(eps)]);
        }
        outputs.table(format!("permittivity_{name}.csv"), table);
    }
    Ok(Report::new(outputs))
}
