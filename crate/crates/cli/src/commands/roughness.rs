//! Surface moments and the additive and multiplicative roughness corrections.

use anyhow::{Context, Result};
use serde::Serialize;

use casimir_core::constants::{NANOMETRE, PICONEWTON};
use casimir_core::roughness::{
    additive_corrected_force, mean_deviation, multiplicative_factor, stochastic_variance, zero_level,
    TopographyHistogram,
};

use super::{Report, Setup};
use crate::config::RunConfig;
use crate::output::{Cell, Outputs, Table};

#[derive(Serialize)]
struct Moments {
    bins: usize,
    max_height_nm: f64,
    zero_level_nm: f64,
    mean_deviation_nm: f64,
    stochastic_variance_nm: f64,
}

impl Moments {
    fn of(t: &TopographyHistogram) -> Self {
        Self {
            bins: t.len(),
            max_height_nm: t.max_height() / NANOMETRE,
            zero_level_nm: zero_level(t) / NANOMETRE,
            mean_deviation_nm: mean_deviation(t) / NANOMETRE,
            stochastic_variance_nm: stochastic_variance(t) / NANOMETRE,
        }
    }
}

#[derive(Serialize)]
struct Surfaces {
    sphere: Moments,
    plate: Moments,
}

pub fn roughness(cfg: &RunConfig) -> Result<Report> {
    let setup = Setup::new(cfg)?;
    let z = cfg.grid.metres();
    let nm = cfg.grid.nm();
    let (d1, d2) = (stochastic_variance(&setup.t1), stochastic_variance(&setup.t2));

    let mut outputs = Outputs::new();
    outputs.json(
        "roughness.json",
        &Surfaces {
            sphere: Moments::of(&setup.t1),
            plate: Moments::of(&setup.t2),
        },
    )?;
    for v in &cfg.variants {
        let plate = cfg.material(&v.plate).with_context(|| format!("plate material of variant {}", v.name))?;
        let base = setup
            .base(cfg, &plate, &z)
            .with_context(|| format!("Lifshitz force of variant {}", v.name))?;
        let mut table = Table::new(&[
            "z_nm",
            "F_pN",
            "F_additive_pN",
            "F_multiplicative_pN",
            "additive_ratio",
            "multiplicative_ratio",
        ]);
        for (&zi, &znm) in z.iter().zip(&nm) {
            let smooth = base.eval(zi)?;
            let additive = additive_corrected_force(|s| base.eval(s), &setup.t1, &setup.t2, zi)
                .with_context(|| format!("additive correction at {znm} nm"))?;
            let factor = multiplicative_factor(d1, d2, zi)?;
            table.row(&[
                Cell::Num(znm),
                Cell::Num(smooth / PICONEWTON),
                Cell::Num(additive / PICONEWTON),
                Cell::Num(factor * smooth / PICONEWTON),
                Cell::Num(additive / smooth),
                Cell::Num(factor),
            ]);
        }
        outputs.table(format!("roughness_{}.csv", v.name), table);
    }
    Ok(Report::new(outputs))
}
