//! Electrostatic calibration: residual potential and contact separation.

use anyhow::{Context, Result};
use serde::Serialize;

use casimir_core::calibration::calibrate as fit;
use casimir_core::constants::{MICROMETRE, NANOMETRE};

use super::Report;
use crate::config::RunConfig;
use crate::data::read_calibration;
use crate::output::Outputs;

#[derive(Serialize)]
struct Separation {
    z_rel_nm: f64,
    v0_v: f64,
    curvature_n_per_v2: f64,
    rms_n: f64,
}

#[derive(Serialize)]
struct Calibration {
    records: usize,
    v0_mean_v: f64,
    v0_spread_v: f64,
    z0_nm: f64,
    contact_rms_n_per_v2: f64,
    separations: Vec<Separation>,
}

pub fn calibrate(cfg: &RunConfig) -> Result<Report> {
    let path = cfg
        .calibration
        .as_ref()
        .map(|p| cfg.resolve(p))
        .context("no calibration file configured")?;
    let records = read_calibration(&path)?;
    let rep = fit(&records, cfg.radius_um * MICROMETRE)
        .with_context(|| format!("fitting calibration records from {}", path.display()))?;

    let summary = vec![
        format!("V0 = {:.4} ± {:.4} V", rep.v0_mean, rep.v0_spread),
        format!("z0 = {:.2} nm", rep.contact.z0 / NANOMETRE),
    ];
    let mut outputs = Outputs::new();
    outputs.json(
        "calibration.json",
        &Calibration {
            records: records.len(),
            v0_mean_v: rep.v0_mean,
            v0_spread_v: rep.v0_spread,
            z0_nm: rep.contact.z0 / NANOMETRE,
            contact_rms_n_per_v2: rep.contact.rms,
            separations: rep
                .per_separation
                .iter()
                .map(|s| Separation {
                    z_rel_nm: s.z_rel / NANOMETRE,
                    v0_v: s.parabola.v0,
                    curvature_n_per_v2: s.parabola.curvature,
                    rms_n: s.parabola.rms,
                })
                .collect(),
        },
    )?;
    Ok(Report {
        summary,
        ..Report::new(outputs)
    })
}
