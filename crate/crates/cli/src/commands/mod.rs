//! Subcommand implementations. Each one returns its rendered files; nothing
//! touches the output directory until the caller commits them.

mod calibrate;
mod compare;
mod force;
mod permittivity;
mod roughness;
mod simulate;
mod stats;

use anyhow::{Context, Result};

use casimir_core::compare::{rough_theory_curve, InterpolatedForce};
use casimir_core::dielectric::CachedPermittivity;
use casimir_core::lifshitz::{LifshitzOptions, SpherePlateGeometry};
use casimir_core::roughness::TopographyHistogram;

use crate::config::RunConfig;
use crate::output::Outputs;

pub use calibrate::calibrate;
pub use compare::compare;
pub use force::force;
pub use permittivity::permittivity;
pub use roughness::roughness;
pub use simulate::simulate;
pub use stats::stats;

/// What a command produced and whether it passed judgement on the data.
#[derive(Debug)]
pub struct Report {
    pub outputs: Outputs,
    pub rejected: bool,
    pub summary: Vec<String>,
}

impl Report {
    fn new(outputs: Outputs) -> Self {
        Self {
            outputs,
            rejected: false,
            summary: Vec::new(),
        }
    }
}

/// Materials, geometry and surfaces shared by the theory commands.
struct Setup {
    geom: SpherePlateGeometry,
    sphere: CachedPermittivity,
    t1: TopographyHistogram,
    t2: TopographyHistogram,
    opts: LifshitzOptions,
}

impl Setup {
    fn new(cfg: &RunConfig) -> Result<Self> {
        let geom = cfg.geometry().context("geometry")?;
        let sphere = cfg.material(&cfg.sphere).context("sphere material")?;
        let (t1, t2) = cfg.histograms().context("roughness histograms")?;
        Ok(Self {
            geom,
            sphere,
            t1,
            t2,
            opts: LifshitzOptions::default(),
        })
    }

    /// Smooth-surface base covering every shifted separation of the grid.
    fn base(&self, cfg: &RunConfig, plate: &CachedPermittivity, z: &[f64]) -> Result<InterpolatedForce> {
        let (first, last) = (z[0], z[z.len() - 1]);
        Ok(InterpolatedForce::for_roughness(
            &self.geom,
            &self.sphere,
            plate,
            &self.t1,
            &self.t2,
            first,
            last.max(first * (1.0 + 1e-6)),
            cfg.base_points,
            &self.opts,
        )?)
    }

    /// Roughness-corrected theory of one variant on `z`.
    fn rough_theory(&self, cfg: &RunConfig, name: &str, z: &[f64]) -> Result<Vec<f64>> {
        let variant = cfg
            .variant(name)
            .with_context(|| format!("no variant named {name}"))?;
        let plate = cfg
            .material(&variant.plate)
            .with_context(|| format!("plate material of variant {name}"))?;
        let base = self
            .base(cfg, &plate, z)
            .with_context(|| format!("Lifshitz base of variant {name}"))?;
        rough_theory_curve(&base, &self.t1, &self.t2, z)
            .with_context(|| format!("roughness correction of variant {name}"))
    }
}
