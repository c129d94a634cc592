//! # `casimir`
//!
//! Sphere-plate Casimir force pipeline: dielectric permittivities along the
//! imaginary frequency axis, Lifshitz forces with roughness corrections,
//! electrostatic calibration, campaign error budgets and the comparison of
//! theory variants with measured force curves.
//!
//! Every run is driven by one JSON config plus flag overrides. Reports are
//! plain CSV and JSON and are byte-identical across identical runs.
//!
//! Exit status: 0 when the data accept the designated variant, 2 when a
//! variant is rejected, 1 on any error.

#![allow(clippy::needless_range_loop)]

mod commands;
mod config;
mod data;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use crate::config::{GridSpec, Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Casimir force theory and experiment comparison")]
struct Cli {
    /// JSON run configuration; built-in defaults when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Separation grid `zmin,zmax,n` in nm.
    #[arg(long, global = true, value_name = "ZMIN,ZMAX,N", value_parser = parse_grid)]
    grid: Option<GridSpec>,

    /// Confidence level of the error budget.
    #[arg(long, global = true)]
    beta: Option<f64>,

    /// Round the Student coefficient the way the published budget does.
    #[arg(long, global = true)]
    paper_compat: bool,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Tabulate ε(iξ) of the sphere and of every plate variant.
    Permittivity,
    /// Smooth and roughness-corrected force of every variant.
    Force,
    /// Surface moments and both roughness corrections.
    Roughness,
    /// Fit the residual potential and contact separation.
    Calibrate,
    /// Experimental error budget, outliers and normality of a campaign.
    Stats,
    /// Compare every variant with a campaign and report the verdict.
    Compare,
    /// Draw a synthetic campaign from one variant's theory.
    Simulate,
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    GridSpec::parse(s).map_err(|e| format!("{e:#}"))
}

fn run(cli: &Cli) -> Result<bool> {
    let overrides = Overrides {
        grid: cli.grid,
        beta: cli.beta,
        paper_compat: cli.paper_compat,
        without_campaign: matches!(cli.command, Command::Simulate),
    };
    let cfg = RunConfig::load(cli.config.as_deref(), &overrides).context("configuration")?;
    let (stage, result) = match cli.command {
        Command::Permittivity => ("permittivity", commands::permittivity(&cfg)),
        Command::Force => ("force", commands::force(&cfg)),
        Command::Roughness => ("roughness", commands::roughness(&cfg)),
        Command::Calibrate => ("calibrate", commands::calibrate(&cfg)),
        Command::Stats => ("stats", commands::stats(&cfg)),
        Command::Compare => ("compare", commands::compare(&cfg)),
        Command::Simulate => ("simulate", commands::simulate(&cfg)),
    };
    let report = result.with_context(|| format!("{stage} failed"))?;
    for line in &report.summary {
        println!("{line}");
    }
    for name in report.outputs.names() {
        log::info!("writing {name}");
    }
    let written = report.outputs.commit(&cli.out).context("writing reports")?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(report.rejected)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
