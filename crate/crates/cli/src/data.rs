//! Readers for measured force curves and calibration records.

use std::path::Path;

use anyhow::{bail, ensure, Context, Result};

use casimir_core::constants::{NANOMETRE, PICONEWTON};
use casimir_core::stats::{align_to_grid, ForceCurveSet, RawCurve};

use crate::config::{CampaignSpec, RunConfig};

/// Header names and numeric rows of a `#`-commented CSV file.
fn read_numeric(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers: Vec<String> = rdr
        .headers()
        .with_context(|| format!("{}: reading header", path.display()))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.with_context(|| format!("{}: malformed record", path.display()))?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .enumerate()
            .map(|(i, raw)| {
                raw.parse::<f64>().ok().filter(|v| v.is_finite()).with_context(|| {
                    format!("{}:{line}: column {} value {raw:?} is not a finite number", path.display(), headers[i])
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    ensure!(!rows.is_empty(), "{}: no data rows", path.display());
    Ok((headers, rows))
}

fn expect_header(path: &Path, found: &[String], expected: &[&str]) -> Result<()> {
    if found.len() != expected.len() || found.iter().zip(expected).any(|(a, b)| a != b) {
        bail!(
            "{}:1: expected header {}, found {}",
            path.display(),
            expected.join(","),
            found.join(",")
        );
    }
    Ok(())
}

/// `z_nm,F_pN` curve in SI units.
pub fn read_curve(path: &Path) -> Result<RawCurve> {
    let (headers, rows) = read_numeric(path)?;
    expect_header(path, &headers, &["z_nm", "F_pN"])?;
    Ok(RawCurve {
        z: rows.iter().map(|r| r[0] * NANOMETRE).collect(),
        force: rows.iter().map(|r| r[1] * PICONEWTON).collect(),
    })
}

/// `z_nm,<set>,<set>,…` with one force column per measurement set, in SI units.
pub fn read_matrix(path: &Path) -> Result<Vec<RawCurve>> {
    let (headers, rows) = read_numeric(path)?;
    ensure!(
        headers.first().map(String::as_str) == Some("z_nm") && headers.len() >= 2,
        "{}:1: expected header z_nm followed by one column per set",
        path.display()
    );
    let z: Vec<f64> = rows.iter().map(|r| r[0] * NANOMETRE).collect();
    Ok((1..headers.len())
        .map(|c| RawCurve {
            z: z.clone(),
            force: rows.iter().map(|r| r[c] * PICONEWTON).collect(),
        })
        .collect())
}

/// The configured campaign aligned to the configured grid.
pub fn load_campaign(cfg: &RunConfig) -> Result<ForceCurveSet> {
    let curves = match &cfg.campaign {
        Some(CampaignSpec::Sets(files)) => files
            .iter()
            .map(|f| read_curve(&cfg.resolve(f)))
            .collect::<Result<Vec<_>>>()?,
        Some(CampaignSpec::Matrix(path)) => read_matrix(&cfg.resolve(path))?,
        None => bail!("no campaign configured"),
    };
    ensure!(curves.len() >= 3, "campaign needs at least 3 measurement sets, got {}", curves.len());
    align_to_grid(&curves, &cfg.grid.metres()).context("aligning campaign to the grid")
}

/// `z_rel_nm,V,F_pN` records as `(z_rel, V, F)` in SI units.
pub fn read_calibration(path: &Path) -> Result<Vec<(f64, f64, f64)>> {
    let (headers, rows) = read_numeric(path)?;
    expect_header(path, &headers, &["z_rel_nm", "V", "F_pN"])?;
    Ok(rows
        .iter()
        .map(|r| (r[0] * NANOMETRE, r[1], r[2] * PICONEWTON))
        .collect())
}
