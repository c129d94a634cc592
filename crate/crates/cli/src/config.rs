//! Run configuration: a JSON file, defaults matching the Au sphere / doped Si
//! plate experiment, and command-line overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};

use casimir_core::constants::{MICROMETRE, NANOMETRE, PICONEWTON};
use casimir_core::dielectric::{
    presets, CachedPermittivity, CarrierParams, DrudeParams, OpticalDataTable, PermittivityModel,
};
use casimir_core::fixtures;
use casimir_core::lifshitz::SpherePlateGeometry;
use casimir_core::roughness::TopographyHistogram;
use casimir_core::stats::{BudgetConfig, SmoothingWeights, TotalErrorPolicy};

/// Separation range accepted without `allow_any_grid`, nm.
pub const GRID_LIMITS_NM: (f64, f64) = (50.0, 400.0);

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MaterialSpec {
    Vacuum,
    IdealMetal,
    /// Drude metal, energies in eV.
    Drude { omega_p_ev: f64, gamma_ev: f64 },
    Gold,
    GoldTabulated,
    /// Gold from an `omega_eV,n,kappa` CSV with Drude extrapolation below it.
    GoldTable { path: PathBuf },
    SiliconDielectric,
    SiliconDoped,
    /// Dielectric silicon from an `omega_eV,n,kappa` CSV.
    SiliconTable { path: PathBuf },
    /// A base material plus free carriers: density m⁻³, mass ratio, resistivity Ω·m.
    Doped {
        base: Box<MaterialSpec>,
        density: f64,
        effective_mass_ratio: f64,
        resistivity: f64,
    },
}

impl MaterialSpec {
    pub fn build(&self, base_dir: &Path) -> Result<PermittivityModel> {
        let table = |path: &Path| -> Result<OpticalDataTable> {
            let full = base_dir.join(path);
            OpticalDataTable::from_nk_file(&full).with_context(|| format!("optical table {}", full.display()))
        };
        Ok(match self {
            Self::Vacuum => PermittivityModel::Vacuum,
            Self::IdealMetal => PermittivityModel::IdealMetal,
            Self::Drude { omega_p_ev, gamma_ev } => {
                PermittivityModel::Drude(DrudeParams::from_ev(*omega_p_ev, *gamma_ev)?)
            }
            Self::Gold => presets::gold(),
            Self::GoldTabulated => presets::gold_tabulated(),
            Self::GoldTable { path } => presets::gold_from_table(table(path)?),
            Self::SiliconDielectric => presets::silicon_dielectric(),
            Self::SiliconDoped => presets::silicon_doped(),
            Self::SiliconTable { path } => presets::silicon_from_table(table(path)?),
            Self::Doped {
                base,
                density,
                effective_mass_ratio,
                resistivity,
            } => {
                let carriers = CarrierParams::new(*density, *effective_mass_ratio, *resistivity)?;
                PermittivityModel::doped(base.build(base_dir)?, carriers.drude()?)
            }
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Variant {
    pub name: String,
    pub plate: MaterialSpec,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub z_min_nm: f64,
    pub z_max_nm: f64,
    pub points: usize,
}

impl GridSpec {
    /// Parses `zmin,zmax,n` (nm).
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        ensure!(parts.len() == 3, "grid must be zmin,zmax,n; got {s:?}");
        Ok(Self {
            z_min_nm: parts[0].parse().context("grid zmin")?,
            z_max_nm: parts[1].parse().context("grid zmax")?,
            points: parts[2].parse().context("grid point count")?,
        })
    }

    /// Grid nodes in nm, rounded to 1e-9 nm so they print cleanly.
    pub fn nm(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.z_min_nm];
        }
        let step = (self.z_max_nm - self.z_min_nm) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| ((self.z_min_nm + step * i as f64) * 1e9).round() / 1e9)
            .collect()
    }

    pub fn metres(&self) -> Vec<f64> {
        self.nm().into_iter().map(|z| z * NANOMETRE).collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FrequencyGrid {
    pub xi_min: f64,
    pub xi_max: f64,
    pub points: usize,
}

impl FrequencyGrid {
    pub fn values(&self) -> Vec<f64> {
        let (a, b) = (self.xi_min.ln(), self.xi_max.ln());
        if self.points == 1 {
            return vec![self.xi_min];
        }
        let last = self.points - 1;
        (0..self.points)
            .map(|i| match i {
                0 => self.xi_min,
                i if i == last => self.xi_max,
                i => (a + (b - a) * i as f64 / last as f64).exp(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct Histograms {
    /// `h_nm,v` CSV of the sphere surface; the built-in Au histogram if absent.
    pub sphere: Option<PathBuf>,
    /// `h_nm,v` CSV of the plate surface; the built-in Si histogram if absent.
    pub plate: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum CampaignSpec {
    /// One `z_nm,F_pN` file per measurement set.
    Sets(Vec<PathBuf>),
    /// A single `z_nm,<set 1>,<set 2>,…` file, forces in pN.
    Matrix(PathBuf),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    Standard,
    Conservative,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Weights {
    Uniform,
    Inverse,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    pub variant: String,
    pub sets: usize,
    /// Per-set noise standard deviation, pN.
    pub sigma_pn: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub radius_um: f64,
    pub radius_error_um: f64,
    pub separation_error_nm: f64,
    pub optical_error: f64,
    pub sphere: MaterialSpec,
    pub variants: Vec<Variant>,
    /// Variant the experiment is expected to confirm.
    pub designated: String,
    pub histograms: Histograms,
    pub campaign: Option<CampaignSpec>,
    /// `z_rel_nm,V,F_pN` records of the electrostatic calibration.
    pub calibration: Option<PathBuf>,
    pub grid: GridSpec,
    pub allow_any_grid: bool,
    pub frequencies: FrequencyGrid,
    pub beta: f64,
    pub paper_compat: bool,
    pub policy: Policy,
    pub systematic_pn: Vec<f64>,
    pub smoothing_window: usize,
    pub weights: Weights,
    pub outlier_beta: f64,
    pub decision_window_nm: (f64, f64),
    pub base_points: usize,
    pub simulation: SimulationSpec,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            radius_um: fixtures::SPHERE_RADIUS_UM,
            radius_error_um: fixtures::SPHERE_RADIUS_ERROR_UM,
            separation_error_nm: fixtures::SEPARATION_ERROR_NM,
            optical_error: fixtures::OPTICAL_DATA_ERROR,
            sphere: MaterialSpec::GoldTabulated,
            variants: vec![
                Variant {
                    name: "conductive".into(),
                    plate: MaterialSpec::SiliconDoped,
                },
                Variant {
                    name: "dielectric".into(),
                    plate: MaterialSpec::SiliconDielectric,
                },
            ],
            designated: "conductive".into(),
            histograms: Histograms::default(),
            campaign: None,
            calibration: None,
            grid: GridSpec {
                z_min_nm: fixtures::GRID_START_NM,
                z_max_nm: fixtures::GRID_START_NM
                    + fixtures::GRID_PITCH_NM * (fixtures::GRID_POINTS - 1) as f64,
                points: fixtures::GRID_POINTS,
            },
            allow_any_grid: false,
            frequencies: FrequencyGrid {
                xi_min: 1e11,
                xi_max: 1e18,
                points: 141,
            },
            beta: 0.95,
            paper_compat: false,
            policy: Policy::Conservative,
            systematic_pn: fixtures::SYSTEMATIC_COMPONENTS_PN.to_vec(),
            smoothing_window: 30,
            weights: Weights::Uniform,
            outlier_beta: 0.9,
            decision_window_nm: (60.0, 100.0),
            base_points: casimir_core::compare::DEFAULT_BASE_POINTS,
            simulation: SimulationSpec {
                variant: "conductive".into(),
                sets: fixtures::MEASUREMENT_SETS,
                sigma_pn: fixtures::SMOOTHED_STD_OF_MEAN_PN * (fixtures::MEASUREMENT_SETS as f64).sqrt(),
                seed: 1,
            },
            base_dir: PathBuf::from("."),
        }
    }
}

/// Values given on the command line; each one replaces the configured value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub grid: Option<GridSpec>,
    pub beta: Option<f64>,
    pub paper_compat: bool,
    /// Drop the campaign entry, for commands that produce rather than read one.
    pub without_campaign: bool,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                let mut cfg: RunConfig =
                    serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))?;
                cfg.base_dir = p.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
                cfg
            }
            None => RunConfig::default(),
        };
        if let Some(g) = overrides.grid {
            cfg.grid = g;
        }
        if let Some(b) = overrides.beta {
            cfg.beta = b;
        }
        if overrides.paper_compat {
            cfg.paper_compat = true;
        }
        if overrides.without_campaign {
            cfg.campaign = None;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.radius_um > 0.0, "radius_um must be positive");
        ensure!(self.radius_error_um >= 0.0, "radius_error_um must be non-negative");
        ensure!(self.separation_error_nm >= 0.0, "separation_error_nm must be non-negative");
        ensure!(self.optical_error >= 0.0, "optical_error must be non-negative");
        ensure!(self.beta > 0.0 && self.beta < 1.0, "beta must lie in (0, 1), got {}", self.beta);
        ensure!(
            self.outlier_beta > 0.0 && self.outlier_beta < 1.0,
            "outlier_beta must lie in (0, 1)"
        );
        let g = &self.grid;
        ensure!(g.points >= 1, "grid needs at least one point");
        ensure!(
            g.z_min_nm > 0.0 && (g.z_max_nm > g.z_min_nm || (g.points == 1 && g.z_max_nm >= g.z_min_nm)),
            "grid must satisfy 0 < zmin < zmax, got {} .. {} nm",
            g.z_min_nm,
            g.z_max_nm
        );
        if !self.allow_any_grid {
            ensure!(
                g.z_min_nm >= GRID_LIMITS_NM.0 && g.z_max_nm <= GRID_LIMITS_NM.1,
                "grid {} .. {} nm outside [{}, {}] nm; set allow_any_grid to override",
                g.z_min_nm,
                g.z_max_nm,
                GRID_LIMITS_NM.0,
                GRID_LIMITS_NM.1
            );
        }
        let f = &self.frequencies;
        ensure!(
            f.xi_min > 0.0 && f.xi_max >= f.xi_min && f.points >= 1,
            "frequency grid must satisfy 0 < xi_min <= xi_max"
        );
        ensure!(!self.variants.is_empty(), "at least one variant is required");
        for (i, v) in self.variants.iter().enumerate() {
            ensure!(!v.name.is_empty(), "variant {i} has an empty name");
            ensure!(
                v.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_'),
                "variant name {:?} may only contain letters, digits, '-' and '_'",
                v.name
            );
            if self.variants[..i].iter().any(|w| w.name == v.name) {
                bail!("duplicate variant name {:?}", v.name);
            }
        }
        ensure!(
            self.variant(&self.designated).is_some(),
            "designated variant {:?} is not configured",
            self.designated
        );
        ensure!(!self.systematic_pn.is_empty(), "systematic_pn must list at least one error");
        ensure!(self.base_points >= 4, "base_points must be at least 4");
        ensure!(
            self.decision_window_nm.1 >= self.decision_window_nm.0,
            "decision window must be ordered"
        );
        for path in self.referenced_files() {
            let full = self.resolve(&path);
            ensure!(full.is_file(), "referenced file {} does not exist", full.display());
        }
        Ok(())
    }

    fn referenced_files(&self) -> Vec<PathBuf> {
        fn material(m: &MaterialSpec, out: &mut Vec<PathBuf>) {
            match m {
                MaterialSpec::GoldTable { path } | MaterialSpec::SiliconTable { path } => out.push(path.clone()),
                MaterialSpec::Doped { base, .. } => material(base, out),
                _ => {}
            }
        }
        let mut out = Vec::new();
        material(&self.sphere, &mut out);
        for v in &self.variants {
            material(&v.plate, &mut out);
        }
        out.extend(self.histograms.sphere.iter().cloned());
        out.extend(self.histograms.plate.iter().cloned());
        match &self.campaign {
            Some(CampaignSpec::Sets(files)) => out.extend(files.iter().cloned()),
            Some(CampaignSpec::Matrix(p)) => out.push(p.clone()),
            None => {}
        }
        out.extend(self.calibration.iter().cloned());
        out
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        self.base_dir.join(path)
    }

    pub fn variant(&self, name: &str) -> Option<&Variant> {
        self.variants.iter().find(|v| v.name == name)
    }

    pub fn geometry(&self) -> Result<SpherePlateGeometry> {
        Ok(SpherePlateGeometry::new(
            self.radius_um * MICROMETRE,
            self.radius_error_um * MICROMETRE,
        )?)
    }

    pub fn material(&self, spec: &MaterialSpec) -> Result<CachedPermittivity> {
        let model = spec.build(&self.base_dir)?;
        for note in model.notes() {
            log::warn!("material {}: {note}", spec_name(spec));
        }
        Ok(CachedPermittivity::new(model)?)
    }

    pub fn histograms(&self) -> Result<(TopographyHistogram, TopographyHistogram)> {
        let load = |path: &Option<PathBuf>, builtin: &[(f64, f64)]| -> Result<TopographyHistogram> {
            match path {
                Some(p) => {
                    let full = self.resolve(p);
                    let file = std::fs::File::open(&full).with_context(|| format!("opening {}", full.display()))?;
                    TopographyHistogram::from_csv(file).with_context(|| format!("histogram {}", full.display()))
                }
                None => Ok(TopographyHistogram::from_nm(builtin)?),
            }
        };
        Ok((
            load(&self.histograms.sphere, &fixtures::AU_TOPOGRAPHY)?,
            load(&self.histograms.plate, &fixtures::SI_TOPOGRAPHY)?,
        ))
    }

    pub fn budget(&self) -> Result<BudgetConfig> {
        Ok(BudgetConfig {
            beta: self.beta,
            policy: match self.policy {
                Policy::Standard => TotalErrorPolicy::Standard,
                Policy::Conservative => TotalErrorPolicy::Conservative,
            },
            paper_compat: self.paper_compat,
            radius: self.radius_um * MICROMETRE,
            radius_error: self.radius_error_um * MICROMETRE,
            separation_error: self.separation_error_nm * NANOMETRE,
            optical_error: self.optical_error,
        })
    }

    pub fn systematic(&self) -> Vec<f64> {
        self.systematic_pn.iter().map(|v| v * PICONEWTON).collect()
    }

    pub fn smoothing_weights(&self) -> SmoothingWeights {
        match self.weights {
            Weights::Uniform => SmoothingWeights::Uniform,
            Weights::Inverse => SmoothingWeights::Inverse,
        }
    }
}

fn spec_name(spec: &MaterialSpec) -> &'static str {
    match spec {
        MaterialSpec::Vacuum => "vacuum",
        MaterialSpec::IdealMetal => "ideal-metal",
        MaterialSpec::Drude { .. } => "drude",
        MaterialSpec::Gold => "gold",
        MaterialSpec::GoldTabulated => "gold-tabulated",
        MaterialSpec::GoldTable { .. } => "gold-table",
        MaterialSpec::SiliconDielectric => "silicon-dielectric",
        MaterialSpec::SiliconDoped => "silicon-doped",
        MaterialSpec::SiliconTable { .. } => "silicon-table",
        MaterialSpec::Doped { .. } => "doped",
    }
}
