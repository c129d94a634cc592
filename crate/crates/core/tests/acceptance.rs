//! Acceptance checks against the published numbers and synthetic oracles.
//! Prints one PASS/FAIL line per criterion and exits non-zero if any fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use casimir_core::calibration::{exact_coefficient, polynomial_coefficient};
use casimir_core::compare::{
    compare_campaign, theory_curve, ComparisonConfig, DEFAULT_BASE_POINTS,
};
use casimir_core::constants::{EV_TO_RAD_PER_S, MICROMETRE, NANOMETRE, PICONEWTON};
use casimir_core::dielectric::{
    drude_eps_imag_axis, drude_im_eps, presets, CachedPermittivity, DrudeParams, KramersKronig,
    OpticalDataTable, PermittivityModel,
};
use casimir_core::fixtures::{self, printed_decimals, FORCE_TABLE, RELATIVE_ERROR_TABLE};
use casimir_core::lifshitz::{
    casimir_force, force_curve, ideal_metal_force, LifshitzOptions, SpherePlateGeometry,
};
use casimir_core::roughness::{
    correction_ratios, stochastic_variance, zero_level, TopographyHistogram,
};
use casimir_core::stats::{
    band_conformity, combine_systematic, error_budget, mean_force, outlier_scan, random_error,
    simulate_campaign, smooth_variance, theory_error_budget, total_experimental_error,
    variance_of_mean, BudgetConfig, ConfidenceBand, ForceCurveSet, SmoothingWeights,
    TotalErrorPolicy, DEFAULT_SMOOTHING_WINDOW,
};

const C1_REL_TOL: f64 = 1.5e-5;
const C1_BUDGET: Duration = Duration::from_secs(1);
const C2_TOL_NM: f64 = 0.001;
const C3_TOL: f64 = 0.002;
const C4_IDEAL_TOL: f64 = 1e-3;
const C4_KK_TOL: f64 = 1e-4;
const C4_BUDGET: Duration = Duration::from_secs(60);
const C5_ANALYTIC_TOL: f64 = 0.10;
const C6_TOTAL_TOL: f64 = 0.01;
const C7_THEORY_TOL_PP: f64 = 0.3;
const C8_ALL_TOL: f64 = 0.10;
const C8_FAR_TOL: f64 = 0.03;
const C8_FAR_FROM_NM: f64 = 80.0;
const C9_SEEDS: u64 = 200;
const C9_COVERAGE: f64 = 0.95;
const C9_FALSE_POSITIVE: f64 = 0.10;
const C9_DETECTION: f64 = 0.99;
const C10_BUDGET: Duration = Duration::from_secs(300);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

type Check = fn(&Shared) -> Result<Outcome, Box<dyn std::error::Error>>;

/// Material models and curves reused by several criteria.
struct Shared {
    geom: SpherePlateGeometry,
    au: CachedPermittivity,
    si_doped: CachedPermittivity,
    si_dielectric: CachedPermittivity,
    au_topo: TopographyHistogram,
    si_topo: TopographyHistogram,
}

impl Shared {
    fn new() -> Result<Self, Box<dyn std::error::Error>> {
        Ok(Self {
            geom: SpherePlateGeometry::new(
                fixtures::SPHERE_RADIUS_UM * MICROMETRE,
                fixtures::SPHERE_RADIUS_ERROR_UM * MICROMETRE,
            )?,
            au: CachedPermittivity::new(presets::gold_tabulated())?,
            si_doped: CachedPermittivity::new(presets::silicon_doped())?,
            si_dielectric: CachedPermittivity::new(presets::silicon_dielectric())?,
            au_topo: TopographyHistogram::from_nm(&fixtures::AU_TOPOGRAPHY)?,
            si_topo: TopographyHistogram::from_nm(&fixtures::SI_TOPOGRAPHY)?,
        })
    }

    fn budget_config(&self) -> BudgetConfig {
        BudgetConfig {
            beta: 0.95,
            policy: TotalErrorPolicy::Conservative,
            paper_compat: true,
            radius: self.geom.radius(),
            radius_error: self.geom.radius_uncertainty(),
            separation_error: fixtures::SEPARATION_ERROR_NM * NANOMETRE,
            optical_error: fixtures::OPTICAL_DATA_ERROR,
        }
    }

    fn systematic(&self) -> Vec<f64> {
        fixtures::SYSTEMATIC_COMPONENTS_PN
            .iter()
            .map(|v| v * PICONEWTON)
            .collect()
    }

    fn rough_theory(&self, plate: &CachedPermittivity, z: &[f64]) -> Result<Vec<f64>, Box<dyn std::error::Error>> {
        Ok(theory_curve(
            &self.geom,
            &self.au,
            plate,
            &self.au_topo,
            &self.si_topo,
            z,
            DEFAULT_BASE_POINTS,
            &LifshitzOptions::default(),
        )?)
    }
}

fn c1_electrostatics(_: &Shared) -> Result<Outcome, Box<dyn std::error::Error>> {
    let r = fixtures::SPHERE_RADIUS_UM * MICROMETRE;
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..=320 {
        let z = (1.8 + 3.2 * k as f64 / 320.0) * MICROMETRE;
        let exact = exact_coefficient(r, z, 1_000_000)?;
        worst = worst.max((polynomial_coefficient(r, z)? / exact - 1.0).abs());
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        worst <= C1_REL_TOL && elapsed < C1_BUDGET,
        format!("max relative deviation {worst:.3e} (limit {C1_REL_TOL:e}), {elapsed:.2?}"),
    ))
}

fn c2_moments(s: &Shared) -> Result<Outcome, Box<dyn std::error::Error>> {
    let nm = |v: f64| v / NANOMETRE;
    let values = [
        ("H0(Au)", nm(zero_level(&s.au_topo)), fixtures::AU_ZERO_LEVEL_NM),
        ("H0(Si)", nm(zero_level(&s.si_topo)), fixtures::SI_ZERO_LEVEL_NM),
        ("d_st(Au)", nm(stochastic_variance(&s.au_topo)), fixtures::AU_STOCHASTIC_VARIANCE_NM),
        ("d_st(Si)", nm(stochastic_variance(&s.si_topo)), fixtures::SI_STOCHASTIC_VARIANCE_NM),
    ];
    let pass = values.iter().all(|(_, got, want)| (got - want).abs() <= C2_TOL_NM);
    let detail = values
        .iter()
        .map(|(name, got, want)| {
            let mark = if (got - want).abs() <= C2_TOL_NM { "" } else { " !" };
            format!("{name} {got:.4}/{want}{mark}")
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok(outcome(pass, format!("{detail} nm (tol {C2_TOL_NM})")))
}

fn c3_roughness_ratios(s: &Shared) -> Result<Outcome, Box<dyn std::error::Error>> {
    let targets = [(62.33, 1.015, 1.019), (100.07, 1.006, 1.007)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (z_nm, add, mul) in targets {
        let base = |z: f64| casimir_force(&s.geom, &s.au, &s.si_doped, z);
        let r = correction_ratios(base, &s.au_topo, &s.si_topo, z_nm * NANOMETRE)?;
        pass &= (r.additive - add).abs() <= C3_TOL && (r.multiplicative - mul).abs() <= C3_TOL;
        parts.push(format!(
            "z={z_nm}: additive {:.4}/{add}, multiplicative {:.4}/{mul}",
            r.additive, r.multiplicative
        ));
    }
    Ok(outcome(pass, format!("{} (tol {C3_TOL})", parts.join("; "))))
}

fn c4_lifshitz_oracles(s: &Shared) -> Result<Outcome, Box<dyn std::error::Error>> {
    let ideal = PermittivityModel::IdealMetal;
    let mut worst_ideal = 0.0f64;
    for k in 0..=24 {
        let z = (60.0 + 10.0 * k as f64) * NANOMETRE;
        let f = casimir_force(&s.geom, &ideal, &ideal, z)?;
        worst_ideal = worst_ideal.max((f / ideal_metal_force(s.geom.radius(), z) - 1.0).abs());
    }

    let drude = DrudeParams::from_ev(presets::GOLD_PLASMA_EV, presets::GOLD_RELAXATION_EV)?;
    let (lo, hi, per_decade) = (presets::GOLD_TABLE_MIN_EV, 1e4, 100usize);
    let n = ((hi / lo).log10() * per_decade as f64).round() as usize;
    let omega: Vec<f64> = (0..=n)
        .map(|i| lo * (hi / lo).powf(i as f64 / n as f64) * EV_TO_RAD_PER_S)
        .collect();
    let table = OpticalDataTable::sample(omega, |w| drude_im_eps(&drude, w).expect("positive ω"))?;
    let kk = KramersKronig::new(table, Some(drude));
    let mut worst_kk = 0.0f64;
    for k in 0..=60 {
        let xi = 1e-3 * 10f64.powf(k as f64 / 10.0) * EV_TO_RAD_PER_S;
        let want = drude_eps_imag_axis(&drude, xi)?;
        worst_kk = worst_kk.max((kk.eval(xi)? / want - 1.0).abs());
    }

    let grid: Vec<f64> = fixtures::separation_grid_nm().iter().map(|z| z * NANOMETRE).collect();
    let gold = presets::gold();
    let start = Instant::now();
    let curve = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()?
        .install(|| force_curve(&s.geom, &gold, &s.si_doped, &grid))?;
    let elapsed = start.elapsed();
    let pass = worst_ideal <= C4_IDEAL_TOL
        && worst_kk <= C4_KK_TOL
        && elapsed < C4_BUDGET
        && curve.len() == fixtures::GRID_POINTS;
    Ok(outcome(
        pass,
        format!(
            "ideal metal {worst_ideal:.2e} (tol {C4_IDEAL_TOL:e}), Drude dispersion {worst_kk:.2e} over 1e-3..1e3 eV (tol {C4_KK_TOL:e}), {}-point curve on one thread {elapsed:.2?}",
            curve.len()
        ),
    ))
}

fn c5_table_theory(s: &Shared) -> Result<Outcome, Box<dyn std::error::Error>> {
    let z: Vec<f64> = FORCE_TABLE.iter().map(|r| r.z_nm * NANOMETRE).collect();
    let theory = s.rough_theory(&s.si_doped, &z)?;
    let worst = FORCE_TABLE
        .iter()
        .zip(&theory)
        .map(|(r, f)| (f / PICONEWTON / r.f_conductive - 1.0).abs())
        .fold(0.0, f64::max);
    let note = s.si_doped.model().notes().join("; ");
    Ok(outcome(
        worst <= C5_ANALYTIC_TOL,
        format!(
            "max deviation {:.2}% with analytic Si base [{note}] (tol {}%); no Si optical table supplied",
            worst * 100.0,
            C5_ANALYTIC_TOL * 100.0
        ),
    ))
}

fn c6_error_machinery(_: &Shared) -> Result<Outcome, Box<dyn std::error::Error>> {
    let syst = combine_systematic(&fixtures::SYSTEMATIC_COMPONENTS_PN, 0.95)?;
    let total = total_experimental_error(3.0, 1.17, 1.5, 0.95, TotalErrorPolicy::Conservative)?;
    let rand = random_error(1.5, fixtures::MEASUREMENT_SETS, 0.95, true)?;
    let syst_printed = (syst * 100.0).round() / 100.0;
    let pass = syst_printed == fixtures::SYSTEMATIC_TOTAL_PN
        && (total - fixtures::TOTAL_ERROR_PN).abs() <= C6_TOTAL_TOL
        && rand == fixtures::RANDOM_ERROR_PN;
    Ok(outcome(
        pass,
        format!("systematic {syst:.4} -> {syst_printed} pN, total {total:.4} pN, random {rand} pN"),
    ))
}

fn c7_relative_errors(s: &Shared) -> Result<Outcome, Box<dyn std::error::Error>> {
    let cfg = s.budget_config();
    let mut theory_worst = 0.0f64;
    let mut mismatches = Vec::new();
    for (f, r) in FORCE_TABLE.iter().zip(&RELATIVE_ERROR_TABLE) {
        let t = theory_error_budget(
            r.z_nm * NANOMETRE,
            cfg.radius,
            cfg.radius_error,
            cfg.separation_error,
            cfg.optical_error,
        )?;
        theory_worst = theory_worst
            .max((t.delta0 * 100.0 - r.theory_delta0).abs())
            .max((t.total * 100.0 - r.theory_total).abs());
        for (name, delta, printed) in [
            ("rand", fixtures::RANDOM_ERROR_PN, r.rand),
            ("syst", fixtures::SYSTEMATIC_TOTAL_PN, r.syst),
            ("total", fixtures::TOTAL_ERROR_PN, r.total),
        ] {
            let value = delta / f.f_expt.abs() * 100.0;
            let half_unit = 0.5 * 10f64.powi(-(printed_decimals(printed) as i32));
            if (value - printed).abs() > half_unit + 1e-9 {
                mismatches.push(format!("{}nm {name} {value:.3}/{printed}", r.z_nm));
            }
        }
    }
    let pass = theory_worst <= C7_THEORY_TOL_PP && mismatches.is_empty();
    let tail = if mismatches.is_empty() {
        "all experimental entries match".to_string()
    } else {
        format!("{} experimental entries off by more than half a printed unit: {}", mismatches.len(), mismatches.join(", "))
    };
    Ok(outcome(
        pass,
        format!("theory columns max |Δ| {theory_worst:.3} pp (tol {C7_THEORY_TOL_PP}); {tail}"),
    ))
}

fn c8_band_reconstruction(_: &Shared) -> Result<Outcome, Box<dyn std::error::Error>> {
    let (theory, expt): (Vec<f64>, Vec<f64>) = FORCE_TABLE
        .iter()
        .zip(&RELATIVE_ERROR_TABLE)
        .map(|(f, r)| (r.theory_total / 100.0 * f.f_conductive.abs(), r.total / 100.0 * f.f_expt.abs()))
        .unzip();
    let band = ConfidenceBand::from_errors(&theory, &expt)?;
    let mut pass = true;
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (i, r) in FORCE_TABLE.iter().enumerate() {
        let tol = if r.z_nm >= C8_FAR_FROM_NM { C8_FAR_TOL } else { C8_ALL_TOL };
        for (name, got, want) in [("xi95", band.xi95[i], r.xi95), ("xi70", band.xi70[i], r.xi70)] {
            let dev = got / want - 1.0;
            worst = worst.max(dev.abs());
            if dev.abs() > tol {
                pass = false;
                failures.push(format!("{}nm {name} {got:.2}/{want} ({:+.1}%)", r.z_nm, dev * 100.0));
            }
        }
    }
    let detail = if failures.is_empty() {
        format!("max deviation {:.1}%", worst * 100.0)
    } else {
        format!("outside tolerance: {}", failures.join(", "))
    };
    Ok(outcome(pass, format!("{detail} (tol 10% all rows, 3% for z >= 80 nm)")))
}

#[allow(clippy::needless_range_loop)]
fn c9_statistical_coverage(s: &Shared) -> Result<Outcome, Box<dyn std::error::Error>> {
    let z: Vec<f64> = fixtures::separation_grid_nm().iter().map(|z| z * NANOMETRE).collect();
    let theory = s.rough_theory(&s.si_doped, &z)?;
    let n = fixtures::MEASUREMENT_SETS;
    let sigma = fixtures::SMOOTHED_STD_OF_MEAN_PN * PICONEWTON * (n as f64).sqrt();
    let cfg = s.budget_config();
    let systematic = s.systematic();

    let (mut inside, mut points, mut false_pos, mut detected, mut injected) = (0usize, 0usize, 0usize, 0usize, 0usize);
    let mut s_tilde_sum = 0.0;
    for seed in 0..C9_SEEDS {
        let set = simulate_campaign(&z, &theory, n, sigma, seed)?;
        let mean = mean_force(&set)?;
        let smoothed = smooth_variance(&variance_of_mean(&set)?, DEFAULT_SMOOTHING_WINDOW, SmoothingWeights::Uniform)?;
        s_tilde_sum += smoothed.iter().sum::<f64>() / smoothed.len() as f64;
        let budget = error_budget(&z, &smoothed, n, &systematic, &cfg)?;
        let band = ConfidenceBand::from_errors(&budget.theory_absolute(&theory)?, &budget.total)?;
        let diffs: Vec<f64> = theory.iter().zip(&mean).map(|(t, m)| t - m).collect();
        let conf = band_conformity(&diffs, &band)?;
        inside += conf.inside95.iter().filter(|b| **b).count();
        points += diffs.len();
        false_pos += outlier_scan(&set, 0.9)?.flagged_count();

        let mut rng = StdRng::seed_from_u64(10_000 + seed);
        let mut forces = set.sets().to_vec();
        let mut targets = Vec::with_capacity(z.len());
        for i in 0..z.len() {
            let j = rng.random_range(0..n);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            forces[j][i] += sign * 8.0 * sigma;
            targets.push(j);
        }
        let scan = outlier_scan(&ForceCurveSet::new(z.clone(), forces)?, 0.9)?;
        detected += (0..z.len())
            .filter(|&i| scan.flagged[i] && scan.worst_set[i] == targets[i])
            .count();
        injected += z.len();
    }
    let coverage = inside as f64 / points as f64;
    let fp_rate = false_pos as f64 / points as f64;
    let detection = detected as f64 / injected as f64;
    let s_tilde = s_tilde_sum / C9_SEEDS as f64 / PICONEWTON;
    Ok(outcome(
        coverage >= C9_COVERAGE && fp_rate <= C9_FALSE_POSITIVE && detection >= C9_DETECTION,
        format!(
            "{C9_SEEDS} campaigns, mean s~ {s_tilde:.3} pN: 95% coverage {:.2}%, outlier false positives {:.2}%, 8-sigma detection {:.2}%",
            coverage * 100.0,
            fp_rate * 100.0,
            detection * 100.0
        ),
    ))
}

fn c10_discrimination(s: &Shared) -> Result<Outcome, Box<dyn std::error::Error>> {
    let start = Instant::now();
    let z: Vec<f64> = fixtures::separation_grid_nm().iter().map(|z| z * NANOMETRE).collect();
    let conductive = s.rough_theory(&s.si_doped, &z)?;
    let dielectric = s.rough_theory(&s.si_dielectric, &z)?;
    let n = fixtures::MEASUREMENT_SETS;
    let sigma = fixtures::SMOOTHED_STD_OF_MEAN_PN * PICONEWTON * (n as f64).sqrt();
    let set = simulate_campaign(&z, &conductive, n, sigma, 2024)?;
    let cfg = ComparisonConfig {
        budget: s.budget_config(),
        systematic_components: s.systematic(),
        smoothing_window: DEFAULT_SMOOTHING_WINDOW,
        weights: SmoothingWeights::Uniform,
        outlier_beta: 0.9,
        window: (60.0 * NANOMETRE, 100.0 * NANOMETRE),
    };
    let cmp = compare_campaign(
        &set,
        &[("conductive".into(), conductive), ("dielectric".into(), dielectric)],
        &cfg,
    )?;
    let elapsed = start.elapsed();
    let c = cmp.variant("conductive").expect("present");
    let d = cmp.variant("dielectric").expect("present");
    let pass = c.consistent() && !c.rejected_at_70() && d.rejected_at_70() && elapsed < C10_BUDGET;
    Ok(outcome(
        pass,
        format!(
            "60-100 nm ({} points): conductive inside 95%/70% = {:.1}%/{:.1}%, dielectric inside 70% = {:.1}%, {elapsed:.2?}",
            c.window_points,
            c.window_fraction95 * 100.0,
            c.window_fraction70 * 100.0,
            d.window_fraction70 * 100.0
        ),
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let shared = match Shared::new() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("setup failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!("setup {:.2?}", start.elapsed());
    let checks: [(&str, &str, Check); 10] = [
        ("C1", "electrostatic polynomial vs exact series", c1_electrostatics),
        ("C2", "roughness zero levels and stochastic variances", c2_moments),
        ("C3", "roughness correction ratios", c3_roughness_ratios),
        ("C4", "Lifshitz and dispersion-relation oracles", c4_lifshitz_oracles),
        ("C5", "theory forces for conductive Si", c5_table_theory),
        ("C6", "systematic, total and random errors", c6_error_machinery),
        ("C7", "relative error columns", c7_relative_errors),
        ("C8", "confidence half-widths", c8_band_reconstruction),
        ("C9", "synthetic campaign coverage and outlier screening", c9_statistical_coverage),
        ("C10", "conductive vs dielectric discrimination", c10_discrimination),
    ];
    let mut failed = 0;
    for (id, title, check) in checks {
        let t = Instant::now();
        let (pass, detail) = match check(&shared) {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} {id:<3} {title}: {detail} [{:.2?}]",
            if pass { "PASS" } else { "FAIL" },
            t.elapsed()
        );
    }
    println!("{} of 10 criteria passed in {:.2?}", 10 - failed, start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
