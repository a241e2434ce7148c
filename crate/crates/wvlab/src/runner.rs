//! Drive one experiment from a config and write its artifacts.
//!
//! Every artifact body is rendered in memory first and flushed to disk in
//! one pass at the end, manifest last. That keeps runs atomic enough for
//! the determinism contract (a failed run leaves no stale partial CSV
//! that a later diff could trip over) and lets failures enumerate
//! exactly which artifacts never made it out.
//!
//! CSV bodies are deterministic functions of the config: trials are keyed
//! by `(master_seed, trial_index)` streams and collected in index order,
//! so the parallel schedule cannot reorder rows. The manifest carries the
//! wall time and is excluded from byte-for-byte comparisons.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::config::{invalid, missing, ExperimentConfig, ExperimentKind, Ingredients};
use crate::dynamics::{
    apply_shift, chaos_check, fhc_growth_check, hitting_density, random_fhc_function,
    AsymptoticsCheck, TargetSpec,
};
use crate::error::{Error, Result};
use crate::fmtnum::sig17;
use crate::growth::{growth_profile, MaxModOptions};
use crate::inequality::{
    calibrate_constant, check_inequality, exponent_fit, kahane_experiment, levy_trial_suite,
    BoundKind, ExponentFit, LevySuiteConfig, ViolationReport,
};
use crate::sampler::{sample_sequence, SeedSpec};
use crate::series::make_exp_series;

/// Paths of everything a successful run wrote, manifest included.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub artifacts: Vec<PathBuf>,
}

#[derive(Serialize)]
struct Versions {
    wvlab: &'static str,
}

#[derive(Serialize)]
struct Manifest<'a> {
    config_echo: &'a ExperimentConfig,
    versions: Versions,
    wall_time: f64,
}

/// Summary shape shared by the bound-checking experiments.
#[derive(Serialize)]
struct CheckSummary {
    #[serde(rename = "C")]
    c: f64,
    violation_measure_quantiles: [f64; 3],
    slope: Option<f64>,
    stderr: Option<f64>,
    r0: Option<f64>,
}

type Artifact = (&'static str, Vec<u8>);

/// Run the experiment and write its artifacts under `out_dir`,
/// creating the directory if needed. The manifest echoes the effective
/// config (with the kind and output directory pinned), so a run can be
/// reproduced from its own artifacts.
pub fn run(kind: ExperimentKind, cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutcome> {
    let started = Instant::now();
    let artifacts = match kind {
        ExperimentKind::Growth => growth_artifacts(cfg)?,
        ExperimentKind::WvCheck => wv_check_artifacts(cfg)?,
        ExperimentKind::Levy => levy_artifacts(cfg)?,
        ExperimentKind::Kahane => kahane_artifacts(cfg)?,
        ExperimentKind::Shift => shift_artifacts(cfg)?,
        ExperimentKind::FhcDensity => fhc_density_artifacts(cfg)?,
        ExperimentKind::FhcGrowth => fhc_growth_artifacts(cfg)?,
    };

    let mut echo = cfg.clone();
    echo.experiment = Some(kind);
    echo.out = Some(out_dir.to_path_buf());
    let manifest = Manifest {
        config_echo: &echo,
        versions: Versions { wvlab: env!("CARGO_PKG_VERSION") },
        wall_time: started.elapsed().as_secs_f64(),
    };
    let manifest_bytes = serde_json::to_vec_pretty(&manifest)?;

    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::with_capacity(artifacts.len() + 1);
    let mut queue: Vec<(&str, Vec<u8>)> = artifacts;
    queue.push(("manifest.json", manifest_bytes));
    for i in 0..queue.len() {
        let (name, bytes) = &queue[i];
        let path = out_dir.join(name);
        if let Err(e) = std::fs::write(&path, bytes) {
            let left: Vec<&str> = queue[i..].iter().map(|(n, _)| *n).collect();
            return Err(Error::Domain(format!(
                "failed writing {}: {e}; missing artifacts: {}",
                path.display(),
                left.join(", ")
            )));
        }
        written.push(path);
    }
    Ok(RunOutcome { artifacts: written })
}

fn render(name: &'static str, f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Artifact> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok((name, buf))
}

fn json_artifact<T: Serialize>(name: &'static str, value: &T) -> Result<Artifact> {
    Ok((name, serde_json::to_vec_pretty(value)?))
}

/// One CSV row per radius, `trial,r,log_M,log_bound,min_C,violated`;
/// undefined bounds and constants print as empty fields.
fn write_trial_rows<W: std::io::Write>(
    out: &mut W,
    trial: usize,
    rep: &ViolationReport,
) -> Result<()> {
    let opt = |v: Option<f64>| v.map(sig17).unwrap_or_default();
    for i in 0..rep.radii.len() {
        writeln!(
            out,
            "{trial},{},{},{},{},{}",
            sig17(rep.radii[i]),
            sig17(rep.log_lhs[i]),
            opt(rep.log_bound[i]),
            opt(rep.min_c[i]),
            u8::from(rep.violated[i])
        )?;
    }
    Ok(())
}

const TRIAL_HEADER: &str = "trial,r,log_M,log_bound,min_C,violated";

fn measure_json(rep: &ViolationReport, conv: &crate::measure::MeasureConvention) -> serde_json::Value {
    let (name, rho) = match conv {
        crate::measure::MeasureConvention::PlaneClassic => ("plane_classic", 1.0),
        crate::measure::MeasureConvention::DiskClassic => ("disk_classic", 0.0),
        crate::measure::MeasureConvention::Unified(h) => ("unified", h.lower_cutoff()),
    };
    json!({
        "convention": name,
        "measure": rep.measure,
        "rho": rho,
        "intervals": rep.set.intervals(),
    })
}

fn canonical_fit(
    kind: &BoundKind,
    profile: &crate::growth::GrowthProfile,
    base: &crate::growth::GrowthProfile,
) -> Result<Option<ExponentFit>> {
    let radii = base.radii();
    let window = (radii[0], *radii.last().unwrap());
    let (x, y) = kind.canonical_regression();
    match exponent_fit(profile, base, x, y, window, None) {
        Ok(fit) => Ok(Some(fit)),
        Err(Error::DegenerateRegression { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn growth_artifacts(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let series = Ingredients::series(cfg)?;
    let grid = Ingredients::grid(cfg)?;
    let opts = MaxModOptions::default();
    let profile = growth_profile(&series, None, &grid, cfg.truncation_tol(), &opts)?;
    let mut out = vec![render("profile.csv", |w| profile.write_csv(w))?];
    if cfg.sampler.is_some() {
        let sampler = Ingredients::sampler(cfg)?;
        let mult = sample_sequence(&sampler, series.len(), SeedSpec::new(cfg.master_seed(), 0));
        let rand = growth_profile(&series, Some(&mult), &grid, cfg.truncation_tol(), &opts)?;
        out.push(render("profile_rand.csv", |w| rand.write_csv(w))?);
    }
    Ok(out)
}

fn wv_check_artifacts(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let series = Ingredients::series(cfg)?;
    let grid = Ingredients::grid(cfg)?;
    let kind = Ingredients::bound(cfg)?;
    if kind.family().is_levy() {
        return Err(invalid(
            "bound",
            format!("{} is a randomized bound; use the levy experiment", kind.family()),
        ));
    }
    let convention = Ingredients::convention(cfg, &kind);
    let profile =
        growth_profile(&series, None, &grid, cfg.truncation_tol(), &MaxModOptions::default())?;
    let constant = cfg.constant.unwrap_or(1.0);
    let mut report = check_inequality(&profile, &profile, &kind, constant, &convention)?;
    if let Some(window) = cfg.burn_in {
        let c = calibrate_constant(std::slice::from_ref(&report), window)?;
        report = report.with_constant(c, &convention)?;
    }
    let fit = canonical_fit(&kind, &profile, &profile)?;
    let summary = CheckSummary {
        c: report.constant,
        violation_measure_quantiles: [report.measure; 3],
        slope: fit.as_ref().map(|f| f.slope),
        stderr: fit.as_ref().map(|f| f.stderr),
        r0: report.r0,
    };
    Ok(vec![
        render("trials.csv", |w| {
            writeln!(w, "{TRIAL_HEADER}")?;
            write_trial_rows(w, 0, &report)
        })?,
        render("exceptional.csv", |w| report.set.write_csv(w))?,
        json_artifact("summary.json", &summary)?,
        json_artifact("measure.json", &measure_json(&report, &convention))?,
    ])
}

fn levy_artifacts(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let series = Ingredients::series(cfg)?;
    let sampler = Ingredients::sampler(cfg)?;
    let kind = Ingredients::bound(cfg)?;
    let grid = Ingredients::grid(cfg)?;
    let trials = Ingredients::trials(cfg)?;
    let convention = Ingredients::convention(cfg, &kind);
    let burn_in = Ingredients::burn_in(cfg, &grid);
    let suite = levy_trial_suite(&LevySuiteConfig {
        seq: &series,
        sampler: &sampler,
        kind,
        grid: &grid,
        trials,
        master_seed: cfg.master_seed(),
        burn_in,
        convention,
        truncation_tol: cfg.truncation_tol(),
        max_mod: MaxModOptions::default(),
    })?;
    let slopes: Vec<f64> = suite.slopes.iter().flatten().copied().collect();
    let stderr = if slopes.len() >= 2 {
        let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
        let var = slopes.iter().map(|s| (s - mean).powi(2)).sum::<f64>()
            / (slopes.len() - 1) as f64;
        Some((var / slopes.len() as f64).sqrt())
    } else {
        None
    };
    let summary = CheckSummary {
        c: suite.constant,
        violation_measure_quantiles: suite.measure_quantiles,
        slope: suite.mean_slope,
        stderr,
        r0: suite.r0,
    };
    Ok(vec![
        render("trials.csv", |w| {
            writeln!(w, "{TRIAL_HEADER}")?;
            for (t, rep) in suite.reports.iter().enumerate() {
                write_trial_rows(w, t, rep)?;
            }
            Ok(())
        })?,
        json_artifact("summary.json", &summary)?,
    ])
}

fn kahane_artifacts(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let sampler = Ingredients::sampler(cfg)?;
    let degree = cfg.degree.ok_or_else(|| missing("degree"))?;
    let trials = Ingredients::trials(cfg)?;
    let r = cfg.radius.unwrap_or(degree as f64 / 2.0);
    let series = match &cfg.series {
        Some(spec) => spec.build()?,
        None => make_exp_series(degree),
    };
    let report = kahane_experiment(&sampler, degree, trials, r, &series, cfg.master_seed())?;
    let summary = json!({
        "degree": report.degree,
        "trials": report.trials,
        "threshold": report.threshold,
        "allowed": report.allowed,
        "minimal_c": report.minimal_c,
    });
    Ok(vec![
        render("curve.csv", |w| {
            writeln!(w, "C,exceedance")?;
            for &(c, p) in &report.curve {
                writeln!(w, "{},{}", sig17(c), sig17(p))?;
            }
            Ok(())
        })?,
        json_artifact("summary.json", &summary)?,
    ])
}

fn shift_artifacts(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let series = Ingredients::series(cfg)?;
    let w = Ingredients::weights(cfg)?;
    if w.cached_len() < series.len() {
        return Err(invalid(
            "weights",
            format!(
                "cache covers {} weights, the series stores {} coefficients",
                w.cached_len() - 1,
                series.len()
            ),
        ));
    }
    let count = cfg.shift_count.unwrap_or(1);
    let mut shifted = series;
    for _ in 0..count {
        shifted = apply_shift(&shifted, &w);
    }
    let mut out = vec![render("shifted.csv", |buf| shifted.write_csv(buf))?];
    if w.cached_len() > 100 {
        let horizon = (w.cached_len() - 1).min(4096);
        let chaos = chaos_check(&w, horizon)?;
        out.push(json_artifact(
            "chaos.json",
            &json!({
                "verdict": chaos.verdict.to_string(),
                "limsup_proxy": chaos.limsup_proxy,
                "trend": chaos.trend,
                "quartile_maxima": chaos.quartile_maxima,
                "horizon": chaos.horizon,
            }),
        )?);
    }
    Ok(out)
}

fn fhc_density_artifacts(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let w = Ingredients::weights(cfg)?;
    let sampler = Ingredients::sampler(cfg)?;
    let target_cfgs = cfg.targets.as_ref().ok_or_else(|| missing("targets"))?;
    if target_cfgs.is_empty() {
        return Err(invalid("targets", "needs at least one target"));
    }
    let targets: Vec<TargetSpec> = target_cfgs
        .iter()
        .map(|t| t.build().map_err(|e| invalid("targets", e.to_string())))
        .collect::<Result<_>>()?;
    let n_max = cfg.n_max.ok_or_else(|| missing("n_max"))?;
    let stored = cfg.stored_terms.unwrap_or(n_max + 80);
    let fhc = random_fhc_function(&w, &sampler, stored, SeedSpec::new(cfg.master_seed(), 0))?;
    let report = hitting_density(&fhc.g, &w, &targets, n_max)?;
    let weights_id = cfg.weights.as_ref().map(|spec| spec.id()).unwrap_or_default();
    let estimates: Vec<f64> =
        report.per_target.iter().map(|t| t.lower_density).collect();
    let summary = json!({
        "weights_id": weights_id,
        "N_max": report.n_max,
        "windows": report.windows,
        "lower_density_estimates": estimates,
    });
    Ok(vec![
        render("density.csv", |buf| report.write_csv(buf))?,
        json_artifact("report.json", &summary)?,
    ])
}

fn fhc_growth_artifacts(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let w = Ingredients::weights(cfg)?;
    let sampler = Ingredients::sampler(cfg)?;
    let grid = Ingredients::grid(cfg)?;
    let stored = cfg.stored_terms.unwrap_or(1024);
    let fhc = random_fhc_function(&w, &sampler, stored, SeedSpec::new(cfg.master_seed(), 0))?;
    let constant = cfg.constant.unwrap_or(1.0);
    let check = fhc_growth_check(&fhc.g, &w, &grid, constant, cfg.truncation_tol())?;
    let kind = BoundKind::new(check.family, 0.5, None)?;
    let fit = canonical_fit(&kind, &check.profile, &check.base)?;
    let summary = CheckSummary {
        c: check.report.constant,
        violation_measure_quantiles: [check.report.measure; 3],
        slope: fit.as_ref().map(|f| f.slope),
        stderr: fit.as_ref().map(|f| f.stderr),
        r0: check.report.r0,
    };
    let mut out = vec![
        render("trials.csv", |buf| {
            writeln!(buf, "{TRIAL_HEADER}")?;
            write_trial_rows(buf, 0, &check.report)
        })?,
        json_artifact("summary.json", &summary)?,
    ];
    if let Some(asym) = &check.asymptotics {
        let value = match asym {
            AsymptoticsCheck::Differentiation { mu_window, s_window } => json!({
                "kind": "differentiation",
                "family": check.family.name(),
                "mu_window": [mu_window.0, mu_window.1],
                "s_window": [s_window.0, s_window.1],
            }),
            AsymptoticsCheck::Taylor { mu_max_abs, s_max_abs } => json!({
                "kind": "taylor",
                "family": check.family.name(),
                "mu_max_abs": mu_max_abs,
                "s_max_abs": s_max_abs,
            }),
        };
        out.push(json_artifact("asymptotics.json", &value)?);
    }
    Ok(out)
}
