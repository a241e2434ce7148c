//! Growth-inequality checkers, constant calibration, Lévy-exponent
//! regression, and the random trigonometric polynomial sup experiment.
//!
//! Every inequality handled here has the shape
//! `log M(r) <= log C + log B(r)` with a right-hand side `B` built from
//! `mu(r)`, `S(r)`, `1/(1-r)`, a weight `h(r)`, and iterated logarithms of
//! those. Each kind decomposes as `log B = base + sum alpha_i log t_i`; the
//! bound is defined where all `t_i > 0`, and a radius counts as below the
//! cutoff `r0` whenever some `t_i <= 1` (the theorems only speak beyond an
//! existential `r0`, so such radii are excluded rather than flagged).

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle;
use crate::error::{Error, Result};
use crate::growth::{growth_profile, GrowthProfile, MaxModOptions, RadiusGrid};
use crate::measure::{h_log_measure, violation_set, HWeight, IntervalSet, MeasureConvention};
use crate::sampler::{sample_sequence, SeedSpec, SubgaussianSampler};
use crate::series::CoefficientSequence;

/// The inequality family. Plane kinds take any `r > 0`; disk kinds need
/// `r < 1`; unified kinds need a weight `h` and `r` inside its domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFamily {
    /// `mu (log mu)^{1/2+delta}`.
    Wiman,
    /// `mu (log mu)^{1/2} (log log mu)^{1+delta}`.
    Rosenbloom,
    /// `mu (1-r)^{-(1+delta)} (log(mu/(1-r)))^{1/2+delta}`.
    Suleimanov,
    /// `(mu/(1-r)) L^{1/2+delta} (log(mu/(1-r)))^{1/2} (log log(mu/(1-r)))^{1+delta}`
    /// with `L = log(1/(1-r))`.
    SkaskivKuryliak,
    /// `h mu (log h)^{1/2+delta} (log(h mu))^{1/2} (log log(h mu))^{1+delta}`.
    UnifiedDet,
    /// `mu (log mu)^{1/4} (log log mu)^{1+delta}`.
    LevyPlaneMu,
    /// `S (log log mu)^{1/2}`.
    LevyPlaneS,
    /// `(mu/(1-r)^{1/2}) L^{3/4+delta} (log(mu/(1-r)))^{1/4} (log log(mu/(1-r)))^{1+delta}`.
    LevyDiskMu,
    /// `S (L + log(log mu + L))^{1/2}`.
    LevyDiskS,
    /// `S (log h + log(log mu + log h))^{1/2}`.
    UnifiedLevyS,
    /// `h^{1/2} mu (log h)^{3/4+delta} (log(h mu))^{1/4} (log log(h mu))^{1+delta}`.
    UnifiedLevyMu,
}

impl BoundFamily {
    pub fn is_disk(self) -> bool {
        matches!(self, Self::Suleimanov | Self::SkaskivKuryliak | Self::LevyDiskMu | Self::LevyDiskS)
    }

    pub fn is_unified(self) -> bool {
        matches!(self, Self::UnifiedDet | Self::UnifiedLevyS | Self::UnifiedLevyMu)
    }

    /// Kinds whose right-hand side describes a randomized maximum modulus.
    pub fn is_levy(self) -> bool {
        matches!(
            self,
            Self::LevyPlaneMu
                | Self::LevyPlaneS
                | Self::LevyDiskMu
                | Self::LevyDiskS
                | Self::UnifiedLevyS
                | Self::UnifiedLevyMu
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Wiman => "wiman",
            Self::Rosenbloom => "rosenbloom",
            Self::Suleimanov => "suleimanov",
            Self::SkaskivKuryliak => "skaskiv_kuryliak",
            Self::UnifiedDet => "unified_det",
            Self::LevyPlaneMu => "levy_plane_mu",
            Self::LevyPlaneS => "levy_plane_s",
            Self::LevyDiskMu => "levy_disk_mu",
            Self::LevyDiskS => "levy_disk_s",
            Self::UnifiedLevyS => "unified_levy_s",
            Self::UnifiedLevyMu => "unified_levy_mu",
        }
    }
}

impl std::fmt::Display for BoundFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A bound family with its exponent bump `delta` and, for the unified
/// kinds, the weight `h`.
#[derive(Debug, Clone)]
pub struct BoundKind {
    family: BoundFamily,
    delta: f64,
    h: Option<HWeight>,
}

impl BoundKind {
    /// `h` is required exactly for the unified kinds.
    pub fn new(family: BoundFamily, delta: f64, h: Option<HWeight>) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::Domain(format!("delta must be positive and finite, got {delta}")));
        }
        match (family.is_unified(), &h) {
            (true, None) => {
                return Err(Error::Domain(format!("bound kind {family} needs an h weight")))
            }
            (false, Some(_)) => {
                return Err(Error::Domain(format!("bound kind {family} takes no h weight")))
            }
            _ => {}
        }
        Ok(Self { family, delta, h })
    }

    pub fn family(&self) -> BoundFamily {
        self.family
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn h(&self) -> Option<&HWeight> {
        self.h.as_ref()
    }

    /// Regression axes that linearize the kind's expected growth: response
    /// `log(M/S)` for the S-flavored kinds, `log(M/mu)` otherwise, against
    /// `log log mu` on the plane and `log(1/(1-r))` when the radius domain
    /// is bounded.
    pub fn canonical_regression(&self) -> (Regressor, Response) {
        let bounded = self.family.is_disk()
            || self.h.as_ref().is_some_and(|h| h.domain_radius().is_finite());
        let x = if bounded { Regressor::LogInvOneMinusR } else { Regressor::LogLogMu };
        let y = match self.family {
            BoundFamily::LevyPlaneS | BoundFamily::LevyDiskS | BoundFamily::UnifiedLevyS => {
                Response::LogMOverS
            }
            _ => Response::LogMOverMu,
        };
        (x, y)
    }
}

/// Right-hand side at one radius, at `C = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    /// `log B(r)`; `None` where some inner log argument is nonpositive.
    pub log_bound: Option<f64>,
    /// Some iterated-log factor is `<= 1`: the radius sits below the
    /// theorem's `r0` and is excluded from violation counting.
    pub below_cutoff: bool,
}

/// `log B(r)` for the kind, from `log mu(r)` and `log S(r)`.
///
/// Plane kinds ignore `log_s` unless S-flavored; disk kinds require
/// `0 < r < 1`; unified kinds require `r` inside the weight's domain.
pub fn rhs_bound(kind: &BoundKind, r: f64, log_mu: f64, log_s: f64) -> Result<BoundValue> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive and finite, got {r}")));
    }
    if !log_mu.is_finite() {
        return Err(Error::Domain(format!("log mu must be finite, got {log_mu}")));
    }
    let d = kind.delta;
    let lm = log_mu;
    let family = kind.family;
    if family.is_disk() && r >= 1.0 {
        return Err(Error::Domain(format!("disk bound kinds need r < 1, got {r}")));
    }
    let needs_s = matches!(
        family,
        BoundFamily::LevyPlaneS | BoundFamily::LevyDiskS | BoundFamily::UnifiedLevyS
    );
    if needs_s && !log_s.is_finite() {
        return Err(Error::Domain(format!("log S must be finite, got {log_s}")));
    }
    // log(1/(1-r)) for the disk kinds, log h(r) for the unified ones
    let lam = -(1.0 - r).ln();
    let lh = match &kind.h {
        Some(h) => {
            if r >= h.domain_radius() {
                return Err(Error::Domain(format!(
                    "radius {r} outside the h domain (ends at {})",
                    h.domain_radius()
                )));
            }
            h.evaluate(r).ln()
        }
        None => f64::NAN,
    };
    // Factors with exponent 0 participate in the cutoff test only.
    let (base, factors): (f64, Vec<(f64, f64)>) = match family {
        BoundFamily::Wiman => (lm, vec![(0.5 + d, lm)]),
        BoundFamily::Rosenbloom => (lm, vec![(0.5, lm), (1.0 + d, lm.ln())]),
        BoundFamily::Suleimanov => (lm + (1.0 + d) * lam, vec![(0.5 + d, lm + lam)]),
        BoundFamily::SkaskivKuryliak => (
            lm + lam,
            vec![(0.5 + d, lam), (0.5, lm + lam), (1.0 + d, (lm + lam).ln())],
        ),
        BoundFamily::UnifiedDet => (
            lh + lm,
            vec![(0.5 + d, lh), (0.5, lm + lh), (1.0 + d, (lm + lh).ln())],
        ),
        BoundFamily::LevyPlaneMu => (lm, vec![(0.25, lm), (1.0 + d, lm.ln())]),
        BoundFamily::LevyPlaneS => (log_s, vec![(0.0, lm), (0.5, lm.ln())]),
        BoundFamily::LevyDiskMu => (
            lm + 0.5 * lam,
            vec![(0.75 + d, lam), (0.25, lm + lam), (1.0 + d, (lm + lam).ln())],
        ),
        BoundFamily::LevyDiskS => (
            log_s,
            vec![(0.0, lam), (0.0, lm + lam), (0.5, lam + (lm + lam).ln())],
        ),
        BoundFamily::UnifiedLevyS => (
            log_s,
            vec![(0.0, lh), (0.0, lm + lh), (0.5, lh + (lm + lh).ln())],
        ),
        BoundFamily::UnifiedLevyMu => (
            0.5 * lh + lm,
            vec![(0.75 + d, lh), (0.25, lm + lh), (1.0 + d, (lm + lh).ln())],
        ),
    };
    let mut below_cutoff = false;
    let mut sum = base;
    let mut defined = true;
    for (alpha, t) in factors {
        if !(t > 1.0) {
            below_cutoff = true;
        }
        if t > 0.0 {
            sum += alpha * t.ln();
        } else {
            defined = false;
        }
    }
    Ok(BoundValue { log_bound: defined.then_some(sum), below_cutoff })
}

/// Per-radius outcome of one inequality check.
#[derive(Debug, Clone)]
pub struct ViolationReport {
    pub radii: Vec<f64>,
    /// `log M` per radius (the left-hand side).
    pub log_lhs: Vec<f64>,
    /// `log B` at `C = 1`; `None` where undefined.
    pub log_bound: Vec<Option<f64>>,
    pub below_cutoff: Vec<bool>,
    /// `M/B`: the smallest constant making the inequality hold at the
    /// radius. `None` below the cutoff.
    pub min_c: Vec<Option<f64>>,
    pub violated: Vec<bool>,
    pub set: IntervalSet,
    pub measure: f64,
    /// First grid radius past the cutoff.
    pub r0: Option<f64>,
    pub constant: f64,
}

impl ViolationReport {
    /// Re-flag violations at a different constant; the per-radius data is
    /// constant-free, so no growth data is recomputed.
    pub fn with_constant(&self, constant: f64, conv: &MeasureConvention) -> Result<ViolationReport> {
        validate_constant(constant)?;
        let violated: Vec<bool> =
            self.min_c.iter().map(|m| m.is_some_and(|v| v > constant)).collect();
        let set = violation_set(&self.radii, &violated)?;
        let measure = h_log_measure(&set, conv)?;
        Ok(ViolationReport { violated, set, measure, constant, ..self.clone() })
    }
}

fn validate_constant(constant: f64) -> Result<()> {
    if constant.is_nan() || constant <= 0.0 {
        return Err(Error::Domain(format!("constant must be positive, got {constant}")));
    }
    Ok(())
}

/// Check `log M <= log C + log B` on a shared grid: `M` from `profile`,
/// `mu` and `S` from `base_profile`.
///
/// Radii below the `r0` cutoff never count as violations. Bit-reproducible:
/// no internal randomness.
pub fn check_inequality(
    profile: &GrowthProfile,
    base_profile: &GrowthProfile,
    kind: &BoundKind,
    constant: f64,
    conv: &MeasureConvention,
) -> Result<ViolationReport> {
    validate_constant(constant)?;
    if profile.records.len() != base_profile.records.len()
        || profile
            .records
            .iter()
            .zip(&base_profile.records)
            .any(|(a, b)| a.r != b.r)
    {
        return Err(Error::Domain("profiles must share the radius grid".into()));
    }
    if kind.family.is_disk() && base_profile.domain_radius != 1.0 {
        return Err(Error::Domain(format!(
            "disk bound kinds need domain radius 1, got {}",
            base_profile.domain_radius
        )));
    }
    let n = profile.records.len();
    let mut radii = Vec::with_capacity(n);
    let mut log_lhs = Vec::with_capacity(n);
    let mut log_bound = Vec::with_capacity(n);
    let mut below_cutoff = Vec::with_capacity(n);
    let mut min_c = Vec::with_capacity(n);
    let mut violated = Vec::with_capacity(n);
    let log_c = constant.ln();
    for (m, b) in profile.records.iter().zip(&base_profile.records) {
        let bound = rhs_bound(kind, b.r, b.log_mu, b.log_s)?;
        let lhs = m.log_m;
        radii.push(b.r);
        log_lhs.push(lhs);
        log_bound.push(bound.log_bound);
        below_cutoff.push(bound.below_cutoff);
        let usable = !bound.below_cutoff;
        min_c.push(match bound.log_bound {
            Some(lb) if usable => Some((lhs - lb).exp()),
            _ => None,
        });
        violated.push(usable && bound.log_bound.is_some_and(|lb| lhs > log_c + lb));
    }
    let set = violation_set(&radii, &violated)?;
    let measure = h_log_measure(&set, conv)?;
    let r0 = radii
        .iter()
        .zip(&below_cutoff)
        .find(|(_, below)| !**below)
        .map(|(r, _)| *r);
    Ok(ViolationReport {
        radii,
        log_lhs,
        log_bound,
        below_cutoff,
        min_c,
        violated,
        set,
        measure,
        r0,
        constant,
    })
}

/// Interpolated percentile (the linear order-statistic rule: rank
/// `(n-1)q` with fractional interpolation). Non-finite samples are
/// rejected.
pub fn percentile(samples: &[f64], q: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("percentile of an empty sample".into()));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!("percentile level must lie in [0,1], got {q}")));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("percentile needs finite samples".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = (sorted.len() - 1) as f64 * q;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    Ok(if lo + 1 < sorted.len() {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    })
}

/// Calibrate `C` as the 95th percentile of the per-radius minimal
/// constants pooled over the burn-in radius window.
pub fn calibrate_constant(reports: &[ViolationReport], window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::Domain(format!("bad burn-in window [{lo}, {hi}]")));
    }
    let pooled: Vec<f64> = reports
        .iter()
        .flat_map(|rep| {
            rep.radii.iter().zip(&rep.min_c).filter_map(move |(&r, m)| {
                m.filter(|v| v.is_finite() && r >= lo && r <= hi)
            })
        })
        .collect();
    if pooled.is_empty() {
        return Err(Error::Domain(format!(
            "no usable minimal constants in the burn-in window [{lo}, {hi}]"
        )));
    }
    percentile(&pooled, 0.95)
}

/// Regressor for the scaling-exponent fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regressor {
    /// `log log mu_f(r)` from the base profile.
    LogLogMu,
    /// `log(1/(1-r))`.
    LogInvOneMinusR,
}

impl Regressor {
    fn value(self, r: f64, base_log_mu: f64) -> f64 {
        match self {
            Regressor::LogLogMu => base_log_mu.ln(),
            Regressor::LogInvOneMinusR => -(1.0 - r).ln(),
        }
    }
}

/// Response for the scaling-exponent fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Response {
    /// `log(M/mu)` with `M` from the checked profile, `mu` from the base.
    LogMOverMu,
    /// `log(M/S)`.
    LogMOverS,
}

impl Response {
    fn value(self, log_m: f64, base_log_mu: f64, base_log_s: f64) -> f64 {
        match self {
            Response::LogMOverMu => log_m - base_log_mu,
            Response::LogMOverS => log_m - base_log_s,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub count: usize,
}

/// Ordinary least squares of the chosen response against the chosen
/// regressor over a radius window, skipping records inside `exclude` and
/// records where either axis is non-finite. Needs at least 10 usable
/// records.
pub fn exponent_fit(
    profile: &GrowthProfile,
    base_profile: &GrowthProfile,
    x: Regressor,
    y: Response,
    window: (f64, f64),
    exclude: Option<&IntervalSet>,
) -> Result<ExponentFit> {
    if profile.records.len() != base_profile.records.len() {
        return Err(Error::Domain("profiles must share the radius grid".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (m, b) in profile.records.iter().zip(&base_profile.records) {
        if m.r != b.r {
            return Err(Error::Domain("profiles must share the radius grid".into()));
        }
        if b.r < window.0 || b.r > window.1 || exclude.is_some_and(|e| e.contains(b.r)) {
            continue;
        }
        let xv = x.value(b.r, b.log_mu);
        let yv = y.value(m.log_m, b.log_mu, b.log_s);
        if xv.is_finite() && yv.is_finite() {
            xs.push(xv);
            ys.push(yv);
        }
    }
    let n = xs.len();
    if n < 10 {
        return Err(Error::DegenerateRegression { need: 10, found: n });
    }
    let nf = n as f64;
    let xbar = xs.iter().sum::<f64>() / nf;
    let ybar = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    if sxx <= 0.0 {
        return Err(Error::Domain("regressor is constant over the window".into()));
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(ExponentFit { slope, intercept, stderr, count: n })
}

/// Configuration for the randomized trial suite.
pub struct LevySuiteConfig<'a> {
    pub seq: &'a CoefficientSequence,
    pub sampler: &'a SubgaussianSampler,
    pub kind: BoundKind,
    pub grid: &'a RadiusGrid,
    pub trials: usize,
    pub master_seed: u64,
    /// Radius window whose minimal constants calibrate `C`.
    pub burn_in: (f64, f64),
    pub convention: MeasureConvention,
    pub truncation_tol: f64,
    pub max_mod: MaxModOptions,
}

#[derive(Debug, Clone)]
pub struct LevySuiteReport {
    /// `C` calibrated from the pooled burn-in minimal constants.
    pub constant: f64,
    /// Cutoff radius (identical across trials: it depends on the base only).
    pub r0: Option<f64>,
    pub base: GrowthProfile,
    /// One report per trial, flagged at the calibrated constant.
    pub reports: Vec<ViolationReport>,
    /// Per-trial slope of the kind's canonical regression; `None` when the
    /// usable record count is too small.
    pub slopes: Vec<Option<f64>>,
    /// Per-trial `sup_r M/B` over the usable radii.
    pub sup_ratios: Vec<Option<f64>>,
    /// p50 / p90 / p95 of the sup ratios.
    pub sup_ratio_quantiles: [f64; 3],
    /// p50 / p90 / p95 of the per-trial violation measures.
    pub measure_quantiles: [f64; 3],
    pub mean_slope: Option<f64>,
    pub violated_trial_fraction: f64,
}

/// Randomize the series `trials` times (stream = trial index), profile each
/// realization, check it against the base-profile bound, and summarize.
///
/// Trials are independent and keyed by `(master_seed, trial)`, so the output
/// does not depend on the parallel schedule.
pub fn levy_trial_suite(cfg: &LevySuiteConfig) -> Result<LevySuiteReport> {
    if !cfg.kind.family().is_levy() {
        return Err(Error::Domain(format!(
            "trial suite needs a randomized bound kind, got {}",
            cfg.kind.family()
        )));
    }
    if cfg.trials == 0 {
        return Err(Error::Domain("at least one trial required".into()));
    }
    let base = growth_profile(cfg.seq, None, cfg.grid, cfg.truncation_tol, &cfg.max_mod)?;
    let (xr, yr) = cfg.kind.canonical_regression();
    let window = (cfg.grid.radii()[0], *cfg.grid.radii().last().unwrap());
    let per_trial: Vec<(ViolationReport, Option<f64>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<(ViolationReport, Option<f64>)> {
            let mult = sample_sequence(
                cfg.sampler,
                cfg.seq.len(),
                SeedSpec::new(cfg.master_seed, t as u64),
            );
            let prof =
                growth_profile(cfg.seq, Some(&mult), cfg.grid, cfg.truncation_tol, &cfg.max_mod)?;
            let rep = check_inequality(&prof, &base, &cfg.kind, 1.0, &cfg.convention)?;
            let slope = match exponent_fit(&prof, &base, xr, yr, window, None) {
                Ok(fit) => Some(fit.slope),
                Err(Error::DegenerateRegression { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok((rep, slope))
        })
        .collect::<Result<_>>()?;

    let raw: Vec<ViolationReport> = per_trial.iter().map(|(r, _)| r.clone()).collect();
    let slopes: Vec<Option<f64>> = per_trial.iter().map(|(_, s)| *s).collect();
    let constant = calibrate_constant(&raw, cfg.burn_in)?;
    let reports: Vec<ViolationReport> = raw
        .iter()
        .map(|rep| rep.with_constant(constant, &cfg.convention))
        .collect::<Result<_>>()?;

    let sup_ratios: Vec<Option<f64>> = reports
        .iter()
        .map(|rep| {
            rep.min_c
                .iter()
                .flatten()
                .copied()
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
        })
        .collect();
    let finite_sups: Vec<f64> =
        sup_ratios.iter().flatten().copied().filter(|v| v.is_finite()).collect();
    let measures: Vec<f64> = reports.iter().map(|r| r.measure).collect();
    let quantile_triple = |vals: &[f64]| -> Result<[f64; 3]> {
        if vals.is_empty() {
            return Ok([f64::NAN; 3]);
        }
        Ok([percentile(vals, 0.50)?, percentile(vals, 0.90)?, percentile(vals, 0.95)?])
    };
    let sup_ratio_quantiles = quantile_triple(&finite_sups)?;
    let measure_quantiles = quantile_triple(&measures)?;
    let finite_slopes: Vec<f64> = slopes.iter().flatten().copied().collect();
    let mean_slope = (!finite_slopes.is_empty())
        .then(|| finite_slopes.iter().sum::<f64>() / finite_slopes.len() as f64);
    let violated_trial_fraction =
        reports.iter().filter(|r| !r.set.is_empty()).count() as f64 / reports.len() as f64;
    let r0 = reports[0].r0;
    Ok(LevySuiteReport {
        constant,
        r0,
        base,
        reports,
        slopes,
        sup_ratios,
        sup_ratio_quantiles,
        measure_quantiles,
        mean_slope,
        violated_trial_fraction,
    })
}

#[derive(Debug, Clone)]
pub struct KahaneReport {
    pub degree: usize,
    pub trials: usize,
    /// Target exceedance probability `1/N^2`.
    pub threshold: f64,
    /// Largest exceedance count compatible with the threshold.
    pub allowed: usize,
    /// Least empirical `C` with exceedance frequency `<= 1/N^2`.
    pub minimal_c: f64,
    /// `(C, empirical exceedance frequency)` on an even grid up to the
    /// largest observed ratio.
    pub curve: Vec<(f64, f64)>,
}

/// Sup-norm experiment for random trigonometric polynomials
/// `sum_{n<=N} X_n a_n r^n e^{i n theta}`: empirical exceedance of
/// `C sqrt(log N) (sum |a_n r^n|^2)^{1/2}` and the least `C` meeting the
/// `1/N^2` budget.
///
/// The sup is read off dense circle samples (16 per coefficient, no local
/// refinement): the same rule for every `N`, so cross-`N` comparisons of
/// `C` are like for like.
pub fn kahane_experiment(
    sampler: &SubgaussianSampler,
    degree: usize,
    trials: usize,
    r: f64,
    seq: &CoefficientSequence,
    master_seed: u64,
) -> Result<KahaneReport> {
    if degree < 2 {
        return Err(Error::Domain(format!("degree must be at least 2, got {degree}")));
    }
    if seq.len() <= degree {
        return Err(Error::Domain(format!(
            "series stores {} coefficients, degree {degree} needs {}",
            seq.len(),
            degree + 1
        )));
    }
    if !r.is_finite() || r <= 0.0 || r >= seq.domain_radius() {
        return Err(Error::Domain(format!("radius {r} outside the series domain")));
    }
    let min_trials = 100 * degree * degree;
    if trials < min_trials {
        return Err(Error::Domain(format!(
            "exceedance at the 1/N^2 level needs at least {min_trials} trials, got {trials}"
        )));
    }
    let ln_r = r.ln();
    let t_logs: Vec<f64> = (0..=degree)
        .map(|k| seq.log_abs()[k] + if k == 0 { 0.0 } else { k as f64 * ln_r })
        .collect();
    let scale = t_logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if scale == f64::NEG_INFINITY {
        return Err(Error::ZeroSeries);
    }
    let weights: Vec<f64> = t_logs.iter().map(|&t| (t - scale).exp()).collect();
    let ell2 = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    // scale cancels in sup/denominator, so both stay rescaled
    let denom = (degree as f64).ln().sqrt() * ell2;

    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mult = sample_sequence(sampler, degree + 1, SeedSpec::new(master_seed, t as u64));
            let coeffs: Vec<Complex64> = (0..=degree)
                .map(|k| {
                    Complex64::from_polar(
                        (t_logs[k] - scale + mult[k].log_abs).exp(),
                        seq.phase()[k] + mult[k].phase,
                    )
                })
                .collect();
            circle::sup_trig_poly(&coeffs, 0, 0).max_abs / denom
        })
        .collect();

    let allowed = trials / (degree * degree);
    let mut sorted = ratios;
    sorted.sort_by(f64::total_cmp);
    let minimal_c = sorted[sorted.len() - 1 - allowed];
    let top = sorted[sorted.len() - 1];
    let curve: Vec<(f64, f64)> = (0..=64)
        .map(|i| {
            let c = top * i as f64 / 64.0;
            let exceed = sorted.len() - sorted.partition_point(|&v| v <= c);
            (c, exceed as f64 / sorted.len() as f64)
        })
        .collect();
    Ok(KahaneReport {
        degree,
        trials,
        threshold: 1.0 / (degree as f64 * degree as f64),
        allowed,
        minimal_c,
        curve,
    })
}
