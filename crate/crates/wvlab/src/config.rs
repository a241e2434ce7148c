//! Experiment configuration: a JSON file names the ingredients (series,
//! sampler, bound kind, grid, ...) and each experiment kind validates the
//! subset it needs.
//!
//! The same struct serializes back out as the manifest's config echo, so a
//! run can be reproduced from its own artifacts. Unknown fields are
//! rejected rather than ignored: a typo in a config should fail loudly,
//! not silently fall back to a default.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{Space, TargetSpec, WeightSequence};
use crate::error::{Error, Result};
use crate::growth::RadiusGrid;
use crate::inequality::{BoundFamily, BoundKind};
use crate::measure::{HWeight, MeasureConvention};
use crate::sampler::{SamplerKind, SubgaussianSampler};
use crate::series::{
    make_exp_series, make_geometric_series, make_weight_series, CoefficientSequence,
    DEFAULT_TRUNCATION_TOL,
};

/// The seven experiment kinds the CLI can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Profile the growth functionals of a series over a grid.
    Growth,
    /// Check a deterministic maximum-modulus bound outside an
    /// exceptional set.
    WvCheck,
    /// Monte Carlo suite for a randomized bound kind.
    Levy,
    /// Sup-norm exceedance experiment for random trigonometric
    /// polynomials.
    Kahane,
    /// Apply a weighted backward shift repeatedly and dump the result.
    Shift,
    /// Hitting-density estimate for a random frequently hypercyclic
    /// function.
    FhcDensity,
    /// Growth check of a random frequently hypercyclic function.
    FhcGrowth,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Growth => "growth",
            Self::WvCheck => "wv-check",
            Self::Levy => "levy",
            Self::Kahane => "kahane",
            Self::Shift => "shift",
            Self::FhcDensity => "fhc-density",
            Self::FhcGrowth => "fhc-growth",
        }
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which base series to build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeriesSpec {
    /// `sum z^n / n!` with coefficients `0..=n`.
    Exp { n: usize },
    /// `sum z^n` on the unit disk with coefficients `0..=n`.
    Geometric { n: usize },
    /// `sum z^n / (w_1 .. w_n)` for a weight family.
    Weights { weights: WeightSpec, n: usize },
    /// Coefficients given directly in log-polar form. The domain radius
    /// defaults to infinite (JSON cannot spell `inf`, so it is simply
    /// omitted for entire functions).
    Explicit {
        log_abs: Vec<f64>,
        phase: Vec<f64>,
        #[serde(default = "infinite_radius", skip_serializing_if = "is_infinite")]
        domain_radius: f64,
    },
}

fn infinite_radius() -> f64 {
    f64::INFINITY
}

#[allow(clippy::trivially_copy_pass_by_ref)]
fn is_infinite(v: &f64) -> bool {
    v.is_infinite()
}

impl SeriesSpec {
    pub fn build(&self) -> Result<CoefficientSequence> {
        match self {
            SeriesSpec::Exp { n } => Ok(make_exp_series(*n)),
            SeriesSpec::Geometric { n } => Ok(make_geometric_series(*n)),
            SeriesSpec::Weights { weights, n } => {
                let w = weights.build()?;
                make_weight_series(&w, *n)
            }
            SeriesSpec::Explicit { log_abs, phase, domain_radius } => {
                CoefficientSequence::new(log_abs.clone(), phase.clone(), *domain_radius)
            }
        }
    }
}

/// Weight family for shift experiments and weight series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    /// `w_n = n` on the plane.
    Differentiation { n_max: usize },
    /// `w_n = 1`.
    Taylor { n_max: usize, space: Space },
    /// `w_n = c`.
    Constant { c: f64, n_max: usize, space: Space },
}

impl WeightSpec {
    pub fn build(&self) -> Result<WeightSequence> {
        match *self {
            WeightSpec::Differentiation { n_max } => {
                Ok(WeightSequence::differentiation(n_max))
            }
            WeightSpec::Taylor { n_max, space } => Ok(WeightSequence::taylor(n_max, space)),
            WeightSpec::Constant { c, n_max, space } => {
                WeightSequence::constant(c, n_max, space)
            }
        }
    }

    /// Short identifier for reports.
    pub fn id(&self) -> String {
        match self {
            WeightSpec::Differentiation { .. } => "differentiation".into(),
            WeightSpec::Taylor { space, .. } => format!("taylor_{}", space_id(*space)),
            WeightSpec::Constant { c, space, .. } => {
                format!("constant_{c}_{}", space_id(*space))
            }
        }
    }
}

fn space_id(space: Space) -> &'static str {
    match space {
        Space::Plane => "plane",
        Space::Disk => "disk",
    }
}

/// Radius grid description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    /// `r0 * ratio^i`, unbounded domain.
    GeometricPlane { r0: f64, ratio: f64, count: usize },
    /// `1 - (1 - r0) * sigma^i`, approaching the unit circle.
    ApproachDisk { r0: f64, sigma: f64, count: usize },
    /// Radii given directly; the domain radius defaults to infinite.
    Explicit {
        radii: Vec<f64>,
        #[serde(default = "infinite_radius", skip_serializing_if = "is_infinite")]
        domain_radius: f64,
    },
}

impl GridSpec {
    pub fn build(&self) -> Result<RadiusGrid> {
        match self {
            GridSpec::GeometricPlane { r0, ratio, count } => {
                RadiusGrid::geometric_plane(*r0, *ratio, *count)
            }
            GridSpec::ApproachDisk { r0, sigma, count } => {
                RadiusGrid::approach_disk(*r0, *sigma, *count)
            }
            GridSpec::Explicit { radii, domain_radius } => {
                RadiusGrid::explicit(radii.clone(), *domain_radius)
            }
        }
    }
}

/// The named `h` weights expressible in a config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HSpec {
    ConstantOne,
    DiskReciprocal,
}

impl HSpec {
    pub fn build(self) -> HWeight {
        match self {
            HSpec::ConstantOne => HWeight::constant_one(),
            HSpec::DiskReciprocal => HWeight::disk_reciprocal(),
        }
    }
}

/// Bound family plus its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSpec {
    pub family: BoundFamily,
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<HSpec>,
}

impl BoundSpec {
    pub fn build(&self) -> Result<BoundKind> {
        BoundKind::new(self.family, self.delta, self.h.map(HSpec::build))
    }
}

/// Exceptional-set measure convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConventionSpec {
    PlaneClassic,
    DiskClassic,
    Unified { h: HSpec },
}

impl ConventionSpec {
    pub fn build(self) -> MeasureConvention {
        match self {
            ConventionSpec::PlaneClassic => MeasureConvention::PlaneClassic,
            ConventionSpec::DiskClassic => MeasureConvention::DiskClassic,
            ConventionSpec::Unified { h } => MeasureConvention::Unified(h.build()),
        }
    }
}

/// A polynomial target for the density experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    /// Cartesian coefficients `(re, im)` of the polynomial.
    pub coefficients: Vec<(f64, f64)>,
    pub rho: f64,
    pub eps: f64,
}

impl TargetConfig {
    pub fn build(&self) -> Result<TargetSpec> {
        TargetSpec::new(self.coefficients.clone(), self.rho, self.eps)
    }
}

/// Everything a run might need. Each experiment kind validates the fields
/// it uses; unrelated fields may be present (a shared config can drive
/// several kinds) but unknown *keys* are rejected at parse time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Optional sanity pin: when present it must match the CLI subcommand.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<ConventionSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    /// Radius window whose minimal constants calibrate `C`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_tol: Option<f64>,
    /// Fixed constant `C` for checks that do not calibrate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<TargetConfig>>,
    /// Largest orbit time for the density experiment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Stored coefficients of the random function (density/growth
    /// experiments); defaults to a margin above what the run needs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stored_terms: Option<usize>,
    /// Polynomial degree `N` of the Kahane experiment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// Evaluation radius of the Kahane experiment; defaults to `N/2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// How many times the shift experiment applies `B_w`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift_count: Option<usize>,
    /// Output directory; overridden by `--out`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parse a JSON config file. Parse errors (including unknown fields)
    /// come back as [`Error::Config`] quoting the file and serde's own
    /// field-path message.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Config {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn truncation_tol(&self) -> f64 {
        self.truncation_tol.unwrap_or(DEFAULT_TRUNCATION_TOL)
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed.unwrap_or(0)
    }
}

pub(crate) fn missing(field: &str) -> Error {
    Error::Config { path: field.into(), message: "required for this experiment".into() }
}

pub(crate) fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::Config { path: field.into(), message: message.into() }
}

/// Validated ingredients shared by several experiment kinds.
pub(crate) struct Ingredients;

impl Ingredients {
    pub(crate) fn series(cfg: &ExperimentConfig) -> Result<CoefficientSequence> {
        cfg.series.as_ref().ok_or_else(|| missing("series"))?.build()
    }

    pub(crate) fn sampler(cfg: &ExperimentConfig) -> Result<SubgaussianSampler> {
        SubgaussianSampler::new(cfg.sampler.clone().ok_or_else(|| missing("sampler"))?)
            .map_err(|e| invalid("sampler", e.to_string()))
    }

    pub(crate) fn grid(cfg: &ExperimentConfig) -> Result<RadiusGrid> {
        cfg.grid
            .as_ref()
            .ok_or_else(|| missing("grid"))?
            .build()
            .map_err(|e| invalid("grid", e.to_string()))
    }

    pub(crate) fn bound(cfg: &ExperimentConfig) -> Result<BoundKind> {
        cfg.bound
            .as_ref()
            .ok_or_else(|| missing("bound"))?
            .build()
            .map_err(|e| invalid("bound", e.to_string()))
    }

    pub(crate) fn weights(cfg: &ExperimentConfig) -> Result<WeightSequence> {
        cfg.weights
            .as_ref()
            .ok_or_else(|| missing("weights"))?
            .build()
            .map_err(|e| invalid("weights", e.to_string()))
    }

    /// The measure convention: explicit, or inferred from the bound kind
    /// (unified kinds reuse their `h`, disk kinds use the disk convention,
    /// everything else the plane convention).
    pub(crate) fn convention(cfg: &ExperimentConfig, kind: &BoundKind) -> MeasureConvention {
        if let Some(spec) = cfg.convention {
            return spec.build();
        }
        if let Some(h) = kind.h() {
            MeasureConvention::Unified(h.clone())
        } else if kind.family().is_disk() {
            MeasureConvention::DiskClassic
        } else {
            MeasureConvention::PlaneClassic
        }
    }

    pub(crate) fn trials(cfg: &ExperimentConfig) -> Result<usize> {
        let trials = cfg.trials.ok_or_else(|| missing("trials"))?;
        if trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        Ok(trials)
    }

    /// Default burn-in: the first fifth of the grid (at least the first
    /// two radii).
    pub(crate) fn burn_in(cfg: &ExperimentConfig, grid: &RadiusGrid) -> (f64, f64) {
        if let Some(window) = cfg.burn_in {
            return window;
        }
        let radii = grid.radii();
        let hi = radii[(radii.len() / 5).max(1).min(radii.len() - 1)];
        (radii[0], hi)
    }
}
