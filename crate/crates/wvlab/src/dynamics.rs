//! Weighted backward shifts and their random frequently hypercyclic vectors.
//!
//! A weight sequence `w = (w_n)` acts on a power series
//! `f = sum a_n z^n` through the shift
//!
//! ```text
//! (B_w f)(z) = sum_{n >= 0} w_{n+1} a_{n+1} z^n,
//! ```
//!
//! so iterating drops leading coefficients and multiplies by running
//! weight products. The shift is chaotic on its natural space exactly
//! when the series `sum z^n / (w_1 .. w_n)` behaves well: on the whole
//! plane the partial products must outgrow every geometric sequence,
//! on the unit disk it is enough that they do not decay. [`chaos_check`]
//! turns that dichotomy into a finite-horizon test, and
//! [`random_fhc_function`] builds the associated random vector
//! `g = sum X_n z^n / (w_1 .. w_n)` whose orbit visits every
//! neighbourhood with positive lower density.
//!
//! Orbits are never materialized: `B_w^n g` has coefficients
//! `X_{n+k} / (w_1 .. w_k)`, which [`orbit_coefficient`] reads off the
//! stored multipliers directly. [`orbit_distance`] compares an orbit
//! section against a polynomial target on a circle `|z| = rho` with a
//! certified truncation margin, and [`hitting_density`] estimates the
//! lower density of hitting times over a ladder of windows.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle;
use crate::error::{Error, Result};
use crate::growth::{growth_profile, GrowthProfile, MaxModOptions, RadiusGrid};
use crate::inequality::{check_inequality, BoundFamily, BoundKind, ViolationReport};
use crate::logdomain::{wrap_phase, LogComplex};
use crate::measure::MeasureConvention;
use crate::sampler::{randomize, RandomizedSeries, SeedSpec, SubgaussianSampler};
use crate::series::{make_weight_series, CoefficientSequence};

/// Underlying space of entire functions (plane) or holomorphic
/// functions on the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Plane,
    Disk,
}

impl Space {
    /// Radius of the maximal disk of definition: infinite for the
    /// plane, one for the disk.
    pub fn domain_radius(self) -> f64 {
        match self {
            Space::Plane => f64::INFINITY,
            Space::Disk => 1.0,
        }
    }
}

/// Provenance of a weight sequence, kept so downstream checks can
/// specialize (closed-form asymptotics exist for the first two).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// `w_n = n`, the differentiation operator on entire functions.
    Differentiation,
    /// `w_n = 1`, the Taylor (unweighted) backward shift.
    Taylor,
    /// `w_n = c` for a fixed nonzero constant.
    Constant,
    /// Anything else.
    Custom,
}

/// A cached weight sequence `w_1, .., w_{n_max}` stored through the
/// running products `w_1 .. w_n` in log-polar form.
///
/// `prefix_log_abs[n]` is `log |w_1 .. w_n|` and `prefix_phase[n]` the
/// accumulated (unwrapped) argument, with the empty product at index 0.
/// Storing prefixes rather than raw weights keeps orbit formulas
/// subtraction-only and immune to over/underflow.
#[derive(Debug, Clone)]
pub struct WeightSequence {
    prefix_log_abs: Vec<f64>,
    prefix_phase: Vec<f64>,
    space: Space,
    kind: WeightKind,
}

impl WeightSequence {
    fn build(
        f: impl Fn(usize) -> LogComplex,
        n_max: usize,
        space: Space,
        kind: WeightKind,
    ) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Domain("weight sequence needs n_max >= 1".into()));
        }
        let mut prefix_log_abs = Vec::with_capacity(n_max + 1);
        let mut prefix_phase = Vec::with_capacity(n_max + 1);
        prefix_log_abs.push(0.0);
        prefix_phase.push(0.0);
        for n in 1..=n_max {
            let w = f(n);
            if w.log_abs == f64::NEG_INFINITY {
                return Err(Error::Domain(format!("weight w_{n} is zero")));
            }
            if !w.log_abs.is_finite() || !w.phase.is_finite() {
                return Err(Error::Domain(format!("weight w_{n} is not finite")));
            }
            prefix_log_abs.push(prefix_log_abs[n - 1] + w.log_abs);
            prefix_phase.push(prefix_phase[n - 1] + w.phase);
        }
        Ok(WeightSequence { prefix_log_abs, prefix_phase, space, kind })
    }

    /// `w_n = n` on the plane: the differentiation operator, since
    /// `B_w` maps `sum a_n z^n` to `sum (n+1) a_{n+1} z^n = f'`.
    pub fn differentiation(n_max: usize) -> Self {
        Self::build(
            |n| LogComplex::new((n as f64).ln(), 0.0),
            n_max.max(1),
            Space::Plane,
            WeightKind::Differentiation,
        )
        .expect("positive integer weights are valid")
    }

    /// `w_n = 1`: the plain backward shift on the chosen space.
    pub fn taylor(n_max: usize, space: Space) -> Self {
        Self::build(|_| LogComplex::ONE, n_max.max(1), space, WeightKind::Taylor)
            .expect("unit weights are valid")
    }

    /// `w_n = c` for a fixed real `c != 0`.
    pub fn constant(c: f64, n_max: usize, space: Space) -> Result<Self> {
        if !c.is_finite() || c == 0.0 {
            return Err(Error::Domain(format!(
                "constant weight must be finite and nonzero, got {c}"
            )));
        }
        let w = LogComplex::new(c.abs().ln(), if c < 0.0 { std::f64::consts::PI } else { 0.0 });
        Self::build(|_| w, n_max, space, WeightKind::Constant)
    }

    /// Arbitrary weights `w_n = f(n)` for `n = 1..=n_max`, given in
    /// log-polar form. Every weight must be nonzero and finite.
    pub fn from_fn(
        f: impl Fn(usize) -> LogComplex,
        n_max: usize,
        space: Space,
    ) -> Result<Self> {
        Self::build(f, n_max, space, WeightKind::Custom)
    }

    /// Number of cached prefix products (`n_max + 1`, counting the
    /// empty product at index 0).
    pub fn cached_len(&self) -> usize {
        self.prefix_log_abs.len()
    }

    /// `log |w_1 .. w_n|`; index 0 gives the empty product, 0.
    pub fn prefix_log_abs(&self, n: usize) -> f64 {
        self.prefix_log_abs[n]
    }

    /// Accumulated argument of `w_1 .. w_n`, not wrapped.
    pub fn prefix_phase(&self, n: usize) -> f64 {
        self.prefix_phase[n]
    }

    /// The single weight `w_n` in log-polar form, `1 <= n < cached_len`.
    pub fn weight_log(&self, n: usize) -> LogComplex {
        assert!(n >= 1 && n < self.cached_len(), "weight index {n} out of range");
        LogComplex::new(
            self.prefix_log_abs[n] - self.prefix_log_abs[n - 1],
            wrap_phase(self.prefix_phase[n] - self.prefix_phase[n - 1]),
        )
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }
}

/// One application of the weighted backward shift:
/// coefficient `n` of the output is `w_{n+1} a_{n+1}`.
///
/// The result may be the zero series (a constant input is annihilated).
/// Panics if the weight cache is shorter than the input series.
pub fn apply_shift(seq: &CoefficientSequence, w: &WeightSequence) -> CoefficientSequence {
    assert!(
        w.cached_len() >= seq.len(),
        "weight cache ({}) shorter than series ({})",
        w.cached_len(),
        seq.len()
    );
    if seq.len() == 1 {
        return CoefficientSequence::zero(seq.domain_radius());
    }
    let mut log_abs = Vec::with_capacity(seq.len() - 1);
    let mut phase = Vec::with_capacity(seq.len() - 1);
    for n in 0..seq.len() - 1 {
        let wl = w.weight_log(n + 1);
        log_abs.push(seq.log_abs()[n + 1] + wl.log_abs);
        phase.push(seq.phase()[n + 1] + wl.phase);
    }
    CoefficientSequence::from_raw(log_abs, phase, seq.domain_radius())
}

/// Verdict of the finite-horizon chaos test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChaosVerdict {
    Chaotic,
    NotChaotic,
    Inconclusive,
}

impl std::fmt::Display for ChaosVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChaosVerdict::Chaotic => "chaotic",
            ChaosVerdict::NotChaotic => "not_chaotic",
            ChaosVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// Decision thresholds for [`chaos_check_with`]. The defaults are
/// deliberately conservative: anything between the two bands comes
/// back [`ChaosVerdict::Inconclusive`] rather than guessing.
#[derive(Debug, Clone, Copy)]
pub struct ChaosThresholds {
    /// Plane: minimal drop of the tail quartile maxima of
    /// `beta_n = -log|w_1..w_n| / n` to accept divergence to `-inf`.
    pub plane_trend_min: f64,
    /// Plane: drops below this count as flat, hence a finite radius.
    pub plane_flat_band: f64,
    /// Disk: `limsup beta_n <= 0` is accepted when the tail maximum
    /// stays below this tolerance.
    pub disk_tol: f64,
    /// Disk: tail maxima above this are treated as genuinely positive.
    pub disk_band: f64,
}

impl Default for ChaosThresholds {
    fn default() -> Self {
        ChaosThresholds {
            plane_trend_min: 0.25,
            plane_flat_band: 0.05,
            disk_tol: 1e-6,
            disk_band: 0.05,
        }
    }
}

/// Outcome of [`chaos_check`], with the statistics behind the verdict.
#[derive(Debug, Clone)]
pub struct ChaosReport {
    pub verdict: ChaosVerdict,
    /// Largest `beta_n = -log|w_1..w_n| / n` over the examined tail,
    /// a proxy for `limsup beta_n` (the log-reciprocal of the radius
    /// of `sum z^n / (w_1..w_n)`).
    pub limsup_proxy: f64,
    /// Drop between the first and last quartile maximum of the tail.
    pub trend: f64,
    /// Quartile maxima of `beta_n` over the tail, oldest first.
    pub quartile_maxima: [f64; 4],
    pub horizon: usize,
}

/// Finite-horizon chaos test with default thresholds; see
/// [`chaos_check_with`].
pub fn chaos_check(w: &WeightSequence, horizon: usize) -> Result<ChaosReport> {
    chaos_check_with(w, horizon, &ChaosThresholds::default())
}

/// Decide whether `B_w` is chaotic on its space by inspecting
/// `beta_n = -log|w_1 .. w_n| / n` over `n in [horizon/2, horizon]`.
///
/// `B_w` is chaotic exactly when `sum z^n / (w_1..w_n)` lies in the
/// space: on the plane that needs `beta_n -> -inf`, on the disk
/// `limsup beta_n <= 0`. With finitely many terms the test is
/// necessarily heuristic, so the verdict has an explicit
/// `Inconclusive` state instead of a forced binary answer:
///
/// * plane: chaotic when the quartile maxima of the tail decrease
///   strictly with total drop at least `plane_trend_min`; not chaotic
///   when the drop is below `plane_flat_band` (a flat or rising
///   `beta_n` means a finite radius);
/// * disk: chaotic when the tail maximum is at most `disk_tol`; not
///   chaotic when it exceeds `disk_band`.
///
/// Requires `horizon >= 100` and a weight cache covering it.
pub fn chaos_check_with(
    w: &WeightSequence,
    horizon: usize,
    thresholds: &ChaosThresholds,
) -> Result<ChaosReport> {
    if horizon < 100 {
        return Err(Error::Domain(format!(
            "chaos check needs a horizon of at least 100, got {horizon}"
        )));
    }
    if w.cached_len() <= horizon {
        return Err(Error::Domain(format!(
            "weight cache covers n <= {}, horizon {horizon} out of reach",
            w.cached_len() - 1
        )));
    }
    let lo = horizon / 2;
    let betas: Vec<f64> =
        (lo..=horizon).map(|n| -w.prefix_log_abs(n) / n as f64).collect();
    let q = betas.len() / 4;
    let mut quartile_maxima = [f64::NEG_INFINITY; 4];
    for (i, &b) in betas.iter().enumerate() {
        let block = (i / q).min(3);
        quartile_maxima[block] = quartile_maxima[block].max(b);
    }
    let limsup_proxy = quartile_maxima.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let trend = quartile_maxima[0] - quartile_maxima[3];
    let verdict = match w.space() {
        Space::Plane => {
            let decreasing = quartile_maxima.windows(2).all(|p| p[0] > p[1]);
            if decreasing && trend >= thresholds.plane_trend_min {
                ChaosVerdict::Chaotic
            } else if trend < thresholds.plane_flat_band {
                ChaosVerdict::NotChaotic
            } else {
                ChaosVerdict::Inconclusive
            }
        }
        Space::Disk => {
            if limsup_proxy <= thresholds.disk_tol {
                ChaosVerdict::Chaotic
            } else if limsup_proxy > thresholds.disk_band {
                ChaosVerdict::NotChaotic
            } else {
                ChaosVerdict::Inconclusive
            }
        }
    };
    Ok(ChaosReport { verdict, limsup_proxy, trend, quartile_maxima, horizon })
}

/// A random frequently hypercyclic candidate
/// `g = sum X_n z^n / (w_1 .. w_n)` together with the chaos evidence
/// that justified building it.
#[derive(Debug, Clone)]
pub struct FhcFunction {
    pub g: RandomizedSeries,
    /// Set when the sampler's multipliers do not charge every open set
    /// (Rademacher and Steinhaus phases are circle-valued): frequent
    /// hypercyclicity then needs a separate argument.
    pub support_warning: bool,
    pub chaos: ChaosReport,
}

/// Build `g = sum X_n z^n / (w_1 .. w_n)` with `n` stored coefficients.
///
/// The shift must pass [`chaos_check`] at horizon `n` first; anything
/// other than a chaotic verdict is rejected, with the verdict quoted
/// in the error. `n >= 100` therefore. The weight cache must cover
/// `n` products.
pub fn random_fhc_function(
    w: &WeightSequence,
    sampler: &SubgaussianSampler,
    n: usize,
    seed: SeedSpec,
) -> Result<FhcFunction> {
    let chaos = chaos_check(w, n)?;
    if chaos.verdict != ChaosVerdict::Chaotic {
        return Err(Error::NotChaotic { verdict: chaos.verdict.to_string() });
    }
    let base = make_weight_series(w, n)?;
    let g = randomize(&base, sampler, seed);
    Ok(FhcFunction { g, support_warning: !sampler.full_support(), chaos })
}

/// Largest tolerated drift between a stored base series and the weight
/// family it claims to come from.
const BASE_MATCH_TOL: f64 = 1e-9;

fn ensure_matches(g: &RandomizedSeries, w: &WeightSequence) -> Result<()> {
    let probe = g.len().min(w.cached_len());
    for m in [0, probe / 2, probe - 1] {
        let expect = -w.prefix_log_abs(m);
        let got = g.base().log_abs()[m];
        if (expect - got).abs() > BASE_MATCH_TOL {
            return Err(Error::Domain(format!(
                "series coefficient {m} does not match the weight family \
                 (log-magnitude {got}, expected {expect})"
            )));
        }
    }
    Ok(())
}

/// Coefficient `k` of the orbit iterate `B_w^n g`, read directly off
/// the stored multipliers: `X_{n+k} / (w_1 .. w_k)` in log-polar form.
///
/// Errors with [`Error::OrbitIndex`] when `n + k` runs past the stored
/// coefficients, and rejects series whose base does not match `w`.
pub fn orbit_coefficient(
    g: &RandomizedSeries,
    w: &WeightSequence,
    n: usize,
    k: usize,
) -> Result<LogComplex> {
    ensure_matches(g, w)?;
    let index = n + k;
    if index >= g.len() {
        return Err(Error::OrbitIndex {
            index,
            stored: g.len(),
            suggested: index + 1,
        });
    }
    if k >= w.cached_len() {
        return Err(Error::Domain(format!(
            "weight cache covers {} products, orbit coefficient needs {k}",
            w.cached_len() - 1
        )));
    }
    let x = g.multipliers()[index];
    Ok(LogComplex::new(
        x.log_abs - w.prefix_log_abs(k),
        wrap_phase(x.phase - w.prefix_phase(k)),
    ))
}

/// The full stored part of `B_w^n g` as a coefficient sequence
/// (possibly the zero series).
pub fn orbit_section(
    g: &RandomizedSeries,
    w: &WeightSequence,
    n: usize,
) -> Result<CoefficientSequence> {
    ensure_matches(g, w)?;
    if n >= g.len() {
        return Err(Error::OrbitIndex { index: n, stored: g.len(), suggested: n + 1 });
    }
    let len = g.len() - n;
    if len > w.cached_len() {
        return Err(Error::Domain(format!(
            "weight cache covers {} products, orbit section needs {}",
            w.cached_len() - 1,
            len - 1
        )));
    }
    let mut log_abs = Vec::with_capacity(len);
    let mut phase = Vec::with_capacity(len);
    for k in 0..len {
        let x = g.multipliers()[n + k];
        log_abs.push(x.log_abs - w.prefix_log_abs(k));
        phase.push(x.phase - w.prefix_phase(k));
    }
    Ok(CoefficientSequence::from_raw(log_abs, phase, g.base().domain_radius()))
}

/// A polynomial target for orbit approximation: hit when
/// `sup_{|z| = rho} |B_w^n g - p| < eps`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetSpec {
    /// Cartesian coefficients `p_0, p_1, ..` of the target polynomial.
    coefficients: Vec<(f64, f64)>,
    rho: f64,
    eps: f64,
}

impl TargetSpec {
    pub fn new(coefficients: Vec<(f64, f64)>, rho: f64, eps: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Domain("target polynomial needs a coefficient".into()));
        }
        if coefficients.iter().any(|&(re, im)| !re.is_finite() || !im.is_finite()) {
            return Err(Error::Domain("target coefficients must be finite".into()));
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain(format!("target radius must be positive, got {rho}")));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Domain(format!("target tolerance must be positive, got {eps}")));
        }
        Ok(TargetSpec { coefficients, rho, eps })
    }

    /// The zero target `p = 0`.
    pub fn origin(rho: f64, eps: f64) -> Result<Self> {
        Self::new(vec![(0.0, 0.0)], rho, eps)
    }

    pub fn coefficients(&self) -> &[(f64, f64)] {
        &self.coefficients
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// How many trailing stored terms are inspected for the tail-decay
/// ratio that certifies truncation.
const TAIL_PROBE: usize = 10;

/// `sup_{|z| = rho} |B_w^n g - p|`, certified to within `eps / 100`.
///
/// The stored section only covers finitely many orbit coefficients, so
/// the unstored tail is bounded by a crude geometric extrapolation:
/// the worst consecutive term ratio `q` over the last [`TAIL_PROBE`]
/// stored terms (evaluated at `rho`) bounds the missing mass by
/// `t_last * q / (1 - q)`. When that bound cannot be pushed below
/// `eps / 200` the call fails with [`Error::TruncationMargin`] instead
/// of returning a number that might be wrong; a trailing run of exact
/// zeros is taken at face value. A further `eps / 200` of slack is
/// spent dropping negligible trailing terms before the circle
/// evaluation, keeping the transform size small for deep sections.
///
/// Returns `inf` when the section is too large to evaluate in floating
/// point at this radius.
pub fn orbit_distance(
    g: &RandomizedSeries,
    w: &WeightSequence,
    n: usize,
    target: &TargetSpec,
) -> Result<f64> {
    let section = orbit_section(g, w, n)?;
    if target.rho >= section.domain_radius() {
        return Err(Error::Domain(format!(
            "target radius {} outside the domain (radius {})",
            target.rho,
            section.domain_radius()
        )));
    }
    let log_rho = target.rho.ln();
    let t: Vec<f64> = section
        .log_abs()
        .iter()
        .enumerate()
        .map(|(k, &l)| l + k as f64 * log_rho)
        .collect();
    let last = t.len() - 1;
    if t.iter().any(|&v| v > 700.0) {
        return Ok(f64::INFINITY);
    }
    let budget = target.eps / 200.0;

    // Tail margin from the stored evidence. A run of exact zeros at
    // the end is its own certificate; otherwise extrapolate the worst
    // observed decay ratio geometrically.
    let last_finite = t.iter().rposition(|&v| v.is_finite());
    let tail_bound = match last_finite {
        None => 0.0,
        Some(lf) if last - lf >= TAIL_PROBE.min(last) => 0.0,
        Some(lf) => {
            let probe_lo = lf.saturating_sub(TAIL_PROBE);
            let mut q: f64 = 0.0;
            let mut pairs = 0;
            for k in probe_lo..lf {
                if t[k].is_finite() && t[k + 1].is_finite() {
                    q = q.max((t[k + 1] - t[k]).exp());
                    pairs += 1;
                }
            }
            if pairs < 2 || q >= 0.999 {
                return Err(Error::TruncationMargin {
                    rho: target.rho,
                    bound: f64::INFINITY,
                    need: budget,
                    suggested: g.len() * 2,
                });
            }
            t[lf].exp() * q / (1.0 - q)
        }
    };
    if tail_bound >= budget {
        // Suggest enough extra terms for the observed decay to push
        // the bound below the budget.
        let lf = last_finite.unwrap_or(0);
        let decay = if lf >= 1 && t[lf - 1].is_finite() {
            (t[lf] - t[lf - 1]).exp().clamp(1e-6, 0.999)
        } else {
            0.5
        };
        let extra = ((tail_bound / budget).ln() / -decay.ln()).ceil().max(1.0) as usize;
        return Err(Error::TruncationMargin {
            rho: target.rho,
            bound: tail_bound,
            need: budget,
            suggested: g.len() + extra,
        });
    }

    // Drop negligible trailing terms against the second half of the
    // certified slack. Indices covered by the target stay: cancelling
    // them against p costs nothing and dropping them would waste slack.
    let p = target.coefficients();
    let keep_floor = p.len().max(1);
    let mut kept = t.len();
    let mut dropped = 0.0;
    while kept > keep_floor {
        let add = if t[kept - 1].is_finite() { t[kept - 1].exp() } else { 0.0 };
        if dropped + add > budget {
            break;
        }
        dropped += add;
        kept -= 1;
    }

    let len = kept.max(p.len());
    let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
    for k in 0..kept {
        if t[k].is_finite() {
            coeffs[k] = Complex64::from_polar(t[k].exp(), section.phase()[k]);
        }
    }
    for (k, &(re, im)) in p.iter().enumerate() {
        coeffs[k] -= Complex64::new(re, im) * target.rho.powi(k as i32);
    }
    if coeffs.iter().all(|c| c.norm_sqr() == 0.0) {
        return Ok(0.0);
    }
    Ok(circle::sup_trig_poly(&coeffs, 1024, 1).max_abs)
}

/// Hitting statistics for one target.
#[derive(Debug, Clone)]
pub struct TargetDensity {
    /// Orbit times `n <= n_max` with distance strictly below `eps`.
    pub hits: Vec<usize>,
    /// Distance at every orbit time `0..=n_max`.
    pub distances: Vec<f64>,
    /// `(window_end, hit fraction over [ceil(end/2), end])` for each
    /// rung of the window ladder.
    pub window_estimates: Vec<(usize, f64)>,
    /// Minimum over the window estimates: the lower-density proxy.
    pub lower_density: f64,
}

/// Result of [`hitting_density`].
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub n_max: usize,
    /// Window ends examined, largest first.
    pub windows: Vec<usize>,
    pub per_target: Vec<TargetDensity>,
    /// Minimum lower-density proxy across targets.
    pub all_targets_lower_density: f64,
}

impl DensityReport {
    /// Write the per-time distances as CSV with header
    /// `n,target_id,distance,hit`, rows ordered by time then target.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,target_id,distance,hit")?;
        for n in 0..=self.n_max {
            for (tid, td) in self.per_target.iter().enumerate() {
                let hit = td.hits.binary_search(&n).is_ok();
                writeln!(
                    out,
                    "{n},{tid},{},{}",
                    crate::fmtnum::sig17(td.distances[n]),
                    u8::from(hit)
                )?;
            }
        }
        Ok(())
    }
}

/// Estimate the lower density of the hitting times
/// `{n : sup_{|z|=rho} |B_w^n g - p| < eps}` for each target.
///
/// Densities over a single window `[0, N]` can be inflated by an
/// early lucky streak, so the estimate is the minimum of the hit
/// fraction over a ladder of dyadic windows `[ceil(N_j/2), N_j]`,
/// `N_j = n_max >> j`, keeping rungs while the window holds at least
/// 500 times and `N_j >= 64` (the full window `j = 0` is always
/// included). Frequent hypercyclicity predicts a strictly positive
/// limit, so the proxy should stabilize away from zero as `n_max`
/// grows.
pub fn hitting_density(
    g: &RandomizedSeries,
    w: &WeightSequence,
    targets: &[TargetSpec],
    n_max: usize,
) -> Result<DensityReport> {
    if targets.is_empty() {
        return Err(Error::Domain("hitting density needs at least one target".into()));
    }
    if n_max + 1 >= g.len() {
        return Err(Error::OrbitIndex {
            index: n_max,
            stored: g.len(),
            suggested: n_max + 2,
        });
    }
    use rayon::prelude::*;
    let rows: Vec<Vec<f64>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            targets
                .iter()
                .map(|tgt| orbit_distance(g, w, n, tgt))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut windows = vec![n_max];
    let mut j = 1;
    loop {
        let end = n_max >> j;
        let start = end.div_ceil(2);
        if end < 64 || end - start + 1 < 500 {
            break;
        }
        windows.push(end);
        j += 1;
    }

    let mut per_target = Vec::with_capacity(targets.len());
    for (tid, tgt) in targets.iter().enumerate() {
        let distances: Vec<f64> = rows.iter().map(|r| r[tid]).collect();
        let hits: Vec<usize> =
            (0..=n_max).filter(|&n| distances[n] < tgt.eps).collect();
        let window_estimates: Vec<(usize, f64)> = windows
            .iter()
            .map(|&end| {
                let start = end.div_ceil(2);
                let count = hits
                    .iter()
                    .filter(|&&n| n >= start && n <= end)
                    .count();
                (end, count as f64 / (end - start + 1) as f64)
            })
            .collect();
        let lower_density = window_estimates
            .iter()
            .map(|&(_, d)| d)
            .fold(f64::INFINITY, f64::min);
        per_target.push(TargetDensity { hits, distances, window_estimates, lower_density });
    }
    let all_targets_lower_density = per_target
        .iter()
        .map(|t| t.lower_density)
        .fold(f64::INFINITY, f64::min);
    Ok(DensityReport { n_max, windows, per_target, all_targets_lower_density })
}

/// Closed-form growth checks available for the classical weight
/// families.
#[derive(Debug, Clone)]
pub enum AsymptoticsCheck {
    /// `w = (n)`: `g` rides on `e^z`, so `log mu - (r - log r / 2)`
    /// and `log S - (r - log r / 4)` should stay in narrow windows.
    /// Both `(min, max)` ranges over the grid are reported.
    Differentiation { mu_window: (f64, f64), s_window: (f64, f64) },
    /// `w = (1)`: `mu = 1` identically and
    /// `log S = -log(1 - r^2) / 2`; the largest absolute deviations
    /// are reported.
    Taylor { mu_max_abs: f64, s_max_abs: f64 },
}

/// Result of [`fhc_growth_check`].
#[derive(Debug, Clone)]
pub struct FhcGrowthReport {
    pub family: BoundFamily,
    pub report: ViolationReport,
    /// Present for the differentiation and Taylor weight families,
    /// where the base series has closed-form growth.
    pub asymptotics: Option<AsymptoticsCheck>,
    /// Growth profile of the deterministic base series.
    pub base: GrowthProfile,
    /// Growth profile of the realized random function.
    pub profile: GrowthProfile,
}

/// Check the realized `g` against the sharp almost-sure growth bound
/// for its space: `M <= C * S * sqrt(log log mu)` style on the plane,
/// the `log(1/(1-r))`-corrected version on the disk (both through the
/// S-normalized bound families, at `delta = 1/2`).
pub fn fhc_growth_check(
    g: &RandomizedSeries,
    w: &WeightSequence,
    grid: &RadiusGrid,
    constant: f64,
    truncation_tol: f64,
) -> Result<FhcGrowthReport> {
    ensure_matches(g, w)?;
    let (family, convention) = match w.space() {
        Space::Plane => (BoundFamily::LevyPlaneS, MeasureConvention::PlaneClassic),
        Space::Disk => (BoundFamily::LevyDiskS, MeasureConvention::DiskClassic),
    };
    let kind = BoundKind::new(family, 0.5, None)?;
    let opts = MaxModOptions::default();
    let base_profile = growth_profile(g.base(), None, grid, truncation_tol, &opts)?;
    let profile =
        growth_profile(g.base(), Some(g.multipliers()), grid, truncation_tol, &opts)?;
    let report = check_inequality(&profile, &base_profile, &kind, constant, &convention)?;

    let asymptotics = match w.kind() {
        WeightKind::Differentiation => {
            let mut mu = (f64::INFINITY, f64::NEG_INFINITY);
            let mut s = (f64::INFINITY, f64::NEG_INFINITY);
            for rec in &base_profile.records {
                let dm = rec.log_mu - (rec.r - rec.r.ln() / 2.0);
                let ds = rec.log_s - (rec.r - rec.r.ln() / 4.0);
                mu = (mu.0.min(dm), mu.1.max(dm));
                s = (s.0.min(ds), s.1.max(ds));
            }
            Some(AsymptoticsCheck::Differentiation { mu_window: mu, s_window: s })
        }
        WeightKind::Taylor => {
            let mut mu_max = 0.0f64;
            let mut s_max = 0.0f64;
            for rec in &base_profile.records {
                mu_max = mu_max.max(rec.log_mu.abs());
                s_max = s_max.max((rec.log_s + 0.5 * (1.0 - rec.r * rec.r).ln()).abs());
            }
            Some(AsymptoticsCheck::Taylor { mu_max_abs: mu_max, s_max_abs: s_max })
        }
        _ => None,
    };
    Ok(FhcGrowthReport { family, report, asymptotics, base: base_profile, profile })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{self, sample_sequence, SamplerKind, SubgaussianSampler};
    use crate::series::{radius_of_convergence_estimate, CoefficientSequence};

    fn gaussian() -> SubgaussianSampler {
        SubgaussianSampler::new(SamplerKind::ComplexGaussian { sigma: 1.0 }).unwrap()
    }

    fn seq_from_cartesian(coeffs: &[(f64, f64)], radius: f64) -> CoefficientSequence {
        let log_abs = coeffs
            .iter()
            .map(|&(re, im)| Complex64::new(re, im).norm().ln())
            .collect();
        let phase = coeffs
            .iter()
            .map(|&(re, im)| Complex64::new(re, im).arg())
            .collect();
        CoefficientSequence::new(log_abs, phase, radius).unwrap()
    }

    #[test]
    fn shift_with_integer_weights_differentiates() {
        let w = WeightSequence::differentiation(10);
        // z^2 -> 2 z
        let seq = seq_from_cartesian(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)], f64::INFINITY);
        let out = apply_shift(&seq, &w);
        assert_eq!(out.len(), 2);
        assert_eq!(out.log_abs()[0], f64::NEG_INFINITY);
        assert!((out.log_abs()[1] - 2.0f64.ln()).abs() < 1e-15);
        assert_eq!(out.phase()[1], 0.0);
    }

    #[test]
    fn taylor_shift_drops_the_head() {
        let w = WeightSequence::taylor(10, Space::Disk);
        let seq = seq_from_cartesian(&[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0)], 1.0);
        let out = apply_shift(&seq, &w);
        assert_eq!(out.len(), 2);
        assert_eq!(out.log_abs(), &[0.0, 0.0]);
    }

    #[test]
    fn repeated_shifts_annihilate_polynomials() {
        let w = WeightSequence::differentiation(10);
        let mut seq =
            seq_from_cartesian(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)], f64::INFINITY);
        for _ in 0..3 {
            seq = apply_shift(&seq, &w);
        }
        assert!(seq.is_zero());
        // Shifting the zero series keeps it zero.
        seq = apply_shift(&seq, &w);
        assert!(seq.is_zero());
    }

    #[test]
    fn shift_is_linear() {
        let w = WeightSequence::differentiation(16);
        let f = [(1.0, 0.5), (-2.0, 0.0), (0.3, -0.7), (0.0, 1.0), (2.0, 2.0)];
        let g = [(0.0, -1.0), (4.0, 0.25), (-1.0, 1.0), (5.0, 0.0), (-0.5, 0.5)];
        let (a, b) = (2.0, -0.5);
        let combo: Vec<(f64, f64)> = f
            .iter()
            .zip(&g)
            .map(|(&(fr, fi), &(gr, gi))| (a * fr + b * gr, a * fi + b * gi))
            .collect();
        let shifted_combo = apply_shift(&seq_from_cartesian(&combo, f64::INFINITY), &w);
        let sf = apply_shift(&seq_from_cartesian(&f, f64::INFINITY), &w);
        let sg = apply_shift(&seq_from_cartesian(&g, f64::INFINITY), &w);
        for k in 0..shifted_combo.len() {
            let sc = Complex64::from_polar(
                shifted_combo.log_abs()[k].exp(),
                shifted_combo.phase()[k],
            );
            let expect = Complex64::from_polar(sf.log_abs()[k].exp(), sf.phase()[k]) * a
                + Complex64::from_polar(sg.log_abs()[k].exp(), sg.phase()[k]) * b;
            assert!((sc - expect).norm() < 1e-12, "coefficient {k}");
        }
    }

    #[test]
    fn exponential_series_is_fixed_by_differentiation_shift() {
        // B_w (sum z^n / n!) truncates to sum z^n / n! with one fewer
        // term when w = (n).
        let w = WeightSequence::differentiation(400);
        let base = make_weight_series(&w, 300).unwrap();
        let shifted = apply_shift(&base, &w);
        for k in 0..shifted.len() {
            assert!(
                (shifted.log_abs()[k] - base.log_abs()[k]).abs() < 1e-12,
                "coefficient {k}"
            );
            assert_eq!(shifted.phase()[k], base.phase()[k]);
        }
    }

    #[test]
    fn chaos_verdicts_for_the_classical_families() {
        let d = WeightSequence::differentiation(2000);
        assert_eq!(chaos_check(&d, 2000).unwrap().verdict, ChaosVerdict::Chaotic);

        let t_plane = WeightSequence::taylor(2000, Space::Plane);
        assert_eq!(
            chaos_check(&t_plane, 2000).unwrap().verdict,
            ChaosVerdict::NotChaotic
        );

        let t_disk = WeightSequence::taylor(2000, Space::Disk);
        assert_eq!(chaos_check(&t_disk, 2000).unwrap().verdict, ChaosVerdict::Chaotic);

        let double = WeightSequence::constant(2.0, 2000, Space::Disk).unwrap();
        assert_eq!(chaos_check(&double, 2000).unwrap().verdict, ChaosVerdict::Chaotic);

        let halve = WeightSequence::constant(0.5, 2000, Space::Disk).unwrap();
        assert_eq!(
            chaos_check(&halve, 2000).unwrap().verdict,
            ChaosVerdict::NotChaotic
        );

        let double_plane = WeightSequence::constant(2.0, 2000, Space::Plane).unwrap();
        assert_eq!(
            chaos_check(&double_plane, 2000).unwrap().verdict,
            ChaosVerdict::NotChaotic
        );
    }

    #[test]
    fn chaos_band_between_the_thresholds_is_inconclusive() {
        // beta_n = 0.01 sits between disk_tol and disk_band.
        let c = (-0.01f64).exp();
        let w = WeightSequence::constant(c, 1000, Space::Disk).unwrap();
        let report = chaos_check(&w, 1000).unwrap();
        assert_eq!(report.verdict, ChaosVerdict::Inconclusive);
        assert!((report.limsup_proxy - 0.01).abs() < 1e-9);
    }

    #[test]
    fn chaos_check_validates_its_inputs() {
        let w = WeightSequence::differentiation(300);
        assert!(chaos_check(&w, 50).is_err());
        assert!(chaos_check(&w, 301).is_err());
        assert!(chaos_check(&w, 300).is_ok());
    }

    #[test]
    fn weight_construction_rejects_bad_values() {
        assert!(WeightSequence::constant(0.0, 10, Space::Plane).is_err());
        assert!(WeightSequence::constant(f64::NAN, 10, Space::Plane).is_err());
        assert!(WeightSequence::from_fn(
            |n| LogComplex::new(if n == 3 { f64::NEG_INFINITY } else { 0.0 }, 0.0),
            10,
            Space::Disk
        )
        .is_err());

        let w = WeightSequence::differentiation(10);
        assert!((w.prefix_log_abs(5) - 120.0f64.ln()).abs() < 1e-12);
        assert!((w.weight_log(3).log_abs - 3.0f64.ln()).abs() < 1e-15);
        assert_eq!(w.cached_len(), 11);
        assert_eq!(w.kind(), WeightKind::Differentiation);
    }

    #[test]
    fn negative_constant_weights_carry_their_sign() {
        let w = WeightSequence::constant(-2.0, 10, Space::Disk).unwrap();
        let wl = w.weight_log(1);
        assert!((wl.log_abs - 2.0f64.ln()).abs() < 1e-15);
        assert!((wl.phase.abs() - std::f64::consts::PI).abs() < 1e-15);
        // Two applications square the sign away.
        assert!((wrap_phase(w.prefix_phase(2))).abs() < 1e-12);
    }

    #[test]
    fn orbit_coefficients_match_iterated_shifts() {
        let w = WeightSequence::differentiation(160);
        let fhc = random_fhc_function(&w, &gaussian(), 150, SeedSpec::new(7, 0)).unwrap();
        let g = &fhc.g;
        assert!(!fhc.support_warning);

        let mut section = g.realize();
        for n in 0..=50usize {
            for k in 0..=50usize.min(section.len() - 1) {
                let oc = orbit_coefficient(g, &w, n, k).unwrap();
                let direct = section.log_abs()[k];
                assert!(
                    (oc.log_abs - direct).abs() < 1e-10,
                    "n={n} k={k}: {} vs {direct}",
                    oc.log_abs
                );
                let dphi = wrap_phase(oc.phase - section.phase()[k]);
                assert!(dphi.abs() < 1e-10, "n={n} k={k} phase");
            }
            section = apply_shift(&section, &w);
        }
    }

    #[test]
    fn orbit_at_time_zero_recovers_the_function() {
        let w = WeightSequence::taylor(200, Space::Disk);
        let fhc = random_fhc_function(&w, &gaussian(), 150, SeedSpec::new(3, 1)).unwrap();
        let realized = fhc.g.realize();
        let section = orbit_section(&fhc.g, &w, 0).unwrap();
        assert_eq!(section.len(), realized.len());
        for k in 0..section.len() {
            assert!((section.log_abs()[k] - realized.log_abs()[k]).abs() < 1e-12);
            assert!(wrap_phase(section.phase()[k] - realized.phase()[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn orbit_index_overflow_is_reported_with_a_suggestion() {
        let w = WeightSequence::differentiation(160);
        let fhc = random_fhc_function(&w, &gaussian(), 150, SeedSpec::new(7, 0)).unwrap();
        match orbit_coefficient(&fhc.g, &w, 100, 60) {
            Err(Error::OrbitIndex { index, stored, suggested }) => {
                assert_eq!(index, 160);
                assert_eq!(stored, 151);
                assert_eq!(suggested, 161);
            }
            other => panic!("expected an orbit index error, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_weight_family_is_rejected() {
        let d = WeightSequence::differentiation(160);
        let fhc = random_fhc_function(&d, &gaussian(), 150, SeedSpec::new(7, 0)).unwrap();
        let t = WeightSequence::taylor(160, Space::Plane);
        assert!(matches!(
            orbit_coefficient(&fhc.g, &t, 1, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn non_chaotic_weights_cannot_seed_an_fhc_function() {
        let w = WeightSequence::taylor(200, Space::Plane);
        match random_fhc_function(&w, &gaussian(), 150, SeedSpec::new(1, 0)) {
            Err(Error::NotChaotic { verdict }) => assert_eq!(verdict, "not_chaotic"),
            other => panic!("expected a chaos rejection, got {other:?}"),
        }
    }

    #[test]
    fn single_spike_orbit_is_a_constant() {
        // X_5 = 1 and every other multiplier zero: B^5 g is the
        // constant 1, so its distance to p = 1 vanishes and its
        // distance to p = 0 is 1.
        let w = WeightSequence::differentiation(60);
        let base = make_weight_series(&w, 40).unwrap();
        let mut mult = vec![LogComplex::ZERO; 41];
        mult[5] = LogComplex::ONE;
        let g = sampler::from_parts(
            base,
            mult,
            SamplerKind::ComplexGaussian { sigma: 1.0 },
            SeedSpec::new(0, 0),
        );
        let one = TargetSpec::new(vec![(1.0, 0.0)], 0.5, 0.1).unwrap();
        let zero = TargetSpec::origin(0.5, 0.1).unwrap();
        let d_one = orbit_distance(&g, &w, 5, &one).unwrap();
        let d_zero = orbit_distance(&g, &w, 5, &zero).unwrap();
        assert!(d_one < 1e-12, "distance to 1 was {d_one}");
        assert!((d_zero - 1.0).abs() < 1e-12, "distance to 0 was {d_zero}");
    }

    #[test]
    fn orbit_distance_to_own_leading_polynomial_is_the_tail() {
        let w = WeightSequence::differentiation(160);
        let fhc = random_fhc_function(&w, &gaussian(), 150, SeedSpec::new(21, 0)).unwrap();
        let realized = fhc.g.realize();
        let head: Vec<(f64, f64)> = (0..6)
            .map(|k| {
                let c = Complex64::from_polar(
                    realized.log_abs()[k].exp(),
                    realized.phase()[k],
                );
                (c.re, c.im)
            })
            .collect();
        let eps = 1e-3;
        let target = TargetSpec::new(head, 0.3, eps).unwrap();
        let d = orbit_distance(&fhc.g, &w, 0, &target).unwrap();
        // The difference starts at z^6 / 6!, so it is tiny at rho = 0.3;
        // the answer is certified only to within eps / 100.
        let crude_tail: f64 = (6..realized.len())
            .map(|k| realized.log_abs()[k].exp() * 0.3f64.powi(k as i32))
            .sum();
        assert!(d >= 0.0);
        assert!(
            d <= crude_tail + eps / 100.0 + 1e-12,
            "d = {d}, tail bound = {crude_tail}"
        );
        assert!(d < 5e-5, "tail at rho = 0.3 should be tiny, got {d}");
    }

    #[test]
    fn thin_sections_fail_with_a_truncation_margin() {
        let w = WeightSequence::taylor(200, Space::Disk);
        let sampler = SubgaussianSampler::new(SamplerKind::Steinhaus).unwrap();
        let g = random_fhc_function(&w, &sampler, 120, SeedSpec::new(5, 0)).unwrap().g;
        // Section at n = 115 has 6 unimodular terms at rho = 0.9: the
        // geometric tail bound is ~ 5.9, far above eps / 200.
        let target = TargetSpec::origin(0.9, 0.5).unwrap();
        match orbit_distance(&g, &w, 115, &target) {
            Err(Error::TruncationMargin { rho, bound, need, suggested }) => {
                assert_eq!(rho, 0.9);
                assert!(bound > need);
                assert!(suggested > g.len());
            }
            other => panic!("expected a truncation margin error, got {other:?}"),
        }
    }

    #[test]
    fn hitting_density_with_a_huge_tolerance_is_one() {
        let w = WeightSequence::differentiation(700);
        let fhc = random_fhc_function(&w, &gaussian(), 600, SeedSpec::new(9, 0)).unwrap();
        let target = TargetSpec::origin(0.5, 1e6).unwrap();
        let report = hitting_density(&fhc.g, &w, &[target], 500).unwrap();
        assert_eq!(report.windows, vec![500]);
        assert_eq!(report.per_target[0].lower_density, 1.0);
        assert_eq!(report.all_targets_lower_density, 1.0);
        assert_eq!(report.per_target[0].hits.len(), 501);
    }

    #[test]
    fn hitting_density_with_a_tiny_tolerance_is_zero() {
        let w = WeightSequence::differentiation(700);
        let fhc = random_fhc_function(&w, &gaussian(), 600, SeedSpec::new(9, 0)).unwrap();
        let target = TargetSpec::origin(0.5, 1e-4).unwrap();
        let report = hitting_density(&fhc.g, &w, &[target], 500).unwrap();
        assert_eq!(report.per_target[0].lower_density, 0.0);
        assert!(report.per_target[0].hits.is_empty());
    }

    #[test]
    fn hitting_density_smoke_for_the_origin_target() {
        let w = WeightSequence::differentiation(700);
        let fhc = random_fhc_function(&w, &gaussian(), 600, SeedSpec::new(42, 0)).unwrap();
        let target = TargetSpec::origin(0.5, 0.5).unwrap();
        let report = hitting_density(&fhc.g, &w, &[target], 500).unwrap();
        // P(|X_n| and the next few terms stay small) is comfortably
        // above a percent, so even one window should clear this.
        assert!(report.per_target[0].lower_density > 0.01);
    }

    #[test]
    fn hit_indicators_are_reproducible() {
        let w = WeightSequence::differentiation(700);
        let run = || {
            let fhc =
                random_fhc_function(&w, &gaussian(), 600, SeedSpec::new(11, 0)).unwrap();
            let targets = vec![
                TargetSpec::origin(0.5, 0.5).unwrap(),
                TargetSpec::new(vec![(1.0, 0.0)], 0.5, 0.5).unwrap(),
            ];
            hitting_density(&fhc.g, &w, &targets, 300).unwrap()
        };
        let a = run();
        let b = run();
        for (ta, tb) in a.per_target.iter().zip(&b.per_target) {
            assert_eq!(ta.hits, tb.hits);
            let bits_a: Vec<u64> = ta.distances.iter().map(|d| d.to_bits()).collect();
            let bits_b: Vec<u64> = tb.distances.iter().map(|d| d.to_bits()).collect();
            assert_eq!(bits_a, bits_b);
        }
    }

    #[test]
    fn density_csv_layout() {
        let w = WeightSequence::differentiation(300);
        let fhc = random_fhc_function(&w, &gaussian(), 250, SeedSpec::new(2, 0)).unwrap();
        let targets = vec![
            TargetSpec::origin(0.5, 0.5).unwrap(),
            TargetSpec::new(vec![(0.0, 0.0), (1.0, 0.0)], 0.5, 0.5).unwrap(),
        ];
        let report = hitting_density(&fhc.g, &w, &targets, 40).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,target_id,distance,hit"));
        assert_eq!(lines.count(), 41 * 2);
        assert!(text.contains("0,0,"));
    }

    #[test]
    fn growth_check_on_the_plane_tracks_the_exponential() {
        let w = WeightSequence::differentiation(1000);
        let fhc = random_fhc_function(&w, &gaussian(), 900, SeedSpec::new(13, 0)).unwrap();
        let grid = RadiusGrid::geometric_plane(10.0, 1.26, 11).unwrap();
        let report = fhc_growth_check(&fhc.g, &w, &grid, 20.0, 1e-12).unwrap();
        assert_eq!(report.family, BoundFamily::LevyPlaneS);
        match report.asymptotics {
            Some(AsymptoticsCheck::Differentiation { mu_window, s_window }) => {
                assert!(mu_window.1 - mu_window.0 <= 2.0, "{mu_window:?}");
                assert!(s_window.1 - s_window.0 <= 2.0, "{s_window:?}");
            }
            ref other => panic!("expected differentiation asymptotics, got {other:?}"),
        }
        // A generous constant should leave no violations at all.
        assert!(report.report.set.is_empty(), "measure {}", report.report.measure);
    }

    #[test]
    fn growth_check_on_the_disk_has_exact_taylor_asymptotics() {
        let w = WeightSequence::taylor(2600, Space::Disk);
        let fhc = random_fhc_function(&w, &gaussian(), 2500, SeedSpec::new(17, 0)).unwrap();
        let grid = RadiusGrid::approach_disk(0.5, 0.5, 6).unwrap();
        let report = fhc_growth_check(&fhc.g, &w, &grid, 50.0, 1e-12).unwrap();
        assert_eq!(report.family, BoundFamily::LevyDiskS);
        match report.asymptotics {
            Some(AsymptoticsCheck::Taylor { mu_max_abs, s_max_abs }) => {
                assert_eq!(mu_max_abs, 0.0);
                assert!(s_max_abs < 1e-9, "log S deviation {s_max_abs}");
            }
            ref other => panic!("expected taylor asymptotics, got {other:?}"),
        }
    }

    #[test]
    fn chaos_verdicts_agree_with_the_radius_estimate() {
        // Random disk weight families w_n = exp(delta + xi_n) with
        // bounded noise: the series sum z^n / (w_1..w_n) has radius
        // exp(delta), so the chaos verdict should agree with the
        // radius estimate whenever both are decisive.
        use rand::{Rng, SeedableRng};
        let n_max = 1000;
        let mut decisive = 0;
        for seed in 0..50u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let delta: f64 = rng.random_range(-0.8..0.8);
            let noise: Vec<f64> =
                (0..n_max).map(|_| rng.random_range(-0.2..0.2)).collect();
            let w = WeightSequence::from_fn(
                |n| LogComplex::new(delta + noise[n - 1], 0.0),
                n_max,
                Space::Disk,
            )
            .unwrap();
            let verdict = chaos_check(&w, n_max).unwrap().verdict;
            let base = make_weight_series(&w, n_max - 1).unwrap();
            let radius = radius_of_convergence_estimate(&base, None).unwrap();
            match verdict {
                ChaosVerdict::Chaotic => {
                    decisive += 1;
                    assert!(
                        radius >= 0.98,
                        "seed {seed}: chaotic but radius {radius}"
                    );
                }
                ChaosVerdict::NotChaotic => {
                    decisive += 1;
                    assert!(
                        radius <= 1.02,
                        "seed {seed}: not chaotic but radius {radius}"
                    );
                }
                ChaosVerdict::Inconclusive => {}
            }
        }
        assert!(decisive >= 30, "only {decisive} decisive verdicts out of 50");
    }

    #[test]
    fn orbit_section_multipliers_line_up_with_sampling() {
        // The section at n reuses the exact draws from the master
        // stream; check against a fresh sample of the same stream.
        let w = WeightSequence::differentiation(200);
        let seed = SeedSpec::new(31, 4);
        let fhc = random_fhc_function(&w, &gaussian(), 150, seed).unwrap();
        let draws = sample_sequence(&gaussian(), 151, seed);
        let oc = orbit_coefficient(&fhc.g, &w, 30, 0).unwrap();
        assert_eq!(oc.log_abs, draws[30].log_abs);
    }
}
