//! Growth functionals of a power series along radius grids.
//!
//! Four classical scales of growth are computed for `f(z) = sum a_n X_n z^n`
//! at a radius r:
//!
//! * maximal term `mu(r) = max_n |a_n X_n| r^n`,
//! * quadratic mean `S(r) = (sum |a_n X_n|^2 r^{2n})^{1/2}`,
//! * coefficient sum `G(r) = sum |a_n X_n| r^n`,
//! * maximum modulus `M(r) = max_{|z|=r} |f(z)|`.
//!
//! They satisfy `mu <= S <= G`, `mu <= M <= G` pointwise. Everything is
//! computed in the log domain; the only linear-scale arithmetic happens on
//! circle samples after rescaling by the maximal term.
//!
//! Every functional that depends on the whole tail (S, G, M) first requires
//! a truncation certificate at the requested radius, so a stored prefix that
//! is too short for the radius fails loudly instead of silently undershooting.

use rustfft::num_complex::Complex64;

use crate::circle;
use crate::error::{Error, Result};
use crate::logdomain::{log_sum_exp, LogComplex};
use crate::series::{self, CoefficientSequence, TRUNCATION_WINDOW};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    GeometricPlane,
    ApproachDisk,
    Explicit,
}

/// Strictly increasing radii inside a common domain.
#[derive(Debug, Clone)]
pub struct RadiusGrid {
    radii: Vec<f64>,
    kind: GridKind,
    domain_radius: f64,
}

impl RadiusGrid {
    /// `r_i = r0 * ratio^i` for `i < count`; plane grids.
    pub fn geometric_plane(r0: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::Domain(format!("grid start must be positive and finite, got {r0}")));
        }
        if !(ratio > 1.0) || !ratio.is_finite() {
            return Err(Error::Domain(format!("grid ratio must exceed 1, got {ratio}")));
        }
        if count == 0 {
            return Err(Error::Domain("grid needs at least one radius".into()));
        }
        let radii: Vec<f64> = (0..count).map(|i| r0 * ratio.powi(i as i32)).collect();
        if !radii[count - 1].is_finite() {
            return Err(Error::Domain("grid overflows f64".into()));
        }
        Ok(Self { radii, kind: GridKind::GeometricPlane, domain_radius: f64::INFINITY })
    }

    /// `r_i = 1 - (1 - r0) * sigma^i`: geometric approach to the unit circle.
    pub fn approach_disk(r0: f64, sigma: f64, count: usize) -> Result<Self> {
        if !(r0 > 0.0 && r0 < 1.0) {
            return Err(Error::Domain(format!("disk grid start must lie in (0,1), got {r0}")));
        }
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::Domain(format!("approach factor must lie in (0,1), got {sigma}")));
        }
        if count == 0 {
            return Err(Error::Domain("grid needs at least one radius".into()));
        }
        let gap = 1.0 - r0;
        let radii = (0..count).map(|i| 1.0 - gap * sigma.powi(i as i32)).collect();
        Ok(Self { radii, kind: GridKind::ApproachDisk, domain_radius: 1.0 })
    }

    /// Explicit strictly increasing radii in `(0, domain_radius)`.
    pub fn explicit(radii: Vec<f64>, domain_radius: f64) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::Domain("grid needs at least one radius".into()));
        }
        for &r in &radii {
            if !(r > 0.0) || !r.is_finite() || r >= domain_radius {
                return Err(Error::Domain(format!(
                    "grid radius {r} outside (0, {domain_radius})"
                )));
            }
        }
        if radii.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain("grid radii must be strictly increasing".into()));
        }
        Ok(Self { radii, kind: GridKind::Explicit, domain_radius })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructors demand at least one radius
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MaxTerm {
    /// `ln mu(r)`.
    pub log_mu: f64,
    /// Central index: the (first) index attaining the maximal term.
    pub argmax: usize,
}

/// Maximal term and its index. Requires `0 < r < domain_radius`.
pub fn max_term(
    seq: &CoefficientSequence,
    mult: Option<&[LogComplex]>,
    r: f64,
) -> Result<MaxTerm> {
    validate_radius(seq, r)?;
    validate_mult(seq, mult)?;
    let terms = series::term_logs(seq, mult, r);
    max_term_of(&terms)
}

fn max_term_of(terms: &[f64]) -> Result<MaxTerm> {
    let (argmax, &log_mu) = terms
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    if log_mu == f64::NEG_INFINITY {
        return Err(Error::ZeroSeries);
    }
    Ok(MaxTerm { log_mu, argmax })
}

/// `ln S(r)`, gated on a truncation certificate at `(r, tol)`.
pub fn s_norm(
    seq: &CoefficientSequence,
    mult: Option<&[LogComplex]>,
    r: f64,
    tol: f64,
) -> Result<f64> {
    validate_radius(seq, r)?;
    series::truncation_index_with(seq, mult, r, tol)?;
    Ok(s_of(&series::term_logs(seq, mult, r)))
}

/// `ln G(r)`, gated on a truncation certificate at `(r, tol)`.
pub fn g_norm(
    seq: &CoefficientSequence,
    mult: Option<&[LogComplex]>,
    r: f64,
    tol: f64,
) -> Result<f64> {
    validate_radius(seq, r)?;
    series::truncation_index_with(seq, mult, r, tol)?;
    Ok(log_sum_exp(&series::term_logs(seq, mult, r)))
}

fn s_of(terms: &[f64]) -> f64 {
    let doubled: Vec<f64> = terms.iter().map(|&t| 2.0 * t).collect();
    0.5 * log_sum_exp(&doubled)
}

#[derive(Debug, Clone, Copy)]
pub struct MaxModOptions {
    /// Lower bound on the number of FFT samples (rounded up to a power of
    /// two); 0 accepts the density-based default of 16 per coefficient.
    pub min_samples: usize,
    /// Golden-section refinement rounds around the best sample.
    pub refine_rounds: usize,
}

impl Default for MaxModOptions {
    fn default() -> Self {
        Self { min_samples: 0, refine_rounds: 3 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MaxModulus {
    /// `ln M(r)`.
    pub log_max: f64,
    /// Angle attaining the sampled maximum, in `[-pi, pi)`.
    pub theta: f64,
    /// FFT samples used.
    pub samples: usize,
    /// Truncation index `N*` certified at this radius.
    pub truncation_used: usize,
}

/// `ln M(r)` by dense circle sampling plus local refinement.
///
/// The series is cut at `N* + TRUNCATION_WINDOW` (certified so the dropped
/// tail is below `tol` relative to the maximal term), rescaled by the maximal
/// term, and sampled at `>= 16` points per kept coefficient.
pub fn max_modulus(
    seq: &CoefficientSequence,
    mult: Option<&[LogComplex]>,
    r: f64,
    tol: f64,
    opts: &MaxModOptions,
) -> Result<MaxModulus> {
    validate_radius(seq, r)?;
    let nstar = series::truncation_index_with(seq, mult, r, tol)?;
    let terms = series::term_logs(seq, mult, r);
    Ok(max_modulus_of(seq, mult, &terms, nstar, opts))
}

fn max_modulus_of(
    seq: &CoefficientSequence,
    mult: Option<&[LogComplex]>,
    terms: &[f64],
    nstar: usize,
    opts: &MaxModOptions,
) -> MaxModulus {
    let n_eff = (nstar + TRUNCATION_WINDOW).min(terms.len() - 1);
    let scale = terms[..=n_eff].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let coeffs = cartesian_coeffs(seq, mult, terms, n_eff, scale);
    let sup = circle::sup_trig_poly(&coeffs, opts.min_samples, opts.refine_rounds);
    MaxModulus {
        log_max: scale + sup.max_abs.ln(),
        theta: sup.theta,
        samples: sup.samples,
        truncation_used: nstar,
    }
}

/// Rescaled cartesian coefficients `exp(t_k - scale) e^{i phase_k}` of the
/// circle polynomial, for indices `0..=n_eff`.
fn cartesian_coeffs(
    seq: &CoefficientSequence,
    mult: Option<&[LogComplex]>,
    terms: &[f64],
    n_eff: usize,
    scale: f64,
) -> Vec<Complex64> {
    (0..=n_eff)
        .map(|k| {
            if terms[k] == f64::NEG_INFINITY {
                return Complex64::new(0.0, 0.0);
            }
            let mut ang = seq.phase()[k];
            if let Some(m) = mult {
                ang += m[k].phase;
            }
            Complex64::from_polar((terms[k] - scale).exp(), ang)
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct ParsevalReport {
    /// `ln S(r)` from the stored coefficients directly.
    pub log_s_direct: f64,
    /// `ln` of the root mean square of `|f|` over the circle samples.
    pub log_s_sampled: f64,
    /// `|exp(log_s_sampled - log_s_direct) - 1|`.
    pub rel_err: f64,
    pub samples: usize,
}

/// Cross-check of the circle sampler against Parseval's identity: the mean
/// of `|f|^2` over equispaced samples must equal `sum |a_n X_n|^2 r^{2n}`.
pub fn parseval_check(
    seq: &CoefficientSequence,
    mult: Option<&[LogComplex]>,
    r: f64,
    tol: f64,
    min_samples: usize,
) -> Result<ParsevalReport> {
    validate_radius(seq, r)?;
    let nstar = series::truncation_index_with(seq, mult, r, tol)?;
    let terms = series::term_logs(seq, mult, r);
    let n_eff = (nstar + TRUNCATION_WINDOW).min(terms.len() - 1);
    let scale = terms[..=n_eff].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let coeffs = cartesian_coeffs(seq, mult, &terms, n_eff, scale);
    let m = circle::sample_count(coeffs.len(), min_samples);
    let log_s_sampled = scale + 0.5 * circle::mean_power(&coeffs, m).ln();
    // Direct sum over *all* stored terms: the comparison also certifies that
    // the cut tail was negligible, not just that the FFT is wired correctly.
    let log_s_direct = s_of(&terms);
    let rel_err = ((log_s_sampled - log_s_direct).exp() - 1.0).abs();
    Ok(ParsevalReport { log_s_direct, log_s_sampled, rel_err, samples: m })
}

#[derive(Debug, Clone)]
pub struct GrowthRecord {
    pub r: f64,
    pub log_mu: f64,
    pub argmax: usize,
    pub log_s: f64,
    pub log_g: f64,
    pub log_m: f64,
    pub truncation_used: usize,
}

/// All four growth functionals along a radius grid.
#[derive(Debug, Clone)]
pub struct GrowthProfile {
    pub records: Vec<GrowthRecord>,
    pub domain_radius: f64,
}

impl GrowthProfile {
    pub fn radii(&self) -> Vec<f64> {
        self.records.iter().map(|rec| rec.r).collect()
    }

    /// CSV rows `r,log_mu,log_S,log_G,log_M,N_trunc`.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "r,log_mu,log_S,log_G,log_M,N_trunc")?;
        for rec in &self.records {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                crate::fmtnum::sig17(rec.r),
                crate::fmtnum::sig17(rec.log_mu),
                crate::fmtnum::sig17(rec.log_s),
                crate::fmtnum::sig17(rec.log_g),
                crate::fmtnum::sig17(rec.log_m),
                rec.truncation_used
            )?;
        }
        Ok(())
    }
}

/// Profile the series over the grid. The truncation certificate is re-issued
/// per radius; the first radius without one aborts the profile with
/// [`Error::InsufficientTruncation`] carrying that radius.
pub fn growth_profile(
    seq: &CoefficientSequence,
    mult: Option<&[LogComplex]>,
    grid: &RadiusGrid,
    tol: f64,
    opts: &MaxModOptions,
) -> Result<GrowthProfile> {
    validate_mult(seq, mult)?;
    let mut records = Vec::with_capacity(grid.len());
    for &r in grid.radii() {
        validate_radius(seq, r)?;
        let nstar = series::truncation_index_with(seq, mult, r, tol)?;
        let terms = series::term_logs(seq, mult, r);
        let mt = max_term_of(&terms)?;
        let mm = max_modulus_of(seq, mult, &terms, nstar, opts);
        records.push(GrowthRecord {
            r,
            log_mu: mt.log_mu,
            argmax: mt.argmax,
            log_s: s_of(&terms),
            log_g: log_sum_exp(&terms),
            log_m: mm.log_max,
            truncation_used: nstar,
        });
    }
    Ok(GrowthProfile { records, domain_radius: seq.domain_radius() })
}

fn validate_radius(seq: &CoefficientSequence, r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() || r >= seq.domain_radius() {
        return Err(Error::Domain(format!(
            "radius {r} outside (0, {}) for this series",
            seq.domain_radius()
        )));
    }
    Ok(())
}

fn validate_mult(seq: &CoefficientSequence, mult: Option<&[LogComplex]>) -> Result<()> {
    if let Some(m) = mult {
        if m.len() < seq.len() {
            return Err(Error::Domain(format!(
                "{} multipliers for {} coefficients",
                m.len(),
                seq.len()
            )));
        }
    }
    Ok(())
}
