//! Power series carried in log-polar form.
//!
//! A series `f(z) = sum a_n z^n` is stored as `log|a_n|` and `arg a_n`. All
//! growth analysis happens on the logs, so entire functions can be followed
//! far past the overflow range of linear `f64` coefficients. A coefficient
//! equal to zero is encoded as `log|a_n| = -inf`.

use crate::dynamics::WeightSequence;
use crate::error::{Error, Result};
use crate::logdomain::{wrap_phase, LogComplex};

/// Number of consecutive sub-threshold terms required to confirm that a
/// series has been truncated safely at a radius.
pub const TRUNCATION_WINDOW: usize = 50;

/// Default per-term truncation tolerance (relative to the maximum term).
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;

/// Coefficients of a power series in log-polar form.
///
/// Invariants: `log_abs` and `phase` have equal length >= 1, phases lie in
/// `[-pi, pi)`, and (outside of the explicit [`zero`](Self::zero) element)
/// at least one coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    log_abs: Vec<f64>,
    phase: Vec<f64>,
    domain_radius: f64,
}

impl CoefficientSequence {
    /// Validating constructor from log moduli and phases.
    ///
    /// Rejects empty input, mismatched lengths, NaN/+inf entries, a
    /// non-positive domain radius, and the all-zero sequence.
    pub fn new(log_abs: Vec<f64>, phase: Vec<f64>, domain_radius: f64) -> Result<Self> {
        if log_abs.is_empty() {
            return Err(Error::InvalidSeries("no coefficients".into()));
        }
        if log_abs.len() != phase.len() {
            return Err(Error::InvalidSeries(format!(
                "log_abs has {} entries but phase has {}",
                log_abs.len(),
                phase.len()
            )));
        }
        if !(domain_radius > 0.0) {
            return Err(Error::InvalidSeries(format!(
                "domain radius must be positive, got {domain_radius}"
            )));
        }
        if log_abs.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::InvalidSeries("log_abs entries must be finite or -inf".into()));
        }
        if phase.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries("phase entries must be finite".into()));
        }
        if log_abs.iter().all(|&v| v == f64::NEG_INFINITY) {
            return Err(Error::ZeroSeries);
        }
        let phase = log_abs
            .iter()
            .zip(phase)
            .map(|(&l, p)| if l == f64::NEG_INFINITY { 0.0 } else { wrap_phase(p) })
            .collect();
        Ok(CoefficientSequence {
            log_abs,
            phase,
            domain_radius,
        })
    }

    /// The zero series (single coefficient 0). This is the degenerate image
    /// of a constant under the backward shift; growth operations reject it.
    pub fn zero(domain_radius: f64) -> Self {
        CoefficientSequence {
            log_abs: vec![f64::NEG_INFINITY],
            phase: vec![0.0],
            domain_radius,
        }
    }

    /// Construction without the nonzero check, for internal callers whose
    /// outputs may legitimately be the zero series (shift images, orbit
    /// sections). Wraps phases; zero coefficients get phase 0.
    pub(crate) fn from_raw(log_abs: Vec<f64>, phase: Vec<f64>, domain_radius: f64) -> Self {
        debug_assert_eq!(log_abs.len(), phase.len());
        debug_assert!(!log_abs.is_empty());
        let phase = log_abs
            .iter()
            .zip(phase)
            .map(|(&l, p)| if l == f64::NEG_INFINITY { 0.0 } else { wrap_phase(p) })
            .collect();
        CoefficientSequence { log_abs, phase, domain_radius }
    }

    pub fn len(&self) -> usize {
        self.log_abs.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one coefficient
    }

    /// True when every stored coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.log_abs.iter().all(|&v| v == f64::NEG_INFINITY)
    }

    /// True when some coefficient at index >= 1 is nonzero, i.e. the series
    /// is not a constant. Growth theorems assume this; it is a query rather
    /// than a construction-time requirement.
    pub fn non_constant(&self) -> bool {
        self.log_abs[1..].iter().any(|&v| v > f64::NEG_INFINITY)
    }

    pub fn log_abs(&self) -> &[f64] {
        &self.log_abs
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    /// Radius of the domain the series is considered on (`inf` = whole plane).
    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    /// Coefficient `n` as a log-polar complex number.
    pub fn coefficient(&self, n: usize) -> LogComplex {
        LogComplex::new(self.log_abs[n], self.phase[n])
    }

    /// Writes the coefficients as CSV rows `n,log_abs,phase`.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "n,log_abs,phase")?;
        for n in 0..self.len() {
            writeln!(
                out,
                "{},{},{}",
                n,
                crate::fmtnum::sig17(self.log_abs[n]),
                crate::fmtnum::sig17(self.phase[n])
            )?;
        }
        Ok(())
    }
}

/// `sum z^n / n!` truncated at index `n`: `log|a_k| = -ln Gamma(k+1)`.
pub fn make_exp_series(n: usize) -> CoefficientSequence {
    let log_abs = (0..=n)
        .map(|k| -statrs::function::gamma::ln_gamma(k as f64 + 1.0))
        .collect();
    CoefficientSequence {
        log_abs,
        phase: vec![0.0; n + 1],
        domain_radius: f64::INFINITY,
    }
}

/// `sum z^n` truncated at index `n`; the domain is the unit disk.
pub fn make_geometric_series(n: usize) -> CoefficientSequence {
    CoefficientSequence {
        log_abs: vec![0.0; n + 1],
        phase: vec![0.0; n + 1],
        domain_radius: 1.0,
    }
}

/// The comparison series of a weighted backward shift:
/// `a_k = 1 / (w_1 w_2 ... w_k)`, truncated at index `n`.
///
/// Requires the weights to be cached at least to `n`.
pub fn make_weight_series(w: &WeightSequence, n: usize) -> Result<CoefficientSequence> {
    if w.cached_len() <= n {
        return Err(Error::Domain(format!(
            "weight cache holds {} prefix products, need {}",
            w.cached_len(),
            n + 1
        )));
    }
    let log_abs = (0..=n).map(|k| -w.prefix_log_abs(k)).collect();
    let phase = (0..=n).map(|k| wrap_phase(-w.prefix_phase(k))).collect();
    Ok(CoefficientSequence {
        log_abs,
        phase,
        domain_radius: w.space().domain_radius(),
    })
}

/// Log of the term `|a_n X_n| r^n` at index `n`; `-inf` for zero terms.
#[inline]
pub(crate) fn term_log(seq: &CoefficientSequence, mult: Option<&[LogComplex]>, n: usize, ln_r: f64) -> f64 {
    let m = mult.map_or(0.0, |m| m[n].log_abs);
    let base = seq.log_abs[n];
    if base == f64::NEG_INFINITY || m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    base + m + n as f64 * ln_r
}

/// Logs of all stored terms `|a_n X_n| r^n` at radius `r >= 0`; the constant
/// term survives `r = 0`.
pub(crate) fn term_logs(seq: &CoefficientSequence, mult: Option<&[LogComplex]>, r: f64) -> Vec<f64> {
    let ln_r = r.ln();
    (0..seq.len())
        .map(|k| {
            if k == 0 {
                term_log(seq, mult, 0, 0.0)
            } else {
                term_log(seq, mult, k, ln_r)
            }
        })
        .collect()
}

/// Smallest index `N*` whose following [`TRUNCATION_WINDOW`] stored terms all
/// fall below `mu_f(r) * tol`, scanning from the maximal term onward.
///
/// Truncating the series after `N*` changes any of the growth functionals at
/// `r` by a relative amount on the order of `tol`. Errors with
/// [`Error::InsufficientTruncation`] when the stored prefix never exhibits a
/// full confirming window.
pub fn truncation_index(seq: &CoefficientSequence, r: f64, tol: f64) -> Result<usize> {
    truncation_index_with(seq, None, r, tol)
}

/// [`truncation_index`] for a multiplied series `a_n X_n`.
pub fn truncation_index_with(
    seq: &CoefficientSequence,
    mult: Option<&[LogComplex]>,
    r: f64,
    tol: f64,
) -> Result<usize> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("truncation radius must be positive and finite, got {r}")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("truncation tolerance must lie in (0,1), got {tol}")));
    }
    if let Some(m) = mult {
        if m.len() < seq.len() {
            return Err(Error::Domain(format!(
                "{} multipliers for {} coefficients",
                m.len(),
                seq.len()
            )));
        }
    }
    let ln_r = r.ln();
    let n = seq.len();
    let terms: Vec<f64> = (0..n).map(|k| term_log(seq, mult, k, ln_r)).collect();
    let (argmax, &log_mu) = terms
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    if log_mu == f64::NEG_INFINITY {
        return Err(Error::ZeroSeries);
    }
    let threshold = log_mu + tol.ln();

    // First index at or after the maximal term whose entire following window
    // sits below the threshold.
    let mut below_run = 0usize; // consecutive below-threshold terms ending at k
    for (k, &t) in terms.iter().enumerate().skip(argmax + 1) {
        if t < threshold {
            below_run += 1;
        } else {
            below_run = 0;
        }
        if below_run >= TRUNCATION_WINDOW && k >= argmax + TRUNCATION_WINDOW {
            return Ok(k - TRUNCATION_WINDOW);
        }
    }

    // Suggest a larger N from the tail's average log-slope.
    let last = n - 1;
    let lookback = (n / 4).clamp(1, 200).min(last);
    let slope = (terms[last] - terms[last - lookback]) / lookback as f64;
    let suggested = if slope < -1e-9 && terms[last] > threshold {
        let extra = ((threshold - terms[last]) / slope).ceil() as usize;
        (last + extra + TRUNCATION_WINDOW + 1).saturating_add(extra / 5)
    } else {
        n.saturating_mul(4)
    };
    Err(Error::InsufficientTruncation {
        radius: r,
        stored: n,
        suggested,
    })
}

/// Evaluates `f(r e^{i theta})` (optionally with multipliers `X_n`) by
/// rescaled accumulation: every term is divided by the maximal term before
/// summation, so the result is exact in log scale even when `f` itself
/// overflows `f64`.
pub fn evaluate(
    seq: &CoefficientSequence,
    mult: Option<&[LogComplex]>,
    r: f64,
    theta: f64,
) -> Result<LogComplex> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("evaluation radius must be nonnegative and finite, got {r}")));
    }
    if let Some(m) = mult {
        if m.len() < seq.len() {
            return Err(Error::Domain(format!(
                "{} multipliers for {} coefficients",
                m.len(),
                seq.len()
            )));
        }
    }
    let n = seq.len();
    let terms = term_logs(seq, mult, r);
    let scale = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if scale == f64::NEG_INFINITY {
        return Ok(LogComplex::ZERO);
    }
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for k in 0..n {
        if terms[k] == f64::NEG_INFINITY {
            continue;
        }
        let mag = (terms[k] - scale).exp();
        let mut ang = seq.phase[k] + k as f64 * theta;
        if let Some(m) = mult {
            ang += m[k].phase;
        }
        re += mag * ang.cos();
        im += mag * ang.sin();
    }
    if re == 0.0 && im == 0.0 {
        return Ok(LogComplex::ZERO);
    }
    Ok(LogComplex::new(scale + re.hypot(im).ln(), im.atan2(re)))
}

/// Empirical limsup proxy for the radius of convergence of `a_n X_n`:
/// `exp(-max_n t_n)` with `t_n = log|a_n X_n| / n` over the last half of the
/// stored range. Returns `inf` when the proxy exponents diverge to `-inf`
/// (detected by a monotone window trend).
///
/// Requires at least 32 stored coefficients.
pub fn radius_of_convergence_estimate(
    seq: &CoefficientSequence,
    mult: Option<&[LogComplex]>,
) -> Result<f64> {
    let n = seq.len();
    if n < 32 {
        return Err(Error::Domain(format!(
            "radius estimate needs at least 32 coefficients, got {n}"
        )));
    }
    if let Some(m) = mult {
        if m.len() < n {
            return Err(Error::Domain(format!(
                "{} multipliers for {} coefficients",
                m.len(),
                n
            )));
        }
    }
    let start = n / 2;
    let proxies: Vec<f64> = (start..n)
        .filter_map(|k| {
            let t = term_log(seq, mult, k, 0.0); // log|a_k X_k|
            (t > f64::NEG_INFINITY).then(|| t / k as f64)
        })
        .collect();
    if proxies.is_empty() {
        // The stored tail is identically zero: a polynomial, hence entire.
        return Ok(f64::INFINITY);
    }
    let max = proxies.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // Divergence trend: strictly decreasing quartile maxima with total drop
    // at least 0.25 in log scale.
    if proxies.len() >= 8 {
        let q = proxies.len() / 4;
        let maxima: Vec<f64> = (0..4)
            .map(|i| {
                let lo = i * q;
                let hi = if i == 3 { proxies.len() } else { (i + 1) * q };
                proxies[lo..hi].iter().copied().fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        let monotone = maxima.windows(2).all(|w| w[0] > w[1]);
        if monotone && maxima[0] - maxima[3] >= 0.25 {
            return Ok(f64::INFINITY);
        }
    }
    Ok((-max).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_series_matches_direct_log_factorial() {
        // Oracle: ln 20! as a plain sum of logs.
        let direct: f64 = (1..=20).map(|k| (k as f64).ln()).sum();
        let seq = make_exp_series(20);
        assert_eq!(seq.len(), 21);
        assert!((seq.log_abs()[20] + direct).abs() < 1e-10);
        // Frozen value of the oracle itself.
        assert!((direct - 42.335616460753485).abs() < 1e-9);
        assert_eq!(seq.domain_radius(), f64::INFINITY);
    }

    #[test]
    fn geometric_series_is_unit_coefficients_on_disk() {
        let seq = make_geometric_series(64);
        assert_eq!(seq.len(), 65);
        assert!(seq.log_abs().iter().all(|&v| v == 0.0));
        assert!(seq.phase().iter().all(|&v| v == 0.0));
        assert_eq!(seq.domain_radius(), 1.0);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            CoefficientSequence::new(vec![], vec![], 1.0),
            Err(Error::InvalidSeries(_))
        ));
        assert!(matches!(
            CoefficientSequence::new(vec![0.0], vec![0.0, 0.0], 1.0),
            Err(Error::InvalidSeries(_))
        ));
        assert!(matches!(
            CoefficientSequence::new(vec![f64::NEG_INFINITY; 3], vec![0.0; 3], 1.0),
            Err(Error::ZeroSeries)
        ));
        assert!(matches!(
            CoefficientSequence::new(vec![0.0], vec![f64::NAN], 1.0),
            Err(Error::InvalidSeries(_))
        ));
        assert!(matches!(
            CoefficientSequence::new(vec![0.0], vec![0.0], 0.0),
            Err(Error::InvalidSeries(_))
        ));
    }

    #[test]
    fn constructor_wraps_phases() {
        let seq =
            CoefficientSequence::new(vec![0.0, 0.0], vec![3.0 * std::f64::consts::PI, 0.0], 1.0)
                .unwrap();
        assert!((seq.phase()[0] + std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn zero_element_is_flagged() {
        let z = CoefficientSequence::zero(1.0);
        assert!(z.is_zero());
        assert!(!z.non_constant());
        let c = make_exp_series(4);
        assert!(!c.is_zero());
        assert!(c.non_constant());
    }

    #[test]
    fn truncation_index_exp_at_one() {
        // Oracle: direct scan of 1/n! terms. mu = 1, threshold 1e-12; the
        // first index whose following 50 terms all fall below it is 14
        // (1/15! = 7.65e-13 < 1e-12 <= 1/14!).
        let seq = make_exp_series(120);
        let nstar = truncation_index(&seq, 1.0, 1e-12).unwrap();
        assert_eq!(nstar, 14);
        assert!(nstar <= 40);
        let direct = (0..=120)
            .find(|&n| {
                (n + 1..=n + TRUNCATION_WINDOW)
                    .all(|k| -statrs::function::gamma::ln_gamma(k as f64 + 1.0) < (1e-12f64).ln())
            })
            .unwrap();
        assert_eq!(nstar, direct);
    }

    #[test]
    fn truncation_index_geometric_at_half() {
        // Oracle: 0.5^n < 1e-12 from n = 40 on, so the window clears at 39.
        let seq = make_geometric_series(120);
        let nstar = truncation_index(&seq, 0.5, 1e-12).unwrap();
        assert_eq!(nstar, 39);
        assert!(nstar <= 100);
    }

    #[test]
    fn truncation_insufficient_near_disk_boundary() {
        let seq = make_geometric_series(100);
        let err = truncation_index(&seq, 0.999, 1e-12).unwrap_err();
        match err {
            Error::InsufficientTruncation { stored, suggested, .. } => {
                assert_eq!(stored, 101);
                assert!(suggested > 101);
            }
            other => panic!("expected InsufficientTruncation, got {other:?}"),
        }
    }

    #[test]
    fn evaluate_exp_far_outside_linear_range() {
        let seq = make_exp_series(1000);
        let v = evaluate(&seq, None, 700.0, 0.0).unwrap();
        assert!((v.log_abs - 700.0).abs() < 1e-9);
        assert!(v.phase.abs() < 1e-12);
    }

    #[test]
    fn evaluate_geometric_partial_sum() {
        // Oracle: sum_{n<=120} 0.5^n = 2 - 2^-120.
        let seq = make_geometric_series(120);
        let v = evaluate(&seq, None, 0.5, 0.0).unwrap();
        assert!((v.re() - 2.0).abs() < 1e-12);

        // At theta = pi the series alternates: sum (-0.5)^n = 2/3.
        let v = evaluate(&seq, None, 0.5, std::f64::consts::PI).unwrap();
        assert!((v.re() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn evaluate_at_zero_radius_keeps_constant_term() {
        let seq = make_exp_series(8);
        let v = evaluate(&seq, None, 0.0, 1.3).unwrap();
        assert!(v.log_abs.abs() < 1e-14);
    }

    #[test]
    fn radius_estimate_exp_is_infinite() {
        let seq = make_exp_series(64);
        assert_eq!(radius_of_convergence_estimate(&seq, None).unwrap(), f64::INFINITY);
    }

    #[test]
    fn radius_estimate_geometric_is_one() {
        let seq = make_geometric_series(1000);
        assert_eq!(radius_of_convergence_estimate(&seq, None).unwrap(), 1.0);
    }

    #[test]
    fn radius_estimate_scaled_geometric() {
        // a_n = 2^-n has radius 2; the proxy is exactly ln(1/2) per index.
        let n = 256;
        let log_abs: Vec<f64> = (0..=n).map(|k| -(k as f64) * 2.0f64.ln()).collect();
        let seq = CoefficientSequence::new(log_abs, vec![0.0; n + 1], f64::INFINITY).unwrap();
        let r = radius_of_convergence_estimate(&seq, None).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn radius_estimate_needs_32_coefficients() {
        let seq = make_exp_series(16);
        assert!(matches!(
            radius_of_convergence_estimate(&seq, None),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn csv_dump_shape() {
        let seq = make_geometric_series(2);
        let mut buf = Vec::new();
        seq.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,log_abs,phase");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,"));
    }
}
