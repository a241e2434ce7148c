//! Exceptional sets of radii and their logarithmic measures.
//!
//! Growth inequalities in this crate hold outside a set `E` of radii that is
//! small in a logarithmic sense: `int_E dr/r` (plane), `int_E dr/(1-r)`
//! (disk), or the weighted `int_E h(r)/r dr` that subsumes both. This module
//! owns the finite-interval-union representation of `E`, the three measure
//! conventions, the two derivative-bound lemma checkers that produce such
//! sets, and the extraction of witness radii outside `E`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logdomain::log_sum_exp;
use crate::series::{self, CoefficientSequence};

#[derive(Clone)]
enum HKind {
    ConstantOne,
    DiskReciprocal,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// Weight function `h` for the unified measure `int h(r)/r dr`.
///
/// Carries a lower cutoff `rho > 0` (the reference integral
/// `int_rho^R h(r)/r dr` must diverge at the `R` end; the cutoff anchors it
/// away from the `1/r` singularity at 0) and the domain end `R`.
#[derive(Clone)]
pub struct HWeight {
    kind: HKind,
    lower_cutoff: f64,
    domain_radius: f64,
}

impl fmt::Debug for HWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            HKind::ConstantOne => "constant_one",
            HKind::DiskReciprocal => "disk_reciprocal",
            HKind::Custom(_) => "custom",
        };
        write!(f, "HWeight({name}, rho={}, R={})", self.lower_cutoff, self.domain_radius)
    }
}

impl HWeight {
    /// `h = 1` on `[1, inf)`: the classical plane convention.
    pub fn constant_one() -> Self {
        Self { kind: HKind::ConstantOne, lower_cutoff: 1.0, domain_radius: f64::INFINITY }
    }

    /// `h(r) = 1/(1-r)` on `[1/2, 1)`.
    ///
    /// Any positive cutoff works for the divergence requirement; 1/2 is a
    /// fixed, documented choice.
    pub fn disk_reciprocal() -> Self {
        Self { kind: HKind::DiskReciprocal, lower_cutoff: 0.5, domain_radius: 1.0 }
    }

    /// Arbitrary positive weight on `[lower_cutoff, domain_radius)`.
    pub fn custom(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lower_cutoff: f64,
        domain_radius: f64,
    ) -> Result<Self> {
        if !(lower_cutoff > 0.0) || !lower_cutoff.is_finite() {
            return Err(Error::Domain(format!(
                "h cutoff must be positive and finite, got {lower_cutoff}"
            )));
        }
        if !(domain_radius > lower_cutoff) {
            return Err(Error::Domain(format!(
                "h domain end {domain_radius} must exceed the cutoff {lower_cutoff}"
            )));
        }
        Ok(Self { kind: HKind::Custom(Arc::new(f)), lower_cutoff, domain_radius })
    }

    pub fn evaluate(&self, r: f64) -> f64 {
        match &self.kind {
            HKind::ConstantOne => 1.0,
            HKind::DiskReciprocal => 1.0 / (1.0 - r),
            HKind::Custom(f) => f(r),
        }
    }

    pub fn lower_cutoff(&self) -> f64 {
        self.lower_cutoff
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    /// `int_rho^upper h(r)/r dr`: the reference integral whose divergence as
    /// `upper -> R` makes "finite h-log measure" a nontrivial statement.
    pub fn reference_integral(&self, upper: f64) -> Result<f64> {
        let set = IntervalSet::from_intervals(vec![(self.lower_cutoff, upper)])?;
        h_log_measure(&set, &MeasureConvention::Unified(self.clone()))
    }
}

/// Finite union of closed intervals on the radius axis, kept sorted and
/// disjoint (touching intervals are merged on construction).
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self { intervals: Vec::new() }
    }

    pub fn from_intervals(raw: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &raw {
            if !a.is_finite() || !b.is_finite() || a > b {
                return Err(Error::InvalidInterval(format!("bad interval [{a}, {b}]")));
            }
        }
        let mut sorted = raw;
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
        for (a, b) in sorted {
            match intervals.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => intervals.push((a, b)),
            }
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn count(&self) -> usize {
        self.intervals.len()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= x && x <= b)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut raw = self.intervals.clone();
        raw.extend_from_slice(&other.intervals);
        IntervalSet::from_intervals(raw).expect("valid inputs stay valid")
    }

    /// Intersection with the window `[lo, hi]`.
    pub fn clip(&self, lo: f64, hi: f64) -> IntervalSet {
        let raw = self
            .intervals
            .iter()
            .filter(|&&(a, b)| b >= lo && a <= hi)
            .map(|&(a, b)| (a.max(lo), b.min(hi)))
            .collect();
        IntervalSet::from_intervals(raw).expect("clipping preserves validity")
    }

    /// CSV rows `a,b`.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "a,b")?;
        for &(a, b) in &self.intervals {
            writeln!(out, "{},{}", crate::fmtnum::sig17(a), crate::fmtnum::sig17(b))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum MeasureConvention {
    /// `int_E dr/r` over `E` inside `[0, inf)`; the part below 1 contributes 0.
    PlaneClassic,
    /// `int_E dr/(1-r)` over `E` inside `[0, 1)`.
    DiskClassic,
    /// `int_E h(r)/r dr` over `E` clipped to `[rho, R)`.
    Unified(HWeight),
}

/// Logarithmic measure of an interval set under the chosen convention.
///
/// Closed forms for the classic conventions and the built-in weights;
/// adaptive Simpson quadrature (tolerance 1e-10 per interval) for custom `h`.
pub fn h_log_measure(set: &IntervalSet, conv: &MeasureConvention) -> Result<f64> {
    let mut total = 0.0;
    for &(a, b) in set.intervals() {
        total += match conv {
            MeasureConvention::PlaneClassic => {
                if a < 0.0 {
                    return Err(Error::Domain(format!(
                        "plane measure needs intervals in [0, inf), got start {a}"
                    )));
                }
                let lo = a.max(1.0);
                if b > lo {
                    (b / lo).ln()
                } else {
                    0.0
                }
            }
            MeasureConvention::DiskClassic => {
                if a < 0.0 || b >= 1.0 {
                    return Err(Error::Domain(format!(
                        "disk measure needs intervals in [0, 1), got [{a}, {b}]"
                    )));
                }
                ((1.0 - a) / (1.0 - b)).ln()
            }
            MeasureConvention::Unified(h) => {
                if b >= h.domain_radius() {
                    return Err(Error::Domain(format!(
                        "interval end {b} reaches the h domain end {}",
                        h.domain_radius()
                    )));
                }
                let lo = a.max(h.lower_cutoff());
                if b <= lo {
                    0.0
                } else {
                    match &h.kind {
                        HKind::ConstantOne => (b / lo).ln(),
                        // antiderivative of 1/(r(1-r)) is ln(r/(1-r))
                        HKind::DiskReciprocal => {
                            (b / (1.0 - b)).ln() - (lo / (1.0 - lo)).ln()
                        }
                        HKind::Custom(f) => {
                            adaptive_simpson(&|r| f(r) / r, lo, b, 1e-10)
                        }
                    }
                }
            }
        };
    }
    Ok(total)
}

/// Adaptive Simpson quadrature with error control by Richardson halving.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(h: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(m - a, fa, flm, fm);
        let right = simpson(b - m, fm, frm, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    if a >= b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    recurse(f, a, b, fa, fm, fb, simpson(b - a, fa, fm, fb), tol, 50)
}

/// Lift of a per-grid-point failure predicate to an interval set: every grid
/// edge with at least one flagged endpoint is included. Conservative by
/// construction (over-counts measure), so finiteness conclusions survive the
/// discretization.
pub fn violation_set(grid: &[f64], flags: &[bool]) -> Result<IntervalSet> {
    if grid.len() != flags.len() {
        return Err(Error::Domain(format!(
            "{} grid points but {} flags",
            grid.len(),
            flags.len()
        )));
    }
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("grid radii must be strictly increasing".into()));
    }
    if grid.len() == 1 {
        return if flags[0] {
            IntervalSet::from_intervals(vec![(grid[0], grid[0])])
        } else {
            Ok(IntervalSet::empty())
        };
    }
    let mut raw = Vec::new();
    for i in 0..grid.len() - 1 {
        if flags[i] || flags[i + 1] {
            raw.push((grid[i], grid[i + 1]));
        }
    }
    IntervalSet::from_intervals(raw)
}

/// Output of the derivative-bound checkers.
#[derive(Debug, Clone)]
pub struct DerivativeSetReport {
    pub set: IntervalSet,
    /// h-log measure of `set` under `Unified(h)`.
    pub measure: f64,
    pub flags: Vec<bool>,
    /// First grid radius where the `g > 1` hypothesis holds.
    pub rho: Option<f64>,
}

/// Radii where `(d/dr) log g` outruns `(h(r)/r) (log g)^{1+delta}`.
///
/// `g` enters as `log g` sampled on the grid; derivatives are centered
/// finite differences (one-sided at the ends). Grid points with
/// `log g <= 0` are outside the lemma's `g > 1` hypothesis and are never
/// flagged. The flagged set is lifted to intervals and measured under
/// `Unified(h)`.
pub fn derivative_exceptional_set(
    log_g: &[f64],
    grid: &[f64],
    h: &HWeight,
    delta: f64,
) -> Result<DerivativeSetReport> {
    if log_g.len() != grid.len() {
        return Err(Error::Domain(format!(
            "{} samples of log g for {} grid points",
            log_g.len(),
            grid.len()
        )));
    }
    if grid.len() < 3 {
        return Err(Error::Domain("derivative check needs at least 3 grid points".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("grid radii must be strictly increasing".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    if log_g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("log g samples must be finite".into()));
    }
    let last = grid.len() - 1;
    if grid[last] >= h.domain_radius() {
        return Err(Error::Domain(format!(
            "grid reaches {} but h is defined below {}",
            grid[last],
            h.domain_radius()
        )));
    }
    let deriv = |i: usize| -> f64 {
        if i == 0 {
            (log_g[1] - log_g[0]) / (grid[1] - grid[0])
        } else if i == last {
            (log_g[last] - log_g[last - 1]) / (grid[last] - grid[last - 1])
        } else {
            (log_g[i + 1] - log_g[i - 1]) / (grid[i + 1] - grid[i - 1])
        }
    };
    let flags: Vec<bool> = (0..grid.len())
        .map(|i| {
            log_g[i] > 0.0
                && deriv(i) > h.evaluate(grid[i]) / grid[i] * log_g[i].powf(1.0 + delta)
        })
        .collect();
    let rho = (0..grid.len()).find(|&i| log_g[i] > 0.0).map(|i| grid[i]);
    let set = violation_set(grid, &flags)?;
    let measure = h_log_measure(&set, &MeasureConvention::Unified(h.clone()))?;
    Ok(DerivativeSetReport { set, measure, flags, rho })
}

/// Radii where the derivative-weighted coefficient sum `sum n |a_n X_n| r^n`
/// outruns `h(r) G(r) (log G(r))^{1+delta}`.
///
/// Works on the modulus majorant of the series, so it applies to arbitrary
/// complex coefficients. Propagates `InsufficientTruncation` from the per-
/// radius adequacy gate.
pub fn series_derivative_check(
    seq: &CoefficientSequence,
    h: &HWeight,
    delta: f64,
    grid: &[f64],
    tol: f64,
) -> Result<DerivativeSetReport> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    if *grid.last().unwrap() >= h.domain_radius() {
        return Err(Error::Domain(format!(
            "grid reaches {} but h is defined below {}",
            grid.last().unwrap(),
            h.domain_radius()
        )));
    }
    let mut flags = Vec::with_capacity(grid.len());
    let mut rho = None;
    for &r in grid {
        series::truncation_index_with(seq, None, r, tol)?;
        let terms = series::term_logs(seq, None, r);
        let weighted: Vec<f64> =
            (1..terms.len()).map(|n| (n as f64).ln() + terms[n]).collect();
        let lhs = log_sum_exp(&weighted);
        let log_g = log_sum_exp(&terms);
        if log_g > 0.0 && rho.is_none() {
            rho = Some(r);
        }
        let flagged = log_g > 0.0
            && lhs > h.evaluate(r).ln() + log_g + (1.0 + delta) * log_g.ln();
        flags.push(flagged);
    }
    let set = violation_set(grid, &flags)?;
    let measure = h_log_measure(&set, &MeasureConvention::Unified(h.clone()))?;
    Ok(DerivativeSetReport { set, measure, flags, rho })
}

/// One witness: the largest grid radius outside `E` whose function values
/// fall in the unit brackets given by `indices`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// `[l, k_1, .., k_m]`: `l <= phi(r) <= l+1`, `k_j <= psi_j(r) <= k_j+1`.
    pub indices: Vec<i64>,
    pub r: f64,
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub witnesses: Vec<Witness>,
    /// True when `E` swallows the top of the grid, so no witness covers it.
    pub starved: bool,
}

/// Extracts, for every realized index tuple, the largest grid radius outside
/// `E` whose `phi` and `psi_j` values bracket the tuple.
///
/// Guarantees on the output (verified by the property tests): every witness
/// lies outside `E`; its values bracket its indices; and every grid point
/// outside `E` has a witness at or above it whose values exceed the point's
/// by at most 1 in each coordinate.
pub fn witness_radii(
    phi: &[f64],
    psis: &[&[f64]],
    e_set: &IntervalSet,
    grid: &[f64],
) -> Result<WitnessReport> {
    if phi.len() != grid.len() || psis.iter().any(|p| p.len() != grid.len()) {
        return Err(Error::Domain("function samples must match the grid length".into()));
    }
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("grid radii must be strictly increasing".into()));
    }
    for samples in std::iter::once(&phi).chain(psis.iter().map(|p| p as &&[f64])) {
        if samples.iter().any(|v| !v.is_finite() || *v < 1.0) {
            return Err(Error::Domain("bracketing functions must be finite and >= 1".into()));
        }
        if samples.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain("bracketing functions must be non-decreasing".into()));
        }
    }

    // A value sitting exactly on an integer belongs to the bracket above and
    // the bracket below; indices stay >= 1.
    fn brackets(x: f64) -> Vec<i64> {
        let fl = x.floor() as i64;
        if x == x.floor() && fl >= 2 {
            vec![fl, fl - 1]
        } else {
            vec![fl]
        }
    }

    let mut buckets: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
    for (i, &r) in grid.iter().enumerate() {
        if e_set.contains(r) {
            continue;
        }
        let mut options: Vec<Vec<i64>> = brackets(phi[i]).into_iter().map(|l| vec![l]).collect();
        for psi in psis {
            let mut extended = Vec::new();
            for key in &options {
                for k in brackets(psi[i]) {
                    let mut next = key.clone();
                    next.push(k);
                    extended.push(next);
                }
            }
            options = extended;
        }
        for key in options {
            buckets
                .entry(key)
                .and_modify(|best| {
                    if r > *best {
                        *best = r;
                    }
                })
                .or_insert(r);
        }
    }
    let witnesses = buckets.into_iter().map(|(indices, r)| Witness { indices, r }).collect();
    let starved = e_set.contains(*grid.last().unwrap());
    Ok(WitnessReport { witnesses, starved })
}
