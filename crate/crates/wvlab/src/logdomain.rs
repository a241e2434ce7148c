//! Log-domain scalars.
//!
//! Every magnitude in this crate is carried as a natural logarithm so that
//! quantities like `exp(700)` or `1e-4000` stay representable. A magnitude of
//! zero is encoded as `f64::NEG_INFINITY`; sums of magnitudes go through
//! [`log_sum_exp`], which rescales by the running maximum before
//! exponentiating.

/// A nonnegative real number stored as its natural log.
///
/// `LogValue(f64::NEG_INFINITY)` is zero. Ordering agrees with the ordering
/// of the underlying magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(pub f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);

    /// Wraps a natural log of a magnitude.
    #[inline]
    pub fn from_ln(ln: f64) -> Self {
        LogValue(ln)
    }

    /// Logs a positive linear value; zero maps to `ZERO`.
    #[inline]
    pub fn from_linear(x: f64) -> Self {
        debug_assert!(x >= 0.0, "LogValue holds magnitudes");
        LogValue(x.ln())
    }

    /// The stored natural log.
    #[inline]
    pub fn ln(self) -> f64 {
        self.0
    }

    /// Back to linear scale; may overflow to `inf` for large logs.
    #[inline]
    pub fn to_linear(self) -> f64 {
        self.0.exp()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Sum of two magnitudes.
    // The names shadow the std operator traits on purpose: these combine
    // the log representations, not the raw floats.
    #[allow(clippy::should_implement_trait)]
    #[inline]
    pub fn add(self, other: LogValue) -> LogValue {
        LogValue(log_add_exp(self.0, other.0))
    }

    /// Product of two magnitudes.
    #[allow(clippy::should_implement_trait)]
    #[inline]
    pub fn mul(self, other: LogValue) -> LogValue {
        // -inf + inf cannot occur: magnitudes are never +inf.
        LogValue(self.0 + other.0)
    }
}

/// A complex number stored as (log of modulus, argument).
///
/// The phase is kept in `[-pi, pi)`; the zero value has `log_abs == -inf`
/// and phase 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub log_abs: f64,
    pub phase: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_abs: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub const ONE: LogComplex = LogComplex {
        log_abs: 0.0,
        phase: 0.0,
    };

    #[inline]
    pub fn new(log_abs: f64, phase: f64) -> Self {
        LogComplex {
            log_abs,
            phase: if log_abs == f64::NEG_INFINITY {
                0.0
            } else {
                wrap_phase(phase)
            },
        }
    }

    /// From a cartesian complex value.
    #[inline]
    pub fn from_cartesian(re: f64, im: f64) -> Self {
        if re == 0.0 && im == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex::new(re.hypot(im).ln(), im.atan2(re))
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    /// Product; log moduli add, phases add (wrapped).
    #[allow(clippy::should_implement_trait)]
    #[inline]
    pub fn mul(self, other: LogComplex) -> LogComplex {
        if self.is_zero() || other.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_abs + other.log_abs, self.phase + other.phase)
    }

    /// Real part in linear scale (may overflow for huge log_abs).
    #[inline]
    pub fn re(self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.log_abs.exp() * self.phase.cos()
        }
    }

    /// Imaginary part in linear scale.
    #[inline]
    pub fn im(self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.log_abs.exp() * self.phase.sin()
        }
    }
}

/// log(exp(a) + exp(b)) without overflow; handles -inf cleanly.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// log(sum_i exp(v_i)) with max rescaling; empty or all -inf gives -inf.
pub fn log_sum_exp(vals: &[f64]) -> f64 {
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = vals.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Reduces an angle to `[-pi, pi)`.
#[inline]
pub fn wrap_phase(theta: f64) -> f64 {
    use std::f64::consts::PI;
    if (-PI..PI).contains(&theta) {
        return theta;
    }
    let two_pi = 2.0 * PI;
    let wrapped = theta - two_pi * ((theta + PI) / two_pi).floor();
    // Rounding can land exactly on pi; fold it back to the closed endpoint.
    if wrapped >= PI {
        -PI
    } else {
        wrapped
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn log_add_exp_matches_direct_sum() {
        let a: f64 = 1.5;
        let b: f64 = -0.3;
        let direct = (a.exp() + b.exp()).ln();
        assert!((log_add_exp(a, b) - direct).abs() < 1e-14);
    }

    #[test]
    fn log_add_exp_handles_zero_operands() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, f64::NEG_INFINITY), f64::NEG_INFINITY);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 2.0), 2.0);
        assert_eq!(log_add_exp(2.0, f64::NEG_INFINITY), 2.0);
    }

    #[test]
    fn log_sum_exp_is_stable_at_large_scale() {
        // 3 * exp(700) would overflow in linear arithmetic.
        let vals = [700.0, 700.0, 700.0];
        let expected = 700.0 + 3.0_f64.ln();
        assert!((log_sum_exp(&vals) - expected).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_empty_and_zero() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY; 4]), f64::NEG_INFINITY);
    }

    #[test]
    fn wrap_phase_endpoints() {
        assert_eq!(wrap_phase(PI), -PI);
        assert_eq!(wrap_phase(-PI), -PI);
        assert_eq!(wrap_phase(0.0), 0.0);
        assert!((wrap_phase(3.0 * PI) - (-PI)).abs() < 1e-12);
    }

    #[test]
    fn log_complex_cartesian_round_trip() {
        let z = LogComplex::from_cartesian(-3.0, 4.0);
        assert!((z.log_abs - 5.0_f64.ln()).abs() < 1e-14);
        assert!((z.re() + 3.0).abs() < 1e-13);
        assert!((z.im() - 4.0).abs() < 1e-13);
        assert_eq!(LogComplex::from_cartesian(0.0, 0.0), LogComplex::ZERO);
    }

    proptest! {
        #[test]
        fn prop_log_add_exp_commutes(a in -50.0..50.0f64, b in -50.0..50.0f64) {
            prop_assert!((log_add_exp(a, b) - log_add_exp(b, a)).abs() < 1e-13);
        }

        #[test]
        fn prop_log_sum_exp_dominates_max(vals in prop::collection::vec(-100.0..100.0f64, 1..40)) {
            let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = log_sum_exp(&vals);
            prop_assert!(lse >= max - 1e-12);
            prop_assert!(lse <= max + (vals.len() as f64).ln() + 1e-12);
        }

        #[test]
        fn prop_wrap_phase_in_range(theta in -1e4..1e4f64) {
            let w = wrap_phase(theta);
            prop_assert!((-PI..PI).contains(&w));
            // Same angle modulo 2*pi.
            let diff = (theta - w) / (2.0 * PI);
            prop_assert!((diff - diff.round()).abs() < 1e-9);
        }

        #[test]
        fn prop_log_complex_mul_matches_cartesian(
            re1 in -5.0..5.0f64, im1 in -5.0..5.0f64,
            re2 in -5.0..5.0f64, im2 in -5.0..5.0f64,
        ) {
            prop_assume!(re1.abs() + im1.abs() > 1e-3);
            prop_assume!(re2.abs() + im2.abs() > 1e-3);
            let a = LogComplex::from_cartesian(re1, im1);
            let b = LogComplex::from_cartesian(re2, im2);
            let p = a.mul(b);
            let (pre, pim) = (re1 * re2 - im1 * im2, re1 * im2 + im1 * re2);
            prop_assert!((p.re() - pre).abs() < 1e-9 * (1.0 + pre.abs()));
            prop_assert!((p.im() - pim).abs() < 1e-9 * (1.0 + pim.abs()));
        }
    }
}
