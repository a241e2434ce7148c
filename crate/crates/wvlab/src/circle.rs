//! Maximum of a polynomial over a circle.
//!
//! Strategy: evaluate at a dense power-of-two set of equispaced angles with
//! one FFT (at least 16 samples per stored coefficient, so the coarse pass
//! cannot miss a peak of a trigonometric polynomial of that degree by much),
//! then sharpen the best sample with golden-section iterations on the exact
//! single-point evaluation.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

use crate::logdomain::wrap_phase;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Golden-section iterations spent per refinement round. Each round shrinks
/// the bracket (one coarse grid step wide) by phi^14, about 1/800.
const GOLDEN_ITERS_PER_ROUND: usize = 14;

#[derive(Debug, Clone, Copy)]
pub(crate) struct CircleSup {
    /// max |p| over the evaluated angles (linear scale; callers rescale).
    pub max_abs: f64,
    /// Angle attaining the maximum, in [-pi, pi).
    pub theta: f64,
    /// Number of equispaced FFT samples used.
    pub samples: usize,
}

/// Mean of |p|^2 over `m` equispaced angles. For `m` greater than the degree
/// this equals `sum |c_k|^2` exactly (discrete Parseval identity).
pub(crate) fn mean_power(coeffs: &[Complex64], m: usize) -> f64 {
    let buf = fft_samples(coeffs, m);
    buf.iter().map(|v| v.norm_sqr()).sum::<f64>() / m as f64
}

/// p evaluated at the angles `2 pi j / m`, `j = 0..m`. `m` must be a power
/// of two not smaller than `coeffs.len()`.
fn fft_samples(coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    debug_assert!(m.is_power_of_two() && m >= coeffs.len());
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[..coeffs.len()].copy_from_slice(coeffs);
    // The unnormalized inverse transform is sum_k c_k e^{+2 pi i jk/m},
    // i.e. p at the j-th positive angle.
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m));
    fft.process(&mut buf);
    buf
}

/// Sampling size for a polynomial with `len` stored coefficients.
pub(crate) fn sample_count(len: usize, min_samples: usize) -> usize {
    16usize
        .max(len.saturating_mul(16))
        .max(min_samples)
        .next_power_of_two()
}

/// Maximum of |p(e^{i theta})| over the circle for cartesian coefficients.
///
/// `refine_rounds = 0` returns the best of the FFT samples as-is.
pub(crate) fn sup_trig_poly(
    coeffs: &[Complex64],
    min_samples: usize,
    refine_rounds: usize,
) -> CircleSup {
    let m = sample_count(coeffs.len(), min_samples);
    let mut best_j = 0usize;
    let mut best_sq = -1.0f64;
    {
        let buf = fft_samples(coeffs, m);
        for (j, v) in buf.iter().enumerate() {
            let a = v.norm_sqr();
            if a > best_sq {
                best_sq = a;
                best_j = j;
            }
        }
        // buf (the dominant allocation) dies here, before refinement
    }
    let step = std::f64::consts::TAU / m as f64;
    let center = best_j as f64 * step;
    let mut best_abs = best_sq.sqrt();
    let mut best_theta = center;
    if refine_rounds > 0 {
        let (t, v) = golden_max(
            |theta| horner_abs(coeffs, theta),
            center - step,
            center + step,
            GOLDEN_ITERS_PER_ROUND * refine_rounds,
        );
        if v > best_abs {
            best_abs = v;
            best_theta = t;
        }
    }
    CircleSup { max_abs: best_abs, theta: wrap_phase(best_theta), samples: m }
}

/// |p(e^{i theta})| by Horner evaluation.
fn horner_abs(coeffs: &[Complex64], theta: f64) -> f64 {
    let w = Complex64::from_polar(1.0, theta);
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * w + c;
    }
    acc.norm()
}

/// Golden-section search for a maximum of `f` on `[a, b]`, returning the best
/// point ever evaluated (robust even if `f` is not unimodal on the bracket).
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let (mut bx, mut bf) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 > bf {
                bf = f2;
                bx = x2;
            }
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 > bf {
                bf = f1;
                bx = x1;
            }
        }
    }
    (bx, bf)
}
