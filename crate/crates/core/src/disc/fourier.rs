//! Thin FFT helpers with the `c_m = (1/n) Σ f_k e^{-imθ_k}` convention.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type PlanCache = (FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>);

thread_local! {
    static PLANS: RefCell<PlanCache> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        cache
            .entry((n, inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(n)
                } else {
                    planner.plan_fft_forward(n)
                }
            })
            .clone()
    })
}

/// Samples to normalized Fourier coefficients, in FFT order (index `m mod n`).
pub fn forward(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    plan(n, false).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Normalized coefficients (FFT order) back to samples.
pub fn inverse(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coeffs.to_vec();
    plan(buf.len(), true).process(&mut buf);
    buf
}

pub fn forward_real(values: &[f64]) -> Vec<Complex64> {
    let buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&buf)
}

/// Signed frequency of FFT slot `idx` for length `n`; Nyquist maps to `+n/2`.
#[inline]
pub fn frequency(idx: usize, n: usize) -> i64 {
    if idx <= n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// FFT slot of signed frequency `m`.
#[inline]
pub fn slot(m: i64, n: usize) -> usize {
    m.rem_euclid(n as i64) as usize
}

/// Applies a multiplier `mult(m)` to every coefficient of real samples and
/// returns the real part of the result.
pub fn real_multiplier(values: &[f64], mult: impl Fn(i64) -> f64) -> Vec<f64> {
    let n = values.len();
    let mut coeffs = forward_real(values);
    for (idx, c) in coeffs.iter_mut().enumerate() {
        *c *= mult(frequency(idx, n));
    }
    inverse(&coeffs).into_iter().map(|c| c.re).collect()
}

/// Spectral derivative of order `order` of real periodic samples.
pub fn derivative(values: &[f64], order: u32) -> Vec<f64> {
    let n = values.len();
    let mut coeffs = forward_real(values);
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let m = frequency(idx, n);
        // the Nyquist mode has no well-defined odd derivative
        if order % 2 == 1 && 2 * m.unsigned_abs() as usize == n {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        *c *= Complex64::new(0.0, m as f64).powu(order);
    }
    inverse(&coeffs).into_iter().map(|c| c.re).collect()
}
