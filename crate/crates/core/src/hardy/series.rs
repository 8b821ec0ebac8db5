//! Truncated power series `Σ_{n≤N} a_n zⁿ`.

use num_complex::Complex64;

use crate::disc::{fourier, AngleGrid, CircleFunction};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Product truncated to `len` terms.
pub(crate) fn mul(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == ZERO {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `exp` of a series through `n·s_n = Σ_{j=1}^{n} j·l_j·s_{n−j}`.
pub(crate) fn exp(l: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut s = vec![ZERO; len];
    if len == 0 {
        return s;
    }
    s[0] = l.first().copied().unwrap_or(ZERO).exp();
    for n in 1..len {
        let mut acc = ZERO;
        for j in 1..=n.min(l.len().saturating_sub(1)) {
            acc += l[j] * s[n - j] * j as f64;
        }
        s[n] = acc / n as f64;
    }
    s
}

/// Principal `log` of a series with `a_0 ≠ 0`, from `a·l' = a'`.
pub(crate) fn log(a: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut l = vec![ZERO; len];
    if len == 0 || a.is_empty() {
        return l;
    }
    l[0] = a[0].ln();
    for n in 1..len {
        let an = a.get(n).copied().unwrap_or(ZERO);
        let mut acc = an * n as f64;
        for (j, &lj) in l.iter().enumerate().take(n).skip(1) {
            if let Some(&x) = a.get(n - j) {
                acc -= lj * x * j as f64;
            }
        }
        l[n] = acc / (a[0] * n as f64);
    }
    l
}

/// Horner evaluation.
pub(crate) fn eval(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

/// Samples on the circle; terms beyond the grid's Nyquist frequency are
/// folded onto their aliases so the samples stay exact.
pub(crate) fn boundary(a: &[Complex64], grid: AngleGrid) -> CircleFunction {
    let n = grid.len();
    let mut coeffs = vec![ZERO; n];
    for (m, &c) in a.iter().enumerate() {
        coeffs[fourier::slot(m as i64, n)] += c;
    }
    CircleFunction::from_coefficients(grid, &coeffs)
}

/// Non-negative frequency part of boundary samples as a series of length
/// `n/2 + 1`.
pub(crate) fn from_boundary(bf: &CircleFunction) -> Vec<Complex64> {
    let n = bf.len();
    let coeffs = bf.coefficients();
    (0..=n / 2).map(|m| coeffs[m]).collect()
}
