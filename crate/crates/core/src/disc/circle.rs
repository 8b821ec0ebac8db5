use num_complex::Complex64;

use super::fourier;
use super::grid::AngleGrid;
use crate::error::{DiscError, Result};

/// Samples of a function on the unit circle at the nodes of an [`AngleGrid`].
///
/// Real-valued functions carry `real = true`; their imaginary parts are
/// exactly zero and their Fourier coefficients are conjugate-symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleFunction {
    grid: AngleGrid,
    values: Vec<Complex64>,
    real: bool,
}

impl CircleFunction {
    pub fn from_real(grid: AngleGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(DiscError::GridMismatch(format!(
                "{} samples for {} angles",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            real: true,
        })
    }

    pub fn from_complex(grid: AngleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(DiscError::GridMismatch(format!(
                "{} samples for {} angles",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            real: false,
        })
    }

    pub fn from_real_fn(grid: AngleGrid, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid,
            values: grid.thetas().map(|t| Complex64::new(f(t), 0.0)).collect(),
            real: true,
        }
    }

    pub fn from_complex_fn(grid: AngleGrid, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid,
            values: grid.thetas().map(f).collect(),
            real: false,
        }
    }

    pub fn constant(grid: AngleGrid, value: f64) -> Self {
        Self::from_real_fn(grid, |_| value)
    }

    /// Builds samples from coefficients indexed by signed frequency.
    pub fn from_frequencies(grid: AngleGrid, terms: &[(i64, Complex64)]) -> Self {
        let n = grid.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for &(m, c) in terms {
            coeffs[fourier::slot(m, n)] += c;
        }
        Self::from_coefficients(grid, &coeffs)
    }

    /// Inverse of [`coefficients`](Self::coefficients).
    pub fn from_coefficients(grid: AngleGrid, coeffs: &[Complex64]) -> Self {
        Self {
            grid,
            values: fourier::inverse(coeffs),
            real: false,
        }
    }

    #[inline]
    pub fn grid(&self) -> AngleGrid {
        self.grid
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn is_real(&self) -> bool {
        self.real
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.re).collect()
    }

    #[inline]
    pub fn value(&self, k: usize) -> Complex64 {
        self.values[k]
    }

    /// Normalized Fourier coefficients in FFT order.
    pub fn coefficients(&self) -> Vec<Complex64> {
        fourier::forward(&self.values)
    }

    /// Coefficient of signed frequency `m`, `|m| <= n/2`.
    pub fn coefficient(&self, m: i64) -> Complex64 {
        self.coefficients()[fourier::slot(m, self.len())]
    }

    /// Largest modulus among strictly negative frequencies.
    pub fn negative_frequency_mass(&self) -> f64 {
        let n = self.len();
        self.coefficients()
            .iter()
            .enumerate()
            .filter(|(idx, _)| fourier::frequency(*idx, n) < 0)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// Marks the samples as real after discarding imaginary parts.
    pub fn into_real(self) -> Self {
        Self {
            grid: self.grid,
            values: self
                .values
                .into_iter()
                .map(|c| Complex64::new(c.re, 0.0))
                .collect(),
            real: true,
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&c| f(c)).collect(),
            real: false,
        }
    }

    pub fn map_real(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .map(|c| Complex64::new(f(c.re), 0.0))
                .collect(),
            real: true,
        }
    }

    pub fn zip_with(
        &self,
        other: &CircleFunction,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.grid != other.grid {
            return Err(DiscError::GridMismatch(format!(
                "{} vs {} angles",
                self.len(),
                other.len()
            )));
        }
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            real: false,
        })
    }

    pub fn mul(&self, other: &CircleFunction) -> Result<Self> {
        let mut out = self.zip_with(other, |a, b| a * b)?;
        out.real = self.real && other.real;
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&c| c * s).collect(),
            real: self.real,
        }
    }

    pub fn abs(&self) -> Self {
        self.map_to_real(|c| c.norm())
    }

    pub fn map_to_real(&self, f: impl Fn(Complex64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .map(|&c| Complex64::new(f(c), 0.0))
                .collect(),
            real: true,
        }
    }

    pub fn sup_distance(&self, other: &CircleFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn min_real(&self) -> f64 {
        self.values
            .iter()
            .map(|c| c.re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_real(&self) -> f64 {
        self.values
            .iter()
            .map(|c| c.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Spectral θ-derivative of order `order` (real part only).
    pub fn derivative(&self, order: u32) -> Self {
        let out = fourier::derivative(&self.real_values(), order);
        Self {
            grid: self.grid,
            values: out.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            real: true,
        }
    }

    /// Trigonometric interpolation onto a grid with more angles.
    pub fn upsample(&self, grid: AngleGrid) -> Result<Self> {
        let n = self.len();
        let m = grid.len();
        if m < n {
            return Err(DiscError::GridMismatch(format!(
                "cannot upsample {n} angles onto {m}"
            )));
        }
        let coeffs = self.coefficients();
        let mut padded = vec![Complex64::new(0.0, 0.0); m];
        for (idx, c) in coeffs.iter().enumerate() {
            let f = fourier::frequency(idx, n);
            if 2 * f.unsigned_abs() as usize == n {
                // split the Nyquist mode evenly
                padded[fourier::slot(f, m)] += c * 0.5;
                padded[fourier::slot(-f, m)] += c * 0.5;
            } else {
                padded[fourier::slot(f, m)] += c;
            }
        }
        let mut out = Self::from_coefficients(grid, &padded);
        if self.real {
            out = out.into_real();
        }
        Ok(out)
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        match self
            .values
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            Some(index) => Err(DiscError::NonFinite { index }),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn real_samples_have_conjugate_symmetric_coefficients() {
        let g = AngleGrid::new(32).unwrap();
        let f = CircleFunction::from_real_fn(g, |t| (2.0 - 2.0 * t.cos()).exp() + t.sin());
        for m in 1..16 {
            let d = f.coefficient(m) - f.coefficient(-m).conj();
            assert!(d.norm() < 1e-12);
        }
    }

    #[test]
    fn upsampling_preserves_trigonometric_polynomials() {
        let g = AngleGrid::new(16).unwrap();
        let f = CircleFunction::from_real_fn(g, |t| 1.0 + (3.0 * t).cos() - 0.5 * (2.0 * t).sin());
        let up = f.upsample(AngleGrid::new(64).unwrap()).unwrap();
        for (k, t) in up.grid().thetas().enumerate() {
            let exact = 1.0 + (3.0 * t).cos() - 0.5 * (2.0 * t).sin();
            assert!((up.value(k).re - exact).abs() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn fourier_round_trip(values in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 64)) {
            let g = AngleGrid::new(64).unwrap();
            let samples: Vec<Complex64> = values.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let f = CircleFunction::from_complex(g, samples.clone()).unwrap();
            let back = CircleFunction::from_coefficients(g, &f.coefficients());
            let scale = samples.iter().map(|c| c.norm()).fold(1.0, f64::max);
            for (a, b) in back.values().iter().zip(&samples) {
                prop_assert!((a - b).norm() <= 1e-12 * scale);
            }
        }
    }
}
