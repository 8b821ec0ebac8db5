use super::circle::CircleFunction;
use super::grid::PolarGrid;
use crate::error::{DiscError, Result};

/// Scalar field on a [`PolarGrid`]: one value per `(ring, angle)` node plus
/// the center.
///
/// Ring values must be finite. The center may be `-inf` for fields with a
/// logarithmic pole at the origin (the Green function); such fields are
/// evaluated analytically near the center by their owners.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskField {
    grid: PolarGrid,
    center: f64,
    values: Vec<f64>,
}

impl DiskField {
    pub fn new(grid: PolarGrid, center: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_radii() * grid.n_angles() {
            return Err(DiscError::GridMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.n_radii(),
                grid.n_angles()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(DiscError::NonFinite { index });
        }
        if center.is_nan() {
            return Err(DiscError::NonFinite { index: usize::MAX });
        }
        Ok(Self {
            grid,
            center,
            values,
        })
    }

    /// Samples `f(r, θ)` on every ring; the center uses `f(0, 0)`.
    pub fn from_fn(grid: PolarGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.n_radii() * grid.n_angles());
        for i in 0..grid.n_radii() {
            let r = grid.radius(i);
            for k in 0..grid.n_angles() {
                values.push(f(r, grid.theta(k)));
            }
        }
        Self {
            grid,
            center: f(0.0, 0.0),
            values,
        }
    }

    pub fn constant(grid: PolarGrid, value: f64) -> Self {
        Self::from_fn(grid, |_, _| value)
    }

    pub fn zeros(grid: PolarGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    #[inline]
    pub fn grid(&self) -> PolarGrid {
        self.grid
    }

    #[inline]
    pub fn center(&self) -> f64 {
        self.center
    }

    #[inline]
    pub fn at(&self, ring: usize, k: usize) -> f64 {
        self.values[ring * self.grid.n_angles() + k]
    }

    #[inline]
    pub fn ring(&self, ring: usize) -> &[f64] {
        let n = self.grid.n_angles();
        &self.values[ring * n..(ring + 1) * n]
    }

    pub(crate) fn ring_mut(&mut self, ring: usize) -> &mut [f64] {
        let n = self.grid.n_angles();
        &mut self.values[ring * n..(ring + 1) * n]
    }

    pub(crate) fn set_center(&mut self, value: f64) {
        self.center = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Boundary row `r = 1` as a circle function.
    pub fn boundary(&self) -> CircleFunction {
        CircleFunction::from_real(
            self.grid.angles(),
            self.ring(self.grid.n_radii() - 1).to_vec(),
        )
        .expect("ring length matches the angle grid")
    }

    /// Value at ray node `j`: `j = 0` is the center, `j >= 1` is ring `j - 1`.
    #[inline]
    pub fn node(&self, j: usize, k: usize) -> f64 {
        if j == 0 {
            self.center
        } else {
            self.at(j - 1, k)
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            center: f(self.center),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &DiskField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            center: f(self.center, other.center),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(self.center, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(self.center, f64::max)
    }

    /// Position `(ring, angle)` and value of the smallest ring value.
    pub fn argmin(&self) -> (usize, usize, f64) {
        let n = self.grid.n_angles();
        let (idx, v) =
            self.values
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::INFINITY),
                    |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
                );
        (idx / n, idx % n, v)
    }

    /// Cubic Lagrange interpolation along ray `k` at radius `r ∈ [0, 1]`.
    pub fn ray_value(&self, k: usize, r: f64) -> f64 {
        let (j0, w) = self.cubic_weights(r);
        (0..4)
            .filter(|&s| w[s] != 0.0)
            .map(|s| w[s] * self.node(j0 + s, k))
            .sum()
    }

    /// Derivative in `r` of the cubic interpolant along ray `k`.
    pub fn ray_derivative(&self, k: usize, r: f64) -> f64 {
        let (j0, w) = self.cubic_derivative_weights(r);
        (0..4).map(|s| w[s] * self.node(j0 + s, k)).sum()
    }

    /// Ring of interpolated values at radius `r`.
    pub fn ring_at(&self, r: f64) -> Vec<f64> {
        let (j0, w) = self.cubic_weights(r);
        (0..self.grid.n_angles())
            .map(|k| (0..4).map(|s| w[s] * self.node(j0 + s, k)).sum())
            .collect()
    }

    /// Local bicubic interpolation at `(r, θ)`: cubic along the four nearest
    /// rays, then cubic across them. Exact on grid rays.
    pub fn value_at(&self, r: f64, theta: f64) -> f64 {
        let n = self.grid.n_angles();
        let p = theta.rem_euclid(std::f64::consts::TAU) / self.grid.angles().spacing();
        let k0 = p.floor();
        let x = p - k0 + 1.0;
        let w = lagrange4(x);
        (0..4)
            .map(|s| {
                let k = (k0 as isize - 1 + s as isize).rem_euclid(n as isize) as usize;
                if w[s] == 0.0 {
                    0.0
                } else {
                    w[s] * self.ray_value(k, r)
                }
            })
            .sum()
    }

    fn stencil_start(&self, r: f64) -> usize {
        let n = self.grid.n_radii();
        let pos = (r * n as f64).floor() as isize - 1;
        pos.clamp(0, n as isize - 3) as usize
    }

    fn cubic_weights(&self, r: f64) -> (usize, [f64; 4]) {
        let j0 = self.stencil_start(r);
        let x = r * self.grid.n_radii() as f64 - j0 as f64;
        (j0, lagrange4(x))
    }

    fn cubic_derivative_weights(&self, r: f64) -> (usize, [f64; 4]) {
        let j0 = self.stencil_start(r);
        let n = self.grid.n_radii() as f64;
        let x = r * n - j0 as f64;
        let mut w = [0.0; 4];
        for (s, ws) in w.iter_mut().enumerate() {
            let denom: f64 = (0..4)
                .filter(|&t| t != s)
                .map(|t| s as f64 - t as f64)
                .product();
            let mut sum = 0.0;
            for skip in 0..4 {
                if skip == s {
                    continue;
                }
                let mut prod = 1.0;
                for t in 0..4 {
                    if t != s && t != skip {
                        prod *= x - t as f64;
                    }
                }
                sum += prod;
            }
            *ws = sum / denom * n;
        }
        (j0, w)
    }
}

/// Lagrange weights for nodes `0, 1, 2, 3` at `x`.
fn lagrange4(x: f64) -> [f64; 4] {
    let mut w = [0.0; 4];
    for (s, ws) in w.iter_mut().enumerate() {
        let mut prod = 1.0;
        for t in 0..4 {
            if t != s {
                prod *= (x - t as f64) / (s as f64 - t as f64);
            }
        }
        *ws = prod;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_interpolation_is_exact_for_cubics_in_r() {
        let g = PolarGrid::new(16, 16).unwrap();
        let f = DiskField::from_fn(g, |r, t| r * r * r - 2.0 * r + t.cos());
        for &r in &[0.0, 0.01, 0.37, 0.5, 0.93, 1.0] {
            for k in [0usize, 5] {
                let exact = r * r * r - 2.0 * r + g.theta(k).cos();
                // the center is a single node so the θ-term is exact only along ray 0
                if k == 0 || r > 0.2 {
                    assert!((f.ray_value(k, r) - exact).abs() < 1e-12, "r={r} k={k}");
                }
            }
            let d = f.ray_derivative(0, r);
            assert!((d - (3.0 * r * r - 2.0)).abs() < 1e-11, "r={r} d={d}");
        }
    }

    #[test]
    fn bicubic_is_exact_on_rays_and_accurate_between() {
        let g = PolarGrid::new(32, 64).unwrap();
        let f = DiskField::from_fn(g, |r, t| r * r * (2.0 * t).cos());
        assert!((f.value_at(0.5, g.theta(7)) - 0.25 * (2.0 * g.theta(7)).cos()).abs() < 1e-14);
        let t = 1.234;
        assert!((f.value_at(0.6, t) - 0.36 * (2.0 * t).cos()).abs() < 1e-5);
    }

    #[test]
    fn rejects_non_finite_rings() {
        let g = PolarGrid::new(4, 8).unwrap();
        let mut v = vec![0.0; 32];
        v[3] = f64::NAN;
        assert!(DiskField::new(g, 0.0, v).is_err());
    }
}
