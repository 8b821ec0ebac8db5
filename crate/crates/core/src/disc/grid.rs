use std::f64::consts::TAU;

use crate::error::{DiscError, Result};

/// Uniform grid `θ_k = 2πk/n` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AngleGrid {
    n_angles: usize,
}

impl AngleGrid {
    pub fn new(n_angles: usize) -> Result<Self> {
        if n_angles < 8 || !n_angles.is_power_of_two() {
            return Err(DiscError::InvalidGrid(format!(
                "n_angles must be a power of two >= 8, got {n_angles}"
            )));
        }
        Ok(Self { n_angles })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_angles
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        TAU / self.n_angles as f64
    }

    #[inline]
    pub fn theta(&self, k: usize) -> f64 {
        TAU * k as f64 / self.n_angles as f64
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_angles).map(move |k| self.theta(k))
    }

    /// Grid with twice as many angles.
    pub fn refined(&self) -> Self {
        Self {
            n_angles: 2 * self.n_angles,
        }
    }
}

/// Polar grid of the closed disk: radii `r_i = (i + 1)/n_radii` for
/// `i = 0..n_radii` (the last one exactly 1) plus a distinguished center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolarGrid {
    n_radii: usize,
    angles: AngleGrid,
}

impl PolarGrid {
    /// `n_radii` must be even so composite Simpson applies on `[0, 1]`.
    pub fn new(n_radii: usize, n_angles: usize) -> Result<Self> {
        if n_radii < 4 || !n_radii.is_multiple_of(2) {
            return Err(DiscError::InvalidGrid(format!(
                "n_radii must be even and >= 4, got {n_radii}"
            )));
        }
        Ok(Self {
            n_radii,
            angles: AngleGrid::new(n_angles)?,
        })
    }

    #[inline]
    pub fn n_radii(&self) -> usize {
        self.n_radii
    }

    #[inline]
    pub fn n_angles(&self) -> usize {
        self.angles.len()
    }

    #[inline]
    pub fn angles(&self) -> AngleGrid {
        self.angles
    }

    /// Radial step `h = 1/n_radii`.
    #[inline]
    pub fn step(&self) -> f64 {
        1.0 / self.n_radii as f64
    }

    /// Radius of ring `i`.
    #[inline]
    pub fn radius(&self, i: usize) -> f64 {
        if i + 1 == self.n_radii {
            1.0
        } else {
            (i + 1) as f64 / self.n_radii as f64
        }
    }

    #[inline]
    pub fn theta(&self, k: usize) -> f64 {
        self.angles.theta(k)
    }

    /// Both radial and angular resolution doubled.
    pub fn refined(&self) -> Self {
        Self {
            n_radii: 2 * self.n_radii,
            angles: self.angles.refined(),
        }
    }

    pub(crate) fn check_same(&self, other: &PolarGrid) -> Result<()> {
        if self != other {
            return Err(DiscError::GridMismatch(format!(
                "{}x{} vs {}x{}",
                self.n_radii,
                self.n_angles(),
                other.n_radii,
                other.n_angles()
            )));
        }
        Ok(())
    }
}
