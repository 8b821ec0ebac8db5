use num_complex::Complex64;

use super::series;
use crate::disc::{AngleGrid, CircleFunction};
use crate::error::{DiscError, Result};

/// A point mass `mass·δ_{e^{i·angle}}` of a singular boundary measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularAtom {
    pub angle: f64,
    pub mass: f64,
}

/// Known factors of an analytic function: Blaschke zeros, singular atoms
/// and the boundary log-modulus of whatever remains.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub blaschke_zeros: Vec<Complex64>,
    pub singular_atoms: Vec<SingularAtom>,
    pub outer_log_modulus: CircleFunction,
}

impl Factorization {
    /// `B(z)·S(z)`, exact.
    pub fn inner_value(&self, z: Complex64) -> Complex64 {
        blaschke_value(&self.blaschke_zeros, z) * singular_value(&self.singular_atoms, z)
    }

    /// `|B*|·|S*|·exp(outer_log_modulus)` on the grid.
    pub fn boundary_modulus(&self) -> CircleFunction {
        let grid = self.outer_log_modulus.grid();
        let logs = self.outer_log_modulus.real_values();
        let values = grid
            .thetas()
            .zip(logs)
            .map(|(t, l)| {
                let z = Complex64::from_polar(1.0, t);
                let inner = if on_atom(&self.singular_atoms, t) {
                    0.0
                } else {
                    self.inner_value(z).norm()
                };
                inner * l.exp()
            })
            .collect();
        CircleFunction::from_real(grid, values).expect("same grid")
    }

    /// Sample indices sitting on a singular atom.
    pub fn excluded_samples(&self) -> Vec<usize> {
        atom_samples(&self.singular_atoms, self.outer_log_modulus.grid())
    }
}

/// Angular distance below which a sample counts as sitting on an atom.
const ATOM_TOL: f64 = 1e-9;

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

pub(crate) fn on_atom(atoms: &[SingularAtom], t: f64) -> bool {
    atoms
        .iter()
        .any(|a| a.mass > 0.0 && angular_distance(a.angle, t) < ATOM_TOL)
}

pub(crate) fn atom_samples(atoms: &[SingularAtom], grid: AngleGrid) -> Vec<usize> {
    grid.thetas()
        .enumerate()
        .filter(|&(_, t)| on_atom(atoms, t))
        .map(|(k, _)| k)
        .collect()
}

/// `Π (|a|/a)·(a − z)/(1 − āz)`, with the factor `z` for `a = 0`.
pub fn blaschke_value(zeros: &[Complex64], z: Complex64) -> Complex64 {
    zeros.iter().fold(Complex64::new(1.0, 0.0), |acc, &a| {
        if a == Complex64::new(0.0, 0.0) {
            acc * z
        } else {
            acc * (a.norm() / a) * (a - z) / (1.0 - a.conj() * z)
        }
    })
}

/// `exp(−Σ m_k (ζ_k + z)/(ζ_k − z))`; zero at an atom on the circle.
pub fn singular_value(atoms: &[SingularAtom], z: Complex64) -> Complex64 {
    let mut h = Complex64::new(0.0, 0.0);
    for a in atoms {
        if a.mass == 0.0 {
            continue;
        }
        let zeta = Complex64::from_polar(1.0, a.angle);
        let d = zeta - z;
        if d.norm() < 1e-300 {
            return Complex64::new(0.0, 0.0);
        }
        h -= a.mass * (zeta + z) / d;
    }
    h.exp()
}

/// An analytic function on the disk, held as Taylor coefficients
/// `a_0..a_N` together with boundary samples, plus an optional factored
/// form.
///
/// `N` never exceeds half the number of boundary samples.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticFunction {
    taylor: Vec<Complex64>,
    boundary: CircleFunction,
    factored: Option<Factorization>,
}

fn max_len(grid: AngleGrid) -> usize {
    grid.len() / 2 + 1
}

impl AnalyticFunction {
    /// Polynomial with the given coefficients; terms above `n/2` are dropped.
    pub fn from_taylor(grid: AngleGrid, coeffs: &[Complex64]) -> Self {
        let mut taylor = coeffs.to_vec();
        taylor.truncate(max_len(grid));
        if taylor.is_empty() {
            taylor.push(Complex64::new(0.0, 0.0));
        }
        let boundary = series::boundary(&taylor, grid);
        Self {
            taylor,
            boundary,
            factored: None,
        }
    }

    /// Takes boundary samples at face value; the Taylor coefficients are
    /// the non-negative Fourier coefficients.
    pub fn from_boundary(boundary: CircleFunction) -> Self {
        let taylor = series::from_boundary(&boundary);
        Self {
            taylor,
            boundary,
            factored: None,
        }
    }

    pub fn constant(grid: AngleGrid, value: Complex64) -> Self {
        Self::from_taylor(grid, &[value])
    }

    /// `zⁿ`.
    pub fn monomial(grid: AngleGrid, n: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self::from_taylor(grid, &c)
    }

    pub(crate) fn from_parts(
        taylor: Vec<Complex64>,
        boundary: CircleFunction,
        factored: Option<Factorization>,
    ) -> Self {
        let mut taylor = taylor;
        taylor.truncate(max_len(boundary.grid()));
        Self {
            taylor,
            boundary,
            factored,
        }
    }

    pub fn grid(&self) -> AngleGrid {
        self.boundary.grid()
    }

    pub fn taylor(&self) -> &[Complex64] {
        &self.taylor
    }

    pub fn boundary(&self) -> &CircleFunction {
        &self.boundary
    }

    pub fn factored(&self) -> Option<&Factorization> {
        self.factored.as_ref()
    }

    pub fn value_at_origin(&self) -> Complex64 {
        self.taylor[0]
    }

    /// Value at an interior point from the Taylor coefficients.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(DiscError::OutsideDisk(z.norm()));
        }
        Ok(series::eval(&self.taylor, z))
    }

    /// Largest negative-frequency coefficient of the boundary samples.
    pub fn analyticity_defect(&self) -> f64 {
        self.boundary.negative_frequency_mass()
    }

    /// Boundary samples on another grid: the stored samples on the own grid,
    /// the Taylor polynomial elsewhere.
    pub fn boundary_on(&self, grid: AngleGrid) -> CircleFunction {
        if grid == self.grid() {
            self.boundary.clone()
        } else {
            series::boundary(&self.taylor, grid)
        }
    }

    /// Pointwise product; factored forms combine when both are present.
    pub fn mul(&self, other: &AnalyticFunction) -> Result<Self> {
        let boundary = self.boundary.mul(&other.boundary)?;
        let taylor = series::mul(&self.taylor, &other.taylor, max_len(self.grid()));
        let factored = match (&self.factored, &other.factored) {
            (Some(a), Some(b)) => Some(Factorization {
                blaschke_zeros: [a.blaschke_zeros.clone(), b.blaschke_zeros.clone()].concat(),
                singular_atoms: [a.singular_atoms.clone(), b.singular_atoms.clone()].concat(),
                outer_log_modulus: a
                    .outer_log_modulus
                    .zip_with(&b.outer_log_modulus, |x, y| x + y)?
                    .into_real(),
            }),
            _ => None,
        };
        Ok(Self {
            taylor,
            boundary,
            factored,
        })
    }

    /// Multiplication by a constant; a factored form keeps its inner part.
    pub fn scale(&self, c: Complex64) -> Self {
        let factored = self.factored.as_ref().map(|f| Factorization {
            blaschke_zeros: f.blaschke_zeros.clone(),
            singular_atoms: f.singular_atoms.clone(),
            outer_log_modulus: f.outer_log_modulus.map_real(|l| l + c.norm().ln()),
        });
        Self {
            taylor: self.taylor.iter().map(|&a| a * c).collect(),
            boundary: self.boundary.map(|v| v * c),
            factored,
        }
    }

    /// Sum of two functions; the factored form is dropped.
    pub fn add(&self, other: &AnalyticFunction) -> Result<Self> {
        let boundary = self.boundary.zip_with(&other.boundary, |a, b| a + b)?;
        let len = self.taylor.len().max(other.taylor.len());
        let taylor = (0..len)
            .map(|i| {
                self.taylor.get(i).copied().unwrap_or_default()
                    + other.taylor.get(i).copied().unwrap_or_default()
            })
            .collect();
        Ok(Self {
            taylor,
            boundary,
            factored: None,
        })
    }

    pub fn with_factorization(mut self, f: Factorization) -> Self {
        self.factored = Some(f);
        self
    }

    /// Winding number of `f(ρe^{iθ})` around 0, sampled on `4n` points.
    pub fn winding_number(&self, rho: f64) -> i64 {
        let m = 4 * self.grid().len();
        let mut total = 0.0;
        let mut prev = series::eval(&self.taylor, Complex64::new(rho, 0.0));
        for k in 1..=m {
            let t = std::f64::consts::TAU * k as f64 / m as f64;
            let cur = series::eval(&self.taylor, Complex64::from_polar(rho, t));
            total += (cur / prev).arg();
            prev = cur;
        }
        (total / std::f64::consts::TAU).round() as i64
    }
}
