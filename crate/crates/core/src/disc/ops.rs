//! Poisson machinery, quadrature and Laplacians on the disk.
//!
//! Measure conventions used throughout the crate:
//! - boundary measure `dν = dθ/2π`, so `ν(∂𝔻) = 1`;
//! - Poisson kernel `P(z, ζ) = (1 - |z|²)/|ζ - z|²`, so `∫ P dν = 1`;
//! - Riesz measure of `u` is `(1/2π) Δu dA` with the classical Laplacian,
//!   so `log|z|` has unit mass at the origin.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::circle::CircleFunction;
use super::field::DiskField;
use super::fourier;
use super::grid::PolarGrid;
use crate::error::{DiscError, Result};

/// Poisson kernel at `z = r e^{it}` against the boundary point `e^{iθ}`.
pub fn poisson_kernel(r: f64, t: f64, theta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(DiscError::OutsideDisk(r));
    }
    Ok((1.0 - r * r) / (1.0 - 2.0 * r * (t - theta).cos() + r * r))
}

/// Harmonic extension of real boundary data via the multiplier `r^{|m|}`.
pub fn harmonic_extension(bf: &CircleFunction, grid: PolarGrid) -> Result<DiskField> {
    if bf.grid() != grid.angles() {
        return Err(DiscError::GridMismatch(format!(
            "{} boundary samples for {} grid angles",
            bf.len(),
            grid.n_angles()
        )));
    }
    bf.check_finite()?;
    let n = grid.n_angles();
    let coeffs = bf.coefficients();
    let mut field = DiskField::zeros(grid);
    for i in 0..grid.n_radii() {
        let r = grid.radius(i);
        let ring: Vec<Complex64> = coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| c * r.powi(fourier::frequency(idx, n).unsigned_abs() as i32))
            .collect();
        let values = fourier::inverse(&ring);
        for (dst, v) in field.ring_mut(i).iter_mut().zip(values) {
            *dst = v.re;
        }
    }
    // boundary row reproduces the data exactly
    let last = grid.n_radii() - 1;
    for (dst, v) in field.ring_mut(last).iter_mut().zip(bf.values()) {
        *dst = v.re;
    }
    field.set_center(coeffs[0].re);
    Ok(field)
}

/// Harmonic extension evaluated on the ring of radius `r` only.
pub fn harmonic_ring(bf: &CircleFunction, r: f64) -> Vec<f64> {
    let n = bf.len();
    let coeffs: Vec<Complex64> = bf
        .coefficients()
        .iter()
        .enumerate()
        .map(|(idx, c)| c * r.powi(fourier::frequency(idx, n).unsigned_abs() as i32))
        .collect();
    fourier::inverse(&coeffs)
        .into_iter()
        .map(|c| c.re)
        .collect()
}

/// One-sided second-order estimate of `∂/∂r` on the boundary row.
pub fn radial_boundary_derivative(field: &DiskField) -> Result<CircleFunction> {
    let grid = field.grid();
    let n = grid.n_radii();
    if n < 3 {
        return Err(DiscError::InsufficientRadii {
            needed: 3,
            found: n,
        });
    }
    let h = grid.step();
    let (a, b, c) = (field.ring(n - 1), field.ring(n - 2), field.ring(n - 3));
    let values = (0..grid.n_angles())
        .map(|k| (3.0 * a[k] - 4.0 * b[k] + c[k]) / (2.0 * h))
        .collect();
    CircleFunction::from_real(grid.angles(), values)
}

/// Classical Laplacian: centered second-order differences in `r`, spectral
/// differentiation in `θ`. The center uses the ring-average formula
/// `4(ū(h) - u(0))/h²`; the boundary row is extrapolated quadratically.
pub fn laplacian(field: &DiskField) -> Result<DiskField> {
    let grid = field.grid();
    let n = grid.n_radii();
    if n < 4 {
        return Err(DiscError::InsufficientRadii {
            needed: 4,
            found: n,
        });
    }
    let h = grid.step();
    let mut out = DiskField::zeros(grid);
    for i in 0..n - 1 {
        let r = grid.radius(i);
        let theta_dd = fourier::derivative(field.ring(i), 2);
        let row: Vec<f64> = (0..grid.n_angles())
            .map(|k| {
                let up = field.node(i + 2, k);
                let mid = field.node(i + 1, k);
                let down = field.node(i, k);
                let u_rr = (up - 2.0 * mid + down) / (h * h);
                let u_r = (up - down) / (2.0 * h);
                u_rr + u_r / r + theta_dd[k] / (r * r)
            })
            .collect();
        out.ring_mut(i).copy_from_slice(&row);
    }
    let extrapolated: Vec<f64> = (0..grid.n_angles())
        .map(|k| 3.0 * out.at(n - 2, k) - 3.0 * out.at(n - 3, k) + out.at(n - 4, k))
        .collect();
    out.ring_mut(n - 1).copy_from_slice(&extrapolated);
    let ring_mean = field.ring(0).iter().sum::<f64>() / grid.n_angles() as f64;
    out.set_center(4.0 * (ring_mean - field.center()) / (h * h));
    Ok(out)
}

/// `∬ f r dr dθ` with composite Simpson in `r` and the trapezoid rule in `θ`.
/// With `riesz_normalized` the result is divided by `2π`, the normalization
/// under which `Δ log|z|` has unit mass.
pub fn area_integral(field: &DiskField, riesz_normalized: bool) -> f64 {
    let grid = field.grid();
    let n = grid.n_radii();
    let h = grid.step();
    let n_angles = grid.n_angles() as f64;
    // node j = 0 is the center and carries the factor r = 0
    let mut radial = 0.0;
    for j in 1..=n {
        let w = if j == n {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let r = j as f64 * h;
        let ring_mean = field.ring(j - 1).iter().sum::<f64>() / n_angles;
        radial += w * r * ring_mean;
    }
    radial *= h / 3.0;
    if riesz_normalized {
        radial
    } else {
        TAU * radial
    }
}

/// `∫ f dν` by the trapezoid rule (spectrally accurate for periodic data).
pub fn boundary_integral(bf: &CircleFunction) -> f64 {
    bf.values().iter().map(|c| c.re).sum::<f64>() / bf.len() as f64
}

/// Complex counterpart of [`boundary_integral`].
pub fn boundary_integral_complex(bf: &CircleFunction) -> Complex64 {
    bf.values().iter().sum::<Complex64>() / bf.len() as f64
}

/// `bf + i·(conjugate function)`: keeps `c_0`, doubles positive frequencies
/// and drops negative ones. The Nyquist coefficient is kept as is.
pub fn analytic_completion(bf: &CircleFunction) -> Result<CircleFunction> {
    if !bf.is_real() {
        return Err(DiscError::ComplexInput);
    }
    bf.check_finite()?;
    let n = bf.len();
    let mut coeffs = bf.coefficients();
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let m = fourier::frequency(idx, n);
        if m < 0 {
            *c = Complex64::new(0.0, 0.0);
        } else if m > 0 && 2 * m as usize != n {
            *c *= 2.0;
        }
    }
    Ok(CircleFunction::from_coefficients(bf.grid(), &coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::AngleGrid;
    use std::f64::consts::PI;

    fn grid() -> PolarGrid {
        PolarGrid::new(64, 64).unwrap()
    }

    #[test]
    fn poisson_kernel_values() {
        assert_eq!(poisson_kernel(0.0, 0.3, 1.7).unwrap(), 1.0);
        assert!((poisson_kernel(0.5, 0.4, 0.4).unwrap() - 3.0).abs() < 1e-14);
        assert!(poisson_kernel(1.0, 0.0, 0.0).is_err());
        let ag = AngleGrid::new(256).unwrap();
        // trapezoid aliasing error is about 2r^n, negligible away from the rim
        for &(r, t) in &[(0.3, 0.2), (0.8, 2.0), (0.85, 5.5)] {
            let avg = ag
                .thetas()
                .map(|th| poisson_kernel(r, t, th).unwrap())
                .sum::<f64>()
                / 256.0;
            assert!((avg - 1.0).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn harmonic_extension_examples() {
        let g = grid();
        let one = CircleFunction::constant(g.angles(), 1.0);
        let f = harmonic_extension(&one, g).unwrap();
        assert!((f.max() - 1.0).abs() < 1e-14 && (f.min() - 1.0).abs() < 1e-14);

        let cos = CircleFunction::from_real_fn(g.angles(), f64::cos);
        let f = harmonic_extension(&cos, g).unwrap();
        for i in [0, 10, 63] {
            for k in [0, 7, 40] {
                let exact = g.radius(i) * g.theta(k).cos();
                assert!((f.at(i, k) - exact).abs() < 1e-14);
            }
        }
        assert!(f.center().abs() < 1e-15);

        // the center value is the trapezoid mean, compared against a refined grid
        let big = |n| {
            let ag = AngleGrid::new(n).unwrap();
            let bf = CircleFunction::from_real_fn(ag, |t| (2.0 - 2.0 * t.cos()).exp());
            harmonic_extension(&bf, PolarGrid::new(8, n).unwrap())
                .unwrap()
                .center()
        };
        assert!((big(64) - big(128)).abs() < 1e-12);
    }

    #[test]
    fn boundary_derivative_examples() {
        let g = grid();
        let quad = DiskField::from_fn(g, |r, _| (r * r - 1.0) / 2.0);
        let d = radial_boundary_derivative(&quad).unwrap();
        assert!(d.values().iter().all(|c| (c.re - 1.0).abs() < 1e-12));

        let c = DiskField::constant(g, 4.2);
        let d = radial_boundary_derivative(&c).unwrap();
        assert!(d.values().iter().all(|c| c.re.abs() < 1e-10));

        let lin = DiskField::from_fn(g, |r, t| r * t.cos());
        let d = radial_boundary_derivative(&lin).unwrap();
        for (k, t) in g.angles().thetas().enumerate() {
            assert!((d.value(k).re - t.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn laplacian_examples() {
        let g = grid();
        let h2 = g.step() * g.step();
        let quad = DiskField::from_fn(g, |r, _| (r * r - 1.0) / 2.0);
        let lap = laplacian(&quad).unwrap();
        assert!((lap.max() - 2.0).abs() < 1e-8 && (lap.min() - 2.0).abs() < 1e-8);

        let harm = DiskField::from_fn(g, |r, t| r * t.cos());
        let lap = laplacian(&harm).unwrap();
        assert!(lap.max().abs() < 1e-9 && lap.min().abs() < 1e-9);

        let quartic = DiskField::from_fn(g, |r, _| r.powi(4));
        let lap = laplacian(&quartic).unwrap();
        for i in 0..g.n_radii() - 1 {
            let r = g.radius(i);
            // second-order truncation error is exactly 6h² for r⁴
            assert!((lap.at(i, 3) - 16.0 * r * r).abs() < 7.0 * h2, "i={i}");
        }
    }

    #[test]
    fn area_integral_examples() {
        let g = grid();
        let two = DiskField::constant(g, 2.0);
        assert!((area_integral(&two, true) - 1.0).abs() < 1e-14);
        assert_eq!(area_integral(&DiskField::zeros(g), false), 0.0);
        let r2 = DiskField::from_fn(g, |r, _| r * r);
        // ∬ r²·r dr dθ = 2π/4
        assert!((area_integral(&r2, false) - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn boundary_integral_examples() {
        let ag = AngleGrid::new(64).unwrap();
        assert!((boundary_integral(&CircleFunction::constant(ag, 1.0)) - 1.0).abs() < 1e-15);
        assert!(boundary_integral(&CircleFunction::from_real_fn(ag, f64::cos)).abs() < 1e-14);
        let at = |n| {
            boundary_integral(&CircleFunction::from_real_fn(
                AngleGrid::new(n).unwrap(),
                |t| (2.0 - 2.0 * t.cos()).exp(),
            ))
        };
        assert!((at(64) - at(128)).abs() < 1e-10);
    }

    #[test]
    fn analytic_completion_examples() {
        let ag = AngleGrid::new(32).unwrap();
        let one = analytic_completion(&CircleFunction::constant(ag, 1.0)).unwrap();
        assert!(one.values().iter().all(|c| (c - 1.0).norm() < 1e-14));

        let cos = analytic_completion(&CircleFunction::from_real_fn(ag, f64::cos)).unwrap();
        for (k, t) in ag.thetas().enumerate() {
            assert!((cos.value(k) - Complex64::from_polar(1.0, t)).norm() < 1e-14);
        }
        let c2 = analytic_completion(&CircleFunction::from_real_fn(ag, |t| (2.0 * t).cos() + 3.0))
            .unwrap();
        for (k, t) in ag.thetas().enumerate() {
            let exact = Complex64::from_polar(1.0, 2.0 * t) + 3.0;
            assert!((c2.value(k) - exact).norm() < 1e-14);
        }
        assert!(c2.negative_frequency_mass() < 1e-15);
        assert!(analytic_completion(&c2).is_err());
    }

    #[test]
    fn laplacian_of_harmonic_extension_is_small() {
        let g = grid();
        let bf = CircleFunction::from_real_fn(g.angles(), |t| (t.cos()).exp());
        let lap = laplacian(&harmonic_extension(&bf, g).unwrap()).unwrap();
        let h2 = g.step() * g.step();
        for i in 0..g.n_radii() - 1 {
            for k in 0..g.n_angles() {
                assert!(lap.at(i, k).abs() < 10.0 * h2, "i={i} k={k}");
            }
        }
    }
}
