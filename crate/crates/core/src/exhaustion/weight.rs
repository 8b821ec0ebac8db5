//! The boundary weight `V_u(ζ) = ∫ P(z, ζ) dΔu(z)`.
//!
//! The Poisson kernel is applied through its Fourier multiplier: with
//! `M_m(t) = ∫₀¹ r^{|m|+1} Δu(r, t) dr` the weight has coefficients
//! `V̂_m = (1/2π)∫ M_m(t) e^{−imt} dt`. The radial integrals use the
//! exhaustion's own quadrature panels, so thin transition layers are
//! resolved even when the polar grid cannot see them.

use num_complex::Complex64;

use super::{ConstructionTag, Exhaustion};
use crate::disc::{fourier, poisson_kernel, CircleFunction};
use crate::error::{DiscError, Result};

/// Radial moments `M_m`, `m = 0..=n/2`, of the density on ray `k` over `[0, radius]`.
fn ray_moments(e: &Exhaustion, k: usize, radius: f64, out: &mut [f64]) {
    out.iter_mut().for_each(|m| *m = 0.0);
    for (r, w) in e.ray_rule(k, 0.0, radius) {
        let hw = e.eval(k, r).laplacian * w;
        if hw == 0.0 {
            continue;
        }
        let mut p = r;
        for m in out.iter_mut() {
            *m += hw * p;
            p *= r;
            if p < 1e-18 {
                break;
            }
        }
    }
}

/// Total Riesz mass in the normalized convention, point masses included.
pub(crate) fn riesz_mass(e: &Exhaustion) -> f64 {
    let n = e.grid().n_angles();
    let mut m0 = [0.0];
    let mut sum = 0.0;
    for k in 0..n {
        ray_moments(e, k, 1.0, &mut m0);
        sum += m0[0];
    }
    sum / n as f64 + e.point_masses().iter().map(|p| p.mass).sum::<f64>()
}

/// `V_u` on the grid angles.
pub fn weight_balayage(e: &Exhaustion) -> Result<CircleFunction> {
    weight_balayage_truncated(e, 1.0)
}

/// Balayage of the Riesz measure restricted to `{|z| < radius}`.
pub fn weight_balayage_truncated(e: &Exhaustion, radius: f64) -> Result<CircleFunction> {
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(DiscError::Precondition(format!(
            "truncation radius {radius} outside (0, 1]"
        )));
    }
    let angles = e.grid().angles();
    let n = angles.len();
    let half = n / 2;
    let mut moments = vec![0.0; half + 1];
    let mut hat = vec![Complex64::new(0.0, 0.0); half + 1];
    for k in 0..n {
        ray_moments(e, k, radius, &mut moments);
        let t = angles.theta(k);
        for (m, (h, &mk)) in hat.iter_mut().zip(&moments).enumerate() {
            if mk != 0.0 {
                *h += Complex64::from_polar(mk, -(m as f64) * t);
            }
        }
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for (m, h) in hat.iter().enumerate() {
        let h = h / n as f64;
        if m == 0 {
            coeffs[0] = h;
        } else if m == half {
            // frequencies ±n/2 coincide on the grid
            coeffs[half] = Complex64::new(2.0 * h.re, 0.0);
        } else {
            coeffs[fourier::slot(m as i64, n)] = h;
            coeffs[fourier::slot(-(m as i64), n)] = h.conj();
        }
    }
    let smooth = CircleFunction::from_coefficients(angles, &coeffs).into_real();
    let mut values = smooth.real_values();
    for pm in e.point_masses() {
        let a = pm.location;
        if a.norm() >= radius {
            continue;
        }
        for (k, v) in values.iter_mut().enumerate() {
            *v += pm.mass * poisson_kernel(a.norm(), a.arg(), angles.theta(k))?;
        }
    }
    CircleFunction::from_real(angles, values)
}

/// `V_u(e^{iθ}) = ½∫₀¹ Δu(se^{iθ}) ds` (classical Laplacian), valid when
/// `Δu` is harmonic. Composite Simpson on the grid rays.
pub fn weight_radial(e: &Exhaustion) -> Result<CircleFunction> {
    if e.tag() != ConstructionTag::Biharmonic {
        return Err(DiscError::NotHarmonic(format!(
            "radial formula needs a harmonic Riesz density, got a {} exhaustion",
            e.tag().as_str()
        )));
    }
    let grid = e.grid();
    let n = grid.n_radii();
    let h = grid.step();
    let density = e.riesz_density();
    let values = (0..grid.n_angles())
        .map(|k| {
            let mut s = density.node(0, k) + density.node(n, k);
            for j in 1..n {
                let w = if j % 2 == 1 { 4.0 } else { 2.0 };
                s += w * density.node(j, k);
            }
            0.5 * s * h / 3.0
        })
        .collect();
    CircleFunction::from_real(grid.angles(), values)
}
