//! Jensen-type identities: level-set pairings against test functions, the
//! masked area integrals that balance them, and the `sh_u` norm.
//!
//! All area integrals use the normalized Riesz convention `(1/2π)∬ · r dr dθ`
//! with classical Laplacians as integrands.

use num_complex::Complex64;

use super::level::{level_set, sublevel_intervals};
use super::model::HarmonicSeries;
use super::Exhaustion;
use crate::disc::{CircleFunction, DiskField};
use crate::error::{DiscError, Result};

fn check_grid(e: &Exhaustion, f: &DiskField) -> Result<()> {
    if e.grid() != f.grid() {
        return Err(DiscError::GridMismatch(
            "test function and exhaustion live on different grids".into(),
        ));
    }
    Ok(())
}

fn point_value(v: &DiskField, a: Complex64) -> f64 {
    v.value_at(a.norm(), a.arg())
}

/// `(1/2π) Σ_k Δθ ∫_{I_k} f(k, r) r dr` over per-ray radial intervals.
fn ray_integral(
    e: &Exhaustion,
    intervals: impl Fn(usize) -> Vec<(f64, f64)>,
    f: impl Fn(usize, f64) -> f64,
) -> f64 {
    let n = e.grid().n_angles();
    let mut total = 0.0;
    for k in 0..n {
        for (a, b) in intervals(k) {
            for (r, w) in e.ray_rule(k, a, b) {
                total += w * r * f(k, r);
            }
        }
    }
    total / n as f64
}

/// `∫_{S_c} v dμ_{c,u}`.
pub fn demailly_pairing(e: &Exhaustion, c: f64, v: &DiskField) -> Result<f64> {
    check_grid(e, v)?;
    Ok(level_set(e, c)?.pairing(v))
}

/// `∫_{B_c}(vΔu − uΔv) + c∫_{B_c}Δv`, with Riesz atoms in `B_c`
/// contributing `m·v(a)`.
pub fn dlj_rhs(e: &Exhaustion, c: f64, v: &DiskField, v_laplacian: &DiskField) -> Result<f64> {
    check_grid(e, v)?;
    check_grid(e, v_laplacian)?;
    if !(c < 0.0 && c.is_finite()) {
        return Err(DiscError::Precondition(format!(
            "level {c} must be negative"
        )));
    }
    let smooth = ray_integral(
        e,
        |k| sublevel_intervals(e, k, c),
        |k, r| {
            let p = e.eval(k, r);
            let dv = v_laplacian.ray_value(k, r);
            let vv = if p.laplacian == 0.0 {
                0.0
            } else {
                v.ray_value(k, r) * p.laplacian
            };
            vv - (p.u - c) * dv
        },
    );
    let atoms: f64 = e
        .point_masses()
        .iter()
        .map(|pm| pm.mass * point_value(v, pm.location))
        .sum();
    Ok(smooth + atoms)
}

/// The two sides of the `sh_u` norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShuNorm {
    /// `sup_c ∫_{S_c} v dμ_{c,u}` over the supplied levels.
    pub sup_pairing: f64,
    /// `∫_𝔻 (vΔu − uΔv)`.
    pub whole_disk: f64,
    pub discrepancy: f64,
}

pub fn shu_norm(
    e: &Exhaustion,
    v: &DiskField,
    v_laplacian: &DiskField,
    c_sequence: &[f64],
) -> Result<ShuNorm> {
    check_grid(e, v)?;
    check_grid(e, v_laplacian)?;
    let mut sup = f64::NEG_INFINITY;
    for &c in c_sequence {
        sup = sup.max(demailly_pairing(e, c, v)?);
    }
    let smooth = ray_integral(
        e,
        |_| vec![(0.0, 1.0)],
        |k, r| {
            let p = e.eval(k, r);
            let vv = if p.laplacian == 0.0 {
                0.0
            } else {
                v.ray_value(k, r) * p.laplacian
            };
            vv - p.u * v_laplacian.ray_value(k, r)
        },
    );
    let atoms: f64 = e
        .point_masses()
        .iter()
        .map(|pm| pm.mass * point_value(v, pm.location))
        .sum();
    let whole = smooth + atoms;
    Ok(ShuNorm {
        sup_pairing: sup,
        whole_disk: whole,
        discrepancy: (sup - whole).abs(),
    })
}

/// `∫ h dΔu` where `h` is the Poisson extension of `v_boundary ≥ 0`.
pub fn majorant_norm(e: &Exhaustion, v_boundary: &CircleFunction) -> Result<f64> {
    if v_boundary.grid() != e.grid().angles() {
        return Err(DiscError::GridMismatch(
            "boundary data vs exhaustion grid".into(),
        ));
    }
    if !v_boundary.is_real() {
        return Err(DiscError::ComplexInput);
    }
    let values = v_boundary.real_values();
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, &x)| x < 0.0) {
        return Err(DiscError::NonPositive { index, value });
    }
    let h = HarmonicSeries::new(&values);
    let smooth = ray_integral(
        e,
        |_| vec![(0.0, 1.0)],
        |k, r| {
            let lap = e.eval(k, r).laplacian;
            if lap == 0.0 {
                0.0
            } else {
                h.eval(k, r).0 * lap
            }
        },
    );
    let atoms: f64 = e
        .point_masses()
        .iter()
        .map(|pm| pm.mass * h.value_at(pm.location))
        .sum();
    Ok(smooth + atoms)
}

/// `‖v‖_{u_j}` for the disks `G_j = {|z| < r_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubdomainChain {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl SubdomainChain {
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest decrease between consecutive values (zero when monotone).
    pub fn worst_decrease(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| (w[0] - w[1]).max(0.0))
            .fold(0.0, f64::max)
    }
}

/// `‖v‖_{u_j} = ∫_{G_j}(vΔu_j − u_jΔv)` with `u_j = u − P_{G_j}u`, the
/// harmonic extension taken from the circle `|z| = r_j`.
pub fn monotone_chain(
    e: &Exhaustion,
    radii: &[f64],
    v: &DiskField,
    v_laplacian: &DiskField,
) -> Result<SubdomainChain> {
    check_grid(e, v)?;
    check_grid(e, v_laplacian)?;
    if let Some(&bad) = radii.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(DiscError::Precondition(format!(
            "radius {bad} outside (0, 1)"
        )));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DiscError::Precondition("radii must be increasing".into()));
    }
    let n = e.grid().n_angles();
    let mut values = Vec::with_capacity(radii.len());
    for &rj in radii {
        let trace: Vec<f64> = (0..n).map(|k| e.eval(k, rj).u).collect();
        if let Some(index) = trace.iter().position(|x| !x.is_finite()) {
            return Err(DiscError::NonFinite { index });
        }
        let pu = HarmonicSeries::new(&trace);
        let smooth = ray_integral(
            e,
            |_| vec![(0.0, rj)],
            |k, r| {
                let p = e.eval(k, r);
                let uj = p.u - pu.eval(k, r / rj).0;
                let vv = if p.laplacian == 0.0 {
                    0.0
                } else {
                    v.ray_value(k, r) * p.laplacian
                };
                vv - uj * v_laplacian.ray_value(k, r)
            },
        );
        let atoms: f64 = e
            .point_masses()
            .iter()
            .filter(|pm| pm.location.norm() < rj)
            .map(|pm| pm.mass * point_value(v, pm.location))
            .sum();
        values.push(smooth + atoms);
    }
    Ok(SubdomainChain {
        radii: radii.to_vec(),
        values,
    })
}
